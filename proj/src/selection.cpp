// Copyright 2026 The rismimo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rismimo/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rismimo {

namespace {

// Lexicographic unranking in the combinatorial number system: rank r maps to
// the r-th k-subset of {0..n-1} in lexicographic order.
std::vector<int> unrank_combination(std::uint64_t rank, int n, int k) {
  std::vector<int> out;
  out.reserve(k);
  int next = 0;
  for (int slot = 0; slot < k; ++slot) {
    for (int candidate = next; candidate < n; ++candidate) {
      const std::uint64_t block = binomial(n - candidate - 1, k - slot - 1);
      if (rank < block) {
        out.push_back(candidate);
        next = candidate + 1;
        break;
      }
      rank -= block;
    }
  }
  return out;
}

double subset_capacity(const Eigen::MatrixXcd& columns,
                       const std::vector<int>& subset, double snr) {
  const auto k = columns.rows();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(k, k);
  for (int j : subset) {
    g.noalias() += snr * columns.col(j) * columns.col(j).adjoint();
  }
  return numerics::logdet_hpd(g);
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t limit = std::numeric_limits<std::int64_t>::max();
    if (result > limit / static_cast<std::uint64_t>(n - k + i)) return limit;
    result = result * static_cast<std::uint64_t>(n - k + i) /
             static_cast<std::uint64_t>(i);
  }
  return result;
}

AntennaSet greedy_select_columns(const Eigen::MatrixXcd& columns, int cap,
                                 double snr) {
  const int l = static_cast<int>(columns.cols());
  if (cap > l) throw std::invalid_argument("greedy_select: cap > L");
  GramEvaluator eval(columns, AntennaSet{}, snr);
  for (int step = 0; step < cap; ++step) {
    const Eigen::VectorXd phi = eval.full_gradient();
    int best = -1;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < l; ++i) {
      if (eval.current_set().contains(i)) continue;
      if (phi(i) > best_gain) {
        best_gain = phi(i);
        best = i;
      }
    }
    eval.add(best);
  }
  return eval.current_set();
}

AntennaSet greedy_select(const ChannelTriple& t, const ReflectionState& r,
                         int cap, double snr) {
  const Eigen::MatrixXcd columns = effective_channel_full(t, r);
  return greedy_select_columns(columns, cap, snr);
}

std::pair<AntennaSet, double> exhaustive_select(const Eigen::MatrixXcd& columns,
                                                int cap, double snr,
                                                std::uint64_t subset_budget,
                                                bool parallel) {
  const int l = static_cast<int>(columns.cols());
  if (cap > l) throw std::invalid_argument("exhaustive_select: cap > L");
  const std::uint64_t count = binomial(l, cap);
  if (count > subset_budget) {
    throw std::runtime_error("exhaustive_select: subset count " +
                             std::to_string(count) + " exceeds budget " +
                             std::to_string(subset_budget));
  }

  double best_value = -std::numeric_limits<double>::infinity();
  std::uint64_t best_rank = 0;
  const auto total = static_cast<std::int64_t>(count);

#pragma omp parallel if (parallel)
  {
    double local_value = -std::numeric_limits<double>::infinity();
    std::uint64_t local_rank = 0;
#pragma omp for schedule(static) nowait
    for (std::int64_t r = 0; r < total; ++r) {
      const auto subset =
          unrank_combination(static_cast<std::uint64_t>(r), l, cap);
      const double value = subset_capacity(columns, subset, snr);
      if (value > local_value ||
          (value == local_value &&
           static_cast<std::uint64_t>(r) < local_rank)) {
        local_value = value;
        local_rank = static_cast<std::uint64_t>(r);
      }
    }
#pragma omp critical
    {
      if (local_value > best_value ||
          (local_value == best_value && local_rank < best_rank)) {
        best_value = local_value;
        best_rank = local_rank;
      }
    }
  }

  AntennaSet s;
  s.indices = unrank_combination(best_rank, l, cap);
  return {s, best_value};
}

std::pair<AntennaSet, double> exhaustive_select(const ChannelTriple& t,
                                                const ReflectionState& r,
                                                int cap, double snr,
                                                std::uint64_t subset_budget,
                                                bool parallel) {
  const Eigen::MatrixXcd columns = effective_channel_full(t, r);
  return exhaustive_select(columns, cap, snr, subset_budget, parallel);
}

AntennaSet random_select(int l, int cap, RngStream& rng) {
  if (cap > l) throw std::invalid_argument("random_select: cap > L");
  std::vector<int> pool(l);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < cap; ++i) {
    const auto j = i + static_cast<int>(rng.next_below(l - i));
    std::swap(pool[i], pool[j]);
  }
  AntennaSet s;
  s.indices.assign(pool.begin(), pool.begin() + cap);
  std::sort(s.indices.begin(), s.indices.end());
  return s;
}

}  // namespace rismimo
