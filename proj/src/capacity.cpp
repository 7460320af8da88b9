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

#include "rismimo/capacity.hpp"

#include <algorithm>
#include <cmath>

namespace rismimo {

ReflectionState ReflectionState::random_phases(int n, RngStream& rng) {
  ReflectionState r;
  r.active = true;
  r.beta.resize(n);
  for (int i = 0; i < n; ++i) {
    r.beta(i) = std::polar(1.0, 2.0 * M_PI * rng.next_double());
  }
  return r;
}

void ReflectionState::validate() const {
  for (int i = 0; i < beta.size(); ++i) {
    if (active) {
      if (std::abs(std::abs(beta(i)) - 1.0) > 1e-9)
        throw std::invalid_argument("ReflectionState: |beta| != 1");
    } else if (beta(i) != std::complex<double>(0.0, 0.0)) {
      throw std::invalid_argument("ReflectionState: disabled but beta != 0");
    }
  }
}

bool AntennaSet::contains(int i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

void AntennaSet::insert(int i) {
  const auto it = std::lower_bound(indices.begin(), indices.end(), i);
  if (it != indices.end() && *it == i)
    throw std::invalid_argument("AntennaSet: duplicate index");
  indices.insert(it, i);
}

void AntennaSet::erase(int i) {
  const auto it = std::lower_bound(indices.begin(), indices.end(), i);
  if (it == indices.end() || *it != i)
    throw std::invalid_argument("AntennaSet: index not present");
  indices.erase(it);
}

AntennaSet AntennaSet::full(int l) {
  AntennaSet s;
  s.indices.resize(l);
  for (int i = 0; i < l; ++i) s.indices[i] = i;
  return s;
}

Eigen::MatrixXcd effective_channel_full(const ChannelTriple& t,
                                        const ReflectionState& r) {
  if (!r.active || r.beta.size() == 0 || r.beta.isZero(0.0)) return t.direct;
  return t.direct + t.ris_user * r.beta.asDiagonal() * t.bs_ris;
}

Eigen::MatrixXcd effective_channel(const ChannelTriple& t, const AntennaSet& s,
                                   const ReflectionState& r) {
  const Eigen::MatrixXcd full = effective_channel_full(t, r);
  Eigen::MatrixXcd out(full.rows(), s.size());
  for (int j = 0; j < s.size(); ++j) {
    const int col = s.indices[j];
    if (col < 0 || col >= full.cols())
      throw std::out_of_range("effective_channel: antenna index out of range");
    out.col(j) = full.col(col);
  }
  return out;
}

double capacity_columns(const Eigen::MatrixXcd& cols, double snr) {
  const auto k = cols.rows();
  const auto m = cols.cols();
  if (m == 0) return 0.0;
  if (k <= m) {
    const Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(k, k) +
                               snr * (cols * cols.adjoint());
    return numerics::logdet_hpd(g);
  }
  const Eigen::MatrixXcd g =
      Eigen::MatrixXcd::Identity(m, m) + snr * (cols.adjoint() * cols);
  return numerics::logdet_hpd(g);
}

double capacity(const ChannelTriple& t, const AntennaSet& s,
                const ReflectionState& r, double snr) {
  return capacity_columns(effective_channel(t, s, r), snr);
}

GramEvaluator::GramEvaluator(const Eigen::MatrixXcd& columns, AntennaSet s,
                             double snr)
    : columns_(&columns),
      snr_(snr),
      set_(std::move(s)),
      member_(columns.cols(), 0) {
  for (int i : set_.indices) {
    if (i < 0 || i >= columns.cols())
      throw std::out_of_range("GramEvaluator: antenna index out of range");
    member_[i] = 1;
  }
  rebuild();
}

void GramEvaluator::rebuild() {
  const auto k = columns_->rows();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(k, k);
  for (int i : set_.indices) {
    g.noalias() += snr_ * columns_->col(i) * columns_->col(i).adjoint();
  }
  cache_ = numerics::make_inverse_cache(g);
}

double GramEvaluator::marginal_gain(int i) const {
  const Eigen::VectorXcd u = columns_->col(i);
  const Eigen::VectorXcd v = cache_.inverse * u;
  const double t = u.dot(v).real();
  if (!member_[i]) {
    return std::log2(1.0 + snr_ * t);
  }
  const double denom = 1.0 - snr_ * t;
  if (std::abs(denom) < 1e-12) {
    // Singular downdate; recompute G(S \ {i}) densely.
    ++refactorizations_;
    AntennaSet without = set_;
    without.erase(i);
    GramEvaluator fresh(*columns_, without, snr_);
    const double q = u.dot(fresh.cache_.inverse * u).real();
    return std::log2(1.0 + snr_ * q);
  }
  const double q = t + snr_ * t * t / denom;  // u^H G(S\i)^-1 u
  return std::log2(1.0 + snr_ * q);
}

Eigen::VectorXd GramEvaluator::full_gradient() const {
  const int l = static_cast<int>(columns_->cols());
  Eigen::VectorXd phi(l);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < l; ++i) {
    phi(i) = marginal_gain(i);
  }
  return phi;
}

void GramEvaluator::add(int i) {
  set_.insert(i);
  member_[i] = 1;
  try {
    cache_ = numerics::sm_rank1_update(cache_, columns_->col(i), snr_);
  } catch (const numerics::SingularUpdateError&) {
    ++refactorizations_;
    rebuild();
  }
}

void GramEvaluator::remove(int i) {
  set_.erase(i);
  member_[i] = 0;
  try {
    cache_ = numerics::sm_rank1_update(cache_, columns_->col(i), -snr_);
  } catch (const numerics::SingularUpdateError&) {
    ++refactorizations_;
    rebuild();
  }
}

}  // namespace rismimo
