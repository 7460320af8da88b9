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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rismimo/stochastic_selection.hpp"

namespace {

using namespace rismimo;
using Eigen::MatrixXcd;
using Eigen::VectorXd;

MatrixXcd random_complex(int rows, int cols, RngStream& rng) {
  MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.next_cgaussian();
  }
  return m;
}

ChannelTriple direct_only(const MatrixXcd& columns) {
  ChannelTriple t;
  t.direct = columns;
  t.bs_ris = MatrixXcd(0, columns.cols());
  t.ris_user = MatrixXcd(columns.rows(), 0);
  return t;
}

ChannelEnsemble single_channel_ensemble(const MatrixXcd& columns) {
  ChannelEnsemble e;
  e.samples.push_back(direct_only(columns));
  return e;
}

double subset_cap(const MatrixXcd& cols, const std::vector<int>& subset,
                  double snr) {
  MatrixXcd m(cols.rows(), subset.size());
  for (std::size_t j = 0; j < subset.size(); ++j) m.col(j) = cols.col(subset[j]);
  return capacity_columns(m, snr);
}

// Exact multilinear extension by 2^L enumeration on a fixed channel.
double exact_multilinear(const MatrixXcd& cols, const VectorXd& x, double snr) {
  const int l = static_cast<int>(cols.cols());
  double f = 0.0;
  for (unsigned mask = 0; mask < (1u << l); ++mask) {
    double p = 1.0;
    std::vector<int> subset;
    for (int i = 0; i < l; ++i) {
      if (mask & (1u << i)) {
        p *= x(i);
        subset.push_back(i);
      } else {
        p *= 1.0 - x(i);
      }
    }
    if (p > 0.0) f += p * subset_cap(cols, subset, snr);
  }
  return f;
}

// Exact partial derivative dF/dx_i by enumeration over the other coordinates.
double exact_partial(const MatrixXcd& cols, const VectorXd& x, int i,
                     double snr) {
  const int l = static_cast<int>(cols.cols());
  double g = 0.0;
  for (unsigned mask = 0; mask < (1u << l); ++mask) {
    if (mask & (1u << i)) continue;
    double p = 1.0;
    std::vector<int> subset;
    for (int j = 0; j < l; ++j) {
      if (j == i) continue;
      if (mask & (1u << j)) {
        p *= x(j);
        subset.push_back(j);
      } else {
        p *= 1.0 - x(j);
      }
    }
    if (p <= 0.0) continue;
    std::vector<int> with = subset;
    with.insert(std::lower_bound(with.begin(), with.end(), i), i);
    g += p * (subset_cap(cols, with, snr) - subset_cap(cols, subset, snr));
  }
  return g;
}

}  // namespace

TEST_CASE("ChannelSampler: fixed ensembles cycle, generative draws repeat") {
  RngStream rng(3);
  ChannelEnsemble e;
  e.samples.push_back(direct_only(random_complex(2, 4, rng)));
  e.samples.push_back(direct_only(random_complex(2, 4, rng)));
  const ChannelSampler fixed = ChannelSampler::fixed(e);
  CHECK((fixed.draw(0).direct - e.samples[0].direct).norm() == 0.0);
  CHECK((fixed.draw(1).direct - e.samples[1].direct).norm() == 0.0);
  CHECK((fixed.draw(2).direct - e.samples[0].direct).norm() == 0.0);
  CHECK_THROWS_AS(ChannelSampler::fixed(ChannelEnsemble{}),
                  std::invalid_argument);

  const SystemConfig cfg = SystemConfig::desk();
  const ChannelSampler gen = ChannelSampler::generative(cfg, 5);
  CHECK((gen.draw(3).direct - gen.draw(3).direct).norm() == 0.0);
  CHECK((gen.draw(3).direct - gen.draw(4).direct).norm() > 0.0);
}

TEST_CASE("multilinear_value: degenerate product distributions") {
  RngStream rng(5);
  const MatrixXcd cols = random_complex(3, 6, rng);
  const ChannelEnsemble e = single_channel_ensemble(cols);
  const ChannelSampler sampler = ChannelSampler::fixed(e);
  const ReflectionState r = ReflectionState::disabled(0);
  const double snr = 2.0;

  const auto zero = multilinear_value(sampler, VectorXd::Zero(6), r, snr,
                                      64, 1);
  CHECK(zero.mean == 0.0);

  const auto ones = multilinear_value(sampler, VectorXd::Ones(6), r, snr,
                                      64, 1);
  const double full = subset_cap(cols, {0, 1, 2, 3, 4, 5}, snr);
  CHECK(ones.mean == doctest::Approx(full).epsilon(1e-12));
  CHECK(ones.std_error == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("multilinear_value within 3 standard errors of 2^8 enumeration") {
  RngStream rng(7);
  const MatrixXcd cols = random_complex(3, 8, rng);
  const ChannelEnsemble e = single_channel_ensemble(cols);
  const ChannelSampler sampler = ChannelSampler::fixed(e);
  const ReflectionState r = ReflectionState::disabled(0);
  const double snr = 2.0;
  VectorXd x(8);
  for (int i = 0; i < 8; ++i) x(i) = rng.next_double();

  const double exact = exact_multilinear(cols, x, snr);
  const auto est = multilinear_value(sampler, x, r, snr, 2000, 11);
  CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error + 1e-9);
}

TEST_CASE("gradient_estimate: fast and naive modes agree to 1e-8") {
  RngStream rng(9);
  const MatrixXcd cols = random_complex(4, 16, rng);
  const ChannelEnsemble e = single_channel_ensemble(cols);
  const ChannelSampler sampler = ChannelSampler::fixed(e);
  const ReflectionState r = ReflectionState::disabled(0);
  VectorXd x(16);
  for (int i = 0; i < 16; ++i) x(i) = rng.next_double();

  const auto fast = gradient_estimate(sampler, x, r, 3.0, 8, 77,
                                      GradientMode::kFast);
  const auto naive = gradient_estimate(sampler, x, r, 3.0, 8, 77,
                                       GradientMode::kNaive);
  CHECK((fast.phi - naive.phi).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("gradient_estimate at x = 0 recovers single-column capacities") {
  RngStream rng(11);
  const MatrixXcd cols = random_complex(3, 6, rng);
  const ChannelEnsemble e = single_channel_ensemble(cols);
  const ChannelSampler sampler = ChannelSampler::fixed(e);
  const double snr = 2.0;
  const auto g = gradient_estimate(sampler, VectorXd::Zero(6),
                                   ReflectionState::disabled(0), snr, 4, 1);
  for (int i = 0; i < 6; ++i) {
    const double expect = std::log2(1.0 + snr * cols.col(i).squaredNorm());
    CHECK(g.phi(i) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("gradient_estimate matches enumerated partials at L = 6") {
  RngStream rng(13);
  const MatrixXcd cols = random_complex(3, 6, rng);
  const ChannelEnsemble e = single_channel_ensemble(cols);
  const ChannelSampler sampler = ChannelSampler::fixed(e);
  const ReflectionState r = ReflectionState::disabled(0);
  const double snr = 2.0;
  VectorXd x(6);
  for (int i = 0; i < 6; ++i) x(i) = rng.next_double();

  const int batch = 10000;
  const auto est = gradient_estimate(sampler, x, r, snr, batch, 21);
  // Per-coordinate spread of the per-draw phi is bounded by the largest
  // single-column capacity; use a conservative 3-sigma band.
  double spread = 0.0;
  for (int i = 0; i < 6; ++i) {
    spread = std::max(spread,
                      std::log2(1.0 + snr * cols.col(i).squaredNorm()));
  }
  const double band = 3.0 * spread / std::sqrt(static_cast<double>(batch));
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(est.phi(i) - exact_partial(cols, x, i, snr)) <= band);
  }
}

TEST_CASE("top_k_vertex: ordering, ties, and vertex optimality") {
  VectorXd phi(3);
  phi << 3.0, 1.0, 2.0;
  VectorXd v = top_k_vertex(phi, 2);
  CHECK(v(0) == 1.0);
  CHECK(v(1) == 0.0);
  CHECK(v(2) == 1.0);

  const VectorXd tied = top_k_vertex(VectorXd::Ones(5), 2);
  CHECK(tied(0) == 1.0);
  CHECK(tied(1) == 1.0);
  CHECK(tied.sum() == 2.0);

  // Brute force over all feasible vertices. phi entries are marginal
  // capacity gains, hence nonnegative by monotonicity.
  RngStream rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    VectorXd p(7);
    for (int i = 0; i < 7; ++i) p(i) = rng.next_double();
    const VectorXd got = top_k_vertex(p, 3);
    double best = -1e30;
    for (unsigned mask = 0; mask < (1u << 7); ++mask) {
      if (__builtin_popcount(mask) > 3) continue;
      double dot = 0.0;
      for (int i = 0; i < 7; ++i) {
        if (mask & (1u << i)) dot += p(i);
      }
      best = std::max(best, dot);
    }
    CHECK(got.dot(p) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("continuous_greedy: trivial reductions and feasibility") {
  RngStream rng(19);
  const MatrixXcd cols = random_complex(3, 6, rng);
  const ChannelEnsemble e = single_channel_ensemble(cols);
  const ChannelSampler sampler = ChannelSampler::fixed(e);
  const ReflectionState r = ReflectionState::disabled(0);

  // cap = L: every vertex is the full set, so x(1) is all ones.
  ContinuousGreedyOptions full_opt;
  full_opt.batch = 4;
  const VectorXd full = continuous_greedy(sampler, r, 2.0, 6, full_opt, 1);
  CHECK((full - VectorXd::Ones(6)).lpNorm<Eigen::Infinity>() <= 1e-12);

  // delta = 1: one step, equal to the top-k vertex of the gradient at 0.
  ContinuousGreedyOptions one_step;
  one_step.delta = 1.0;
  one_step.batch = 4;
  const VectorXd x1 = continuous_greedy(sampler, r, 2.0, 2, one_step, 5);
  const auto g0 = gradient_estimate(sampler, VectorXd::Zero(6), r, 2.0, 4,
                                    derive_seed(5, 0));
  CHECK((x1 - top_k_vertex(g0.phi, 2)).lpNorm<Eigen::Infinity>() <= 1e-12);

  // Default schedule: final point in the polytope.
  ContinuousGreedyOptions opt;
  opt.batch = 4;
  const VectorXd x = continuous_greedy(sampler, r, 2.0, 2, opt, 9);
  CHECK(x.minCoeff() >= -1e-12);
  CHECK(x.maxCoeff() <= 1.0 + 1e-12);
  CHECK(x.sum() <= 2.0 + 1e-9);
}

TEST_CASE("spgm: zero channels leave the iterate unchanged") {
  const MatrixXcd zero = MatrixXcd::Zero(2, 5);
  const ChannelEnsemble e = single_channel_ensemble(zero);
  const ChannelSampler sampler = ChannelSampler::fixed(e);
  SpgmOptions opt;
  opt.iterations = 10;
  opt.batch = 2;
  opt.eval_batch = 2;
  const VectorXd x = spgm(sampler, ReflectionState::disabled(0), 2.0, 2, opt,
                          3);
  CHECK((x - VectorXd::Constant(5, 0.4)).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("spgm: output feasible and competitive on a fixed channel") {
  RngStream rng(23);
  const MatrixXcd cols = random_complex(3, 8, rng);
  const ChannelEnsemble e = single_channel_ensemble(cols);
  const ChannelSampler sampler = ChannelSampler::fixed(e);
  const ReflectionState r = ReflectionState::disabled(0);
  SpgmOptions opt;
  opt.iterations = 60;
  opt.batch = 16;
  opt.eval_batch = 64;
  const VectorXd x = spgm(sampler, r, 2.0, 3, opt, 7);
  CHECK(x.minCoeff() >= -1e-12);
  CHECK(x.maxCoeff() <= 1.0 + 1e-12);
  CHECK(x.sum() <= 3.0 + 1e-9);

  // Smoothness-spec step rule is exercised and also stays feasible.
  SpgmOptions sm = opt;
  sm.iterations = 20;
  sm.smoothness = SmoothnessSpec{2.0, 1.0, std::sqrt(3.0)};
  const VectorXd y = spgm(sampler, r, 2.0, 3, sm, 7);
  CHECK(y.sum() <= 3.0 + 1e-9);
}

TEST_CASE("pipage_round: integral inputs, cardinality, and symmetry") {
  RngStream rng(29);
  VectorXd integral(4);
  integral << 1.0, 0.0, 1.0, 0.0;
  const AntennaSet same = pipage_round(integral, 2, rng);
  CHECK(same.indices == std::vector<int>{0, 2});

  // Symmetric half-half: each singleton with probability 1/2 (chi-square).
  int count0 = 0;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    VectorXd x(2);
    x << 0.5, 0.5;
    const AntennaSet s = pipage_round(x, 1, rng);
    REQUIRE(s.size() == 1);
    if (s.indices[0] == 0) ++count0;
  }
  const double chi2 = std::pow(count0 - trials / 2.0, 2) / (trials / 4.0);
  CHECK(chi2 <= 10.83);  // p = 0.001 on 1 dof

  CHECK_THROWS_AS(pipage_round(VectorXd::Zero(2), 3, rng),
                  std::invalid_argument);
}

TEST_CASE("pipage_round preserves marginals on a 3-coordinate fixture") {
  RngStream rng(31);
  const int trials = 100000;
  Eigen::Vector3d counts = Eigen::Vector3d::Zero();
  for (int trial = 0; trial < trials; ++trial) {
    VectorXd x(3);
    x << 0.3, 0.3, 0.4;
    const AntennaSet s = pipage_round(x, 1, rng);
    REQUIRE(s.size() == 1);
    counts(s.indices[0]) += 1.0;
  }
  const Eigen::Vector3d p{0.3, 0.3, 0.4};
  for (int i = 0; i < 3; ++i) {
    const double sigma = std::sqrt(trials * p(i) * (1.0 - p(i)));
    CHECK(std::abs(counts(i) - trials * p(i)) <= 3.0 * sigma);
  }
}

TEST_CASE("pipage_round pre-lift fills the budget from fractional mass") {
  RngStream rng(37);
  VectorXd x(4);
  x << 0.9, 0.1, 0.0, 0.0;  // sum 1, cap 2: lift to sum 2, then round
  for (int trial = 0; trial < 50; ++trial) {
    const AntennaSet s = pipage_round(x, 2, rng);
    CHECK(s.size() == 2);
  }
}

TEST_CASE("simple_greedy_empirical: reductions and empirical bound") {
  RngStream rng(41);
  const double snr = 2.0;

  // s = 1 reduces to plain greedy on that sample.
  const MatrixXcd cols = random_complex(3, 8, rng);
  const ChannelEnsemble e1 = single_channel_ensemble(cols);
  const ReflectionState r = ReflectionState::disabled(0);
  CHECK(simple_greedy_empirical(e1, r, snr, 3) ==
        greedy_select_columns(cols, 3, snr));

  // Identical samples reduce to the single-sample answer.
  ChannelEnsemble same;
  same.samples = {e1.samples[0], e1.samples[0], e1.samples[0]};
  CHECK(simple_greedy_empirical(same, r, snr, 3) ==
        simple_greedy_empirical(e1, r, snr, 3));

  // (1 - 1/e) bound against the exhaustive empirical optimum, L = 10, s = 5.
  ChannelEnsemble e5;
  for (int i = 0; i < 5; ++i) {
    e5.samples.push_back(direct_only(random_complex(3, 10, rng)));
  }
  const AntennaSet greedy = simple_greedy_empirical(e5, r, snr, 3);
  const double greedy_value = empirical_capacity(e5, greedy, r, snr);
  double best = -1.0;
  for (unsigned mask = 0; mask < (1u << 10); ++mask) {
    if (__builtin_popcount(mask) != 3) continue;
    AntennaSet s;
    for (int i = 0; i < 10; ++i) {
      if (mask & (1u << i)) s.indices.push_back(i);
    }
    best = std::max(best, empirical_capacity(e5, s, r, snr));
  }
  CHECK(greedy_value >= (1.0 - 1.0 / std::exp(1.0)) * best - 1e-9);

  CHECK_THROWS_AS(simple_greedy_empirical(ChannelEnsemble{}, r, snr, 2),
                  std::invalid_argument);
}

TEST_CASE("exact multilinear extension is monotone and off-diagonal concave") {
  RngStream rng(43);
  const double snr = 2.0;
  const MatrixXcd cols = random_complex(3, 6, rng);
  for (int trial = 0; trial < 10; ++trial) {
    VectorXd x(6);
    for (int i = 0; i < 6; ++i) x(i) = 0.8 * rng.next_double();
    for (int i = 0; i < 6; ++i) {
      CHECK(exact_partial(cols, x, i, snr) >= -1e-9);  // monotone
    }
    const double delta = 0.1;
    const int i = static_cast<int>(rng.next_below(6));
    int j = static_cast<int>(rng.next_below(6));
    if (j == i) j = (j + 1) % 6;
    VectorXd xi = x, xj = x, xij = x;
    xi(i) += delta;
    xj(j) += delta;
    xij(i) += delta;
    xij(j) += delta;
    const double lhs = exact_multilinear(cols, xij, snr) -
                       exact_multilinear(cols, xi, snr);
    const double rhs = exact_multilinear(cols, xj, snr) -
                       exact_multilinear(cols, x, snr);
    CHECK(lhs <= rhs + 1e-9);  // off-diagonal concavity
  }
}
