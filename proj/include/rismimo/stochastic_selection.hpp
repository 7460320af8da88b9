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

#ifndef RISMIMO_STOCHASTIC_SELECTION_HPP
#define RISMIMO_STOCHASTIC_SELECTION_HPP

#include <cstdint>
#include <optional>

#include "rismimo/capacity.hpp"
#include "rismimo/selection.hpp"

namespace rismimo {

// Channel source for Monte-Carlo estimates: either fresh draws from a
// generative config or a cyclic minibatch over a fixed ensemble. draw(i) is
// a pure function of i, so draws can be evaluated in any order.
class ChannelSampler {
 public:
  static ChannelSampler generative(const SystemConfig& cfg,
                                   std::uint64_t seed);
  static ChannelSampler fixed(const ChannelEnsemble& e);

  ChannelTriple draw(std::uint64_t index) const;

 private:
  ChannelSampler() = default;
  std::optional<SystemConfig> cfg_;
  std::vector<Eigen::Vector3d> users_;
  std::uint64_t seed_ = 0;
  const ChannelEnsemble* ensemble_ = nullptr;
};

struct ValueEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  int batch = 0;
};

// Monte-Carlo estimate of E_H E_{S~x}[C_H(S, Theta)]: each coordinate of the
// random set is included independently with probability x_i.
ValueEstimate multilinear_value(const ChannelSampler& sampler,
                                const Eigen::VectorXd& x,
                                const ReflectionState& r, double snr,
                                int batch, std::uint64_t seed);

enum class GradientMode { kNaive, kFast };

struct GradientEstimate {
  Eigen::VectorXd phi;
  int batch = 0;
  GradientMode source = GradientMode::kFast;
};

// Averages batch draws of phi_i = C(S u {i}) - C(S \ {i}). Both modes use
// identical draw streams, so they agree to rounding on the same seed; the
// naive mode evaluates determinant differences directly (serial reference),
// the fast mode uses the incremental Gram gradient.
GradientEstimate gradient_estimate(const ChannelSampler& sampler,
                                   const Eigen::VectorXd& x,
                                   const ReflectionState& r, double snr,
                                   int batch, std::uint64_t seed,
                                   GradientMode mode = GradientMode::kFast);

// Serial determinant-difference gradient at a fixed set: the reference the
// fast incremental path is validated and benchmarked against.
Eigen::VectorXd naive_gradient_reference(const Eigen::MatrixXcd& columns,
                                         const AntennaSet& s, double snr);

// Indicator of the cap largest entries (ties by lowest index): the exact
// linear maximizer over the uniform-matroid polytope.
Eigen::VectorXd top_k_vertex(const Eigen::VectorXd& phi, int cap);

struct ContinuousGreedyOptions {
  double delta = 0.0;  // 0 selects 1/(9 cap^2)
  int batch = 64;
  // When set, the batch is ceil(10/delta^2 * (1 + ln L)) instead of `batch`.
  bool prescribed_batch = false;
};

Eigen::VectorXd continuous_greedy(const ChannelSampler& sampler,
                                  const ReflectionState& r, double snr,
                                  int cap, const ContinuousGreedyOptions& opt,
                                  std::uint64_t seed);

// Optional constants for the smoothness-based step rule.
struct SmoothnessSpec {
  double l_smooth = 1.0;
  double grad_deviation = 1.0;  // delta
  double diameter = 1.0;        // R
};

struct SpgmOptions {
  int iterations = 200;  // T
  int batch = 32;
  std::optional<SmoothnessSpec> smoothness;  // default: 1/sqrt(t) steps
  int eval_batch = 256;  // final evaluation pass comparing x^tau and x^T
};

Eigen::VectorXd spgm(const ChannelSampler& sampler, const ReflectionState& r,
                     double snr, int cap, const SpgmOptions& opt,
                     std::uint64_t seed);

// Randomized pipage rounding; preserves marginals and returns exactly
// round(sum x) = cap antennas after the pre-lift.
AntennaSet pipage_round(Eigen::VectorXd x, int cap, RngStream& rng);

// Greedy selection on the empirical ensemble-average objective.
AntennaSet simple_greedy_empirical(const ChannelEnsemble& e,
                                   const ReflectionState& r, double snr,
                                   int cap);

double empirical_capacity(const ChannelEnsemble& e, const AntennaSet& s,
                          const ReflectionState& r, double snr);

}  // namespace rismimo

#endif  // RISMIMO_STOCHASTIC_SELECTION_HPP
