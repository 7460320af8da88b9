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

#ifndef RISMIMO_CAPACITY_HPP
#define RISMIMO_CAPACITY_HPP

#include <Eigen/Dense>
#include <vector>

#include "rismimo/channel.hpp"
#include "rismimo/numerics.hpp"
#include "rismimo/rng.hpp"

namespace rismimo {

// Unit-modulus RIS coefficients (diagonal of the reflection matrix), or the
// all-zero no-RIS baseline.
struct ReflectionState {
  Eigen::VectorXcd beta;
  bool active = true;

  static ReflectionState disabled(int n) {
    return {Eigen::VectorXcd::Zero(n), false};
  }
  static ReflectionState ones(int n) {
    return {Eigen::VectorXcd::Ones(n), true};
  }
  static ReflectionState random_phases(int n, RngStream& rng);
  void validate() const;  // unit modulus when active, zero when disabled
};

// Strictly increasing antenna indices in [0, L).
struct AntennaSet {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  bool contains(int i) const;
  void insert(int i);  // keeps order, rejects duplicates
  void erase(int i);
  static AntennaSet full(int l);
  bool operator==(const AntennaSet&) const = default;
};

// Full K x L effective channel H = Hhat + R diag(beta) T.
Eigen::MatrixXcd effective_channel_full(const ChannelTriple& t,
                                        const ReflectionState& r);

// Columns of the effective channel restricted to s.
Eigen::MatrixXcd effective_channel(const ChannelTriple& t, const AntennaSet& s,
                                   const ReflectionState& r);

// log2 det(I + snr H^H H) on preselected columns; uses whichever Gram form
// (K x K or |S| x |S|) is smaller.
double capacity_columns(const Eigen::MatrixXcd& cols, double snr);

double capacity(const ChannelTriple& t, const AntennaSet& s,
                const ReflectionState& r, double snr);

// Maintains G(S) = I_K + snr * sum_{j in S} u_j u_j^H and its inverse /
// log-determinant through rank-1 updates. Single-owner mutable.
class GramEvaluator {
 public:
  // columns: the K x L effective channel, shared immutable data. The caller
  // must keep it alive for the evaluator's lifetime.
  GramEvaluator(const Eigen::MatrixXcd& columns, AntennaSet s, double snr);

  double log_det_bits() const { return cache_.log_det_bits; }
  const AntennaSet& current_set() const { return set_; }
  double snr() const { return snr_; }

  // C(S u {i}) - C(S \ {i}) in bits; O(K^2) per call.
  double marginal_gain(int i) const;

  // All L marginal gains with one factorization; equals per-i calls.
  Eigen::VectorXd full_gradient() const;

  void add(int i);
  void remove(int i);

  // How often a singular Sherman-Morrison downdate forced a dense rebuild.
  long refactorization_count() const { return refactorizations_; }

 private:
  void rebuild();

  const Eigen::MatrixXcd* columns_;
  double snr_;
  AntennaSet set_;
  std::vector<char> member_;
  numerics::InverseCache cache_;
  mutable long refactorizations_ = 0;
};

}  // namespace rismimo

#endif  // RISMIMO_CAPACITY_HPP
