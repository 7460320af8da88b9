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

#ifndef RISMIMO_BEAMFORMING_HPP
#define RISMIMO_BEAMFORMING_HPP

#include <complex>
#include <vector>

#include "rismimo/capacity.hpp"

namespace rismimo {

// Per-coordinate objective log2 det(P + beta Q + conj(beta) Q^H) with
// Q = q_left * q_right^H. For unit-modulus beta this equals the full
// capacity with the coordinate set to beta.
struct CoordinateSubproblem {
  Eigen::MatrixXcd p;        // K x K, HPD
  Eigen::VectorXcd q_left;   // snr * rho_n
  Eigen::VectorXcd q_right;  // B * t_n

  double objective(std::complex<double> beta) const;
};

// Builds (P, Q) for RIS coordinate n given the other coordinates of r.
// Verifies the objective identity against the full capacity and throws
// std::logic_error when it fails beyond 1e-9 relative.
CoordinateSubproblem build_coordinate_subproblem(const ChannelTriple& t,
                                                 const AntennaSet& s,
                                                 const ReflectionState& r,
                                                 int n, double snr);

// Optimal unit-modulus coordinate: e^{-j arg(trace(P^-1 Q))}; returns 1
// when the trace vanishes (the objective is then phase-invariant).
std::complex<double> closed_form_beta(const CoordinateSubproblem& sub);

// Coordinate sweeps of closed-form updates; capacity is nondecreasing at
// every update and the loop stops once a sweep improves less than tol.
ReflectionState bcd_beamform(const ChannelTriple& t, const AntennaSet& s,
                             ReflectionState r0, double snr, double tol = 1e-6,
                             int max_sweeps = 50);

// Maximizes the sample-average objective (1/s) sum_i log2det(P_i + beta Q_i
// + conj(beta) Q_i^H) over the closed unit disk by projected gradient ascent
// with backtracking. Returns |beta| <= 1.
std::complex<double> relaxed_coordinate_solve(
    const std::vector<CoordinateSubproblem>& subproblems,
    std::complex<double> beta0);

// Coordinate sweeps of relaxed solves over the ensemble average, followed by
// per-coordinate projection to unit modulus (0 maps to 1).
ReflectionState stochastic_bcd_beamform(const ChannelEnsemble& e,
                                        const AntennaSet& s,
                                        ReflectionState r0, double snr,
                                        double tol = 1e-6,
                                        int max_sweeps = 50);

}  // namespace rismimo

#endif  // RISMIMO_BEAMFORMING_HPP
