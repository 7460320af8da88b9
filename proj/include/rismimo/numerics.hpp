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

#ifndef RISMIMO_NUMERICS_HPP
#define RISMIMO_NUMERICS_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>

namespace rismimo::numerics {

// Thrown when a rank-1 inverse update hits a (near-)vanishing denominator.
// Callers fall back to a full refactorization.
class SingularUpdateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// log2 det(M) for a Hermitian positive definite M, via Cholesky.
// Throws std::domain_error naming the failing leading minor when M is not HPD.
double logdet_hpd(const Eigen::MatrixXcd& m);

// A matrix inverse paired with the log-determinant of the original matrix,
// maintained jointly through rank-1 updates.
struct InverseCache {
  Eigen::MatrixXcd inverse;
  double log_det_bits = 0.0;
};

// Builds the cache for an HPD matrix by full factorization.
InverseCache make_inverse_cache(const Eigen::MatrixXcd& m);

// Sherman-Morrison update for M + c*u*u^H. c < 0 performs a downdate.
// Throws SingularUpdateError when |1 + c*u^H M^-1 u| < 1e-12.
InverseCache sm_rank1_update(const InverseCache& cache,
                             const Eigen::VectorXcd& u, double c);

// The unique nonzero eigenvalue of P^-1 Q with Q = a*b^H, computed as
// trace(P^-1 Q) = b^H P^-1 a. Returns 0 when the trace magnitude is < 1e-12.
std::complex<double> rank1_generalized_eig(const Eigen::MatrixXcd& p,
                                           const Eigen::VectorXcd& a,
                                           const Eigen::VectorXcd& b);

// Splits a numerically rank-1 matrix into (a, b) with q = a*b^H.
// Throws std::invalid_argument when the second singular value exceeds
// 1e-8 times the first.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> factor_rank1(
    const Eigen::MatrixXcd& q);

// Matrix-argument overload: factors q and applies the trace identity.
std::complex<double> rank1_generalized_eig(const Eigen::MatrixXcd& p,
                                           const Eigen::MatrixXcd& q);

// Euclidean projection of u onto {x : 0 <= x_i <= 1, sum x_i <= cap}.
// Bisection on the shift tau; tolerance 1e-10, at most 200 iterations.
Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& u, int cap);

}  // namespace rismimo::numerics

#endif  // RISMIMO_NUMERICS_HPP
