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

#include "rismimo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rismimo::numerics {

namespace {

constexpr double kLog2E = 1.4426950408889634;  // 1/ln 2
constexpr double kSingularUpdateTol = 1e-12;

// In-place lower Cholesky. Returns the pivot index of the first non-positive
// leading minor, or -1 on success.
int cholesky_in_place(Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  for (int j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(a(j, k));
    if (!(d > 0.0) || !std::isfinite(d)) return j;
    const double root = std::sqrt(d);
    a(j, j) = root;
    for (int i = j + 1; i < n; ++i) {
      std::complex<double> s = a(i, j);
      for (int k = 0; k < j; ++k) s -= a(i, k) * std::conj(a(j, k));
      a(i, j) = s / root;
    }
  }
  return -1;
}

}  // namespace

double logdet_hpd(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd chol = m;
  const int bad = cholesky_in_place(chol);
  if (bad >= 0) {
    throw std::domain_error(
        "logdet_hpd: matrix is not positive definite (leading minor " +
        std::to_string(bad + 1) + " is not positive)");
  }
  double sum = 0.0;
  for (int j = 0; j < chol.rows(); ++j) sum += std::log(chol(j, j).real());
  return 2.0 * sum * kLog2E;
}

InverseCache make_inverse_cache(const Eigen::MatrixXcd& m) {
  InverseCache cache;
  cache.log_det_bits = logdet_hpd(m);
  Eigen::LLT<Eigen::MatrixXcd> llt(m);
  cache.inverse =
      llt.solve(Eigen::MatrixXcd::Identity(m.rows(), m.cols()));
  return cache;
}

InverseCache sm_rank1_update(const InverseCache& cache,
                             const Eigen::VectorXcd& u, double c) {
  const Eigen::VectorXcd v = cache.inverse * u;
  // u^H M^-1 u is real for Hermitian M.
  const double quad = u.dot(v).real();
  const double denom = 1.0 + c * quad;
  if (std::abs(denom) < kSingularUpdateTol) {
    throw SingularUpdateError("sm_rank1_update: denominator " +
                              std::to_string(denom) + " below threshold");
  }
  InverseCache out;
  out.inverse = cache.inverse - (c / denom) * (v * v.adjoint());
  out.log_det_bits = cache.log_det_bits + std::log2(denom);
  return out;
}

std::complex<double> rank1_generalized_eig(const Eigen::MatrixXcd& p,
                                           const Eigen::VectorXcd& a,
                                           const Eigen::VectorXcd& b) {
  const Eigen::VectorXcd pinv_a = p.llt().solve(a);
  const std::complex<double> lambda = b.dot(pinv_a);  // b^H P^-1 a
  if (std::abs(lambda) < 1e-12) return {0.0, 0.0};
  return lambda;
}

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> factor_rank1(
    const Eigen::MatrixXcd& q) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      q, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() > 1 && s(1) > 1e-8 * s(0)) {
    throw std::invalid_argument(
        "factor_rank1: matrix is numerically rank >= 2");
  }
  Eigen::VectorXcd a = svd.matrixU().col(0) * s(0);
  Eigen::VectorXcd b = svd.matrixV().col(0);
  return {std::move(a), std::move(b)};
}

std::complex<double> rank1_generalized_eig(const Eigen::MatrixXcd& p,
                                           const Eigen::MatrixXcd& q) {
  auto [a, b] = factor_rank1(q);
  return rank1_generalized_eig(p, a, b);
}

Eigen::VectorXd project_capped_simplex(const Eigen::VectorXd& u, int cap) {
  const auto clip01 = [](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v.cwiseMax(0.0).cwiseMin(1.0);
  };
  Eigen::VectorXd x = clip01(u);
  const double budget = static_cast<double>(cap);
  if (x.sum() <= budget + 1e-12) return x;
  // sum(clip(u - tau)) is nonincreasing in tau; bracket and bisect.
  double lo = 0.0;
  double hi = u.maxCoeff();  // at tau = max(u) every entry clips to <= 0
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double s = (u.array() - mid).cwiseMax(0.0).cwiseMin(1.0).sum();
    if (s > budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double tau = 0.5 * (lo + hi);
  return clip01((u.array() - tau).matrix());
}

}  // namespace rismimo::numerics
