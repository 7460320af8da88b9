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

#include "rismimo/beamforming.hpp"

#include <cmath>
#include <stdexcept>

namespace rismimo {

namespace {

constexpr double kLn2 = 0.6931471805599453;

std::complex<double> disk_project(std::complex<double> b) {
  const double m = std::abs(b);
  return m > 1.0 ? b / m : b;
}

struct SampleEval {
  double value_bits = 0.0;
  std::complex<double> trace = 0.0;  // trace(M^-1 Q)
};

SampleEval eval_sample(const CoordinateSubproblem& sub,
                       std::complex<double> beta) {
  const Eigen::MatrixXcd m =
      sub.p + beta * (sub.q_left * sub.q_right.adjoint()) +
      std::conj(beta) * (sub.q_right * sub.q_left.adjoint());
  SampleEval out;
  out.value_bits = numerics::logdet_hpd(m);
  out.trace = sub.q_right.dot(m.llt().solve(sub.q_left));
  return out;
}

// Mean objective (bits) and complex ascent gradient over the samples.
std::pair<double, std::complex<double>> eval_mean(
    const std::vector<CoordinateSubproblem>& subs, std::complex<double> beta) {
  double value = 0.0;
  std::complex<double> trace = 0.0;
  for (const auto& sub : subs) {
    const SampleEval e = eval_sample(sub, beta);
    value += e.value_bits;
    trace += e.trace;
  }
  const double s = static_cast<double>(subs.size());
  value /= s;
  trace /= s;
  return {value, 2.0 * std::conj(trace) / kLn2};
}

}  // namespace

double CoordinateSubproblem::objective(std::complex<double> beta) const {
  const Eigen::MatrixXcd m = p + beta * (q_left * q_right.adjoint()) +
                             std::conj(beta) * (q_right * q_left.adjoint());
  return numerics::logdet_hpd(m);
}

CoordinateSubproblem build_coordinate_subproblem(const ChannelTriple& t,
                                                 const AntennaSet& s,
                                                 const ReflectionState& r,
                                                 int n, double snr) {
  const int num_elems = static_cast<int>(t.bs_ris.rows());
  if (n < 0 || n >= num_elems)
    throw std::out_of_range("build_coordinate_subproblem: bad coordinate");
  if (s.size() < 1)
    throw std::invalid_argument("build_coordinate_subproblem: empty set");

  const auto k = t.direct.rows();
  Eigen::MatrixXcd hhat(k, s.size());
  Eigen::MatrixXcd t_sel(num_elems, s.size());  // T(S)
  for (int j = 0; j < s.size(); ++j) {
    hhat.col(j) = t.direct.col(s.indices[j]);
    t_sel.col(j) = t.bs_ris.col(s.indices[j]);
  }
  const Eigen::VectorXcd rho = t.ris_user.col(n);
  const Eigen::VectorXcd t_n = t_sel.row(n).adjoint();  // row n is t_n^H

  Eigen::VectorXcd beta_rest = r.beta;
  beta_rest(n) = 0.0;
  const Eigen::MatrixXcd b =
      hhat + t.ris_user * beta_rest.asDiagonal() * t_sel;

  CoordinateSubproblem sub;
  sub.p = Eigen::MatrixXcd::Identity(k, k) +
          snr * t_n.squaredNorm() * (rho * rho.adjoint()) +
          snr * (b * b.adjoint());
  sub.q_left = snr * rho;
  sub.q_right = b * t_n;

  // Objective identity guard: for unit-modulus test phases the coordinate
  // objective must equal the full capacity with beta_n set to that phase.
  for (const double phase : {0.0, 2.0}) {
    const std::complex<double> test = std::polar(1.0, phase);
    ReflectionState probe = r;
    probe.active = true;
    probe.beta(n) = test;
    const Eigen::MatrixXcd h = hhat + t.ris_user * probe.beta.asDiagonal() *
                                          t_sel;
    const Eigen::MatrixXcd g =
        Eigen::MatrixXcd::Identity(k, k) + snr * (h * h.adjoint());
    const double cap = numerics::logdet_hpd(g);
    const double obj = sub.objective(test);
    if (std::abs(obj - cap) > 1e-9 * std::max(1.0, std::abs(cap))) {
      throw std::logic_error(
          "build_coordinate_subproblem: objective identity violated");
    }
  }
  return sub;
}

std::complex<double> closed_form_beta(const CoordinateSubproblem& sub) {
  const std::complex<double> lambda =
      numerics::rank1_generalized_eig(sub.p, sub.q_left, sub.q_right);
  if (std::abs(lambda) < 1e-12) return {1.0, 0.0};
  return std::polar(1.0, -std::arg(lambda));
}

ReflectionState bcd_beamform(const ChannelTriple& t, const AntennaSet& s,
                             ReflectionState r0, double snr, double tol,
                             int max_sweeps) {
  const int num_elems = static_cast<int>(r0.beta.size());
  if (num_elems == 0 || s.size() == 0) return r0;
  r0.validate();
  if (tol <= 0.0) throw std::invalid_argument("bcd_beamform: tol <= 0");

  ReflectionState r = std::move(r0);
  double current = capacity(t, s, r, snr);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double sweep_start = current;
    for (int n = 0; n < num_elems; ++n) {
      const CoordinateSubproblem sub =
          build_coordinate_subproblem(t, s, r, n, snr);
      const std::complex<double> beta = closed_form_beta(sub);
      const double updated = sub.objective(beta);
      if (updated < current - 1e-9) {
        throw std::logic_error("bcd_beamform: capacity decreased");
      }
      r.beta(n) = beta;
      current = updated;
    }
    if (current - sweep_start < tol) break;
  }
  return r;
}

std::complex<double> relaxed_coordinate_solve(
    const std::vector<CoordinateSubproblem>& subproblems,
    std::complex<double> beta0) {
  if (subproblems.empty())
    throw std::invalid_argument("relaxed_coordinate_solve: no samples");
  std::complex<double> beta = disk_project(beta0);
  auto [value, grad] = eval_mean(subproblems, beta);
  double step = 1.0;
  for (int it = 0; it < 5000; ++it) {
    if (std::abs(grad) < 1e-12) break;
    std::complex<double> cand;
    double cand_value = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      cand = disk_project(beta + step * grad);
      const std::complex<double> delta = cand - beta;
      if (std::abs(delta) < 1e-12) break;
      cand_value = eval_mean(subproblems, cand).first;
      const double directional =
          (std::conj(grad) * delta).real();  // <grad, delta>
      if (cand_value >= value + 1e-4 * directional) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    if (cand_value < value - 1e-9) {
      throw std::logic_error(
          "relaxed_coordinate_solve: objective decreased on accepted step");
    }
    const double improvement = cand_value - value;
    beta = cand;
    std::tie(value, grad) = eval_mean(subproblems, beta);
    step = std::min(step * 2.0, 1e6);
    if (improvement < 1e-12 && it > 10) break;
  }
  return beta;
}

ReflectionState stochastic_bcd_beamform(const ChannelEnsemble& e,
                                        const AntennaSet& s,
                                        ReflectionState r0, double snr,
                                        double tol, int max_sweeps) {
  const int num_elems = static_cast<int>(r0.beta.size());
  if (num_elems == 0 || e.samples.empty() || s.size() == 0) return r0;
  r0.validate();

  ReflectionState r = std::move(r0);
  double current = 0.0;
  for (const auto& t : e.samples) current += capacity(t, s, r, snr);
  current /= static_cast<double>(e.samples.size());

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double sweep_start = current;
    for (int n = 0; n < num_elems; ++n) {
      std::vector<CoordinateSubproblem> subs;
      subs.reserve(e.samples.size());
      for (const auto& t : e.samples) {
        subs.push_back(build_coordinate_subproblem(t, s, r, n, snr));
      }
      const std::complex<double> beta =
          relaxed_coordinate_solve(subs, r.beta(n));
      r.beta(n) = beta;
      double value = 0.0;
      for (const auto& sub : subs) value += sub.objective(beta);
      current = value / static_cast<double>(subs.size());
    }
    if (current - sweep_start < tol) break;
  }

  for (int n = 0; n < num_elems; ++n) {
    const double mag = std::abs(r.beta(n));
    r.beta(n) = mag < 1e-12 ? std::complex<double>(1.0, 0.0)
                            : r.beta(n) / mag;
  }
  r.active = true;
  return r;
}

}  // namespace rismimo
