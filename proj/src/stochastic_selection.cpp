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

#include "rismimo/stochastic_selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rismimo {

namespace {

// Bernoulli subset draw; one uniform per coordinate keeps the stream layout
// identical between gradient modes.
AntennaSet sample_subset(const Eigen::VectorXd& x, RngStream& rng) {
  AntennaSet s;
  for (int i = 0; i < x.size(); ++i) {
    if (rng.next_double() < x(i)) s.indices.push_back(i);
  }
  return s;
}

// |S| x |S| determinant route, the baseline evaluation path.
double subset_capacity_ns_form(const Eigen::MatrixXcd& columns,
                               const std::vector<int>& subset, double snr) {
  const int m = static_cast<int>(subset.size());
  if (m == 0) return 0.0;
  Eigen::MatrixXcd h(columns.rows(), m);
  for (int j = 0; j < m; ++j) h.col(j) = columns.col(subset[j]);
  const Eigen::MatrixXcd g =
      Eigen::MatrixXcd::Identity(m, m) + snr * (h.adjoint() * h);
  return numerics::logdet_hpd(g);
}

Eigen::VectorXd naive_gradient(const Eigen::MatrixXcd& columns,
                               const AntennaSet& s, double snr) {
  const int l = static_cast<int>(columns.cols());
  Eigen::VectorXd phi(l);
  for (int i = 0; i < l; ++i) {
    std::vector<int> with = s.indices;
    std::vector<int> without = s.indices;
    if (s.contains(i)) {
      without.erase(std::find(without.begin(), without.end(), i));
    } else {
      with.insert(std::lower_bound(with.begin(), with.end(), i), i);
    }
    phi(i) = subset_capacity_ns_form(columns, with, snr) -
             subset_capacity_ns_form(columns, without, snr);
  }
  return phi;
}

}  // namespace

Eigen::VectorXd naive_gradient_reference(const Eigen::MatrixXcd& columns,
                                         const AntennaSet& s, double snr) {
  return naive_gradient(columns, s, snr);
}

ChannelSampler ChannelSampler::generative(const SystemConfig& cfg,
                                          std::uint64_t seed) {
  ChannelSampler s;
  s.cfg_ = cfg;
  s.users_ = draw_user_positions(cfg, seed);
  s.seed_ = seed;
  return s;
}

ChannelSampler ChannelSampler::fixed(const ChannelEnsemble& e) {
  if (e.samples.empty())
    throw std::invalid_argument("ChannelSampler: empty ensemble");
  ChannelSampler s;
  s.ensemble_ = &e;
  return s;
}

ChannelTriple ChannelSampler::draw(std::uint64_t index) const {
  if (ensemble_ != nullptr) {
    return ensemble_->samples[index % ensemble_->samples.size()];
  }
  return sample_triple(*cfg_, users_, seed_, index);
}

ValueEstimate multilinear_value(const ChannelSampler& sampler,
                                const Eigen::VectorXd& x,
                                const ReflectionState& r, double snr,
                                int batch, std::uint64_t seed) {
  if (batch < 1) throw std::invalid_argument("multilinear_value: batch < 1");
  std::vector<double> values(batch);
#pragma omp parallel for schedule(static)
  for (int d = 0; d < batch; ++d) {
    RngStream rng(derive_seed(seed, d));
    const ChannelTriple t = sampler.draw(d);
    const AntennaSet s = sample_subset(x, rng);
    const Eigen::MatrixXcd columns = effective_channel_full(t, r);
    values[d] = subset_capacity_ns_form(columns, s.indices, snr);
  }
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / batch;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var = batch > 1 ? var / (batch - 1) : 0.0;
  ValueEstimate out;
  out.mean = mean;
  out.std_error = std::sqrt(var / batch);
  out.batch = batch;
  return out;
}

GradientEstimate gradient_estimate(const ChannelSampler& sampler,
                                   const Eigen::VectorXd& x,
                                   const ReflectionState& r, double snr,
                                   int batch, std::uint64_t seed,
                                   GradientMode mode) {
  if (batch < 1) throw std::invalid_argument("gradient_estimate: batch < 1");
  const int l = static_cast<int>(x.size());
  std::vector<Eigen::VectorXd> draws(batch);
#pragma omp parallel for schedule(static)
  for (int d = 0; d < batch; ++d) {
    RngStream rng(derive_seed(seed, d));
    const ChannelTriple t = sampler.draw(d);
    const AntennaSet s = sample_subset(x, rng);
    const Eigen::MatrixXcd columns = effective_channel_full(t, r);
    if (mode == GradientMode::kFast) {
      GramEvaluator eval(columns, s, snr);
      draws[d] = eval.full_gradient();
    } else {
      draws[d] = naive_gradient(columns, s, snr);
    }
  }
  GradientEstimate out;
  out.phi = Eigen::VectorXd::Zero(l);
  for (const auto& d : draws) out.phi += d;
  out.phi /= static_cast<double>(batch);
  out.batch = batch;
  out.source = mode;
  return out;
}

Eigen::VectorXd top_k_vertex(const Eigen::VectorXd& phi, int cap) {
  const int l = static_cast<int>(phi.size());
  std::vector<int> order(l);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return phi(a) > phi(b); });
  Eigen::VectorXd v = Eigen::VectorXd::Zero(l);
  for (int i = 0; i < std::min(cap, l); ++i) v(order[i]) = 1.0;
  return v;
}

Eigen::VectorXd continuous_greedy(const ChannelSampler& sampler,
                                  const ReflectionState& r, double snr,
                                  int cap, const ContinuousGreedyOptions& opt,
                                  std::uint64_t seed) {
  // The r here is fixed; the sampler supplies the channel randomness.
  const int l = static_cast<int>(
      sampler.draw(0).direct.cols());  // probe for dimensions
  const double delta =
      opt.delta > 0.0 ? opt.delta : 1.0 / (9.0 * cap * cap);
  int batch = opt.batch;
  if (opt.prescribed_batch) {
    batch = static_cast<int>(
        std::ceil(10.0 / (delta * delta) * (1.0 + std::log(l))));
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(l);
  double t = 0.0;
  std::uint64_t step_index = 0;
  while (t < 1.0 - 1e-12) {
    const double step = std::min(delta, 1.0 - t);
    const GradientEstimate g = gradient_estimate(
        sampler, x, r, snr, batch, derive_seed(seed, step_index),
        GradientMode::kFast);
    const Eigen::VectorXd v = top_k_vertex(g.phi, cap);
    x = (x + step * v).cwiseMin(1.0);
    t += step;
    ++step_index;
  }
  return x;
}

Eigen::VectorXd spgm(const ChannelSampler& sampler, const ReflectionState& r,
                     double snr, int cap, const SpgmOptions& opt,
                     std::uint64_t seed) {
  if (opt.iterations < 1) throw std::invalid_argument("spgm: T < 1");
  const int l = static_cast<int>(sampler.draw(0).direct.cols());
  Eigen::VectorXd x = Eigen::VectorXd::Constant(
      l, static_cast<double>(cap) / static_cast<double>(l));

  // tau per the two-level schedule: endpoints get half the interior mass.
  const int big_t = opt.iterations;
  int tau = 1;
  if (big_t > 1) {
    RngStream tau_rng(derive_seed(seed, 0xA117ULL));
    const double u = tau_rng.next_double();
    const double endpoint = 1.0 / (2.0 * (big_t - 1));
    if (u < endpoint) {
      tau = 1;
    } else if (u < 2.0 * endpoint) {
      tau = big_t;
    } else {
      const double rest = (u - 2.0 * endpoint) / (1.0 - 2.0 * endpoint);
      tau = 2 + std::min(big_t - 3, static_cast<int>(rest * (big_t - 2)));
    }
  }

  Eigen::VectorXd x_tau = x;
  for (int t = 1; t <= big_t; ++t) {
    const GradientEstimate g =
        gradient_estimate(sampler, x, r, snr, opt.batch,
                          derive_seed(seed, t), GradientMode::kFast);
    double mu;
    if (opt.smoothness) {
      const auto& sm = *opt.smoothness;
      mu = 1.0 / (sm.l_smooth +
                  sm.grad_deviation / sm.diameter * std::sqrt(t));
    } else {
      mu = 1.0 / std::sqrt(static_cast<double>(t));
    }
    x = numerics::project_capped_simplex(x + mu * g.phi, cap);
    if (t == tau) x_tau = x;
  }

  // Never return the worse of the two candidate iterates.
  const ValueEstimate v_tau = multilinear_value(
      sampler, x_tau, r, snr, opt.eval_batch, derive_seed(seed, 0xE7A1ULL));
  const ValueEstimate v_last = multilinear_value(
      sampler, x, r, snr, opt.eval_batch, derive_seed(seed, 0xE7A2ULL));
  return v_tau.mean >= v_last.mean ? x_tau : x;
}

AntennaSet pipage_round(Eigen::VectorXd x, int cap, RngStream& rng) {
  const int l = static_cast<int>(x.size());
  if (cap > l) throw std::invalid_argument("pipage_round: cap > L");
  // Pre-lift toward the sum = cap face, largest fractional coordinate first.
  double deficit = static_cast<double>(cap) - x.sum();
  while (deficit > 1e-9) {
    int pick = -1;
    for (int i = 0; i < l; ++i) {
      if (x(i) < 1.0 - 1e-12 && (pick < 0 || x(i) > x(pick))) pick = i;
    }
    if (pick < 0)
      throw std::logic_error("pipage_round: pre-lift impossible");
    const double raise = std::min(1.0 - x(pick), deficit);
    x(pick) += raise;
    deficit -= raise;
  }

  const auto fractional = [&](int i) {
    return x(i) > 1e-9 && x(i) < 1.0 - 1e-9;
  };
  while (true) {
    int i = -1, j = -1;
    for (int k = 0; k < l; ++k) {
      if (!fractional(k)) continue;
      if (i < 0) {
        i = k;
      } else {
        j = k;
        break;
      }
    }
    if (j < 0) break;
    const double eps_up = std::min(1.0 - x(i), x(j));
    const double eps_down = std::min(x(i), 1.0 - x(j));
    const double p = eps_down / (eps_up + eps_down);
    if (rng.next_double() < p) {
      x(i) += eps_up;
      x(j) -= eps_up;
    } else {
      x(i) -= eps_down;
      x(j) += eps_down;
    }
  }

  AntennaSet s;
  for (int i = 0; i < l; ++i) {
    if (x(i) > 0.5) s.indices.push_back(i);
  }
  return s;
}

AntennaSet simple_greedy_empirical(const ChannelEnsemble& e,
                                   const ReflectionState& r, double snr,
                                   int cap) {
  if (e.samples.empty())
    throw std::invalid_argument("simple_greedy_empirical: empty ensemble");
  std::vector<Eigen::MatrixXcd> columns;
  columns.reserve(e.samples.size());
  for (const auto& t : e.samples) {
    columns.push_back(effective_channel_full(t, r));
  }
  const int l = static_cast<int>(columns.front().cols());
  if (cap > l)
    throw std::invalid_argument("simple_greedy_empirical: cap > L");

  std::vector<GramEvaluator> evals;
  evals.reserve(columns.size());
  for (const auto& c : columns) {
    evals.emplace_back(c, AntennaSet{}, snr);
  }
  AntennaSet s;
  for (int step = 0; step < cap; ++step) {
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(l);
    for (const auto& eval : evals) phi += eval.full_gradient();
    int best = -1;
    for (int i = 0; i < l; ++i) {
      if (s.contains(i)) continue;
      if (best < 0 || phi(i) > phi(best)) best = i;
    }
    s.insert(best);
    for (auto& eval : evals) eval.add(best);
  }
  return s;
}

double empirical_capacity(const ChannelEnsemble& e, const AntennaSet& s,
                          const ReflectionState& r, double snr) {
  double sum = 0.0;
  for (const auto& t : e.samples) sum += capacity(t, s, r, snr);
  return sum / static_cast<double>(e.samples.size());
}

}  // namespace rismimo
