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

#include <cmath>

#include "doctest.h"
#include "rismimo/capacity.hpp"

namespace {

using namespace rismimo;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

MatrixXcd random_complex(int rows, int cols, RngStream& rng) {
  MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = rng.next_cgaussian();
  }
  return m;
}

ChannelTriple random_triple(int k, int l, int n, RngStream& rng) {
  ChannelTriple t;
  t.direct = random_complex(k, l, rng);
  t.bs_ris = random_complex(n, l, rng);
  t.ris_user = random_complex(k, n, rng);
  return t;
}

// Direct K x K determinant oracle, no column subsetting tricks.
double capacity_oracle(const MatrixXcd& cols, double snr) {
  const auto k = cols.rows();
  const MatrixXcd g =
      MatrixXcd::Identity(k, k) + snr * (cols * cols.adjoint());
  return numerics::logdet_hpd(g);
}

}  // namespace

TEST_CASE("ReflectionState: validation and random phases") {
  RngStream rng(3);
  ReflectionState r = ReflectionState::random_phases(6, rng);
  CHECK_NOTHROW(r.validate());
  for (int i = 0; i < 6; ++i) {
    CHECK(std::abs(std::abs(r.beta(i)) - 1.0) <= 1e-12);
  }
  r.beta(2) *= 0.5;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);

  ReflectionState off = ReflectionState::disabled(4);
  CHECK_NOTHROW(off.validate());
  off.beta(0) = 1.0;
  CHECK_THROWS_AS(off.validate(), std::invalid_argument);

  CHECK_NOTHROW(ReflectionState::ones(5).validate());
}

TEST_CASE("AntennaSet: ordered insert, erase, contains") {
  AntennaSet s;
  s.insert(5);
  s.insert(1);
  s.insert(3);
  CHECK(s.indices == std::vector<int>{1, 3, 5});
  CHECK(s.contains(3));
  CHECK(!s.contains(2));
  CHECK_THROWS_AS(s.insert(3), std::invalid_argument);
  s.erase(3);
  CHECK(!s.contains(3));
  CHECK_THROWS_AS(s.erase(3), std::invalid_argument);
  CHECK(AntennaSet::full(3).indices == std::vector<int>{0, 1, 2});
}

TEST_CASE("effective_channel composes direct and reflected paths") {
  RngStream rng(5);
  const ChannelTriple t = random_triple(2, 4, 3, rng);
  ReflectionState r = ReflectionState::random_phases(3, rng);

  const MatrixXcd manual =
      t.direct + t.ris_user * r.beta.asDiagonal() * t.bs_ris;
  CHECK((effective_channel_full(t, r) - manual).norm() <= 1e-14);

  // Disabled RIS falls back to the direct link.
  CHECK((effective_channel_full(t, ReflectionState::disabled(3)) - t.direct)
            .norm() == 0.0);

  AntennaSet s;
  s.insert(0);
  s.insert(2);
  const MatrixXcd sub = effective_channel(t, s, r);
  CHECK((sub.col(0) - manual.col(0)).norm() == 0.0);
  CHECK((sub.col(1) - manual.col(2)).norm() == 0.0);

  AntennaSet bad;
  bad.insert(7);
  CHECK_THROWS_AS(effective_channel(t, bad, r), std::out_of_range);
}

TEST_CASE("capacity: closed forms and Sylvester route agreement") {
  // Empty selection carries no information.
  CHECK(capacity_columns(MatrixXcd(3, 0), 10.0) == 0.0);

  // Orthogonal columns: capacity separates into per-column terms.
  MatrixXcd cols = MatrixXcd::Zero(3, 2);
  cols(0, 0) = 2.0;
  cols(1, 1) = 3.0;
  const double snr = 0.5;
  const double expect = std::log2(1.0 + snr * 4.0) + std::log2(1.0 + snr * 9.0);
  CHECK(capacity_columns(cols, snr) == doctest::Approx(expect).epsilon(1e-12));

  // K x K and |S| x |S| Gram forms agree (Sylvester's determinant identity):
  // exercise both branches by transposing the aspect ratio.
  RngStream rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const MatrixXcd wide = random_complex(3, 6, rng);  // K < |S| branch
    const MatrixXcd tall = random_complex(6, 3, rng);  // K > |S| branch
    CHECK(capacity_columns(wide, 2.0) ==
          doctest::Approx(capacity_oracle(wide, 2.0)).epsilon(1e-10));
    CHECK(capacity_columns(tall, 2.0) ==
          doctest::Approx(capacity_oracle(tall, 2.0)).epsilon(1e-10));
  }
}

TEST_CASE("capacity on a triple matches the assembled-columns value") {
  RngStream rng(9);
  const ChannelTriple t = random_triple(3, 8, 4, rng);
  const ReflectionState r = ReflectionState::random_phases(4, rng);
  AntennaSet s;
  s.insert(1);
  s.insert(4);
  s.insert(6);
  const MatrixXcd cols = effective_channel(t, s, r);
  CHECK(capacity(t, s, r, 5.0) ==
        doctest::Approx(capacity_oracle(cols, 5.0)).epsilon(1e-10));
}

TEST_CASE("GramEvaluator: log-det matches capacity, gains match differences") {
  RngStream rng(11);
  const double snr = 3.0;
  const MatrixXcd cols = random_complex(4, 10, rng);
  AntennaSet s;
  s.insert(0);
  s.insert(3);
  s.insert(7);
  const GramEvaluator eval(cols, s, snr);

  // log_det equals the capacity of the selected columns.
  MatrixXcd sel(4, 3);
  sel.col(0) = cols.col(0);
  sel.col(1) = cols.col(3);
  sel.col(2) = cols.col(7);
  CHECK(eval.log_det_bits() ==
        doctest::Approx(capacity_oracle(sel, snr)).epsilon(1e-10));

  // phi_i = C(S u {i}) - C(S \ {i}) against direct determinant evaluation.
  for (int i = 0; i < 10; ++i) {
    AntennaSet with = s;
    AntennaSet without = s;
    if (s.contains(i)) {
      without.erase(i);
    } else {
      with.insert(i);
    }
    const auto subset_cap = [&](const AntennaSet& sub) {
      MatrixXcd m(4, sub.size());
      for (int j = 0; j < sub.size(); ++j) m.col(j) = cols.col(sub.indices[j]);
      return capacity_oracle(m, snr);
    };
    const double expect = subset_cap(with) - subset_cap(without);
    CHECK(eval.marginal_gain(i) == doctest::Approx(expect).epsilon(1e-9));
  }

  // full_gradient equals the per-index calls.
  const Eigen::VectorXd grad = eval.full_gradient();
  for (int i = 0; i < 10; ++i) {
    CHECK(grad(i) == doctest::Approx(eval.marginal_gain(i)).epsilon(1e-12));
  }
}

TEST_CASE("GramEvaluator: add/remove keep the cache consistent") {
  RngStream rng(13);
  const double snr = 2.0;
  const MatrixXcd cols = random_complex(3, 8, rng);
  GramEvaluator eval(cols, AntennaSet{}, snr);
  CHECK(eval.log_det_bits() == doctest::Approx(0.0).epsilon(1e-12));

  // Random walk of insertions/removals, checked against fresh evaluators.
  AntennaSet shadow;
  for (int step = 0; step < 60; ++step) {
    const int i = static_cast<int>(rng.next_below(8));
    if (shadow.contains(i)) {
      eval.remove(i);
      shadow.erase(i);
    } else {
      eval.add(i);
      shadow.insert(i);
    }
    const GramEvaluator fresh(cols, shadow, snr);
    CHECK(std::abs(eval.log_det_bits() - fresh.log_det_bits()) <= 1e-8);
    CHECK(eval.current_set() == shadow);
  }
}

TEST_CASE("submodularity and monotonicity of the capacity set function") {
  // Appendix-style property checks: for random A subset B and v outside B,
  // gain at A >= gain at B (diminishing returns) and capacity is monotone.
  RngStream rng(17);
  const double snr = 4.0;
  for (int instance = 0; instance < 20; ++instance) {
    const int l = 8;
    const MatrixXcd cols = random_complex(3, l, rng);
    const auto subset_cap = [&](const AntennaSet& sub) {
      MatrixXcd m(3, sub.size());
      for (int j = 0; j < sub.size(); ++j) m.col(j) = cols.col(sub.indices[j]);
      return capacity_columns(m, snr);
    };
    for (int check = 0; check < 10; ++check) {
      AntennaSet a, b;
      for (int i = 0; i < l; ++i) {
        const double u = rng.next_double();
        if (u < 0.3) {
          a.insert(i);
          b.insert(i);
        } else if (u < 0.6) {
          b.insert(i);
        }
      }
      int v = -1;
      for (int i = 0; i < l; ++i) {
        if (!b.contains(i)) v = i;
      }
      if (v < 0) continue;
      AntennaSet av = a, bv = b;
      av.insert(v);
      bv.insert(v);
      const double gain_a = subset_cap(av) - subset_cap(a);
      const double gain_b = subset_cap(bv) - subset_cap(b);
      CHECK(gain_a >= gain_b - 1e-9);   // submodularity
      CHECK(gain_b >= -1e-9);           // monotonicity
      CHECK(subset_cap(b) >= subset_cap(a) - 1e-9);  // A subset B
    }
  }
}
