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

#ifndef RISMIMO_CHANNEL_HPP
#define RISMIMO_CHANNEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace rismimo {

struct Box {
  Eigen::Vector3d lo;
  Eigen::Vector3d hi;
};

// Full experiment description: dimensions, geometry, fading, power, seeds.
struct SystemConfig {
  int num_antennas = 16;      // L
  int num_users = 4;          // K
  int num_ris_elements = 8;   // N
  int num_active = 4;         // N_S

  double tx_power_dbm = 20.0;
  double noise_power_dbm = -90.0;

  Eigen::Vector3d bs_pos{0.0, 0.0, 10.0};
  Eigen::Vector3d ris_pos{50.0, 50.0, 15.0};
  Box user_region{{200.0, -50.0, 0.0}, {300.0, 50.0, 0.0}};

  // (BS-user, BS-RIS, RIS-user)
  double alpha_bu = 3.5, alpha_br = 2.2, alpha_ru = 2.8;
  double kappa_bu = 20.0, kappa_br = 10.0, kappa_ru = 10.0;

  double ref_loss_db = -30.0;  // T0
  double ref_dist_m = 1.0;     // d0
  double spacing_phase = M_PI; // 2*pi*d_A/lambda for half-wavelength spacing

  std::uint64_t master_seed = 1;

  double snr() const;
  void validate() const;  // throws std::invalid_argument on violations
  std::uint64_t digest() const;

  static SystemConfig desk();         // CI-scale defaults
  static SystemConfig paper_scale();  // L=128, K=8, N=50
};

// One realization of the three links, path loss included, full antenna set.
struct ChannelTriple {
  Eigen::MatrixXcd direct;    // K x L
  Eigen::MatrixXcd bs_ris;    // N x L
  Eigen::MatrixXcd ris_user;  // K x N
};

struct ChannelEnsemble {
  std::vector<ChannelTriple> samples;
  std::uint64_t seed = 0;
  std::uint64_t config_digest = 0;
};

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class ChecksumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Amplitude scaling sqrt(T0 * (d/d0)^-alpha); the power model is applied
// entrywise to both LoS and NLoS parts. Throws std::domain_error for d <= 0.
double path_loss_linear(double d, double t0_db, double d0, double alpha);

// [1, e^{j*phi*sin(angle)}, ..., e^{j*phi*(n-1)*sin(angle)}]
Eigen::VectorXcd steering_vector(int n_elems, double angle,
                                 double spacing_phase);

// Uniform user placement inside the region box, one position per user.
std::vector<Eigen::Vector3d> draw_user_positions(const SystemConfig& cfg,
                                                 std::uint64_t seed);

// One Rician fading realization for fixed user positions. sample_index
// selects the per-link substreams so draws are order-independent.
ChannelTriple sample_triple(const SystemConfig& cfg,
                            const std::vector<Eigen::Vector3d>& users,
                            std::uint64_t seed, std::uint64_t sample_index);

// Positions drawn once from seed, then s i.i.d. fading realizations.
ChannelEnsemble sample_ensemble(const SystemConfig& cfg, int s,
                                std::uint64_t seed);

// Manifest (path) + binary payload (path + ".bin"); round trip is bit-exact.
void save_ensemble(const ChannelEnsemble& e, const std::filesystem::path& path);
ChannelEnsemble load_ensemble(const std::filesystem::path& path);

}  // namespace rismimo

#endif  // RISMIMO_CHANNEL_HPP
