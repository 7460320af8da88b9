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

#include "rismimo/channel.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "rismimo/rng.hpp"

namespace rismimo {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(const void* data, std::size_t len,
                    std::uint64_t h = kFnvOffset) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= kFnvPrime;
  }
  return h;
}

enum LinkId : std::uint64_t { kDirect = 0, kBsRis = 1, kRisUser = 2 };

// One Rician link matrix: rows x cols, with per-row path loss amplitudes.
Eigen::MatrixXcd rician_link(int rows, int cols, double kappa,
                             const Eigen::VectorXd& row_amplitude,
                             double aoa, double aod, double spacing_phase,
                             RngStream& rng) {
  const double w_nlos = std::sqrt(1.0 / (kappa + 1.0));
  const double w_los = std::sqrt(kappa / (kappa + 1.0));
  const Eigen::VectorXcd ar = steering_vector(rows, aoa, spacing_phase);
  const Eigen::VectorXcd at = steering_vector(cols, aod, spacing_phase);
  Eigen::MatrixXcd h(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::complex<double> nlos = rng.next_cgaussian();
      const std::complex<double> los = ar(r) * std::conj(at(c));
      h(r, c) = row_amplitude(r) * (w_nlos * nlos + w_los * los);
    }
  }
  return h;
}

}  // namespace

double SystemConfig::snr() const {
  return std::pow(10.0, (tx_power_dbm - noise_power_dbm) / 10.0);
}

void SystemConfig::validate() const {
  if (num_antennas < 1) throw std::invalid_argument("config: L must be >= 1");
  if (num_users < 1) throw std::invalid_argument("config: K must be >= 1");
  if (num_ris_elements < 0)
    throw std::invalid_argument("config: N must be >= 0");
  if (num_active < 1 || num_active > num_antennas)
    throw std::invalid_argument("config: need 1 <= N_S <= L");
  if (kappa_bu < 0 || kappa_br < 0 || kappa_ru < 0)
    throw std::invalid_argument("config: Rician factors must be >= 0");
  if (alpha_bu <= 0 || alpha_br <= 0 || alpha_ru <= 0)
    throw std::invalid_argument("config: path loss exponents must be > 0");
  if (!(snr() > 0.0)) throw std::invalid_argument("config: snr must be > 0");
}

std::uint64_t SystemConfig::digest() const {
  std::ostringstream os;
  os.precision(17);
  os << num_antennas << '|' << num_users << '|' << num_ris_elements << '|'
     << num_active << '|' << tx_power_dbm << '|' << noise_power_dbm << '|'
     << bs_pos.transpose() << '|' << ris_pos.transpose() << '|'
     << user_region.lo.transpose() << '|' << user_region.hi.transpose() << '|'
     << alpha_bu << '|' << alpha_br << '|' << alpha_ru << '|' << kappa_bu
     << '|' << kappa_br << '|' << kappa_ru << '|' << ref_loss_db << '|'
     << ref_dist_m << '|' << spacing_phase << '|' << master_seed;
  const std::string s = os.str();
  return fnv1a(s.data(), s.size());
}

SystemConfig SystemConfig::desk() { return SystemConfig{}; }

SystemConfig SystemConfig::paper_scale() {
  SystemConfig cfg;
  cfg.num_antennas = 128;
  cfg.num_users = 8;
  cfg.num_ris_elements = 50;
  cfg.num_active = 10;
  return cfg;
}

double path_loss_linear(double d, double t0_db, double d0, double alpha) {
  if (!(d > 0.0)) throw std::domain_error("path_loss_linear: distance <= 0");
  const double power = std::pow(10.0, t0_db / 10.0) * std::pow(d / d0, -alpha);
  return std::sqrt(power);
}

Eigen::VectorXcd steering_vector(int n_elems, double angle,
                                 double spacing_phase) {
  if (n_elems < 1)
    throw std::invalid_argument("steering_vector: n_elems < 1");
  Eigen::VectorXcd a(n_elems);
  const double step = spacing_phase * std::sin(angle);
  for (int i = 0; i < n_elems; ++i) {
    a(i) = std::polar(1.0, step * static_cast<double>(i));
  }
  return a;
}

std::vector<Eigen::Vector3d> draw_user_positions(const SystemConfig& cfg,
                                                 std::uint64_t seed) {
  RngStream rng(derive_seed(seed, 0x75736572ULL));  // user-position substream
  std::vector<Eigen::Vector3d> users(cfg.num_users);
  for (auto& u : users) {
    for (int a = 0; a < 3; ++a) {
      const double lo = cfg.user_region.lo(a);
      const double hi = cfg.user_region.hi(a);
      u(a) = lo + (hi - lo) * rng.next_double();
    }
  }
  return users;
}

ChannelTriple sample_triple(const SystemConfig& cfg,
                            const std::vector<Eigen::Vector3d>& users,
                            std::uint64_t seed, std::uint64_t sample_index) {
  cfg.validate();
  if (static_cast<int>(users.size()) != cfg.num_users)
    throw std::invalid_argument("sample_triple: user count mismatch");
  const int l = cfg.num_antennas, k = cfg.num_users, n = cfg.num_ris_elements;

  Eigen::VectorXd bu_amp(k), ru_amp(std::max(k, 1));
  for (int i = 0; i < k; ++i) {
    bu_amp(i) = path_loss_linear((users[i] - cfg.bs_pos).norm(),
                                 cfg.ref_loss_db, cfg.ref_dist_m, cfg.alpha_bu);
    ru_amp(i) = path_loss_linear((users[i] - cfg.ris_pos).norm(),
                                 cfg.ref_loss_db, cfg.ref_dist_m, cfg.alpha_ru);
  }
  const double br_amp = path_loss_linear((cfg.ris_pos - cfg.bs_pos).norm(),
                                         cfg.ref_loss_db, cfg.ref_dist_m,
                                         cfg.alpha_br);

  ChannelTriple t;
  {
    RngStream rng(derive_seed(seed, sample_index, kDirect));
    t.direct = rician_link(k, l, cfg.kappa_bu, bu_amp, 0.0, 0.0,
                           cfg.spacing_phase, rng);
  }
  {
    RngStream rng(derive_seed(seed, sample_index, kBsRis));
    t.bs_ris = n > 0
                   ? rician_link(n, l, cfg.kappa_br,
                                 Eigen::VectorXd::Constant(n, br_amp),
                                 M_PI / 2.0, 0.0, cfg.spacing_phase, rng)
                   : Eigen::MatrixXcd(0, l);
  }
  {
    RngStream rng(derive_seed(seed, sample_index, kRisUser));
    t.ris_user = n > 0 ? rician_link(k, n, cfg.kappa_ru, ru_amp, 0.0,
                                     M_PI / 2.0, cfg.spacing_phase, rng)
                       : Eigen::MatrixXcd(k, 0);
  }
  return t;
}

ChannelEnsemble sample_ensemble(const SystemConfig& cfg, int s,
                                std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("sample_ensemble: s < 1");
  const auto users = draw_user_positions(cfg, seed);
  ChannelEnsemble e;
  e.seed = seed;
  e.config_digest = cfg.digest();
  e.samples.reserve(s);
  for (int i = 0; i < s; ++i) {
    e.samples.push_back(sample_triple(cfg, users, seed, i));
  }
  return e;
}

namespace {

void append_matrix(std::string& buf, const Eigen::MatrixXcd& m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      const double re = m(r, c).real();
      const double im = m(r, c).imag();
      buf.append(reinterpret_cast<const char*>(&re), sizeof(double));
      buf.append(reinterpret_cast<const char*>(&im), sizeof(double));
    }
  }
}

Eigen::MatrixXcd read_matrix(const std::string& buf, std::size_t& off,
                             int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double re, im;
      std::memcpy(&re, buf.data() + off, sizeof(double));
      std::memcpy(&im, buf.data() + off + sizeof(double), sizeof(double));
      off += 2 * sizeof(double);
      m(r, c) = {re, im};
    }
  }
  return m;
}

}  // namespace

void save_ensemble(const ChannelEnsemble& e,
                   const std::filesystem::path& path) {
  if (e.samples.empty())
    throw std::invalid_argument("save_ensemble: empty ensemble");
  const auto& first = e.samples.front();
  const int k = static_cast<int>(first.direct.rows());
  const int l = static_cast<int>(first.direct.cols());
  const int n = static_cast<int>(first.bs_ris.rows());

  std::string payload;
  payload.reserve(e.samples.size() * 2 * sizeof(double) *
                  (static_cast<std::size_t>(k) * l + n * l + k * n));
  for (const auto& t : e.samples) {
    append_matrix(payload, t.direct);
    append_matrix(payload, t.bs_ris);
    append_matrix(payload, t.ris_user);
  }
  const std::uint64_t checksum = fnv1a(payload.data(), payload.size());

  std::ofstream manifest(path);
  if (!manifest) throw std::runtime_error("save_ensemble: cannot open " +
                                          path.string());
  manifest << "format_version = 1\n"
           << "s = " << e.samples.size() << "\n"
           << "K = " << k << "\n"
           << "L = " << l << "\n"
           << "N = " << n << "\n"
           << "seed = " << e.seed << "\n"
           << "config_digest = " << e.config_digest << "\n"
           << "payload_checksum = " << checksum << "\n";

  std::ofstream bin(path.string() + ".bin", std::ios::binary);
  if (!bin) throw std::runtime_error("save_ensemble: cannot open payload");
  bin.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

ChannelEnsemble load_ensemble(const std::filesystem::path& path) {
  std::ifstream manifest(path);
  if (!manifest) throw ManifestError("load_ensemble: cannot open manifest");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ManifestError("load_ensemble: malformed manifest line: " + line);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  const auto need = [&](const std::string& key) -> std::uint64_t {
    const auto it = kv.find(key);
    if (it == kv.end())
      throw ManifestError("load_ensemble: missing manifest key " + key);
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw ManifestError("load_ensemble: bad value for key " + key);
    }
  };
  if (need("format_version") != 1)
    throw ManifestError("load_ensemble: unsupported format version");
  const auto s = static_cast<std::size_t>(need("s"));
  const int k = static_cast<int>(need("K"));
  const int l = static_cast<int>(need("L"));
  const int n = static_cast<int>(need("N"));
  const std::uint64_t checksum = need("payload_checksum");

  std::ifstream bin(path.string() + ".bin", std::ios::binary);
  if (!bin) throw ManifestError("load_ensemble: cannot open payload");
  std::string payload((std::istreambuf_iterator<char>(bin)),
                      std::istreambuf_iterator<char>());

  const std::size_t per_sample =
      2 * sizeof(double) *
      (static_cast<std::size_t>(k) * l + static_cast<std::size_t>(n) * l +
       static_cast<std::size_t>(k) * n);
  if (fnv1a(payload.data(), payload.size()) != checksum)
    throw ChecksumError("load_ensemble: payload checksum mismatch");
  if (payload.size() != s * per_sample)
    throw DimensionError("load_ensemble: payload size does not match dims");

  ChannelEnsemble e;
  e.seed = need("seed");
  e.config_digest = need("config_digest");
  e.samples.reserve(s);
  std::size_t off = 0;
  for (std::size_t i = 0; i < s; ++i) {
    ChannelTriple t;
    t.direct = read_matrix(payload, off, k, l);
    t.bs_ris = read_matrix(payload, off, n, l);
    t.ris_user = read_matrix(payload, off, k, n);
    e.samples.push_back(std::move(t));
  }
  return e;
}

}  // namespace rismimo
