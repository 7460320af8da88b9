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

#include "rismimo/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace rismimo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

struct MethodSpec {
  std::string selection;  // greedy | exhaustive | random | spgm | cg | simple-greedy
  std::string phase;      // bcd | random | nors
  std::string name;       // original string
};

MethodSpec parse_method(const std::string& raw, const std::string& regime) {
  const auto plus = raw.find('+');
  if (plus == std::string::npos) {
    throw ConfigError("method '" + raw +
                      "' must have the form <selection>+<phase>");
  }
  MethodSpec m;
  m.name = raw;
  m.selection = trim(raw.substr(0, plus));
  m.phase = trim(raw.substr(plus + 1));
  static const std::set<std::string> kPerfect = {"greedy", "exhaustive",
                                                "random"};
  static const std::set<std::string> kStochastic = {"spgm", "cg",
                                                    "simple-greedy", "random"};
  const auto& allowed = regime == "perfect" ? kPerfect : kStochastic;
  if (!allowed.count(m.selection)) {
    throw ConfigError("unknown selection method '" + m.selection +
                      "' for regime " + regime);
  }
  if (m.phase != "bcd" && m.phase != "random" && m.phase != "nors") {
    throw ConfigError("unknown phase method '" + m.phase + "'");
  }
  return m;
}

AntennaSet perfect_select(const std::string& method, const ChannelTriple& t,
                          const ReflectionState& r, const SystemConfig& cfg,
                          std::uint64_t seed, std::uint64_t budget) {
  if (method == "greedy") {
    return greedy_select(t, r, cfg.num_active, cfg.snr());
  }
  if (method == "exhaustive") {
    return exhaustive_select(t, r, cfg.num_active, cfg.snr(), budget).first;
  }
  if (method == "random") {
    RngStream rng(derive_seed(seed, 0x5E1EC7ULL));
    return random_select(cfg.num_antennas, cfg.num_active, rng);
  }
  throw ConfigError("unknown perfect-CSI selection method '" + method + "'");
}

AntennaSet stochastic_select(const std::string& method,
                             const ChannelEnsemble& e,
                             const ReflectionState& r, const SystemConfig& cfg,
                             const AltOptOptions& opt, std::uint64_t seed) {
  if (method == "random") {
    RngStream rng(derive_seed(seed, 0x5E1EC7ULL));
    return random_select(cfg.num_antennas, cfg.num_active, rng);
  }
  if (method == "simple-greedy") {
    return simple_greedy_empirical(e, r, cfg.snr(), cfg.num_active);
  }
  const ChannelSampler sampler = ChannelSampler::fixed(e);
  Eigen::VectorXd x;
  if (method == "spgm") {
    SpgmOptions sopt;
    sopt.iterations = opt.spgm_iterations;
    sopt.batch = opt.batch;
    x = spgm(sampler, r, cfg.snr(), cfg.num_active, sopt,
             derive_seed(seed, 0x5E2ULL));
  } else if (method == "cg") {
    ContinuousGreedyOptions copt;
    copt.batch = opt.batch;
    x = continuous_greedy(sampler, r, cfg.snr(), cfg.num_active, copt,
                          derive_seed(seed, 0x5E3ULL));
  } else {
    throw ConfigError("unknown stochastic selection method '" + method + "'");
  }
  RngStream round_rng(derive_seed(seed, 0x9127ULL));
  return pipage_round(x, cfg.num_active, round_rng);
}

}  // namespace

AltOptReport alternating_optimize_perfect(const ChannelTriple& t,
                                          const SystemConfig& cfg,
                                          const AltOptOptions& opt) {
  cfg.validate();
  const double snr = cfg.snr();
  const int n = static_cast<int>(t.bs_ris.rows());

  AltOptReport report;
  report.seed = opt.seed;

  RngStream beta_rng(derive_seed(opt.seed, 0xBE7AULL));
  ReflectionState r = n > 0 ? ReflectionState::random_phases(n, beta_rng)
                            : ReflectionState::disabled(0);

  if (n == 0) {
    const auto start = Clock::now();
    const AntennaSet s = perfect_select(opt.selection_method, t, r, cfg,
                                        opt.seed, opt.exhaustive_budget);
    AltOptRound round;
    round.round = 0;
    round.set = s;
    round.reflection = r;
    round.capacity_bits = capacity(t, s, r, snr);
    round.select_seconds = seconds_since(start);
    report.rounds.push_back(std::move(round));
    report.converged = true;
    return report;
  }

  AntennaSet s;
  double incumbent = -1.0;
  for (int round_idx = 0; round_idx < opt.max_rounds; ++round_idx) {
    AltOptRound round;
    round.round = round_idx;
    const double round_start_value = incumbent;

    {
      const auto start = Clock::now();
      const AntennaSet cand =
          perfect_select(opt.selection_method, t, r, cfg,
                         derive_seed(opt.seed, round_idx), opt.exhaustive_budget);
      const double value = capacity(t, cand, r, snr);
      if (value >= incumbent) {
        s = cand;
        incumbent = value;
      }
      round.select_seconds = seconds_since(start);
    }
    {
      const auto start = Clock::now();
      const ReflectionState cand = bcd_beamform(t, s, r, snr);
      const double value = capacity(t, s, cand, snr);
      if (value >= incumbent) {
        r = cand;
        incumbent = value;
      }
      round.beamform_seconds = seconds_since(start);
    }

    round.set = s;
    round.reflection = r;
    round.capacity_bits = incumbent;
    report.rounds.push_back(round);

    if (round_idx > 0 && incumbent - round_start_value < opt.tol) {
      report.converged = true;
      break;
    }
  }
  return report;
}

AltOptReport alternating_optimize_stochastic(const ChannelEnsemble& e,
                                             const SystemConfig& cfg,
                                             const AltOptOptions& opt) {
  cfg.validate();
  if (e.samples.empty())
    throw std::invalid_argument("alternating_optimize_stochastic: empty ensemble");
  const double snr = cfg.snr();
  const int n = static_cast<int>(e.samples.front().bs_ris.rows());

  AltOptReport report;
  report.seed = opt.seed;

  RngStream beta_rng(derive_seed(opt.seed, 0xBE7AULL));
  ReflectionState r = n > 0 ? ReflectionState::random_phases(n, beta_rng)
                            : ReflectionState::disabled(0);

  AntennaSet s;
  double incumbent = -1.0;
  for (int round_idx = 0; round_idx < opt.max_rounds; ++round_idx) {
    AltOptRound round;
    round.round = round_idx;
    const double round_start_value = incumbent;

    {
      const auto start = Clock::now();
      const AntennaSet cand =
          stochastic_select(opt.selection_method, e, r, cfg, opt,
                            derive_seed(opt.seed, round_idx));
      const double value = empirical_capacity(e, cand, r, snr);
      if (value >= incumbent) {
        s = cand;
        incumbent = value;
      }
      round.select_seconds = seconds_since(start);
    }
    if (n > 0) {
      const auto start = Clock::now();
      const ReflectionState cand = stochastic_bcd_beamform(e, s, r, snr);
      const double value = empirical_capacity(e, s, cand, snr);
      if (value >= incumbent) {
        r = cand;
        incumbent = value;
      }
      round.beamform_seconds = seconds_since(start);
    }

    round.set = s;
    round.reflection = r;
    round.capacity_bits = incumbent;
    report.rounds.push_back(round);

    if ((round_idx > 0 && incumbent - round_start_value < opt.tol) || n == 0) {
      report.converged = true;
      break;
    }
  }
  return report;
}

std::map<std::string, std::string> read_kv_document(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open spec file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("spec line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key))
      throw ConfigError("spec: duplicate key '" + key + "'");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

namespace {

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing chars");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("spec: bad numeric value for '" + key + "': " + value);
  }
}

void apply_config_field(SystemConfig& cfg, const std::string& field,
                        double value) {
  if (field == "antennas") cfg.num_antennas = static_cast<int>(value);
  else if (field == "users") cfg.num_users = static_cast<int>(value);
  else if (field == "ris_elements") cfg.num_ris_elements = static_cast<int>(value);
  else if (field == "active") cfg.num_active = static_cast<int>(value);
  else if (field == "tx_power_dbm") cfg.tx_power_dbm = value;
  else if (field == "noise_power_dbm") cfg.noise_power_dbm = value;
  else if (field == "kappa_bu") cfg.kappa_bu = value;
  else if (field == "kappa_br") cfg.kappa_br = value;
  else if (field == "kappa_ru") cfg.kappa_ru = value;
  else if (field == "alpha_bu") cfg.alpha_bu = value;
  else if (field == "alpha_br") cfg.alpha_br = value;
  else if (field == "alpha_ru") cfg.alpha_ru = value;
  else throw ConfigError("spec: unknown config field '" + field + "'");
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::filesystem::path& path) {
  const auto kv = read_kv_document(path);
  ExperimentSpec spec;
  bool have_methods = false;
  for (const auto& [key, value] : kv) {
    if (key == "regime") {
      if (value != "perfect" && value != "stochastic")
        throw ConfigError("spec: regime must be perfect or stochastic");
      spec.regime = value;
    } else if (key == "methods") {
      spec.methods = split(value, ',');
      have_methods = true;
    } else if (key == "realizations") {
      spec.realizations = static_cast<int>(parse_number(key, value));
    } else if (key == "ensemble_samples") {
      spec.ensemble_samples = static_cast<int>(parse_number(key, value));
    } else if (key == "seed") {
      spec.base.master_seed = static_cast<std::uint64_t>(
          parse_number(key, value));
      spec.altopt.seed = spec.base.master_seed;
    } else if (key.rfind("system.", 0) == 0) {
      apply_config_field(spec.base, key.substr(7), parse_number(key, value));
    } else if (key.rfind("sweep.", 0) == 0) {
      std::vector<double> values;
      for (const auto& v : split(value, ',')) {
        values.push_back(parse_number(key, v));
      }
      if (values.empty())
        throw ConfigError("spec: empty sweep for '" + key + "'");
      // Validate the field name by probing a scratch config.
      SystemConfig scratch = spec.base;
      apply_config_field(scratch, key.substr(6), values.front());
      spec.sweeps.emplace_back(key.substr(6), values);
    } else if (key == "altopt.tol") {
      spec.altopt.tol = parse_number(key, value);
    } else if (key == "altopt.max_rounds") {
      spec.altopt.max_rounds = static_cast<int>(parse_number(key, value));
    } else if (key == "altopt.spgm_iterations") {
      spec.altopt.spgm_iterations = static_cast<int>(parse_number(key, value));
    } else if (key == "altopt.batch") {
      spec.altopt.batch = static_cast<int>(parse_number(key, value));
    } else {
      throw ConfigError("spec: unknown key '" + key + "'");
    }
  }
  if (!have_methods || spec.methods.empty())
    throw ConfigError("spec: methods list is empty");
  if (spec.realizations < 1)
    throw ConfigError("spec: realizations must be >= 1");
  for (const auto& m : spec.methods) parse_method(m, spec.regime);
  return spec;
}

BenchSpec parse_bench_spec(const std::filesystem::path& path) {
  const auto kv = read_kv_document(path);
  BenchSpec spec;
  for (const auto& [key, value] : kv) {
    if (key == "repetitions") spec.repetitions = static_cast<int>(parse_number(key, value));
    else if (key == "exhaustive.antennas") spec.exhaustive_antennas = static_cast<int>(parse_number(key, value));
    else if (key == "exhaustive.active") spec.exhaustive_active = static_cast<int>(parse_number(key, value));
    else if (key == "exhaustive.budget") spec.exhaustive_budget = static_cast<std::uint64_t>(parse_number(key, value));
    else if (key == "guard.antennas") spec.guard_antennas = static_cast<int>(parse_number(key, value));
    else if (key == "guard.active") spec.guard_active = static_cast<int>(parse_number(key, value));
    else if (key == "guard.budget") spec.guard_budget = static_cast<std::uint64_t>(parse_number(key, value));
    else if (key == "gradient.antennas") spec.gradient_antennas = static_cast<int>(parse_number(key, value));
    else if (key == "gradient.users") spec.gradient_users = static_cast<int>(parse_number(key, value));
    else if (key == "gradient.set_size") spec.gradient_set_size = static_cast<int>(parse_number(key, value));
    else if (key == "stochastic.samples") spec.stochastic_samples = static_cast<int>(parse_number(key, value));
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_number(key, value));
    else if (key.rfind("system.", 0) == 0) apply_config_field(spec.stochastic_cfg, key.substr(7), parse_number(key, value));
    else throw ConfigError("bench spec: unknown key '" + key + "'");
  }
  if (spec.repetitions < 1)
    throw ConfigError("bench spec: repetitions must be >= 1");
  return spec;
}

namespace {

struct ResultRow {
  std::uint64_t seed = 0;
  std::string method;
  std::string grid_key;
  std::string grid_value;
  double capacity_bits = 0.0;
  double wall_seconds = 0.0;
};

struct GridPoint {
  SystemConfig cfg;
  std::string key;
  std::string value;
};

std::vector<GridPoint> expand_grid(const ExperimentSpec& spec) {
  std::vector<GridPoint> grid;
  GridPoint base{spec.base, "", ""};
  grid.push_back(base);
  for (const auto& [field, values] : spec.sweeps) {
    std::vector<GridPoint> next;
    for (const auto& g : grid) {
      for (double v : values) {
        GridPoint p = g;
        apply_config_field(p.cfg, field, v);
        p.key = g.key.empty() ? field : g.key + ";" + field;
        p.value = g.value.empty() ? format_double(v)
                                  : g.value + ";" + format_double(v);
        next.push_back(std::move(p));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

// One (config, realization, method) run; returns the achieved capacity.
double run_method_perfect(const MethodSpec& method, const SystemConfig& cfg,
                          const AltOptOptions& base_opt,
                          std::uint64_t run_seed) {
  const auto users = draw_user_positions(cfg, run_seed);
  const ChannelTriple t = sample_triple(cfg, users, run_seed, 0);
  const double snr = cfg.snr();
  const int n = cfg.num_ris_elements;

  if (method.phase == "bcd") {
    AltOptOptions opt = base_opt;
    opt.selection_method = method.selection;
    opt.seed = run_seed;
    return alternating_optimize_perfect(t, cfg, opt).final_capacity();
  }
  ReflectionState r = ReflectionState::disabled(n);
  if (method.phase == "random" && n > 0) {
    RngStream rng(derive_seed(run_seed, 0xBE7AULL));
    r = ReflectionState::random_phases(n, rng);
  }
  const AntennaSet s = perfect_select(method.selection, t, r, cfg, run_seed,
                                      base_opt.exhaustive_budget);
  return capacity(t, s, r, snr);
}

double run_method_stochastic(const MethodSpec& method, const SystemConfig& cfg,
                             const AltOptOptions& base_opt, int samples,
                             std::uint64_t run_seed) {
  const ChannelEnsemble e = sample_ensemble(cfg, samples, run_seed);
  const double snr = cfg.snr();
  const int n = cfg.num_ris_elements;

  if (method.phase == "bcd") {
    AltOptOptions opt = base_opt;
    opt.selection_method = method.selection;
    opt.seed = run_seed;
    return alternating_optimize_stochastic(e, cfg, opt).final_capacity();
  }
  ReflectionState r = ReflectionState::disabled(n);
  if (method.phase == "random" && n > 0) {
    RngStream rng(derive_seed(run_seed, 0xBE7AULL));
    r = ReflectionState::random_phases(n, rng);
  }
  AltOptOptions opt = base_opt;
  opt.selection_method = method.selection;
  const AntennaSet s =
      stochastic_select(method.selection, e, r, cfg, opt, run_seed);
  return empirical_capacity(e, s, r, snr);
}

}  // namespace

void run_experiment(const ExperimentSpec& spec,
                    const std::filesystem::path& out_dir) {
  std::vector<MethodSpec> methods;
  for (const auto& m : spec.methods) {
    methods.push_back(parse_method(m, spec.regime));
  }
  const std::vector<GridPoint> grid = expand_grid(spec);
  for (const auto& g : grid) g.cfg.validate();

  std::filesystem::create_directories(out_dir);

  const int num_runs =
      static_cast<int>(grid.size()) * spec.realizations *
      static_cast<int>(methods.size());
  std::vector<ResultRow> rows(num_runs);

#pragma omp parallel for schedule(dynamic)
  for (int flat = 0; flat < num_runs; ++flat) {
    const int per_grid = spec.realizations * static_cast<int>(methods.size());
    const int gi = flat / per_grid;
    const int rest = flat % per_grid;
    const int ri = rest / static_cast<int>(methods.size());
    const int mi = rest % static_cast<int>(methods.size());

    const GridPoint& g = grid[gi];
    const MethodSpec& m = methods[mi];
    const std::uint64_t run_seed =
        derive_seed(spec.base.master_seed, gi, ri);

    const auto start = Clock::now();
    double value;
    if (spec.regime == "perfect") {
      value = run_method_perfect(m, g.cfg, spec.altopt, run_seed);
    } else {
      value = run_method_stochastic(m, g.cfg, spec.altopt,
                                    spec.ensemble_samples, run_seed);
    }
    ResultRow& row = rows[flat];
    row.seed = run_seed;
    row.method = m.name;
    row.grid_key = g.key.empty() ? "-" : g.key;
    row.grid_value = g.value.empty() ? "-" : g.value;
    row.capacity_bits = value;
    row.wall_seconds = seconds_since(start);
  }

  {
    std::ofstream out(out_dir / "results.tsv");
    out << "seed\tmethod\tgrid_key\tgrid_value\tcapacity_bits\twall_seconds\n";
    for (const auto& row : rows) {
      out << row.seed << '\t' << row.method << '\t' << row.grid_key << '\t'
          << row.grid_value << '\t' << format_double(row.capacity_bits)
          << '\t' << format_double(row.wall_seconds) << '\n';
    }
  }
  {
    std::ofstream out(out_dir / "aggregate.tsv");
    out << "method\tgrid_key\tgrid_value\tmean_capacity\tstderr_capacity\tn\n";
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        double sum = 0.0, sq = 0.0;
        int n = 0;
        for (int ri = 0; ri < spec.realizations; ++ri) {
          const int flat = static_cast<int>(
              gi * spec.realizations * methods.size() + ri * methods.size() +
              mi);
          sum += rows[flat].capacity_bits;
          ++n;
        }
        const double mean = sum / n;
        for (int ri = 0; ri < spec.realizations; ++ri) {
          const int flat = static_cast<int>(
              gi * spec.realizations * methods.size() + ri * methods.size() +
              mi);
          sq += (rows[flat].capacity_bits - mean) *
                (rows[flat].capacity_bits - mean);
        }
        const double stderr_cap =
            n > 1 ? std::sqrt(sq / (n - 1) / n) : 0.0;
        out << methods[mi].name << '\t'
            << (grid[gi].key.empty() ? "-" : grid[gi].key) << '\t'
            << (grid[gi].value.empty() ? "-" : grid[gi].value) << '\t'
            << format_double(mean) << '\t' << format_double(stderr_cap)
            << '\t' << n << '\n';
      }
    }
  }
  {
    std::ofstream out(out_dir / "manifest.txt");
    out << "tool_version = " << kToolVersion << "\n"
        << "config_digest = " << spec.base.digest() << "\n"
        << "regime = " << spec.regime << "\n"
        << "realizations = " << spec.realizations << "\n"
        << "seed = " << spec.base.master_seed << "\n";
    out << "methods =";
    for (const auto& m : spec.methods) out << ' ' << m;
    out << "\n";
    for (const auto& [field, values] : spec.sweeps) {
      out << "sweep." << field << " =";
      for (double v : values) out << ' ' << format_double(v);
      out << "\n";
    }
  }
}

namespace {

struct BenchRow {
  std::string name;
  std::string params;
  double median_seconds = 0.0;
  double min_seconds = 0.0;
  double max_seconds = 0.0;
  std::string note;
};

template <typename F>
BenchRow time_task(const std::string& name, const std::string& params,
                   int repetitions, F&& task) {
  std::vector<double> times(repetitions);
  for (int i = 0; i < repetitions; ++i) {
    const auto start = Clock::now();
    task();
    times[i] = seconds_since(start);
  }
  std::sort(times.begin(), times.end());
  BenchRow row;
  row.name = name;
  row.params = params;
  row.median_seconds = times[times.size() / 2];
  row.min_seconds = times.front();
  row.max_seconds = times.back();
  return row;
}

Eigen::MatrixXcd random_columns(int k, int l, std::uint64_t seed) {
  RngStream rng(seed);
  Eigen::MatrixXcd m(k, l);
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < l; ++c) m(r, c) = rng.next_cgaussian();
  }
  return m;
}

}  // namespace

void run_bench(const BenchSpec& spec, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<BenchRow> rows;
  const int reps = spec.repetitions;
  const double snr = 10.0;

  // Greedy vs exhaustive (small L), exhaustive also serial vs parallel.
  {
    const Eigen::MatrixXcd cols =
        random_columns(4, spec.exhaustive_antennas, derive_seed(spec.seed, 1));
    const std::string params = "L=" + std::to_string(spec.exhaustive_antennas) +
                               ",N_S=" + std::to_string(spec.exhaustive_active);
    rows.push_back(time_task("greedy_select", params, reps, [&] {
      greedy_select_columns(cols, spec.exhaustive_active, snr);
    }));
    rows.push_back(time_task("exhaustive_select_serial", params, reps, [&] {
      exhaustive_select(cols, spec.exhaustive_active, snr,
                        spec.exhaustive_budget, false);
    }));
    rows.push_back(time_task("exhaustive_select_parallel", params, reps, [&] {
      exhaustive_select(cols, spec.exhaustive_active, snr,
                        spec.exhaustive_budget, true);
    }));
  }

  // Budget guard path.
  {
    const Eigen::MatrixXcd cols =
        random_columns(4, spec.guard_antennas, derive_seed(spec.seed, 2));
    BenchRow row;
    row.name = "exhaustive_select_guard";
    row.params = "L=" + std::to_string(spec.guard_antennas) +
                 ",N_S=" + std::to_string(spec.guard_active);
    try {
      exhaustive_select(cols, spec.guard_active, snr, spec.guard_budget,
                        true);
      row.note = "unexpectedly-completed";
    } catch (const std::runtime_error&) {
      row.note = "budget-exceeded";
    }
    rows.push_back(row);
  }

  // Naive vs fast gradient at a fixed random set.
  {
    const Eigen::MatrixXcd cols = random_columns(
        spec.gradient_users, spec.gradient_antennas, derive_seed(spec.seed, 3));
    RngStream rng(derive_seed(spec.seed, 4));
    const AntennaSet s =
        random_select(spec.gradient_antennas, spec.gradient_set_size, rng);
    const std::string params =
        "L=" + std::to_string(spec.gradient_antennas) +
        ",K=" + std::to_string(spec.gradient_users) +
        ",|S|=" + std::to_string(spec.gradient_set_size);
    const BenchRow naive = time_task("gradient_naive", params, reps, [&] {
      naive_gradient_reference(cols, s, snr);
    });
    const BenchRow fast = time_task("gradient_fast", params, reps, [&] {
      GramEvaluator eval(cols, s, snr);
      eval.full_gradient();
    });
    rows.push_back(naive);
    BenchRow fast_row = fast;
    fast_row.note = "speedup=" + format_double(naive.median_seconds /
                                               fast.median_seconds);
    rows.push_back(fast_row);
  }

  // Stochastic selection methods on a shared ensemble.
  {
    SystemConfig cfg = spec.stochastic_cfg;
    cfg.validate();
    const ChannelEnsemble e =
        sample_ensemble(cfg, spec.stochastic_samples, spec.seed);
    const ChannelSampler sampler = ChannelSampler::fixed(e);
    RngStream beta_rng(derive_seed(spec.seed, 5));
    const ReflectionState r =
        cfg.num_ris_elements > 0
            ? ReflectionState::random_phases(cfg.num_ris_elements, beta_rng)
            : ReflectionState::disabled(0);
    const std::string params = "L=" + std::to_string(cfg.num_antennas) +
                               ",N_S=" + std::to_string(cfg.num_active) +
                               ",s=" + std::to_string(spec.stochastic_samples);
    rows.push_back(time_task("spgm", params, reps, [&] {
      SpgmOptions opt;
      opt.iterations = 100;
      opt.batch = 16;
      spgm(sampler, r, cfg.snr(), cfg.num_active, opt, spec.seed);
    }));
    rows.push_back(time_task("simple_greedy", params, reps, [&] {
      simple_greedy_empirical(e, r, cfg.snr(), cfg.num_active);
    }));
    rows.push_back(time_task("continuous_greedy", params, reps, [&] {
      ContinuousGreedyOptions opt;
      opt.batch = 16;
      continuous_greedy(sampler, r, cfg.snr(), cfg.num_active, opt,
                        spec.seed);
    }));
  }

  std::ofstream out(out_dir / "bench.tsv");
  out << "name\tparams\tmedian_seconds\tmin_seconds\tmax_seconds\tnote\n";
  for (const auto& row : rows) {
    out << row.name << '\t' << row.params << '\t'
        << format_double(row.median_seconds) << '\t';
    if (reps > 1) {
      out << format_double(row.min_seconds) << '\t'
          << format_double(row.max_seconds);
    } else {
      out << '\t';
    }
    out << '\t' << row.note << '\n';
  }
}

}  // namespace rismimo
