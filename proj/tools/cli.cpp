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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rismimo/harness.hpp"

namespace {

using namespace rismimo;

struct GlobalOpts {
  std::uint64_t seed = 1;
  std::string out;
  std::string profile = "desk";
};

SystemConfig profile_config(const GlobalOpts& g) {
  SystemConfig cfg =
      g.profile == "paper" ? SystemConfig::paper_scale() : SystemConfig::desk();
  cfg.master_seed = g.seed;
  return cfg;
}

void emit(const GlobalOpts& g, const std::string& text) {
  std::cout << text;
  if (!g.out.empty()) {
    std::ofstream f(g.out);
    if (!f) throw ConfigError("cannot open output file " + g.out);
    f << text;
  }
}

std::string format_set(const AntennaSet& s) {
  std::ostringstream os;
  for (int i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s.indices[i];
  }
  return os.str();
}

std::string format_reflection(const ReflectionState& r) {
  std::ostringstream os;
  os.precision(12);
  for (int n = 0; n < r.beta.size(); ++n) {
    if (n) os << ',';
    os << std::arg(r.beta(n));
  }
  return os.str();
}

ChannelEnsemble obtain_ensemble(const GlobalOpts& g, const std::string& path,
                                int samples) {
  if (!path.empty()) return load_ensemble(path);
  return sample_ensemble(profile_config(g), samples, g.seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-assisted massive MIMO antenna selection and phase tuning"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Master random seed");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_option("--profile", g.profile, "System scale profile")
      ->check(CLI::IsMember({"desk", "paper"}));

  // gen-channels
  auto* gen = app.add_subcommand("gen-channels",
                                 "Sample a channel ensemble and save it");
  int gen_samples = 20;
  gen->add_option("--samples", gen_samples, "Ensemble size")
      ->check(CLI::PositiveNumber);

  // select
  auto* sel = app.add_subcommand("select",
                                 "Perfect-CSI antenna selection on one draw");
  std::string sel_method = "greedy";
  std::string sel_channels;
  sel->add_option("--method", sel_method, "Selection method")
      ->check(CLI::IsMember({"greedy", "exhaustive", "random"}));
  sel->add_option("--channels", sel_channels, "Ensemble file (first sample)");

  // beamform
  auto* bf = app.add_subcommand("beamform", "RIS phase tuning on a fixed set");
  std::string bf_regime = "perfect";
  std::string bf_channels;
  bf->add_option("--regime", bf_regime, "CSI regime")
      ->check(CLI::IsMember({"perfect", "stochastic"}));
  bf->add_option("--channels", bf_channels, "Ensemble file");

  // altopt
  auto* alt = app.add_subcommand("altopt", "Alternating joint optimization");
  std::string alt_regime = "perfect";
  std::string alt_channels;
  alt->add_option("--regime", alt_regime, "CSI regime")
      ->check(CLI::IsMember({"perfect", "stochastic"}));
  alt->add_option("--channels", alt_channels, "Ensemble file");

  // stochastic-select
  auto* ssel = app.add_subcommand("stochastic-select",
                                  "Sample-based antenna selection");
  std::string ssel_method = "spgm";
  std::string ssel_channels;
  ssel->add_option("--method", ssel_method, "Selection method")
      ->check(CLI::IsMember({"spgm", "cg", "simple-greedy"}));
  ssel->add_option("--channels", ssel_channels, "Ensemble file");

  // experiment / bench
  auto* exp = app.add_subcommand("experiment", "Run a sweep experiment");
  std::string exp_spec;
  exp->add_option("spec", exp_spec, "Experiment spec file")->required();
  auto* bench = app.add_subcommand("bench", "Run the timing battery");
  std::string bench_spec_path;
  bench->add_option("spec", bench_spec_path, "Bench spec file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      if (g.out.empty()) throw ConfigError("gen-channels requires --out");
      const SystemConfig cfg = profile_config(g);
      save_ensemble(sample_ensemble(cfg, gen_samples, g.seed), g.out);
      std::cout << "wrote " << g.out << " (" << gen_samples << " samples)\n";
      return 0;
    }

    const SystemConfig cfg = profile_config(g);
    const double snr = cfg.snr();

    if (sel->parsed()) {
      const ChannelEnsemble e = obtain_ensemble(g, sel_channels, 1);
      const ChannelTriple& t = e.samples.front();
      const ReflectionState r = ReflectionState::ones(
          static_cast<int>(t.bs_ris.rows()));
      AntennaSet s;
      if (sel_method == "greedy") {
        s = greedy_select(t, r, cfg.num_active, snr);
      } else if (sel_method == "exhaustive") {
        s = exhaustive_select(t, r, cfg.num_active, snr).first;
      } else {
        RngStream rng(derive_seed(g.seed, 0x5E1EC7ULL));
        s = random_select(static_cast<int>(t.direct.cols()), cfg.num_active,
                          rng);
      }
      std::ostringstream os;
      os.precision(12);
      os << "method\tset\tcapacity_bits\n"
         << sel_method << '\t' << format_set(s) << '\t'
         << capacity(t, s, r, snr) << '\n';
      emit(g, os.str());
      return 0;
    }

    if (bf->parsed()) {
      const ChannelEnsemble e = obtain_ensemble(g, bf_channels, 20);
      const ChannelTriple& t = e.samples.front();
      const int n = static_cast<int>(t.bs_ris.rows());
      const ReflectionState init = ReflectionState::ones(n);
      const AntennaSet s = greedy_select(t, init, cfg.num_active, snr);
      ReflectionState r;
      double value;
      if (bf_regime == "perfect") {
        r = bcd_beamform(t, s, init, snr);
        value = capacity(t, s, r, snr);
      } else {
        r = stochastic_bcd_beamform(e, s, init, snr);
        value = empirical_capacity(e, s, r, snr);
      }
      std::ostringstream os;
      os.precision(12);
      os << "regime\tset\tcapacity_bits\tphases\n"
         << bf_regime << '\t' << format_set(s) << '\t' << value << '\t'
         << format_reflection(r) << '\n';
      emit(g, os.str());
      return 0;
    }

    if (alt->parsed()) {
      AltOptOptions opt;
      opt.seed = g.seed;
      AltOptReport report;
      if (alt_regime == "perfect") {
        const ChannelEnsemble e = obtain_ensemble(g, alt_channels, 1);
        report = alternating_optimize_perfect(e.samples.front(), cfg, opt);
      } else {
        opt.selection_method = "spgm";
        const ChannelEnsemble e = obtain_ensemble(g, alt_channels, 20);
        report = alternating_optimize_stochastic(e, cfg, opt);
      }
      std::ostringstream os;
      os.precision(12);
      os << "round\tset\tcapacity_bits\tselect_seconds\tbeamform_seconds\n";
      for (const auto& round : report.rounds) {
        os << round.round << '\t' << format_set(round.set) << '\t'
           << round.capacity_bits << '\t' << round.select_seconds << '\t'
           << round.beamform_seconds << '\n';
      }
      os << "# converged = " << (report.converged ? "yes" : "no") << '\n';
      emit(g, os.str());
      return 0;
    }

    if (ssel->parsed()) {
      const ChannelEnsemble e = obtain_ensemble(g, ssel_channels, 20);
      const int n = static_cast<int>(e.samples.front().bs_ris.rows());
      const ReflectionState r = ReflectionState::ones(n);
      AntennaSet s;
      if (ssel_method == "simple-greedy") {
        s = simple_greedy_empirical(e, r, snr, cfg.num_active);
      } else {
        const ChannelSampler sampler = ChannelSampler::fixed(e);
        Eigen::VectorXd x;
        if (ssel_method == "spgm") {
          SpgmOptions opt;
          x = spgm(sampler, r, snr, cfg.num_active, opt,
                   derive_seed(g.seed, 0x5E2ULL));
        } else {
          ContinuousGreedyOptions opt;
          x = continuous_greedy(sampler, r, snr, cfg.num_active, opt,
                                derive_seed(g.seed, 0x5E3ULL));
        }
        RngStream rng(derive_seed(g.seed, 0x9127ULL));
        s = pipage_round(x, cfg.num_active, rng);
      }
      std::ostringstream os;
      os.precision(12);
      os << "method\tset\tempirical_capacity_bits\n"
         << ssel_method << '\t' << format_set(s) << '\t'
         << empirical_capacity(e, s, r, snr) << '\n';
      emit(g, os.str());
      return 0;
    }

    if (exp->parsed()) {
      if (g.out.empty()) throw ConfigError("experiment requires --out");
      ExperimentSpec spec = parse_experiment_spec(exp_spec);
      run_experiment(spec, g.out);
      std::cout << "wrote results under " << g.out << '\n';
      return 0;
    }

    if (bench->parsed()) {
      if (g.out.empty()) throw ConfigError("bench requires --out");
      const BenchSpec spec = parse_bench_spec(bench_spec_path);
      run_bench(spec, g.out);
      std::cout << "wrote bench.tsv under " << g.out << '\n';
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
