// Copyright 2026 The EdgeSpec Authors.
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

#include "edgespec/cli/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "edgespec/cli/config.hpp"
#include "edgespec/errors.hpp"
#include "edgespec/io.hpp"
#include "edgespec/latency.hpp"
#include "edgespec/models/checkpoint.hpp"
#include "edgespec/models/corpus.hpp"
#include "edgespec/sim/report.hpp"
#include "edgespec/sim/shift.hpp"
#include "edgespec/sim/simulate.hpp"

namespace edgespec::cli {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const Config& cfg) {
  if (flag) return *flag;
  if (cfg.seed_from_file) return cfg.seed;
  if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
    const std::string_view s(env);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError(std::string(kSeedEnv) + ": expected a non-negative integer, got '" + env + "'");
    }
    return v;
  }
  return cfg.seed;
}

Config load_with_seed(const std::string& path, const std::optional<std::uint64_t>& seed_flag, std::ostream& err) {
  Config cfg = load_config(path);
  for (const std::string& w : cfg.warnings) err << "warning: " << w << "\n";
  cfg.seed = resolve_seed(seed_flag, cfg);
  cfg.seed_from_file = true;
  return cfg;
}

std::string human_duration(double seconds) {
  if (seconds >= 3600.0) return fmt("%.2f h", seconds / 3600.0);
  if (seconds >= 60.0) return fmt("%.1f min", seconds / 60.0);
  return fmt("%.1f s", seconds);
}

void print_metrics(std::ostream& out, const sim::Metrics& m) {
  out << "rounds=" << m.rounds << "\n"
      << "emitted_tokens=" << m.emitted_tokens << "\n"
      << "etgr_emitted=" << fmt("%.6g", m.etgr_emitted) << " tok/s\n"
      << "etgr_accepted=" << fmt("%.6g", m.etgr_accepted) << " tok/s\n"
      << "mean_acceptance=" << fmt("%.4f", m.mean_acceptance) << "\n"
      << "p95_token_latency_s=" << fmt("%.6g", m.p95_token_latency_s) << "\n"
      << "total_energy_j=" << fmt("%.6g", m.total_energy_j) << "\n";
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Channel-aware edge-cloud speculative decoding: simulator and experiments", "edgespec"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "Simulate one scenario; writes rounds.csv, summary.json, config.resolved");
  run->add_option("config", config_path, "Scenario config file")->required();
  run->add_option("--seed", seed, "Run seed (overrides run.seed and " + std::string(kSeedEnv) + ")");
  run->add_option("--out", out_path, "Output directory")->required();

  std::string k_list;
  bool adaptive = false;
  auto* sweep = app.add_subcommand("sweep-k", "Compare fixed strides (and the adaptive policy) on one scenario");
  sweep->add_option("config", config_path, "Scenario config file")->required();
  sweep->add_option("--k", k_list, "Comma-separated fixed strides, e.g. 1,3,5,7")->required();
  sweep->add_flag("--adaptive", adaptive, "Add a row for the adaptive policy");
  sweep->add_option("--seed", seed, "Run seed (overrides run.seed and " + std::string(kSeedEnv) + ")");
  sweep->add_option("--threads", threads, "Worker threads (overrides run.threads)");
  sweep->add_option("--out", out_path, "Output directory; receives sweep.csv and config.resolved")->required();

  auto* train = app.add_subcommand("train-draft", "Train the anchored draft head against the version-0 target");
  train->add_option("config", config_path, "Scenario config file ([model] and [train] sections)")->required();
  train->add_option("--seed", seed, "Training seed (overrides train.seed)");
  train->add_option("--out", out_path, "Checkpoint file to write")->required();

  std::string magnitudes;
  std::string shift_seeds;
  auto* shift = app.add_subcommand("shift-eval", "Acceptance of static drafts against fine-tuned target versions");
  shift->add_option("config", config_path, "Scenario config file ([model], [train], [shift])")->required();
  shift->add_option("--magnitudes", magnitudes, "Comma-separated fine-tune magnitudes (overrides shift.magnitudes)");
  shift->add_option("--seeds", shift_seeds, "Comma-separated model seeds (overrides shift.seeds)");
  shift->add_option("--out", out_path, "Output directory; receives shift.csv and config.resolved")->required();

  double bytes = 0.0;
  double rate = 0.0;
  double efficiency = latency::kDefaultSyncEfficiency;
  auto* sync = app.add_subcommand("sync-cost", "Time to ship a draft model over the uplink");
  sync->add_option("--bytes", bytes, "Model size in bytes")->required();
  sync->add_option("--rate", rate, "Link rate in bits/s")->required();
  sync->add_option("--efficiency", efficiency, "Protocol efficiency in (0, 1]")->capture_default_str();

  double gamma = 0.0;
  std::string rates;
  std::optional<int> k_max;
  std::string acceptance_model = "geometric";
  auto* land = app.add_subcommand("k-landscape", "Predicted ETGR over stride and uplink rate");
  land->add_option("config", config_path, "Optional scenario config supplying [latency] and policy.k_max");
  land->add_option("--gamma", gamma, "Acceptance rate in [0, 1]")->required();
  land->add_option("--rates", rates, "Comma-separated uplink rates in bits/s")->required();
  land->add_option("--k-max", k_max, "Largest stride considered (overrides policy.k_max)");
  land->add_option("--model", acceptance_model, "Acceptance model: geometric or linear")->capture_default_str();
  land->add_option("--out", out_path, "CSV file to write (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*run) {
      Config cfg = load_with_seed(config_path, seed, err);
      const sim::SimulationResult r = sim::simulate(cfg.scenario, cfg.seed);
      sim::write_run_outputs(out_path, r.records, r.metrics, resolved_config(cfg));
      print_metrics(out, r.metrics);
    } else if (*sweep) {
      const std::vector<int> ks = parse_int_list(k_list, "--k");
      for (int k : ks) {
        if (k < 1) throw ConfigError("--k: strides must be >= 1");
      }
      Config cfg = load_with_seed(config_path, seed, err);
      if (threads > 0) cfg.threads = threads;
      const auto rows = sim::sweep_k(cfg.scenario, ks, adaptive, cfg.seed, std::max(1u, cfg.threads));
      const std::string csv = sim::sweep_csv(rows);
      ensure_dir(out_path);
      write_file_atomic(std::filesystem::path(out_path) / "sweep.csv", csv);
      write_file_atomic(std::filesystem::path(out_path) / "config.resolved", resolved_config(cfg));
      out << csv;
    } else if (*train) {
      Config cfg = load_config(config_path);
      for (const std::string& w : cfg.warnings) err << "warning: " << w << "\n";
      sim::ModelSpec& spec = cfg.scenario.model;
      if (seed) spec.train.seed = *seed;
      spec.train.validate();
      spec.family.validate();
      const models::TargetModel base = models::make_base_target(spec.family);
      const models::MarkovSource source(spec.family.vocab, spec.corpus_seed);
      const models::Corpus corpus =
          models::generate_corpus(source, spec.corpus_sequences, spec.corpus_length, derive_seed(spec.corpus_seed, 1));
      const models::DraftTrainingResult r = models::train_draft(base, corpus, spec.train, spec.family);
      for (const auto& [step, loss] : r.history) out << "step " << step << " loss " << fmt("%.6g", loss) << "\n";
      out << "initial_loss=" << fmt("%.17g", r.initial_loss) << "\n"
          << "final_loss=" << fmt("%.17g", r.final_loss) << "\n";
      models::save_draft(out_path, r.draft, &r.w_p);
    } else if (*shift) {
      Config cfg = load_config(config_path);
      for (const std::string& w : cfg.warnings) err << "warning: " << w << "\n";
      if (!magnitudes.empty()) cfg.shift.magnitudes = parse_number_list(magnitudes, "--magnitudes");
      for (double m : cfg.shift.magnitudes) {
        if (!(m >= 0.0)) throw ConfigError("--magnitudes: values must be >= 0");
      }
      if (!shift_seeds.empty()) {
        cfg.shift_seeds.clear();
        for (int s : parse_int_list(shift_seeds, "--seeds")) {
          if (s < 0) throw ConfigError("--seeds: values must be >= 0");
          cfg.shift_seeds.push_back(static_cast<std::uint64_t>(s));
        }
      }
      const sim::ModelSpec& spec = cfg.scenario.model;
      spec.train.validate();
      const sim::ShiftExperiment e = sim::run_shift_experiment(spec.family, spec.train, spec.corpus_sequences,
                                                               spec.corpus_length, cfg.shift, cfg.shift_seeds);
      const std::string csv = sim::shift_csv(e);
      ensure_dir(out_path);
      write_file_atomic(std::filesystem::path(out_path) / "shift.csv", csv);
      write_file_atomic(std::filesystem::path(out_path) / "config.resolved", resolved_config(cfg));
      out << csv;
    } else if (*sync) {
      if (!(bytes > 0.0)) throw ConfigError("--bytes must be > 0");
      if (!(rate > 0.0)) throw ConfigError("--rate must be > 0");
      if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ConfigError("--efficiency must be in (0, 1]");
      const double seconds = latency::sync_time(bytes, rate, efficiency);
      out << "seconds=" << fmt("%.6f", seconds) << "\n"
          << "duration=" << human_duration(seconds) << "\n"
          << "efficiency=" << fmt("%g", efficiency) << "\n";
    } else if (*land) {
      latency::LatencyParams params;
      int kmax = policy::PolicyConfig{}.k_max;
      if (!config_path.empty()) {
        const Config cfg = load_config(config_path);
        for (const std::string& w : cfg.warnings) err << "warning: " << w << "\n";
        params = cfg.scenario.latency;
        kmax = cfg.scenario.policy_config.k_max;
      }
      if (k_max) kmax = *k_max;
      if (kmax < 1) throw ConfigError("--k-max must be >= 1");
      if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("--gamma must be in [0, 1]");
      const std::vector<double> rate_list = parse_number_list(rates, "--rates");
      for (double r : rate_list) {
        if (!(r > 0.0)) throw ConfigError("--rates: values must be > 0");
      }
      const auto model = policy::parse_acceptance_model(acceptance_model);
      const std::string csv = sim::landscape_csv(sim::optimal_k_landscape(gamma, params, rate_list, kmax, model));
      if (out_path.empty()) {
        out << csv;
      } else {
        write_file_atomic(out_path, csv);
      }
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace edgespec::cli
