// attsync: command-line driver for distributed adaptive attitude synchronization.
//
//   attsync preset list
//   attsync preset show <name> [--seed N]
//   attsync validate (--preset NAME | --config FILE)
//   attsync run (--preset NAME | --config FILE) [--seed N | --seeds A..B] [--dt S]
//               [--duration S] [--out DIR] [--decimate K] [--full-rate]
//               [--shadow-switch] [--coupling lagged|exact|omitted]
//               [--assert-converged] [--tolerance X]
//
// The default output directory comes from ATTSYNC_OUT_DIR, else ./attsync_out.

#include <attsync/errors.hpp>
#include <attsync/runner.hpp>
#include <attsync/scenario_config.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct SourceOptions {
  std::string preset;
  std::string config;
  std::optional<std::uint64_t> seed;
};

void add_source_options(CLI::App* cmd, SourceOptions& src) {
  auto* p = cmd->add_option("--preset", src.preset, "Built-in scenario name");
  auto* c = cmd->add_option("--config", src.config, "Scenario JSON file")->check(CLI::ExistingFile);
  p->excludes(c);
  c->excludes(p);
}

attsync::ScenarioConfig load_source(const SourceOptions& src) {
  if (!src.preset.empty()) {
    return attsync::preset(src.preset, src.seed.value_or(1));
  }
  if (!src.config.empty()) {
    auto cfg = attsync::load_config(src.config);
    if (src.seed) cfg.seed = *src.seed;
    return cfg;
  }
  throw attsync::ConfigError("one of --preset or --config is required");
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw attsync::ConfigError("--seeds expects A..B");
  try {
    const auto a = std::stoull(text.substr(0, dots));
    const auto b = std::stoull(text.substr(dots + 2));
    if (b < a) throw attsync::ConfigError("--seeds range is empty");
    return {a, b};
  } catch (const std::logic_error&) {
    throw attsync::ConfigError("--seeds expects A..B with nonnegative integers");
  }
}

void print_report(const attsync::ValidityReport& r) {
  std::cout << "mode: " << attsync::to_string(r.mode) << "\n";
  std::cout << "in-degrees:";
  for (int d : r.in_degrees) std::cout << ' ' << d;
  std::cout << "\n";
  std::cout << "directed spanning tree: " << (r.has_spanning_tree ? "yes" : "no") << "\n";
  std::cout << "leaderless valid: " << (r.leaderless_valid ? "yes" : "no") << "\n";
  if (r.leader_rooted_valid) {
    std::cout << "leader-rooted valid: " << (*r.leader_rooted_valid ? "yes" : "no") << "\n";
  }
  for (const auto& p : r.problems) std::cout << "error: " << p << "\n";
  std::cout << (r.ok() ? "valid" : "invalid") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed adaptive attitude synchronization simulator"};
  app.require_subcommand(1);

  auto* preset_cmd = app.add_subcommand("preset", "List or print built-in scenarios");
  preset_cmd->require_subcommand(1);
  preset_cmd->add_subcommand("list", "List preset names");
  auto* show_cmd = preset_cmd->add_subcommand("show", "Print a preset as scenario JSON");
  std::string show_name;
  std::uint64_t show_seed = 1;
  show_cmd->add_option("name", show_name, "Preset name")->required();
  show_cmd->add_option("--seed", show_seed, "Seed for random initial states");

  SourceOptions validate_src;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario without running it");
  add_source_options(validate_cmd, validate_src);

  SourceOptions run_src;
  std::optional<double> dt, duration;
  std::optional<int> decimate;
  std::string seeds, out_dir;
  bool full_rate = false, shadow = false, assert_converged = false;
  std::optional<double> tolerance;
  std::string coupling;
  auto* run_cmd = app.add_subcommand("run", "Simulate and write trajectory.csv and summary.json");
  add_source_options(run_cmd, run_src);
  run_cmd->add_option("--seed", run_src.seed, "Seed for random initial states");
  run_cmd->add_option("--seeds", seeds, "Seed range A..B, one output directory per seed")
      ->excludes("--seed");
  run_cmd->add_option("--dt", dt, "Integration step [s]")->check(CLI::PositiveNumber);
  run_cmd->add_option("--duration", duration, "Simulated time [s]")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--decimate", decimate, "Log every K-th step")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--full-rate", full_rate, "Log every step");
  run_cmd->add_flag("--shadow-switch", shadow, "Switch to the shadow MRP when |sigma| > 1");
  run_cmd->add_option("--coupling", coupling, "Neighbor-acceleration scheme")
      ->check(CLI::IsMember({"lagged", "exact", "omitted"}));
  run_cmd->add_flag("--assert-converged", assert_converged,
                    "Exit nonzero unless the final errors are below tolerance");
  run_cmd->add_option("--tolerance", tolerance, "Convergence tolerance")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (preset_cmd->parsed()) {
      if (show_cmd->parsed()) {
        std::cout << attsync::to_json(attsync::preset(show_name, show_seed)).dump(2) << "\n";
      } else {
        for (const auto& n : attsync::preset_names()) std::cout << n << "\n";
      }
      return 0;
    }

    if (validate_cmd->parsed()) {
      const auto report = attsync::validate(load_source(validate_src));
      print_report(report);
      return report.ok() ? 0 : 1;
    }

    auto cfg = load_source(run_src);
    if (dt) cfg.dt = *dt;
    if (duration) cfg.duration = *duration;
    if (decimate) cfg.decimate = *decimate;
    if (full_rate) cfg.decimate = 1;
    if (shadow) cfg.shadow_switch = true;
    if (!coupling.empty()) cfg.coupling = attsync::coupling_from_string(coupling);
    if (assert_converged) cfg.guard.assert_converged = true;
    if (tolerance) cfg.guard.tolerance = *tolerance;
    if (!(cfg.duration >= cfg.dt)) throw attsync::ConfigError("duration must be at least dt");

    std::filesystem::path base = out_dir;
    if (base.empty()) {
      const char* env = std::getenv("ATTSYNC_OUT_DIR");
      base = env && *env ? env : "attsync_out";
    }

    std::vector<std::pair<std::uint64_t, std::filesystem::path>> jobs;
    if (!seeds.empty()) {
      const auto [a, b] = parse_seed_range(seeds);
      for (auto s = a; s <= b; ++s) jobs.emplace_back(s, base / ("seed_" + std::to_string(s)));
    } else {
      jobs.emplace_back(cfg.seed, base);
    }

    std::vector<std::future<attsync::RunSummary>> futures;
    for (const auto& [seed, dir] : jobs) {
      attsync::ScenarioConfig job = cfg;
      job.seed = seed;
      futures.push_back(std::async(std::launch::async, [job, dir = dir] {
        return attsync::run_to_directory(job, dir);
      }));
    }

    bool all_converged = true;
    for (std::size_t k = 0; k < futures.size(); ++k) {
      const auto summary = futures[k].get();
      const auto& m = summary.metrics;
      std::cout << "seed " << jobs[k].first << " -> " << jobs[k].second.string() << "\n"
                << "  steps " << summary.steps << ", wall clock " << summary.wall_clock_seconds
                << " s\n"
                << "  final disagreement " << m.final_disagreement << " (velocity "
                << m.final_velocity_disagreement << ")\n";
      if (cfg.mode == attsync::Mode::tracking) {
        std::cout << "  final tracking error " << m.final_tracking_error << " (velocity "
                  << m.final_velocity_tracking_error << ")\n";
      }
      std::cout << "  V: " << m.initial_lyapunov << " -> " << m.final_lyapunov << "\n"
                << "  converged: " << (summary.converged ? "yes" : "no") << "\n";
      all_converged = all_converged && summary.converged;
    }
    if (cfg.guard.assert_converged && !all_converged) {
      std::cerr << "error: convergence guard failed (tolerance " << cfg.guard.tolerance << ")\n";
      return 3;
    }
    return 0;
  } catch (const attsync::DivergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
