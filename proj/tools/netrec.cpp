// Command-line driver: simulate, effects, abtest, sweep.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "netrec/config.hpp"
#include "netrec/engine.hpp"
#include "netrec/io.hpp"

namespace fs = std::filesystem;
using namespace netrec;

namespace {

struct Common {
  std::string config = "baseline";
  std::string out = "out";
  std::uint64_t seed_base = 1;
  unsigned jobs = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON config path or preset name")->capture_default_str();
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--seed-base", c.seed_base, "offset added to every master seed")->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "concurrent trajectories")->check(CLI::PositiveNumber)->capture_default_str();
}

std::vector<std::uint64_t> seeds_for(const Scenario& s, const Common& c) {
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < s.n_seeds; ++k) seeds.push_back(c.seed_base + static_cast<std::uint64_t>(k));
  return seeds;
}

/// Runs every (mode, seed) pair; results grouped by mode in the given order.
std::vector<std::vector<Trajectory>> run_modes(const Scenario& s, const std::vector<RunMode>& modes,
                                               const std::vector<std::uint64_t>& seeds, unsigned jobs,
                                               bool keep_graph = false) {
  std::vector<RunRequest> reqs;
  for (auto m : modes) {
    for (auto seed : seeds) reqs.push_back({&s, m, seed, RunOptions{keep_graph}});
  }
  auto flat = run_batch(reqs, jobs);
  std::vector<std::vector<Trajectory>> out(modes.size());
  for (std::size_t k = 0; k < flat.size(); ++k) out[k / seeds.size()].push_back(std::move(flat[k]));
  return out;
}

std::vector<Trajectory> flatten(std::vector<std::vector<Trajectory>>&& groups) {
  std::vector<Trajectory> all;
  for (auto& g : groups) {
    for (auto& t : g) all.push_back(std::move(t));
  }
  return all;
}

void write_trajectory_outputs(const fs::path& dir, const std::vector<std::vector<Trajectory>>& groups) {
  std::vector<Trajectory> all;
  std::vector<AggregateTrajectory> aggs;
  for (const auto& g : groups) {
    all.insert(all.end(), g.begin(), g.end());
    aggs.push_back(aggregate(g));
  }
  write_file(dir / "trajectories.csv", [&](std::ostream& o) { write_trajectories(o, all); });
  write_file(dir / "aggregate.csv", [&](std::ostream& o) { write_aggregate(o, aggs); });
}

int simulate(const Common& c, bool snapshots) {
  const Scenario s = load_config(c.config);
  const auto seeds = seeds_for(s, c);
  const auto groups = run_modes(s, s.run_modes, seeds, c.jobs, snapshots);
  const fs::path dir(c.out);
  write_trajectory_outputs(dir, groups);
  if (snapshots) {
    for (const auto& g : groups) {
      for (const auto& tr : g) {
        const auto stem = std::string(to_string(tr.mode)) + "_seed" + std::to_string(tr.seed);
        write_file(dir / "snapshots" / (stem + "_edges.csv"), [&](std::ostream& o) { write_edges(o, *tr.final_graph); });
        write_file(dir / "snapshots" / (stem + "_nodes.csv"), [&](std::ostream& o) { write_nodes(o, *tr.final_graph); });
      }
    }
  }
  write_file(dir / "config.json", [&](std::ostream& o) { o << serialize_config(s); });
  std::cout << "wrote " << (dir / "trajectories.csv").string() << " (" << s.run_modes.size() << " modes x "
            << seeds.size() << " seeds)\n";
  return 0;
}

int effects(const Common& c, std::vector<Timestep> horizons) {
  const Scenario s = load_config(c.config);
  const auto seeds = seeds_for(s, c);
  const std::vector<RunMode> modes{RunMode::Natural, RunMode::Intervened, RunMode::Unmediated};
  const auto groups = run_modes(s, modes, seeds, c.jobs);
  if (horizons.empty()) horizons = {s.window.hi, s.horizon};
  std::sort(horizons.begin(), horizons.end());
  horizons.erase(std::unique(horizons.begin(), horizons.end()), horizons.end());
  for (auto T : horizons) {
    if (T < 0 || T > s.horizon) throw ConfigError("--at: timestep " + std::to_string(T) + " outside [0, horizon]");
  }
  const auto report = effect_report(groups[1], groups[2], groups[0], s.window, horizons);
  const fs::path dir(c.out);
  write_trajectory_outputs(dir, groups);
  write_file(dir / "effects.csv", [&](std::ostream& o) { write_effects(o, report); });
  write_file(dir / "effects_ci.csv", [&](std::ostream& o) { write_effects_ci(o, report); });
  write_file(dir / "config.json", [&](std::ostream& o) { o << serialize_config(s); });

  for (const auto& r : report) {
    if (r.metric != "homophily" && r.metric != "clustering_global" && r.metric != "gini_global") continue;
    std::cout << r.metric << " T=" << r.T << " total=" << format_value(r.total.mean) << " ["
              << format_value(r.total.lo) << ", " << format_value(r.total.hi) << "]";
    if (r.T > s.window.hi) {
      const auto& at_hi = std::find_if(report.begin(), report.end(),
                                       [&](const EffectRow& e) { return e.metric == r.metric && e.T == s.window.hi; });
      if (at_hi != report.end()) {
        std::cout << " delayed=" << format_value(r.delayed.mean) << " ("
                  << to_string(classify_delayed(r.delayed, at_hi->total.mean)) << ")";
      }
    }
    std::cout << "\n";
  }
  return 0;
}

int abtest(const Common& c) {
  const Scenario s = load_config(c.config);
  const auto seeds = seeds_for(s, c);
  const std::vector<RunMode> modes{RunMode::Natural, RunMode::Intervened, RunMode::AB};
  const auto groups = run_modes(s, modes, seeds, c.jobs);
  const fs::path dir(c.out);
  write_trajectory_outputs(dir, groups);
  write_file(dir / "ab_estimates.csv", [&](std::ostream& o) { write_ab(o, groups[2]); });
  write_file(dir / "config.json", [&](std::ostream& o) { o << serialize_config(s); });

  const std::vector<std::pair<std::string_view, std::string_view>> pairs{
      {"homophily", "homophily"}, {"clustering", "clustering_global"}, {"gini", "gini_global"}};
  for (const auto& [ab_metric, metric] : pairs) {
    std::vector<double> truth, naive, adjusted;
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      truth.push_back(total_effect(groups[1][k], groups[0][k], metric, s.window.hi));
      naive.push_back(ab_estimate(groups[2][k], ab_metric, ABAdjustment::Naive, s.window.hi).difference);
      adjusted.push_back(ab_estimate(groups[2][k], ab_metric, ABAdjustment::Adjusted, s.window.hi).difference);
    }
    std::cout << ab_metric << " t=" << s.window.hi << " counterfactual=" << format_value(confidence_band(truth).mean)
              << " naive=" << format_value(confidence_band(naive).mean)
              << " adjusted=" << format_value(confidence_band(adjusted).mean) << "\n";
  }
  return 0;
}

int sweep(const Common& c) {
  const Scenario base = load_config(c.config);
  validate_sweep(base);
  const auto seeds = seeds_for(base, c);
  std::vector<SweepResult> results;
  std::vector<Scenario> scenarios;
  scenarios.reserve(base.sweep_windows.size());
  for (const auto& w : base.sweep_windows) {
    Scenario s = base;
    s.window = w;
    scenarios.push_back(s);
  }
  for (const auto& s : scenarios) {
    results.push_back({s.window, flatten(run_modes(s, s.run_modes, seeds, c.jobs))});
  }
  const fs::path dir(c.out);
  write_file(dir / "sweep.csv", [&](std::ostream& o) { write_sweep(o, results); });
  write_file(dir / "config.json", [&](std::ostream& o) { o << serialize_config(base); });
  std::cout << "wrote " << (dir / "sweep.csv").string() << " (" << results.size() << " windows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate link recommendations on a growing network"};
  app.require_subcommand(1);
  Common common;
  bool snapshots = false;
  std::vector<Timestep> horizons;

  auto* sim = app.add_subcommand("simulate", "run the configured modes and write trajectories");
  add_common(sim, common);
  sim->add_flag("--snapshots", snapshots, "also export final edge and node lists per run");
  auto* eff = app.add_subcommand("effects", "natural, intervened and unmediated runs plus effect report");
  add_common(eff, common);
  eff->add_option("--at", horizons, "timesteps at which effects are reported (default: t_hi and horizon)");
  auto* ab = app.add_subcommand("abtest", "A/B run with naive and adjusted per-arm estimates");
  add_common(ab, common);
  auto* sw = app.add_subcommand("sweep", "repeat the configured modes for every sweep window");
  add_common(sw, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return simulate(common, snapshots);
    if (eff->parsed()) return effects(common, horizons);
    if (ab->parsed()) return abtest(common);
    if (sw->parsed()) return sweep(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
