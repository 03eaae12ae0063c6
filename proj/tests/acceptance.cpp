// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
// Seed-averaged criteria use seeds 1..5.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "netrec/engine.hpp"
#include "netrec/io.hpp"
#include "support.hpp"

using namespace netrec;

namespace {

constexpr int kSeeds = 5;
int failures = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

void report(const std::string& id, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << title << " | " << o.detail << std::endl;
  if (!o.pass) ++failures;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

/// Seeds 1..kSeeds of one (scenario, mode), cached by a caller-chosen key.
class RunCache {
 public:
  const std::vector<Trajectory>& get(const std::string& key, const Scenario& s, RunMode mode,
                                     bool keep_graph = false) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<RunRequest> reqs;
    for (int k = 1; k <= kSeeds; ++k) reqs.push_back({&s, mode, static_cast<std::uint64_t>(k), RunOptions{keep_graph}});
    const auto t0 = std::chrono::steady_clock::now();
    auto runs = run_batch(reqs, 1);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "  ran " << key << " (" << kSeeds << " seeds, " << num(secs) << " s)" << std::endl;
    return cache_.emplace(key, std::move(runs)).first->second;
  }

 private:
  std::map<std::string, std::vector<Trajectory>> cache_;
};

double mean_metric(const std::vector<Trajectory>& runs, const std::string& metric, Timestep t) {
  std::vector<double> v;
  for (const auto& r : runs) v.push_back(r.at(t).get(metric));
  return confidence_band(v).mean;
}

double mean_effect(const std::vector<Trajectory>& rec, const std::vector<Trajectory>& nat, const std::string& metric,
                   Timestep t) {
  return mean_metric(rec, metric, t) - mean_metric(nat, metric, t);
}

Scenario with(Scenario s, RecommenderKind kind, InterventionWindow w, Timestep horizon) {
  s.recommender.kind = kind;
  s.window = w;
  s.horizon = horizon;
  s.sweep_windows.clear();
  return s;
}

// ---------------------------------------------------------------------------

void oracle_equivalences() {
  std::mt19937_64 rng(2024);
  double worst_gini = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto n = 1 + rng() % 60;
    std::vector<std::size_t> xs(n);
    for (auto& x : xs) x = rng() % 50;
    xs[0] += 1;
    std::sort(xs.begin(), xs.end());
    const std::vector<double> as_double(xs.begin(), xs.end());
    worst_gini = std::max(worst_gini, std::abs(gini(xs) - testing::gini_mad(as_double)));
  }

  std::size_t clustering_mismatch = 0, triangle_mismatch = 0, d2_mismatch = 0, graphs = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto n = 5 + seed % 46;
    const auto g = testing::random_graph(n, 0.05 + 0.02 * static_cast<double>(seed % 10), seed);
    ++graphs;
    for (NodeId u : g.alive_nodes()) {
      if (clustering_coefficient(g, u) != testing::brute_clustering(g, u)) ++clustering_mismatch;
      if (g.triangles(u) != testing::brute_triangles(g, u)) ++triangle_mismatch;
      for (auto f : {ProvenanceFilter::all(), ProvenanceFilter::organic()}) {
        if (g.distance2(u, f) != testing::bfs_distance2(g, u, f)) ++d2_mismatch;
      }
    }
  }

  double worst_softmax = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = testing::random_graph(40, 0.1, seed);
    for (double beta : {0.0, 1.0, 10.0, 500.0}) {
      for (NodeId u : g.alive_nodes()) {
        double total = 0.0;
        for (const auto& [j, w] : latent_distribution(g, u, beta)) total += w;
        worst_softmax = std::max(worst_softmax, std::abs(total - 1.0));
      }
    }
  }

  const bool pass = worst_gini <= 1e-9 && clustering_mismatch == 0 && triangle_mismatch == 0 && d2_mismatch == 0 &&
                    worst_softmax <= 1e-9;
  report("A1", "oracle equivalences (gini/MAD, clustering/brute force, distance2/BFS, softmax)",
         {pass, "max|gini-mad|=" + num(worst_gini) + " clustering mismatches=" + std::to_string(clustering_mismatch) +
                    " triangle mismatches=" + std::to_string(triangle_mismatch) + " distance2 mismatches=" +
                    std::to_string(d2_mismatch) + " over " + std::to_string(graphs) +
                    " graphs, max|sum softmax-1|=" + num(worst_softmax)});
}

void determinism() {
  Scenario s = baseline_scenario();
  auto render = [&] {
    std::vector<Trajectory> runs;
    for (auto mode : {RunMode::Natural, RunMode::Intervened, RunMode::Unmediated}) runs.push_back(run_trajectory(s, mode, 11));
    std::ostringstream out;
    write_trajectories(out, runs);
    return out.str();
  };
  const auto first = render();
  const auto second = render();
  report("A2", "determinism (byte-identical trajectory CSV, two runs)",
         {first == second && !first.empty(), std::to_string(first.size()) + " bytes, identical=" +
                                                 (first == second ? std::string("yes") : std::string("no"))});
}

void initialization(RunCache& cache) {
  Scenario s = baseline_scenario();
  s.horizon = 0;
  s.window = {0, 0};
  s.sweep_windows.clear();
  const auto& runs = cache.get("init", s, RunMode::Natural);
  const double h0 = mean_metric(runs, "homophily_g0", 0);
  const double h1 = mean_metric(runs, "homophily_g1", 0);
  const bool pass = std::abs(h0 - 0.1) <= 0.05 && std::abs(h1 - 0.1) <= 0.05;
  report("A3", "initial per-group homophily 0.1 +/- 0.05", {pass, "h_g0=" + num(h0) + " h_g1=" + num(h1)});
}

void delayed_effects(RunCache& cache) {
  const InterventionWindow w{50, 200};
  const auto fof = with(baseline_scenario(), RecommenderKind::FoF, w, 400);
  const auto lat = with(baseline_scenario(), RecommenderKind::Latent, w, 400);
  const auto& nat = cache.get("natural/400", fof, RunMode::Natural);
  const auto& rf = cache.get("fof/50-200/400", fof, RunMode::Intervened);
  const auto& rl = cache.get("latent/50-200/400", lat, RunMode::Intervened);

  const double hf200 = mean_effect(rf, nat, "homophily", 200), hf400 = mean_effect(rf, nat, "homophily", 400);
  const double hl200 = mean_effect(rl, nat, "homophily", 200), hl400 = mean_effect(rl, nat, "homophily", 400);
  const double gf200 = mean_effect(rf, nat, "gini_global", 200), gf400 = mean_effect(rf, nat, "gini_global", 400);
  const double gl200 = mean_effect(rl, nat, "gini_global", 200), gl400 = mean_effect(rl, nat, "gini_global", 400);

  report("A4a", "homophily effect at t=200: Latent > 0, FoF < 0",
         {hl200 > 0 && hf200 < 0, "latent=" + num(hl200) + " fof=" + num(hf200)});
  report("A4b", "homophily effects shrink in magnitude by t=400",
         {std::abs(hl400) < std::abs(hl200) && std::abs(hf400) < std::abs(hf200),
          "latent " + num(hl200) + " -> " + num(hl400) + ", fof " + num(hf200) + " -> " + num(hf400)});
  report("A4c", "FoF Gini effect < 0 at t=200 and > 0 at t=400",
         {gf200 < 0 && gf400 > 0, "t200=" + num(gf200) + " t400=" + num(gf400)});
  report("A4d", "Latent Gini effect > 0 at t=200 and t=400",
         {gl200 > 0 && gl400 > 0, "t200=" + num(gl200) + " t400=" + num(gl400)});
}

void indirect_effects(RunCache& cache) {
  const std::vector<InterventionWindow> windows{{50, 100}, {50, 200}, {50, 400}};
  for (auto kind : {RecommenderKind::FoF, RecommenderKind::Latent}) {
    const std::string name(to_string(kind));
    std::vector<double> at400;
    for (const auto& w : windows) {
      const auto s = with(baseline_scenario(), kind, w, 400);
      const auto key = name + "/" + std::to_string(w.lo) + "-" + std::to_string(w.hi) + "/400";
      at400.push_back(mean_metric(cache.get(key, s, RunMode::Intervened), "mediated_fraction_friend_edges", 400));
    }
    const bool monotone = at400[0] <= at400[1] && at400[1] <= at400[2];
    const auto& base = cache.get(name + "/50-200/400", with(baseline_scenario(), kind, {50, 200}, 400), RunMode::Intervened);
    const double m200 = mean_metric(base, "mediated_fraction_friend_edges", 200);
    const double m400 = mean_metric(base, "mediated_fraction_friend_edges", 400);
    const double rel = std::abs(m400 - m200) / m200;
    report("A5a-" + name, "mediated fraction at t=400 nondecreasing in window length (50, 150, 350)",
           {monotone, num(at400[0]) + " <= " + num(at400[1]) + " <= " + num(at400[2])});
    report("A5b-" + name, "mediated fraction persists after the window (relative change t=200 -> 400 < 20%)",
           {rel < 0.2, num(m200) + " -> " + num(m400) + " (" + num(100 * rel) + "%)"});
  }

  const auto& rf = cache.get("fof/50-200/400", with(baseline_scenario(), RecommenderKind::FoF, {50, 200}, 400),
                             RunMode::Intervened);
  const auto& rl = cache.get("latent/50-200/400", with(baseline_scenario(), RecommenderKind::Latent, {50, 200}, 400),
                             RunMode::Intervened);
  const double fm = mean_metric(rf, "bichromatic_fraction_mediated", 200);
  const double fu = mean_metric(rf, "bichromatic_fraction_unmediated", 200);
  const double lm = mean_metric(rl, "bichromatic_fraction_mediated", 200);
  const double lu = mean_metric(rl, "bichromatic_fraction_unmediated", 200);
  report("A5c", "bichromatic share at t=200: mediated < unmediated for Latent, > for FoF",
         {lm < lu && fm > fu, "latent " + num(lm) + " vs " + num(lu) + ", fof " + num(fm) + " vs " + num(fu)});

  const auto& nat = cache.get("natural/400", with(baseline_scenario(), RecommenderKind::FoF, {50, 200}, 400),
                              RunMode::Natural);
  for (auto kind : {RecommenderKind::FoF, RecommenderKind::Latent}) {
    const std::string name(to_string(kind));
    const auto s = with(baseline_scenario(), kind, {50, 200}, 400);
    const auto& rec = cache.get(name + "/50-200/400", s, RunMode::Intervened);
    const auto& unm = cache.get(name + "/50-200/400/unmediated", s, RunMode::Unmediated);
    std::size_t between = 0, total = 0;
    for (Timestep t = s.window.lo; t <= s.horizon; ++t) {
      const double n = mean_metric(nat, "homophily", t);
      const double r = mean_metric(rec, "homophily", t);
      const double u = mean_metric(unm, "homophily", t);
      ++total;
      if (std::min(n, r) <= u && u <= std::max(n, r)) ++between;
    }
    const double share = static_cast<double>(between) / static_cast<double>(total);
    report("A5d-" + name, "unmediated homophily between natural and intervened on >= 80% of t in [50, 400]",
           {share >= 0.8, std::to_string(between) + "/" + std::to_string(total) + " timesteps (" + num(100 * share) +
                              "%)"});
  }
}

void rewiring(RunCache& cache) {
  auto s = with(baseline_scenario(), RecommenderKind::FoF, {50, 200}, 400);
  s.behavior.rewire = true;
  const auto& runs = cache.get("fof/50-200/400/rewire", s, RunMode::Intervened, true);

  std::size_t audited = 0, violations = 0;
  for (const auto& tr : runs) {
    const auto& g = *tr.final_graph;
    std::vector<std::size_t> degree(g.node_count(), 0);
    const auto events = g.ledger();
    for (std::size_t k = 0; k < events.size(); ++k) {
      const auto& ev = events[k];
      if (ev.kind != LedgerEvent::Kind::EdgeAdded && ev.kind != LedgerEvent::Kind::EdgeRemoved) continue;
      const bool accepted = ev.kind == LedgerEvent::Kind::EdgeAdded && ev.provenance == Provenance::Algorithmic;
      const std::size_t prior = degree[ev.u.index()];
      const int delta = ev.kind == LedgerEvent::Kind::EdgeAdded ? 1 : -1;
      degree[ev.u.index()] += delta;
      degree[ev.v.index()] += delta;
      if (!accepted || prior < 1) continue;
      ++audited;
      const bool next_is_rewire = k + 1 < events.size() && events[k + 1].kind == LedgerEvent::Kind::EdgeRemoved &&
                                  events[k + 1].reason == RemovalReason::Rewire &&
                                  (events[k + 1].u == ev.u || events[k + 1].v == ev.u);
      if (!next_is_rewire) {
        ++violations;
        continue;
      }
      const auto& rm = events[k + 1];
      degree[rm.u.index()] -= 1;
      degree[rm.v.index()] -= 1;
      ++k;
      if (degree[ev.u.index()] != prior) ++violations;
    }
  }
  report("A6a", "rewiring conserves the accepting node's degree (ledger audit)",
         {audited > 0 && violations == 0,
          std::to_string(audited) + " acceptances audited, " + std::to_string(violations) + " violations"});

  const auto base = with(baseline_scenario(), RecommenderKind::FoF, {50, 200}, 400);
  const auto& nat = cache.get("natural/400", base, RunMode::Natural);
  const auto& rec = cache.get("fof/50-200/400", base, RunMode::Intervened);
  auto delayed = [&](const std::vector<Trajectory>& r) {
    return mean_effect(r, nat, "gini_global", 400) - mean_effect(r, nat, "gini_global", 200);
  };
  const double d_default = delayed(rec), d_rewire = delayed(runs);
  report("A6b", "delayed Gini effect (FoF, t=400) smaller in magnitude under rewiring",
         {std::abs(d_rewire) < std::abs(d_default), "default=" + num(d_default) + " rewire=" + num(d_rewire)});
}

void evaluation_biases(RunCache& cache) {
  const InterventionWindow w{50, 200};
  const auto fof = with(baseline_scenario(), RecommenderKind::FoF, w, 400);
  const auto lat = with(baseline_scenario(), RecommenderKind::Latent, w, 400);
  const auto& nat = cache.get("natural/400", fof, RunMode::Natural);
  const auto& rf = cache.get("fof/50-200/400", fof, RunMode::Intervened);
  const auto& rl = cache.get("latent/50-200/400", lat, RunMode::Intervened);

  const double f_long = mean_metric(rf, "clustering_global", 400) - mean_metric(rf, "clustering_global", 50);
  const double f_total = mean_effect(rf, nat, "clustering_global", 400);
  report("A7a", "FoF clustering: longitudinal estimate (50 -> 400) > 1.5x counterfactual total effect",
         {f_long > 1.5 * f_total,
          "longitudinal=" + num(f_long) + " total=" + num(f_total) + " ratio=" + num(f_long / f_total)});
  const double l_long = mean_metric(rl, "clustering_global", 400) - mean_metric(rl, "clustering_global", 50);
  const double l_total = mean_effect(rl, nat, "clustering_global", 400);
  report("A7b", "Latent clustering: longitudinal estimate has opposite sign to total effect",
         {l_long * l_total < 0, "longitudinal=" + num(l_long) + " total=" + num(l_total)});

  std::size_t algorithmic = 0, orphan = 0;
  for (auto scheme : {ABScheme{ABScheme::Kind::RandomNode, 0.5, 0}, ABScheme{ABScheme::Kind::ByCommunity, 0.5, 0}}) {
    const auto s = with(baseline_scenario(), RecommenderKind::FoF, w, 200);
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      const auto tr = ab_run(s, scheme, seed, RunOptions{true});
      for (const auto& ev : tr.final_graph->ledger()) {
        if (ev.kind != LedgerEvent::Kind::EdgeAdded || ev.provenance != Provenance::Algorithmic) continue;
        ++algorithmic;
        if (tr.arms[ev.u.index()] != Arm::Treatment && tr.arms[ev.v.index()] != Arm::Treatment) ++orphan;
      }
    }
  }
  report("A7c", "A/B: every algorithmic edge has a treatment endpoint (ledger audit)",
         {algorithmic > 0 && orphan == 0,
          std::to_string(algorithmic) + " algorithmic edges, " + std::to_string(orphan) + " without treatment endpoint"});

  const auto g = testing::ab_fixture();
  const std::vector<Arm> arms{Arm::Treatment, Arm::Treatment, Arm::Treatment, Arm::Control, Arm::Control};
  const auto row = ab_arm_metrics(g, arms, 0);
  const testing::ABFixtureExpected e;
  std::size_t mismatches = 0;
  auto expect = [&](double got, double want) { mismatches += got == want ? 0 : 1; };
  expect(row.homophily_naive.treatment, e.homophily_naive_treatment);
  expect(row.homophily_naive.control, e.homophily_naive_control);
  expect(row.homophily_adjusted.treatment, e.homophily_adjusted_treatment);
  expect(row.homophily_adjusted.control, e.homophily_adjusted_control);
  expect(row.clustering_naive.treatment, e.clustering_naive_treatment);
  expect(row.clustering_naive.control, e.clustering_naive_control);
  expect(row.clustering_adjusted.treatment, e.clustering_adjusted_treatment);
  expect(row.clustering_adjusted.control, e.clustering_adjusted_control);
  expect(row.gini_naive.treatment, e.gini_naive_treatment);
  expect(row.gini_naive.control, e.gini_naive_control);
  expect(row.gini_adjusted.treatment, e.gini_naive_treatment);
  expect(row.gini_adjusted.control, e.gini_adjusted_control);
  report("A7d", "adjusted and naive A/B estimators match the 5-node hand enumeration",
         {mismatches == 0, std::to_string(12 - mismatches) + "/12 values exact"});
}

void recommender_variants(RunCache& cache) {
  const InterventionWindow w{50, 200};
  std::vector<double> h;
  std::string detail;
  for (double beta : {2.0, 4.0, 10.0}) {
    auto s = with(baseline_scenario(), RecommenderKind::Latent, w, 200);
    s.recommender.beta = beta;
    const auto& runs = cache.get("latent/beta" + num(beta) + "/50-200/200", s, RunMode::Intervened);
    h.push_back(mean_metric(runs, "homophily", 200));
    detail += (detail.empty() ? "" : ", ") + std::string("beta ") + num(beta) + ": " + num(h.back());
  }
  report("A8a", "Latent homophily at t_hi nondecreasing in beta (2, 4, 10)", {h[0] <= h[1] && h[1] <= h[2], detail});

  // A shorter window keeps the Adamic-Adar runs within the time budget.
  const InterventionWindow short_w{50, 100};
  const auto& aa = cache.get("adamic_adar/50-100/100", with(baseline_scenario(), RecommenderKind::AdamicAdar, short_w, 100),
                             RunMode::Intervened);
  const auto& ff = cache.get("fof/50-100/100", with(baseline_scenario(), RecommenderKind::FoF, short_w, 100),
                             RunMode::Intervened);
  const double caa = mean_metric(aa, "clustering_global", 100), cff = mean_metric(ff, "clustering_global", 100);
  report("A8b", "Adamic-Adar global clustering exceeds FoF at t_hi (window [50,100])",
         {caa > cff, "adamic_adar=" + num(caa) + " fof=" + num(cff)});
}

void group_structure(RunCache& cache) {
  const InterventionWindow w{50, 200};
  const auto mm = with(majority_minority_scenario(), RecommenderKind::FoF, w, 200);
  const auto& nat = cache.get("majority/natural/200", mm, RunMode::Natural);
  const auto& rec = cache.get("majority/fof/50-200/200", mm, RunMode::Intervened);
  // Group 0 is the 60% majority.
  const double maj = mean_effect(rec, nat, "homophily_g0", 200);
  const double mino = mean_effect(rec, nat, "homophily_g1", 200);
  report("A9a", "majority/minority, FoF at t_hi: majority homophily up, minority homophily down",
         {maj > 0 && mino < 0, "majority effect=" + num(maj) + " minority effect=" + num(mino)});

  std::string detail;
  bool pass = true;
  for (const auto& [variance, sign] : std::vector<std::pair<double, int>>{{0.1, +1}, {0.01, -1}}) {
    const auto s = with(embedding_variance_scenario(variance), RecommenderKind::Latent, w, 200);
    const auto& n = cache.get("variance" + num(variance) + "/natural/200", s, RunMode::Natural);
    const auto& r = cache.get("variance" + num(variance) + "/latent/50-200/200", s, RunMode::Intervened);
    const double eff = mean_effect(r, n, "clustering_global", 200);
    pass = pass && eff * sign > 0;
    detail += (detail.empty() ? "" : ", ") + std::string("variance ") + num(variance) + ": " + num(eff);
  }
  report("A9b", "Latent clustering effect at t_hi: > 0 at variance 0.1, < 0 at variance 0.01", {pass, detail});
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  RunCache cache;
  oracle_equivalences();
  determinism();
  initialization(cache);
  delayed_effects(cache);
  indirect_effects(cache);
  rewiring(cache);
  evaluation_biases(cache);
  recommender_variants(cache);
  group_structure(cache);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << " in " << num(secs) << " s"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
