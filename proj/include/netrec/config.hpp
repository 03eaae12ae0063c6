#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "netrec/engine.hpp"

namespace netrec {

using Json = nlohmann::json;

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"baseline", "heterogeneous", "homogeneous", "majority_minority"};
  return names;
}

inline std::optional<Scenario> preset(std::string_view name) {
  if (name == "baseline") return baseline_scenario();
  if (name == "majority_minority") return majority_minority_scenario();
  if (name == "heterogeneous") return embedding_variance_scenario(0.1);
  if (name == "homogeneous") return embedding_variance_scenario(0.01);
  return std::nullopt;
}

namespace detail {

inline std::string join_key(const std::string& parent, std::string_view key) {
  return parent.empty() ? std::string(key) : parent + "." + std::string(key);
}

/// Object view that records which keys were read and rejects the rest.
class ObjectReader {
 public:
  ObjectReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError((path_.empty() ? "document" : path_) + ": expected an object");
  }

  void allow(std::initializer_list<std::string_view> keys) {
    for (auto k : keys) allowed_.insert(std::string(k));
    for (const auto& [k, v] : j_.items()) {
      if (!allowed_.count(k)) throw ConfigError(join_key(path_, k) + ": unknown key");
    }
  }

  bool has(std::string_view key) const { return j_.contains(std::string(key)); }
  const Json& at(std::string_view key) const { return j_.at(std::string(key)); }
  std::string key(std::string_view k) const { return join_key(path_, k); }

  template <class T>
  void read(std::string_view k, T& out) const {
    if (!has(k)) return;
    out = get<T>(at(k), key(k));
  }

  template <class T>
  static T get(const Json& v, const std::string& key) {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(key + ": expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(key + ": expected an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_unsigned() == false && v.get<std::int64_t>() < 0) throw ConfigError(key + ": must be >= 0");
        }
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(key + ": expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(key + ": expected a string");
      }
      return v.get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> allowed_;
};

inline InterventionWindow parse_window(const Json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
    throw ConfigError(key + ": expected [lo, hi] with integer bounds");
  }
  InterventionWindow w{v[0].get<Timestep>(), v[1].get<Timestep>()};
  if (w.lo > w.hi) {
    throw ConfigError(key + ": lower bound " + std::to_string(w.lo) + " exceeds upper bound " + std::to_string(w.hi));
  }
  return w;
}

template <class E, std::size_t N>
E parse_enum(const Json& v, const std::string& key, const std::array<std::pair<std::string_view, E>, N>& table) {
  const auto s = ObjectReader::get<std::string>(v, key);
  for (const auto& [name, value] : table) {
    if (name == s) return value;
  }
  std::string options;
  for (const auto& [name, value] : table) options += (options.empty() ? "" : ", ") + std::string(name);
  throw ConfigError(key + ": unknown value '" + s + "' (expected one of " + options + ")");
}

template <class E, std::size_t N>
std::string_view enum_name(E value, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, v] : table) {
    if (v == value) return name;
  }
  return "unknown";
}

inline constexpr std::array<std::pair<std::string_view, RecommenderKind>, 3> kRecommenderNames{
    {{"fof", RecommenderKind::FoF}, {"latent", RecommenderKind::Latent}, {"adamic_adar", RecommenderKind::AdamicAdar}}};
inline constexpr std::array<std::pair<std::string_view, AcceptanceKind>, 2> kAcceptanceNames{
    {{"constant", AcceptanceKind::Constant}, {"choice_homophily", AcceptanceKind::ChoiceHomophily}}};
inline constexpr std::array<std::pair<std::string_view, RewireScope>, 2> kScopeNames{
    {{"node", RewireScope::Node}, {"graph", RewireScope::Graph}}};
inline constexpr std::array<std::pair<std::string_view, RunMode>, 4> kModeNames{{{"natural", RunMode::Natural},
                                                                                {"intervened", RunMode::Intervened},
                                                                                {"unmediated", RunMode::Unmediated},
                                                                                {"ab", RunMode::AB}}};
inline constexpr std::array<std::pair<std::string_view, ABScheme::Kind>, 2> kSchemeNames{
    {{"random_node", ABScheme::Kind::RandomNode}, {"by_community", ABScheme::Kind::ByCommunity}}};
inline constexpr std::array<std::pair<std::string_view, ClusteringKind>, 2> kClusteringNames{
    {{"average_local", ClusteringKind::AverageLocal}, {"transitivity", ClusteringKind::Transitivity}}};

}  // namespace detail

/// Builds a scenario from a JSON object. Omitted keys keep the defaults of the
/// preset named by `preset` (baseline when absent).
inline Scenario scenario_from_json(const Json& doc) {
  using detail::ObjectReader;
  ObjectReader root(doc, "");
  root.allow({"preset", "horizon", "n_seeds", "communities", "growth", "sigmoid", "hazard", "init", "recommender",
              "behavior", "window", "run_modes", "ab", "clustering", "sweep"});
  Scenario s = baseline_scenario();
  if (root.has("preset")) {
    const auto name = ObjectReader::get<std::string>(root.at("preset"), "preset");
    auto p = preset(name);
    if (!p) throw ConfigError("preset: unknown preset '" + name + "'");
    s = *p;
  }
  root.read("horizon", s.horizon);
  root.read("n_seeds", s.n_seeds);

  if (root.has("communities")) {
    const auto& arr = root.at("communities");
    if (!arr.is_array() || arr.empty()) throw ConfigError("communities: expected a nonempty array");
    s.communities.clear();
    for (std::size_t k = 0; k < arr.size(); ++k) {
      ObjectReader c(arr[k], "communities[" + std::to_string(k) + "]");
      c.allow({"prevalence", "mean", "std", "variance"});
      CommunitySpec spec;
      c.read("prevalence", spec.prevalence);
      if (!c.has("mean")) throw ConfigError(c.key("mean") + ": required");
      const auto& mean = c.at("mean");
      if (!mean.is_array() || mean.empty()) throw ConfigError(c.key("mean") + ": expected a nonempty array");
      for (const auto& x : mean) spec.embedding_mean.push_back(ObjectReader::get<double>(x, c.key("mean")));
      if (c.has("std") && c.has("variance")) throw ConfigError(c.key("std") + ": give either std or variance");
      c.read("std", spec.embedding_std);
      if (c.has("variance")) {
        const auto var = ObjectReader::get<double>(c.at("variance"), c.key("variance"));
        if (var < 0.0) throw ConfigError(c.key("variance") + ": must be nonnegative");
        spec.embedding_std = std::sqrt(var);
      }
      s.communities.push_back(std::move(spec));
    }
  }
  if (root.has("growth")) {
    ObjectReader r(root.at("growth"), "growth");
    r.allow({"n_strangers", "n_friends", "p_friend", "arrivals_per_step"});
    r.read("n_strangers", s.growth.n_strangers);
    r.read("n_friends", s.growth.n_friends);
    r.read("p_friend", s.growth.p_friend);
    r.read("arrivals_per_step", s.growth.arrivals_per_step);
  }
  if (root.has("sigmoid")) {
    ObjectReader r(root.at("sigmoid"), "sigmoid");
    r.allow({"a", "b", "target_mean", "calibration_pairs", "calibration_seed"});
    r.read("a", s.linkage.a);
    if (r.has("b")) {
      if (r.at("b").is_null()) {
        s.linkage.b.reset();
      } else {
        s.linkage.b = ObjectReader::get<double>(r.at("b"), "sigmoid.b");
      }
    }
    r.read("target_mean", s.linkage.target_mean);
    r.read("calibration_pairs", s.linkage.calibration_pairs);
    r.read("calibration_seed", s.linkage.calibration_seed);
  }
  if (root.has("hazard")) {
    ObjectReader r(root.at("hazard"), "hazard");
    r.allow({"enabled", "c", "d", "k"});
    r.read("enabled", s.hazard.enabled);
    r.read("c", s.hazard.c);
    r.read("d", s.hazard.d);
    r.read("k", s.hazard.k);
  }
  if (root.has("init")) {
    ObjectReader r(root.at("init"), "init");
    r.allow({"n_per_group", "p_closure"});
    r.read("n_per_group", s.init.n_per_group);
    r.read("p_closure", s.init.p_closure);
  }
  if (root.has("recommender")) {
    ObjectReader r(root.at("recommender"), "recommender");
    r.allow({"kind", "beta"});
    if (r.has("kind")) s.recommender.kind = detail::parse_enum(r.at("kind"), "recommender.kind", detail::kRecommenderNames);
    r.read("beta", s.recommender.beta);
  }
  if (root.has("behavior")) {
    ObjectReader r(root.at("behavior"), "behavior");
    r.allow({"acceptance", "p", "rewire", "rewire_scope"});
    if (r.has("acceptance")) {
      s.behavior.acceptance = detail::parse_enum(r.at("acceptance"), "behavior.acceptance", detail::kAcceptanceNames);
    }
    r.read("p", s.behavior.p);
    r.read("rewire", s.behavior.rewire);
    if (r.has("rewire_scope")) {
      s.behavior.rewire_scope = detail::parse_enum(r.at("rewire_scope"), "behavior.rewire_scope", detail::kScopeNames);
    }
  }
  if (root.has("window")) s.window = detail::parse_window(root.at("window"), "window");
  if (root.has("run_modes")) {
    const auto& arr = root.at("run_modes");
    if (!arr.is_array() || arr.empty()) throw ConfigError("run_modes: expected a nonempty array");
    s.run_modes.clear();
    for (const auto& m : arr) {
      const auto mode = detail::parse_enum(m, "run_modes", detail::kModeNames);
      if (std::find(s.run_modes.begin(), s.run_modes.end(), mode) != s.run_modes.end()) {
        throw ConfigError("run_modes: duplicate mode '" + std::string(to_string(mode)) + "'");
      }
      s.run_modes.push_back(mode);
    }
  }
  if (root.has("ab")) {
    ObjectReader r(root.at("ab"), "ab");
    r.allow({"scheme", "p", "treated_group"});
    if (r.has("scheme")) s.ab.kind = detail::parse_enum(r.at("scheme"), "ab.scheme", detail::kSchemeNames);
    r.read("p", s.ab.p);
    r.read("treated_group", s.ab.treated_group);
  }
  if (root.has("clustering")) s.clustering = detail::parse_enum(root.at("clustering"), "clustering", detail::kClusteringNames);
  if (root.has("sweep")) {
    ObjectReader r(root.at("sweep"), "sweep");
    r.allow({"windows"});
    if (r.has("windows")) {
      const auto& arr = r.at("windows");
      if (!arr.is_array()) throw ConfigError("sweep.windows: expected an array of [lo, hi]");
      s.sweep_windows.clear();
      for (const auto& w : arr) s.sweep_windows.push_back(detail::parse_window(w, "sweep.windows"));
    }
  }
  validate(s);
  return s;
}

inline Scenario parse_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("malformed document: ") + e.what());
  }
  return scenario_from_json(doc);
}

/// Every field written explicitly, so parsing the result reproduces `s`.
inline Json scenario_to_json(const Scenario& s) {
  Json j;
  j["horizon"] = s.horizon;
  j["n_seeds"] = s.n_seeds;
  j["communities"] = Json::array();
  for (const auto& c : s.communities) {
    j["communities"].push_back({{"prevalence", c.prevalence}, {"mean", c.embedding_mean}, {"std", c.embedding_std}});
  }
  j["growth"] = {{"n_strangers", s.growth.n_strangers},
                 {"n_friends", s.growth.n_friends},
                 {"p_friend", s.growth.p_friend},
                 {"arrivals_per_step", s.growth.arrivals_per_step}};
  j["sigmoid"] = {{"a", s.linkage.a},
                  {"b", s.linkage.b ? Json(*s.linkage.b) : Json(nullptr)},
                  {"target_mean", s.linkage.target_mean},
                  {"calibration_pairs", s.linkage.calibration_pairs},
                  {"calibration_seed", s.linkage.calibration_seed}};
  j["hazard"] = {{"enabled", s.hazard.enabled}, {"c", s.hazard.c}, {"d", s.hazard.d}, {"k", s.hazard.k}};
  j["init"] = {{"n_per_group", s.init.n_per_group}, {"p_closure", s.init.p_closure}};
  j["recommender"] = {{"kind", detail::enum_name(s.recommender.kind, detail::kRecommenderNames)},
                      {"beta", s.recommender.beta}};
  j["behavior"] = {{"acceptance", detail::enum_name(s.behavior.acceptance, detail::kAcceptanceNames)},
                   {"p", s.behavior.p},
                   {"rewire", s.behavior.rewire},
                   {"rewire_scope", detail::enum_name(s.behavior.rewire_scope, detail::kScopeNames)}};
  j["window"] = {s.window.lo, s.window.hi};
  j["run_modes"] = Json::array();
  for (auto m : s.run_modes) j["run_modes"].push_back(detail::enum_name(m, detail::kModeNames));
  j["ab"] = {{"scheme", detail::enum_name(s.ab.kind, detail::kSchemeNames)},
             {"p", s.ab.p},
             {"treated_group", s.ab.treated_group}};
  j["clustering"] = detail::enum_name(s.clustering, detail::kClusteringNames);
  j["sweep"]["windows"] = Json::array();
  for (const auto& w : s.sweep_windows) j["sweep"]["windows"].push_back({w.lo, w.hi});
  return j;
}

inline std::string serialize_config(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

/// A path to a JSON document, or the name of a built-in preset.
inline Scenario load_config(const std::string& path_or_preset) {
  if (std::filesystem::is_regular_file(path_or_preset)) {
    std::ifstream in(path_or_preset, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path_or_preset);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
  }
  if (auto p = preset(path_or_preset)) return *p;
  throw ConfigError("config: '" + path_or_preset + "' is neither a readable file nor a preset name");
}

}  // namespace netrec
