#pragma once

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "netrec/engine.hpp"

namespace netrec {

/// 12 significant digits, shortest of fixed/scientific; empty for undefined.
inline std::string format_value(double v) {
  if (is_undefined(v)) return {};
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
  return std::string(buf.data(), res.ptr);
}

/// Inverse of format_value: empty text is undefined.
inline double parse_value(std::string_view text) {
  if (text.empty()) return kUndefined;
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a number: " + std::string(text));
  }
  return v;
}

inline std::size_t group_count(const Trajectory& tr) {
  return tr.rows.empty() ? 0 : tr.rows.front().homophily_by_group.size();
}

namespace detail {

inline void write_trajectory_rows(std::ostream& out, std::string_view prefix, std::size_t run_id, const Trajectory& tr) {
  const auto names = metric_names(group_count(tr));
  for (const auto& row : tr.rows) {
    for (const auto& m : names) {
      out << prefix << run_id << ',' << to_string(tr.mode) << ',' << tr.seed << ',' << row.t << ',' << m << ','
          << format_value(row.get(m)) << '\n';
    }
  }
}

}  // namespace detail

/// Long format `run_id,mode,seed,t,metric,value`; run_id is the position in `trajs`.
inline void write_trajectories(std::ostream& out, std::span<const Trajectory> trajs) {
  out << "run_id,mode,seed,t,metric,value\n";
  for (std::size_t k = 0; k < trajs.size(); ++k) detail::write_trajectory_rows(out, "", k, trajs[k]);
}

struct SweepResult {
  InterventionWindow window;
  std::vector<Trajectory> trajectories;
};

inline std::string format_window(const InterventionWindow& w) {
  return std::to_string(w.lo) + ":" + std::to_string(w.hi);
}

/// As write_trajectories with a leading `window` column; run_id keeps counting across windows.
inline void write_sweep(std::ostream& out, std::span<const SweepResult> sweep) {
  out << "window,run_id,mode,seed,t,metric,value\n";
  std::size_t run_id = 0;
  for (const auto& s : sweep) {
    const auto prefix = format_window(s.window) + ",";
    for (const auto& tr : s.trajectories) detail::write_trajectory_rows(out, prefix, run_id++, tr);
  }
}

/// One row per (metric, T); the interval columns bound the total effect.
inline void write_effects(std::ostream& out, std::span<const EffectRow> rows) {
  out << "metric,T,total,delayed,direct,indirect,ci_low,ci_high\n";
  for (const auto& r : rows) {
    out << r.metric << ',' << r.T << ',' << format_value(r.total.mean) << ',' << format_value(r.delayed.mean) << ','
        << format_value(r.direct.mean) << ',' << format_value(r.indirect.mean) << ',' << format_value(r.total.lo)
        << ',' << format_value(r.total.hi) << '\n';
  }
}

/// Every effect component with its own interval.
inline void write_effects_ci(std::ostream& out, std::span<const EffectRow> rows) {
  out << "metric,T,component,mean,ci_low,ci_high,n\n";
  for (const auto& r : rows) {
    const std::array<std::pair<std::string_view, const Band*>, 4> parts{
        {{"total", &r.total}, {"delayed", &r.delayed}, {"direct", &r.direct}, {"indirect", &r.indirect}}};
    for (const auto& [name, b] : parts) {
      out << r.metric << ',' << r.T << ',' << name << ',' << format_value(b->mean) << ',' << format_value(b->lo) << ','
          << format_value(b->hi) << ',' << b->n << '\n';
    }
  }
}

/// Seed mean and 95% interval per (mode, t, metric).
inline void write_aggregate(std::ostream& out, std::span<const AggregateTrajectory> aggs) {
  out << "mode,t,metric,mean,ci_low,ci_high,n\n";
  for (const auto& a : aggs) {
    if (a.bands.empty()) continue;
    for (std::size_t t = 0; t < a.bands.front().size(); ++t) {
      for (std::size_t m = 0; m < a.metrics.size(); ++m) {
        const auto& b = a.bands[m][t];
        out << to_string(a.mode) << ',' << t << ',' << a.metrics[m] << ',' << format_value(b.mean) << ','
            << format_value(b.lo) << ',' << format_value(b.hi) << ',' << b.n << '\n';
      }
    }
  }
}

/// Per-arm naive and adjusted A/B estimates for every AB trajectory.
inline void write_ab(std::ostream& out, std::span<const Trajectory> trajs) {
  out << "run_id,seed,t,metric,adjustment,treatment,control,difference\n";
  for (std::size_t k = 0; k < trajs.size(); ++k) {
    for (const auto& row : trajs[k].ab_rows) {
      for (auto metric : kABMetrics) {
        for (auto adj : {ABAdjustment::Adjusted, ABAdjustment::Naive}) {
          const auto e = ab_estimate(row, metric, adj);
          out << k << ',' << trajs[k].seed << ',' << row.t << ',' << metric << ',' << to_string(adj) << ','
              << format_value(e.treatment) << ',' << format_value(e.control) << ',' << format_value(e.difference)
              << '\n';
        }
      }
    }
  }
}

/// Alive edges, `u,v,provenance,created_at`, u < v, sorted.
inline void write_edges(std::ostream& out, const Graph& g) {
  out << "u,v,provenance,created_at\n";
  for (const auto& e : g.edges()) {
    out << e.u.value << ',' << e.v.value << ',' << to_string(e.provenance) << ',' << e.created_at << '\n';
  }
}

/// Every node ever created, `id,group,emb_0..emb_{d-1},birth_time,alive`.
inline void write_nodes(std::ostream& out, const Graph& g) {
  out << "id,group";
  for (std::size_t k = 0; k < g.embedding_dim(); ++k) out << ",emb_" << k;
  out << ",birth_time,alive\n";
  for (const auto& n : g.nodes()) {
    out << n.id.value << ',' << n.group;
    for (double x : n.embedding) out << ',' << format_value(x);
    out << ',' << n.birth_time << ',' << (n.alive ? 1 : 0) << '\n';
  }
}

/// Writes through a temporary stream and reports failures with the path.
inline void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

/// One parsed trajectory CSV row.
struct TrajectoryRecord {
  std::size_t run_id = 0;
  std::string mode;
  std::uint64_t seed = 0;
  Timestep t = 0;
  std::string metric;
  double value = kUndefined;
};

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline std::vector<TrajectoryRecord> read_trajectories(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "run_id,mode,seed,t,metric,value") {
    throw std::runtime_error("unexpected trajectory CSV header");
  }
  auto to_uint = [](std::string_view s) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw std::runtime_error("bad integer: " + std::string(s));
    return v;
  };
  std::vector<TrajectoryRecord> out;
  while (std::getline(in, line)) {
    const auto cells = split_csv_line(line);
    if (cells.size() != 6) throw std::runtime_error("expected 6 cells: " + line);
    out.push_back({static_cast<std::size_t>(to_uint(cells[0])), std::string(cells[1]), to_uint(cells[2]),
                   static_cast<Timestep>(to_uint(cells[3])), std::string(cells[4]), parse_value(cells[5])});
  }
  return out;
}

}  // namespace netrec
