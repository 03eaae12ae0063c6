#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netrec/bitset.hpp"
#include "netrec/types.hpp"

namespace netrec {

/// How an edge came to exist. Immutable once assigned.
enum class Provenance : std::uint8_t { Initial, Stranger, FriendUnmediated, FriendMediated, Algorithmic };

inline constexpr std::array<Provenance, 5> kProvenances{Provenance::Initial, Provenance::Stranger,
                                                        Provenance::FriendUnmediated, Provenance::FriendMediated,
                                                        Provenance::Algorithmic};

constexpr std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Initial: return "initial";
    case Provenance::Stranger: return "stranger";
    case Provenance::FriendUnmediated: return "friend_unmediated";
    case Provenance::FriendMediated: return "friend_mediated";
    case Provenance::Algorithmic: return "algorithmic";
  }
  return "unknown";
}

inline std::optional<Provenance> parse_provenance(std::string_view s) noexcept {
  for (auto p : kProvenances) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

constexpr bool is_friend_edge(Provenance p) noexcept {
  return p == Provenance::FriendUnmediated || p == Provenance::FriendMediated;
}

/// Predicate over provenances, used to restrict 2-paths.
class ProvenanceFilter {
 public:
  constexpr ProvenanceFilter() = default;

  static constexpr ProvenanceFilter all() noexcept { return ProvenanceFilter(kAllBits); }
  /// Every edge that was not created by the recommender. Mediated friend
  /// edges count as organic.
  static constexpr ProvenanceFilter organic() noexcept {
    return ProvenanceFilter(kAllBits & ~bit(Provenance::Algorithmic));
  }
  static constexpr ProvenanceFilter only(Provenance p) noexcept { return ProvenanceFilter(bit(p)); }

  constexpr bool accepts(Provenance p) const noexcept { return (mask_ & bit(p)) != 0; }
  constexpr ProvenanceFilter operator|(ProvenanceFilter o) const noexcept { return ProvenanceFilter(mask_ | o.mask_); }
  constexpr bool operator==(const ProvenanceFilter&) const = default;

 private:
  static constexpr std::uint8_t kAllBits = 0x1f;
  static constexpr std::uint8_t bit(Provenance p) noexcept {
    return static_cast<std::uint8_t>(1U << static_cast<unsigned>(p));
  }
  constexpr explicit ProvenanceFilter(std::uint8_t mask) : mask_(mask) {}

  std::uint8_t mask_ = kAllBits;
};

struct Node {
  NodeId id;
  int group = 0;
  std::vector<double> embedding;
  Timestep birth_time = 0;
  bool alive = true;

  Timestep age(Timestep now) const noexcept { return now - birth_time; }
};

struct Neighbor {
  NodeId id;
  Provenance provenance;
  Timestep created_at;
};

struct Edge {
  NodeId u;
  NodeId v;
  Provenance provenance;
  Timestep created_at;

  bool operator==(const Edge&) const = default;
};

enum class RemovalReason : std::uint8_t { None, Departure, Rewire };

struct LedgerEvent {
  enum class Kind : std::uint8_t { NodeArrival, EdgeAdded, EdgeRemoved, NodeRemoved };

  Kind kind;
  Timestep t;
  NodeId u;
  NodeId v;
  Provenance provenance = Provenance::Initial;
  RemovalReason reason = RemovalReason::None;
};

/// Undirected simple graph with provenance-tagged edges, an append-only
/// event ledger and per-node triangle counts kept current on every edge
/// change.
///
/// Adjacency is stored twice: as neighbor lists (iteration, provenance) and
/// as bit rows (O(n/64) membership, set algebra for distance-2 queries and
/// common-neighbor counts). A second bit matrix holds only organic
/// (non-algorithmic) edges.
class Graph {
 public:
  explicit Graph(std::size_t embedding_dim) : dim_(embedding_dim) {
    if (dim_ == 0) throw ConfigError("embedding dimension must be positive");
  }

  std::size_t embedding_dim() const noexcept { return dim_; }

  NodeId add_node(int group, std::vector<double> embedding, Timestep t) {
    if (embedding.size() != dim_) {
      throw ConfigError("embedding has dimension " + std::to_string(embedding.size()) + ", expected " +
                        std::to_string(dim_));
    }
    const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
    flat_embeddings_.insert(flat_embeddings_.end(), embedding.begin(), embedding.end());
    nodes_.push_back(Node{id, group, std::move(embedding), t, true});
    adjacency_.emplace_back();
    triangles_.push_back(0);
    all_bits_.add_row();
    organic_bits_.add_row();
    alive_.push_back(id);
    ledger_.push_back({LedgerEvent::Kind::NodeArrival, t, id, id});
    touch(t);
    return id;
  }

  /// Returns false, leaving the graph untouched, when the edge already exists.
  bool add_edge(NodeId u, NodeId v, Provenance p, Timestep t) {
    require_alive(u, "add_edge");
    require_alive(v, "add_edge");
    if (u == v) throw std::logic_error("add_edge: self-loop on node " + std::to_string(u.value));
    if (all_bits_.test(u.index(), v.index())) return false;

    update_triangles(u, v, +1);
    adjacency_[u.index()].push_back({v, p, t});
    adjacency_[v.index()].push_back({u, p, t});
    set_bits(u, v, p, true);
    ++edge_count_;
    ledger_.push_back({LedgerEvent::Kind::EdgeAdded, t, u, v, p});
    touch(t);
    return true;
  }

  bool remove_edge(NodeId u, NodeId v, Timestep t, RemovalReason reason) {
    require_known(u, "remove_edge");
    require_known(v, "remove_edge");
    if (u == v || !all_bits_.test(u.index(), v.index())) return false;
    const Provenance p = erase_neighbor(u, v);
    erase_neighbor(v, u);
    set_bits(u, v, p, false);
    update_triangles(u, v, -1);
    --edge_count_;
    ledger_.push_back({LedgerEvent::Kind::EdgeRemoved, t, u, v, p, reason});
    touch(t);
    return true;
  }

  /// Marks `u` dead and drops its incident edges. The node stays in the table.
  std::size_t remove_node(NodeId u, Timestep t) {
    require_alive(u, "remove_node");
    std::vector<NodeId> incident;
    incident.reserve(adjacency_[u.index()].size());
    for (const auto& nb : adjacency_[u.index()]) incident.push_back(nb.id);
    std::sort(incident.begin(), incident.end());
    for (NodeId v : incident) remove_edge(u, v, t, RemovalReason::Departure);
    nodes_[u.index()].alive = false;
    alive_.erase(std::lower_bound(alive_.begin(), alive_.end(), u));
    ledger_.push_back({LedgerEvent::Kind::NodeRemoved, t, u, u});
    touch(t);
    return incident.size();
  }

  bool contains(NodeId u) const noexcept { return u.index() < nodes_.size(); }
  bool is_alive(NodeId u) const noexcept { return contains(u) && nodes_[u.index()].alive; }

  const Node& node(NodeId u) const {
    require_known(u, "node");
    return nodes_[u.index()];
  }
  std::span<const Node> nodes() const noexcept { return nodes_; }
  /// Alive node ids in ascending order.
  std::span<const NodeId> alive_nodes() const noexcept { return alive_; }
  std::size_t alive_count() const noexcept { return alive_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const double> embedding(NodeId u) const noexcept { return {flat_embeddings_.data() + u.index() * dim_, dim_}; }

  std::span<const Neighbor> neighbors(NodeId u) const { return adjacency_.at(u.index()); }
  std::size_t degree(NodeId u) const { return adjacency_.at(u.index()).size(); }

  bool has_edge(NodeId u, NodeId v) const noexcept {
    return contains(u) && contains(v) && all_bits_.test(u.index(), v.index());
  }

  std::optional<Provenance> provenance(NodeId u, NodeId v) const {
    if (!has_edge(u, v)) return std::nullopt;
    const auto& a = adjacency_[u.index()].size() <= adjacency_[v.index()].size() ? adjacency_[u.index()]
                                                                                  : adjacency_[v.index()];
    const NodeId other = &a == &adjacency_[u.index()] ? v : u;
    for (const auto& nb : a) {
      if (nb.id == other) return nb.provenance;
    }
    return std::nullopt;
  }

  /// Number of edges among the neighbors of `u`.
  std::int64_t triangles(NodeId u) const { return triangles_.at(u.index()); }

  /// Adjacency bit row of `u`, restricted to organic edges when requested.
  std::span<const std::uint64_t> adjacency_row(NodeId u, bool organic_only = false) const noexcept {
    return organic_only ? organic_bits_.row(u.index()) : all_bits_.row(u.index());
  }

  std::size_t row_words() const noexcept { return all_bits_.stride(); }

  std::size_t common_neighbor_count(NodeId u, NodeId v) const noexcept {
    const auto a = all_bits_.row(u.index());
    const auto b = all_bits_.row(v.index());
    std::size_t c = 0;
    for (std::size_t k = 0; k < a.size(); ++k) c += static_cast<std::size_t>(std::popcount(a[k] & b[k]));
    return c;
  }

  /// True when some x has edges u-x and x-w that both pass `filter`.
  bool has_common_neighbor(NodeId u, NodeId w, ProvenanceFilter filter) const {
    if (filter == ProvenanceFilter::all() || filter == ProvenanceFilter::organic()) {
      const bool organic = filter == ProvenanceFilter::organic();
      const auto a = adjacency_row(u, organic);
      const auto b = adjacency_row(w, organic);
      for (std::size_t k = 0; k < a.size(); ++k) {
        if ((a[k] & b[k]) != 0) return true;
      }
      return false;
    }
    for (const auto& nb : adjacency_[u.index()]) {
      if (!filter.accepts(nb.provenance)) continue;
      if (auto p = provenance(nb.id, w); p && filter.accepts(*p)) return true;
    }
    return false;
  }

  /// Nodes w != u, not adjacent to u under the full edge set, reachable by a
  /// 2-path whose edges both pass `filter`.
  NodeSet distance2_set(NodeId u, ProvenanceFilter filter = ProvenanceFilter::all()) const {
    require_alive(u, "distance2");
    NodeSet out(all_bits_.stride());
    auto words = out.words();
    const bool fast = filter == ProvenanceFilter::all() || filter == ProvenanceFilter::organic();
    const bool organic = filter == ProvenanceFilter::organic();
    for (const auto& nb : adjacency_[u.index()]) {
      if (!filter.accepts(nb.provenance)) continue;
      if (fast) {
        const auto row = adjacency_row(nb.id, organic);
        for (std::size_t k = 0; k < words.size(); ++k) words[k] |= row[k];
      } else {
        for (const auto& nb2 : adjacency_[nb.id.index()]) {
          if (filter.accepts(nb2.provenance)) out.insert(nb2.id);
        }
      }
    }
    const auto own = all_bits_.row(u.index());
    for (std::size_t k = 0; k < words.size(); ++k) words[k] &= ~own[k];
    out.erase(u);
    return out;
  }

  std::vector<NodeId> distance2(NodeId u, ProvenanceFilter filter = ProvenanceFilter::all()) const {
    return distance2_set(u, filter).to_vector();
  }

  /// Degrees of alive nodes satisfying `pred`, ascending.
  template <class Pred>
  std::vector<std::size_t> degree_sequence(Pred&& pred) const {
    std::vector<std::size_t> out;
    for (NodeId u : alive_) {
      if (pred(nodes_[u.index()])) out.push_back(adjacency_[u.index()].size());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::size_t> degree_sequence() const {
    return degree_sequence([](const Node&) { return true; });
  }

  /// Alive edges with u < v, sorted by (u, v).
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u : alive_) {
      for (const auto& nb : adjacency_[u.index()]) {
        if (u < nb.id) out.push_back({u, nb.id, nb.provenance, nb.created_at});
      }
    }
    std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    return out;
  }

  std::span<const LedgerEvent> ledger() const noexcept { return ledger_; }
  Timestep current_time() const noexcept { return now_; }

 private:
  void touch(Timestep t) noexcept { now_ = std::max(now_, t); }

  void require_known(NodeId u, const char* op) const {
    if (!contains(u)) throw std::logic_error(std::string(op) + ": unknown node " + std::to_string(u.value));
  }
  void require_alive(NodeId u, const char* op) const {
    require_known(u, op);
    if (!nodes_[u.index()].alive) throw std::logic_error(std::string(op) + ": node " + std::to_string(u.value) + " is dead");
  }

  void set_bits(NodeId u, NodeId v, Provenance p, bool on) noexcept {
    auto apply = [&](BitMatrix& m) {
      if (on) {
        m.set(u.index(), v.index());
        m.set(v.index(), u.index());
      } else {
        m.reset(u.index(), v.index());
        m.reset(v.index(), u.index());
      }
    };
    apply(all_bits_);
    if (p != Provenance::Algorithmic) apply(organic_bits_);
  }

  // Called while the u-v bit is clear, so common neighbors exclude u and v.
  void update_triangles(NodeId u, NodeId v, std::int64_t sign) noexcept {
    const auto a = all_bits_.row(u.index());
    const auto b = all_bits_.row(v.index());
    std::int64_t shared = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      for (auto bits = a[k] & b[k]; bits != 0; bits &= bits - 1) {
        triangles_[k * 64 + static_cast<std::size_t>(std::countr_zero(bits))] += sign;
        ++shared;
      }
    }
    triangles_[u.index()] += sign * shared;
    triangles_[v.index()] += sign * shared;
  }

  Provenance erase_neighbor(NodeId u, NodeId v) {
    auto& list = adjacency_[u.index()];
    auto it = std::find_if(list.begin(), list.end(), [v](const Neighbor& nb) { return nb.id == v; });
    const Provenance p = it->provenance;
    *it = list.back();
    list.pop_back();
    return p;
  }

  std::size_t dim_;
  std::vector<Node> nodes_;
  std::vector<double> flat_embeddings_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::int64_t> triangles_;
  BitMatrix all_bits_;
  BitMatrix organic_bits_;
  std::vector<NodeId> alive_;
  std::size_t edge_count_ = 0;
  std::vector<LedgerEvent> ledger_;
  Timestep now_ = 0;
};

/// Rebuilds a graph by replaying `source`'s ledger against its node table.
inline Graph replay_ledger(const Graph& source) {
  Graph g(source.embedding_dim());
  for (const auto& ev : source.ledger()) {
    switch (ev.kind) {
      case LedgerEvent::Kind::NodeArrival: {
        const Node& n = source.node(ev.u);
        g.add_node(n.group, n.embedding, ev.t);
        break;
      }
      case LedgerEvent::Kind::EdgeAdded: g.add_edge(ev.u, ev.v, ev.provenance, ev.t); break;
      case LedgerEvent::Kind::EdgeRemoved:
        // Departure removals are re-derived by the NodeRemoved event.
        if (ev.reason != RemovalReason::Departure) g.remove_edge(ev.u, ev.v, ev.t, ev.reason);
        break;
      case LedgerEvent::Kind::NodeRemoved: g.remove_node(ev.u, ev.t); break;
    }
  }
  return g;
}

/// Same alive node set and identical provenance-tagged edge sets.
inline bool same_structure(const Graph& a, const Graph& b) {
  if (a.node_count() != b.node_count()) return false;
  if (!std::equal(a.alive_nodes().begin(), a.alive_nodes().end(), b.alive_nodes().begin(), b.alive_nodes().end())) {
    return false;
  }
  return a.edges() == b.edges();
}

}  // namespace netrec
