#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ttforge {

using VertexId = int;
using EdgeId = int;

/// Oriented edge of a Serre graph. Edge `e` owns the two darts `2e` (along
/// the edge's stored orientation) and `2e + 1` (against it); the involution
/// flips the low bit, so it is fixed-point free by construction.
class Dart {
 public:
  constexpr Dart() = default;
  constexpr explicit Dart(int id) : id_(id) {}

  static constexpr Dart along(EdgeId e) { return Dart(2 * e); }
  static constexpr Dart against(EdgeId e) { return Dart(2 * e + 1); }

  constexpr int id() const { return id_; }
  constexpr EdgeId edge() const { return id_ >> 1; }
  constexpr bool reversed() const { return (id_ & 1) != 0; }
  constexpr Dart inverse() const { return Dart(id_ ^ 1); }

  friend constexpr auto operator<=>(Dart, Dart) = default;

 private:
  int id_ = -1;
};

/// Finite graph in the sense of Serre. Vertices and edges carry stable
/// string names; the dart of edge `a` taken backwards is printed `-a`.
class Graph {
 public:
  VertexId add_vertex(std::string name);
  EdgeId add_edge(std::string name, VertexId from, VertexId to);

  int num_vertices() const { return static_cast<int>(vertex_names_.size()); }
  int num_edges() const { return static_cast<int>(edge_names_.size()); }
  int num_darts() const { return 2 * num_edges(); }

  VertexId origin(Dart d) const {
    return d.reversed() ? edge_to_[d.edge()] : edge_from_[d.edge()];
  }
  VertexId terminus(Dart d) const { return origin(d.inverse()); }

  /// Darts with origin `v`, ascending by id. A loop contributes both darts.
  std::span<const Dart> star(VertexId v) const { return star_[v]; }
  int valence(VertexId v) const { return static_cast<int>(star_[v].size()); }

  const std::string& vertex_name(VertexId v) const { return vertex_names_[v]; }
  const std::string& edge_name(EdgeId e) const { return edge_names_[e]; }
  std::string dart_name(Dart d) const;

  std::optional<VertexId> find_vertex(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;
  /// Parses `a` or `-a`.
  std::optional<Dart> parse_dart(std::string_view token) const;

  /// Rank of the fundamental group, assuming the graph is connected.
  int rank() const { return num_edges() - num_vertices() + 1; }
  bool is_connected() const;

  friend bool operator==(const Graph& a, const Graph& b);

 private:
  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::vector<VertexId> edge_from_;
  std::vector<VertexId> edge_to_;
  std::vector<std::vector<Dart>> star_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
};

/// Edge path. A path with no darts is the trivial path at `start`.
struct Path {
  VertexId start = -1;
  VertexId finish = -1;
  std::vector<Dart> darts;

  static Path trivial(VertexId v) { return Path{v, v, {}}; }
  static Path single(const Graph& g, Dart d) {
    return Path{g.origin(d), g.terminus(d), {d}};
  }
  /// Builds a path from a nonempty dart sequence; does not check incidence.
  static Path of(const Graph& g, std::vector<Dart> darts);

  bool is_trivial() const { return darts.empty(); }
  std::size_t length() const { return darts.size(); }
  bool is_closed() const { return start == finish; }

  friend bool operator==(const Path&, const Path&) = default;
};

/// True when consecutive darts are incident and the endpoints are consistent.
bool is_path(const Graph& g, const Path& p);
/// No subword of the form `d d^-1`.
bool is_reduced(std::span<const Dart> darts);
/// Cyclically reduced as a closed word (also checks the wrap-around turn).
bool is_cyclically_reduced(std::span<const Dart> darts);

Path reverse(const Path& p);
Path concat(const Path& p, const Path& q);
void append(Path& p, const Path& q);
/// Free reduction; idempotent and never increases length.
Path tighten(const Path& p);

std::string to_string(const Graph& g, std::span<const Dart> darts);
std::string to_string(const Graph& g, const Path& p);
/// Parses space-separated dart tokens. An empty string (or the token `1`)
/// yields the trivial path at `trivial_at`, which must then be given.
Path parse_path(const Graph& g, std::string_view text,
                std::optional<VertexId> trivial_at = std::nullopt);

/// Closed dart sequence `d_0 ... d_{n-1}` with terminus(d_{n-1}) = origin(d_0).
using CyclicPath = std::vector<Dart>;

bool is_cyclic_path(const Graph& g, std::span<const Dart> loop);

/// Breadth-first spanning tree rooted at `root`: for every vertex the dart
/// through which it was reached (invalid Dart for the root). Darts are
/// scanned in id order, so the tree is deterministic.
std::vector<Dart> spanning_tree(const Graph& g, VertexId root);
/// Tree path from the root to `v`.
Path tree_path(const Graph& g, const std::vector<Dart>& tree, VertexId root,
               VertexId v);
/// Edges not in the tree, ascending.
std::vector<EdgeId> non_tree_edges(const Graph& g,
                                   const std::vector<Dart>& tree);

/// The rose with one vertex `v` and one loop per name.
Graph make_rose(const std::vector<std::string>& edge_names);

}  // namespace ttforge
