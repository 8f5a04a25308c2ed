#include "ttforge/graph.hpp"

#include <deque>
#include <sstream>

#include "ttforge/error.hpp"

namespace ttforge {

VertexId Graph::add_vertex(std::string name) {
  if (vertex_index_.contains(name)) {
    throw InvalidInput("duplicate vertex id '" + name + "'");
  }
  const VertexId v = num_vertices();
  vertex_index_.emplace(name, v);
  vertex_names_.push_back(std::move(name));
  star_.emplace_back();
  return v;
}

EdgeId Graph::add_edge(std::string name, VertexId from, VertexId to) {
  if (name.empty() || name.front() == '-' || name == "1" ||
      name.find_first_of(" \t\n") != std::string::npos) {
    throw InvalidInput("illegal edge id '" + name + "'");
  }
  if (edge_index_.contains(name)) {
    throw InvalidInput("duplicate edge id '" + name + "'");
  }
  if (from < 0 || from >= num_vertices() || to < 0 || to >= num_vertices()) {
    throw InvalidInput("edge '" + name + "' has an unknown endpoint");
  }
  const EdgeId e = num_edges();
  edge_index_.emplace(name, e);
  edge_names_.push_back(std::move(name));
  edge_from_.push_back(from);
  edge_to_.push_back(to);
  star_[from].push_back(Dart::along(e));
  star_[to].push_back(Dart::against(e));
  return e;
}

std::string Graph::dart_name(Dart d) const {
  return d.reversed() ? "-" + edge_names_[d.edge()] : edge_names_[d.edge()];
}

std::optional<VertexId> Graph::find_vertex(std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> Graph::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<Dart> Graph::parse_dart(std::string_view token) const {
  const bool inverse = !token.empty() && token.front() == '-';
  if (inverse) token.remove_prefix(1);
  auto e = find_edge(token);
  if (!e) return std::nullopt;
  return inverse ? Dart::against(*e) : Dart::along(*e);
}

bool Graph::is_connected() const {
  if (num_vertices() == 0) return true;
  std::vector<bool> seen(num_vertices(), false);
  std::deque<VertexId> queue{0};
  seen[0] = true;
  int count = 1;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (Dart d : star(v)) {
      const VertexId w = terminus(d);
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        queue.push_back(w);
      }
    }
  }
  return count == num_vertices();
}

bool operator==(const Graph& a, const Graph& b) {
  return a.vertex_names_ == b.vertex_names_ && a.edge_names_ == b.edge_names_ &&
         a.edge_from_ == b.edge_from_ && a.edge_to_ == b.edge_to_;
}

Path Path::of(const Graph& g, std::vector<Dart> darts) {
  if (darts.empty()) throw Error("Path::of needs at least one dart");
  const VertexId s = g.origin(darts.front());
  const VertexId t = g.terminus(darts.back());
  return Path{s, t, std::move(darts)};
}

bool is_path(const Graph& g, const Path& p) {
  if (p.start < 0 || p.start >= g.num_vertices()) return false;
  VertexId at = p.start;
  for (Dart d : p.darts) {
    if (d.id() < 0 || d.id() >= g.num_darts()) return false;
    if (g.origin(d) != at) return false;
    at = g.terminus(d);
  }
  return at == p.finish;
}

bool is_reduced(std::span<const Dart> darts) {
  for (std::size_t i = 1; i < darts.size(); ++i) {
    if (darts[i] == darts[i - 1].inverse()) return false;
  }
  return true;
}

bool is_cyclically_reduced(std::span<const Dart> darts) {
  if (!is_reduced(darts)) return false;
  return darts.empty() || darts.front() != darts.back().inverse();
}

Path reverse(const Path& p) {
  Path r{p.finish, p.start, {}};
  r.darts.reserve(p.darts.size());
  for (auto it = p.darts.rbegin(); it != p.darts.rend(); ++it) {
    r.darts.push_back(it->inverse());
  }
  return r;
}

void append(Path& p, const Path& q) {
  if (p.finish != q.start) throw Error("append: paths are not composable");
  p.darts.insert(p.darts.end(), q.darts.begin(), q.darts.end());
  p.finish = q.finish;
}

Path concat(const Path& p, const Path& q) {
  Path r = p;
  append(r, q);
  return r;
}

Path tighten(const Path& p) {
  Path r{p.start, p.finish, {}};
  r.darts.reserve(p.darts.size());
  for (Dart d : p.darts) {
    if (!r.darts.empty() && r.darts.back() == d.inverse()) {
      r.darts.pop_back();
    } else {
      r.darts.push_back(d);
    }
  }
  return r;
}

std::string to_string(const Graph& g, std::span<const Dart> darts) {
  std::string out;
  for (Dart d : darts) {
    if (!out.empty()) out += ' ';
    out += g.dart_name(d);
  }
  return out;
}

std::string to_string(const Graph& g, const Path& p) {
  return to_string(g, std::span<const Dart>(p.darts));
}

Path parse_path(const Graph& g, std::string_view text,
                std::optional<VertexId> trivial_at) {
  std::istringstream in{std::string(text)};
  std::vector<Dart> darts;
  std::string token;
  while (in >> token) {
    if (token == "1") continue;
    auto d = g.parse_dart(token);
    if (!d) throw InvalidInput("unknown dart '" + token + "'");
    darts.push_back(*d);
  }
  if (darts.empty()) {
    if (!trivial_at) throw InvalidInput("empty path");
    return Path::trivial(*trivial_at);
  }
  Path p = Path::of(g, std::move(darts));
  if (!is_path(g, p)) {
    throw InvalidInput("darts of '" + std::string(text) + "' are not incident");
  }
  return p;
}

bool is_cyclic_path(const Graph& g, std::span<const Dart> loop) {
  if (loop.empty()) return false;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Dart next = loop[(i + 1) % loop.size()];
    if (g.terminus(loop[i]) != g.origin(next)) return false;
  }
  return true;
}

std::vector<Dart> spanning_tree(const Graph& g, VertexId root) {
  std::vector<Dart> parent(g.num_vertices(), Dart());
  std::vector<bool> seen(g.num_vertices(), false);
  std::deque<VertexId> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (Dart d : g.star(v)) {
      const VertexId w = g.terminus(d);
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = d;
        queue.push_back(w);
      }
    }
  }
  return parent;
}

Path tree_path(const Graph& g, const std::vector<Dart>& tree, VertexId root,
               VertexId v) {
  std::vector<Dart> rev;
  VertexId at = v;
  while (at != root) {
    const Dart d = tree[at];
    if (d.id() < 0) throw Error("tree_path: vertex not reached by the tree");
    rev.push_back(d);
    at = g.origin(d);
  }
  Path p{root, v, {rev.rbegin(), rev.rend()}};
  return p;
}

std::vector<EdgeId> non_tree_edges(const Graph& g,
                                   const std::vector<Dart>& tree) {
  std::vector<bool> in_tree(g.num_edges(), false);
  for (Dart d : tree) {
    if (d.id() >= 0) in_tree[d.edge()] = true;
  }
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!in_tree[e]) out.push_back(e);
  }
  return out;
}

Graph make_rose(const std::vector<std::string>& edge_names) {
  Graph g;
  const VertexId v = g.add_vertex("v");
  for (const auto& name : edge_names) g.add_edge(name, v, v);
  return g;
}

}  // namespace ttforge
