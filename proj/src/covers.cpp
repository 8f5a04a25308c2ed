#include "ttforge/covers.hpp"

#include "ttforge/error.hpp"

namespace ttforge {

LazyCover::LazyCover(SubgroupGraph core) : core_(std::move(core)), graph_(core_) {}

LazyCover::LazyCover(const LazyCover& other)
    : core_(other.core_), graph_(other.materialized()) {}

SubgroupGraph LazyCover::materialized() const {
  std::lock_guard lock(mutex_);
  return graph_;
}

int LazyCover::num_vertices() const {
  std::lock_guard lock(mutex_);
  return graph_.graph().num_vertices();
}

VertexId LazyCover::vertex_label(VertexId v) const {
  std::lock_guard lock(mutex_);
  return graph_.vertex_label(v);
}

namespace {

Dart grow(SubgroupGraph& g, const Graph& ambient, VertexId v, Dart a) {
  if (auto d = g.step(v, a)) return *d;
  const VertexId w = g.add_vertex(ambient.terminus(a));
  const EdgeId e = a.reversed() ? g.add_edge(w, v, a.edge())
                                : g.add_edge(v, w, a.edge());
  return a.reversed() ? Dart::against(e) : Dart::along(e);
}

}  // namespace

Dart LazyCover::step(VertexId v, Dart ambient_dart) {
  std::lock_guard lock(mutex_);
  return grow(graph_, ambient(), v, ambient_dart);
}

Path LazyCover::lift_path(VertexId start, const Path& ambient_path) {
  std::lock_guard lock(mutex_);
  if (graph_.vertex_label(start) != ambient_path.start) {
    throw PreconditionFailed("lift_path: start vertex lies over " +
                             ambient().vertex_name(graph_.vertex_label(start)) +
                             ", path starts at " +
                             ambient().vertex_name(ambient_path.start));
  }
  Path out = Path::trivial(start);
  out.darts.reserve(ambient_path.darts.size());
  for (Dart a : ambient_path.darts) {
    const Dart d = grow(graph_, ambient(), out.finish, a);
    out.darts.push_back(d);
    out.finish = graph_.graph().terminus(d);
  }
  return out;
}

std::vector<VertexId> LazyCover::fiber_over(VertexId ambient_vertex,
                                            bool core_only) const {
  if (core_only) return core_.fiber(ambient_vertex);
  std::lock_guard lock(mutex_);
  return graph_.fiber(ambient_vertex);
}

bool LazyCover::trees_are_forests() const {
  std::lock_guard lock(mutex_);
  const Graph& g = graph_.graph();
  const int core_v = core_.graph().num_vertices();
  const int core_e = core_.graph().num_edges();
  // Each tree vertex is created together with exactly one edge joining it to
  // an older vertex, so counts agree and no tree edge joins two old vertices.
  if (g.num_vertices() - core_v != g.num_edges() - core_e) return false;
  for (EdgeId e = core_e; e < g.num_edges(); ++e) {
    const VertexId a = g.origin(Dart::along(e));
    const VertexId b = g.terminus(Dart::along(e));
    const VertexId newer = std::max(a, b);
    if (newer < core_v || newer != core_v + (e - core_e)) return false;
  }
  return true;
}

GraphMap projection_map(const SubgroupGraph& h) {
  const Graph& g = h.graph();
  std::vector<VertexId> vmap(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) vmap[v] = h.vertex_label(v);
  std::vector<Path> images;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    images.push_back(Path::single(h.ambient(), Dart::along(h.edge_label(e))));
  }
  return GraphMap(h.graph_ptr(), h.ambient_ptr(), std::move(vmap),
                  std::move(images));
}

bool commutes(const LiftedMap& lift) {
  const Graph& dom = lift.map.domain();
  for (EdgeId e = 0; e < dom.num_edges(); ++e) {
    const Dart d = Dart::along(e);
    const Path down = lift.target.project(lift.map.image(d));
    Path expected;
    if (lift.source) {
      expected = lift.base_map.image(lift.source->label(d));
    } else {
      expected = lift.base_map.image(d);
    }
    if (down != expected) return false;
  }
  for (VertexId v = 0; v < dom.num_vertices(); ++v) {
    const VertexId below = lift.source ? lift.source->vertex_label(v) : v;
    if (lift.target.vertex_label(lift.map.vertex_image(v)) !=
        lift.base_map.vertex_image(below)) {
      return false;
    }
  }
  return true;
}

namespace {

/// Lifts base_map ∘ (labels of the domain) edge by edge. Vertex images are
/// found first along a spanning tree rooted at `root`.
LiftedMap assemble(const GraphMap& base_map, const Graph& domain,
                   GraphPtr domain_ptr, const std::optional<SubgroupGraph>& source,
                   LazyCover& cover, VertexId root, VertexId root_image) {
  auto below = [&](Dart d) { return source ? source->label(d) : d; };
  const auto tree = spanning_tree(domain, root);
  std::vector<VertexId> vmap(domain.num_vertices(), -1);
  vmap[root] = root_image;
  // Breadth-first order of the tree: parents come first.
  std::vector<VertexId> order{root};
  std::vector<std::vector<VertexId>> children(domain.num_vertices());
  for (VertexId v = 0; v < domain.num_vertices(); ++v) {
    if (v != root) {
      if (tree[v].id() < 0) throw PreconditionFailed("lift: domain is disconnected");
      children[domain.origin(tree[v])].push_back(v);
    }
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (VertexId c : children[order[i]]) {
      const Path img = cover.lift_path(vmap[order[i]], base_map.image(below(tree[c])));
      vmap[c] = img.finish;
      order.push_back(c);
    }
  }
  std::vector<Path> images;
  for (EdgeId e = 0; e < domain.num_edges(); ++e) {
    const Dart d = Dart::along(e);
    Path img = cover.lift_path(vmap[domain.origin(d)], base_map.image(below(d)));
    if (img.finish != vmap[domain.terminus(d)]) {
      throw NotLiftable("lift: image of edge " + domain.edge_name(e) +
                        " does not close up");
    }
    images.push_back(std::move(img));
  }
  SubgroupGraph target = cover.materialized();
  GraphMap map(std::move(domain_ptr), target.graph_ptr(), std::move(vmap),
               std::move(images));
  return LiftedMap{std::move(map), std::move(target), base_map, source};
}

/// Generator loops of the core at `v`.
std::vector<Path> loops_at(const SubgroupGraph& core, VertexId v) {
  const Graph& g = core.graph();
  const auto tree = spanning_tree(g, v);
  std::vector<Path> out;
  for (EdgeId e : non_tree_edges(g, tree)) {
    const Dart d = Dart::along(e);
    Path loop = tree_path(g, tree, v, g.origin(d));
    append(loop, Path::single(g, d));
    append(loop, reverse(tree_path(g, tree, v, g.terminus(d))));
    out.push_back(std::move(loop));
  }
  return out;
}

bool closes_in_core(const SubgroupGraph& core, VertexId from, const Path& loop) {
  auto lifted = core.read(from, tighten(loop));
  return lifted && lifted->finish == from;
}

}  // namespace

LiftedMap based_lift(const GraphMap& fm, LazyCover& cover, VertexId cover_base) {
  if (!fm.is_self_map()) throw PreconditionFailed("based_lift: not a self-map");
  const VertexId v = cover.core().vertex_label(cover.base());
  if (cover.vertex_label(cover_base) != fm.vertex_image(v)) {
    throw PreconditionFailed("based_lift: cover basepoint is not over f^m(v)");
  }
  const Graph& theta = fm.domain();
  const auto tree = spanning_tree(theta, v);
  for (EdgeId e : non_tree_edges(theta, tree)) {
    const Dart d = Dart::along(e);
    Path loop = tree_path(theta, tree, v, theta.origin(d));
    append(loop, Path::single(theta, d));
    append(loop, reverse(tree_path(theta, tree, v, theta.terminus(d))));
    const Path image = apply_path(fm, loop, Reduce::kYes);
    bool closed;
    if (cover.in_core(cover_base)) {
      closed = closes_in_core(cover.core(), cover_base, image);
    } else {
      closed = cover.lift_path(cover_base, image).finish == cover_base;
    }
    if (!closed) {
      throw PreconditionFailed(
          "based_lift: image of pi_1 is not contained in the cover subgroup");
    }
  }
  return assemble(fm, theta, fm.domain_ptr(), std::nullopt, cover, v, cover_base);
}

LiftedMap based_lift_power(const GraphMap& f, int m, LazyCover& cover,
                           VertexId cover_base) {
  return based_lift(power(f, m), cover, cover_base);
}

std::optional<LiftedMap> lift_graph_map_to(const GraphMap& f, LazyCover& cover,
                                           VertexId source_base, VertexId target) {
  const SubgroupGraph& core = cover.core();
  if (!f.is_self_map() || !same_graph(f.domain_ptr(), core.ambient_ptr())) {
    throw PreconditionFailed("lift_graph_map: f is not a self-map of the base graph");
  }
  if (!cover.in_core(source_base)) {
    throw PreconditionFailed("lift_graph_map: source base is not a core vertex");
  }
  if (cover.vertex_label(target) != f.vertex_image(core.vertex_label(source_base))) {
    return std::nullopt;
  }
  for (const Path& loop : loops_at(core, source_base)) {
    const Path image = apply_path(f, core.project(loop), Reduce::kYes);
    const bool closed = cover.in_core(target)
                            ? closes_in_core(core, target, image)
                            : cover.lift_path(target, image).finish == target;
    if (!closed) return std::nullopt;
  }
  return assemble(f, core.graph(), core.graph_ptr(), core, cover, source_base,
                  target);
}

LiftedMap lift_graph_map(const GraphMap& f, LazyCover& cover, VertexId source_base) {
  const VertexId below = f.vertex_image(cover.core().vertex_label(source_base));
  for (VertexId y : cover.fiber_over(below, true)) {
    if (auto lift = lift_graph_map_to(f, cover, source_base, y)) return *lift;
  }
  throw NotLiftable("lift_graph_map: no core vertex over " +
                    f.domain().vertex_name(below) + " admits a lift");
}

GraphMap restrict_to_core(const LiftedMap& lift, const LazyCover& cover) {
  const GraphMap& m = lift.map;
  std::vector<VertexId> vmap = m.vertex_map();
  for (VertexId v : vmap) {
    if (!cover.in_core(v)) throw Inconsistency("restrict_to_core: vertex leaves the core");
  }
  std::vector<Path> images;
  for (EdgeId e = 0; e < m.domain().num_edges(); ++e) {
    const Path& img = m.edge_image(e);
    for (Dart d : img.darts) {
      if (!cover.in_core(d)) {
        throw Inconsistency("restrict_to_core: image of " + m.domain().edge_name(e) +
                            " leaves the core");
      }
    }
    images.push_back(img);
  }
  return GraphMap(m.domain_ptr(), cover.core().graph_ptr(), std::move(vmap),
                  std::move(images));
}

}  // namespace ttforge
