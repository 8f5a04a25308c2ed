#include "ttforge/graph_map.hpp"

#include "ttforge/error.hpp"

namespace ttforge {

GraphMap::GraphMap(GraphPtr domain, GraphPtr codomain,
                   std::vector<VertexId> vertex_map,
                   std::vector<Path> edge_images)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      vertex_map_(std::move(vertex_map)) {
  if (!domain_ || !codomain_) throw Error("GraphMap needs both graphs");
  if (static_cast<int>(edge_images.size()) != domain_->num_edges() ||
      static_cast<int>(vertex_map_.size()) != domain_->num_vertices()) {
    throw InvalidInput("graph map tables do not match the domain");
  }
  dart_images_.reserve(edge_images.size() * 2);
  for (auto& p : edge_images) {
    Path back = reverse(p);
    dart_images_.push_back(std::move(p));
    dart_images_.push_back(std::move(back));
  }
}

GraphMap GraphMap::identity(GraphPtr g) {
  std::vector<VertexId> vmap(g->num_vertices());
  for (VertexId v = 0; v < g->num_vertices(); ++v) vmap[v] = v;
  std::vector<Path> images;
  images.reserve(g->num_edges());
  for (EdgeId e = 0; e < g->num_edges(); ++e) {
    images.push_back(Path::single(*g, Dart::along(e)));
  }
  return GraphMap(g, g, std::move(vmap), std::move(images));
}

bool same_graph(const GraphPtr& a, const GraphPtr& b) {
  return a == b || *a == *b;
}

bool GraphMap::is_self_map() const { return same_graph(domain_, codomain_); }

bool operator==(const GraphMap& a, const GraphMap& b) {
  return same_graph(a.domain_, b.domain_) &&
         same_graph(a.codomain_, b.codomain_) &&
         a.vertex_map_ == b.vertex_map_ && a.dart_images_ == b.dart_images_;
}

std::string to_string(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kShape: return "shape mismatch";
    case Violation::Kind::kEdgeCollapsed: return "edge collapsed";
    case Violation::Kind::kNotAPath: return "not a path";
    case Violation::Kind::kBadEndpoints: return "endpoints not respected";
    case Violation::Kind::kNotImmersed: return "not immersed";
  }
  return "unknown";
}

std::optional<Violation> validate(const GraphMap& g) {
  const Graph& dom = g.domain();
  const Graph& cod = g.codomain();
  for (VertexId v = 0; v < dom.num_vertices(); ++v) {
    const VertexId w = g.vertex_image(v);
    if (w < 0 || w >= cod.num_vertices()) {
      return Violation{Violation::Kind::kShape,
                       "vertex " + dom.vertex_name(v) + " has no image"};
    }
  }
  for (EdgeId e = 0; e < dom.num_edges(); ++e) {
    const Dart d = Dart::along(e);
    const Path& p = g.image(d);
    const std::string& name = dom.edge_name(e);
    if (p.is_trivial()) {
      return Violation{Violation::Kind::kEdgeCollapsed, "edge " + name};
    }
    if (!is_path(cod, p)) {
      return Violation{Violation::Kind::kNotAPath, "image of edge " + name};
    }
    if (p.start != g.vertex_image(dom.origin(d)) ||
        p.finish != g.vertex_image(dom.terminus(d))) {
      return Violation{Violation::Kind::kBadEndpoints, "edge " + name};
    }
    if (!is_reduced(p.darts)) {
      return Violation{Violation::Kind::kNotImmersed,
                       "image of edge " + name + " = " + to_string(cod, p)};
    }
  }
  return std::nullopt;
}

Path apply_path(const GraphMap& g, const Path& p, Reduce reduce) {
  Path out = Path::trivial(g.vertex_image(p.start));
  for (Dart d : p.darts) {
    const Path& img = g.image(d);
    out.darts.insert(out.darts.end(), img.darts.begin(), img.darts.end());
  }
  out.finish = g.vertex_image(p.finish);
  return reduce == Reduce::kYes ? tighten(out) : out;
}

GraphMap compose(const GraphMap& g, const GraphMap& h, Reduce reduce) {
  if (!same_graph(h.codomain_ptr(), g.domain_ptr())) {
    throw PreconditionFailed("compose: codomain of the inner map is not the "
                             "domain of the outer map");
  }
  const Graph& dom = h.domain();
  std::vector<VertexId> vmap(dom.num_vertices());
  for (VertexId v = 0; v < dom.num_vertices(); ++v) {
    vmap[v] = g.vertex_image(h.vertex_image(v));
  }
  std::vector<Path> images;
  images.reserve(dom.num_edges());
  for (EdgeId e = 0; e < dom.num_edges(); ++e) {
    Path p = apply_path(g, h.edge_image(e), reduce);
    if (p.is_trivial()) {
      throw PreconditionFailed("compose: edge " + dom.edge_name(e) +
                               " collapses after reduction");
    }
    images.push_back(std::move(p));
  }
  return GraphMap(h.domain_ptr(), g.codomain_ptr(), std::move(vmap),
                  std::move(images));
}

GraphMap power(const GraphMap& f, int n, Reduce reduce) {
  if (!f.is_self_map()) throw PreconditionFailed("power: not a self-map");
  if (n < 0) throw PreconditionFailed("power: negative exponent");
  GraphMap result = GraphMap::identity(f.domain_ptr());
  for (int i = 0; i < n; ++i) result = compose(f, result, reduce);
  return result;
}

CyclicPath apply_cyclic(const GraphMap& f, const CyclicPath& loop) {
  CyclicPath out;
  for (Dart d : loop) {
    const Path& img = f.image(d);
    out.insert(out.end(), img.darts.begin(), img.darts.end());
  }
  return out;
}

}  // namespace ttforge
