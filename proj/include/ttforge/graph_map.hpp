#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ttforge/graph.hpp"

namespace ttforge {

using GraphPtr = std::shared_ptr<const Graph>;

/// Combinatorial map between graphs: vertices go to vertices and every dart
/// goes to an edge path. Only the images of the positive darts are given;
/// the image of `-e` is the reverse of the image of `e`.
class GraphMap {
 public:
  GraphMap(GraphPtr domain, GraphPtr codomain, std::vector<VertexId> vertex_map,
           std::vector<Path> edge_images);

  static GraphMap identity(GraphPtr g);

  const Graph& domain() const { return *domain_; }
  const Graph& codomain() const { return *codomain_; }
  const GraphPtr& domain_ptr() const { return domain_; }
  const GraphPtr& codomain_ptr() const { return codomain_; }

  VertexId vertex_image(VertexId v) const { return vertex_map_[v]; }
  const std::vector<VertexId>& vertex_map() const { return vertex_map_; }
  const Path& image(Dart d) const { return dart_images_[d.id()]; }
  const Path& edge_image(EdgeId e) const { return image(Dart::along(e)); }

  bool is_self_map() const;

  friend bool operator==(const GraphMap& a, const GraphMap& b);

 private:
  GraphPtr domain_;
  GraphPtr codomain_;
  std::vector<VertexId> vertex_map_;
  std::vector<Path> dart_images_;
};

/// Pointer-equal or structurally equal.
bool same_graph(const GraphPtr& a, const GraphPtr& b);

struct Violation {
  enum class Kind {
    kShape,           // vertex/edge tables do not match the domain
    kEdgeCollapsed,   // some edge maps to a trivial path
    kNotAPath,        // darts of an image are not incident
    kBadEndpoints,    // image does not run between the vertex images
    kNotImmersed,     // image contains a backtrack d d^-1
  };
  Kind kind;
  std::string detail;
};

std::string to_string(Violation::Kind kind);

/// First violated GraphMap invariant, or nullopt when the map is valid.
std::optional<Violation> validate(const GraphMap& g);

enum class Reduce { kNo, kYes };

/// Concatenation of the dart images along `p`, freely reduced on request.
Path apply_path(const GraphMap& g, const Path& p, Reduce reduce = Reduce::kNo);

/// `g ∘ h`. Throws if the codomain of `h` is not the domain of `g`, or if
/// reduction collapses an edge.
GraphMap compose(const GraphMap& g, const GraphMap& h,
                 Reduce reduce = Reduce::kNo);

/// `f^n` for a self-map, `n >= 0`.
GraphMap power(const GraphMap& f, int n, Reduce reduce = Reduce::kNo);

/// Pushes a cyclic path forward: concatenated images, unreduced.
CyclicPath apply_cyclic(const GraphMap& f, const CyclicPath& loop);

}  // namespace ttforge
