#pragma once

#include <mutex>
#include <optional>
#include <vector>

#include "ttforge/freegroup.hpp"
#include "ttforge/graph_map.hpp"

namespace ttforge {

/// Covering space of the ambient graph attached to a folded core. The core
/// is fixed; hanging trees are grown on demand whenever a path walks off it.
/// Core vertices and edges keep their ids from the core graph; tree
/// vertices and edges are appended after them.
class LazyCover {
 public:
  explicit LazyCover(SubgroupGraph core);
  LazyCover(const LazyCover& other);
  LazyCover& operator=(const LazyCover&) = delete;

  const Graph& ambient() const { return core_.ambient(); }
  const GraphPtr& ambient_ptr() const { return core_.ambient_ptr(); }
  const SubgroupGraph& core() const { return core_; }
  /// Basepoint; projects to the ambient basepoint of the core.
  VertexId base() const { return core_.base(); }

  bool in_core(VertexId v) const { return v < core_.graph().num_vertices(); }
  bool in_core(Dart d) const { return d.edge() < core_.graph().num_edges(); }

  /// Snapshot of the materialized portion (core plus grown trees).
  SubgroupGraph materialized() const;
  int num_vertices() const;
  VertexId vertex_label(VertexId v) const;

  /// The dart at `v` over `ambient_dart`, growing a tree edge if needed.
  Dart step(VertexId v, Dart ambient_dart);
  /// Unique lift of an ambient path starting at `start`.
  Path lift_path(VertexId start, const Path& ambient_path);

  /// Vertices over `ambient_vertex`: core vertices only, or everything
  /// materialized so far.
  std::vector<VertexId> fiber_over(VertexId ambient_vertex, bool core_only) const;

  /// Tree parts are acyclic and attach to the core at single vertices.
  bool trees_are_forests() const;

 private:
  SubgroupGraph core_;
  mutable std::mutex mutex_;
  SubgroupGraph graph_;
};

/// A graph map into a cover together with what it lifts.
/// `map` has codomain the materialized cover at construction time;
/// `source` is set when the domain is itself (part of) a cover.
struct LiftedMap {
  GraphMap map;
  SubgroupGraph target;
  GraphMap base_map;
  std::optional<SubgroupGraph> source;
};

/// Checks p ∘ map = base_map ∘ p (or = base_map when the source is not a
/// cover) dart by dart.
bool commutes(const LiftedMap& lift);

/// Core graph map Θ̄ → Θ sending each vertex and dart to its label.
GraphMap projection_map(const SubgroupGraph& h);

/// The lift of f^m (composed without reduction) sending the ambient
/// basepoint of the core to `cover_base`. Requires that f^m carries
/// π₁(Θ, v) into the subgroup of the cover based at `cover_base`.
LiftedMap based_lift_power(const GraphMap& f, int m, LazyCover& cover,
                           VertexId cover_base);
/// Same, for a precomputed power.
LiftedMap based_lift(const GraphMap& fm, LazyCover& cover, VertexId cover_base);

/// Lift of the self-map f to the cover, restricted to the core as domain,
/// sending `source_base` to the first core vertex over f(p(source_base))
/// that admits a lift. Throws NotLiftable if none does.
LiftedMap lift_graph_map(const GraphMap& f, LazyCover& cover,
                         VertexId source_base);

/// Same with a prescribed target vertex.
std::optional<LiftedMap> lift_graph_map_to(const GraphMap& f, LazyCover& cover,
                                           VertexId source_base, VertexId target);

/// Replaces the codomain by the core. Throws Inconsistency if an image
/// leaves the core. When the domain is the core the result is a self-map.
GraphMap restrict_to_core(const LiftedMap& lift, const LazyCover& cover);

}  // namespace ttforge
