#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ttforge/graph_map.hpp"

namespace ttforge {

/// Pointed graph Γ with an immersion (labeling) into an ambient graph.
/// Represents the subgroup of π₁(ambient, label(base)) read off by closed
/// paths at the basepoint. Every instance is folded: at each vertex at most
/// one dart carries a given ambient label.
class SubgroupGraph {
 public:
  /// The single-vertex graph over `ambient_base` (trivial subgroup).
  SubgroupGraph(GraphPtr ambient, VertexId ambient_base);

  const Graph& ambient() const { return *ambient_; }
  const GraphPtr& ambient_ptr() const { return ambient_; }
  const Graph& graph() const { return *graph_; }
  GraphPtr graph_ptr() const { return graph_; }
  VertexId base() const { return 0; }

  VertexId vertex_label(VertexId v) const { return vertex_label_[v]; }
  EdgeId edge_label(EdgeId e) const { return edge_label_[e]; }
  Dart label(Dart d) const {
    return d.reversed() ? Dart::against(edge_label_[d.edge()])
                        : Dart::along(edge_label_[d.edge()]);
  }

  /// The dart at `v` labeled `ambient_dart`, if any.
  std::optional<Dart> step(VertexId v, Dart ambient_dart) const;
  /// Reads an ambient path starting at `from`; nullopt if it falls off.
  std::optional<Path> read(VertexId from, const Path& ambient_path) const;
  Path project(const Path& p) const;

  /// Appends a vertex over `over`; names are `<ambient name>_<k>`.
  VertexId add_vertex(VertexId over);
  /// Appends an edge labeled by the positive dart of `label`. Throws if it
  /// would break foldedness or the labeling.
  EdgeId add_edge(VertexId from, VertexId to, EdgeId label);

  int rank() const { return graph_->rank(); }
  /// Every non-basepoint vertex has valence >= 2.
  bool is_core() const;
  /// Every vertex carries one dart per ambient dart at its label.
  bool is_covering() const;
  /// Number of vertices over each ambient vertex when all fibers agree, else -1.
  int degree() const;
  std::vector<VertexId> fiber(VertexId ambient_vertex) const;

  /// Spanning-tree basis of π₁(Γ, base): one loop per non-tree edge, as
  /// paths in Γ and as ambient words.
  const std::vector<Path>& basis_loops() const;
  std::vector<Path> basis_words() const;
  /// Expresses a closed ambient loop at the basepoint in the basis:
  /// ±(i+1) for the i-th generator. nullopt when the loop is not in H.
  std::optional<std::vector<int>> read_in_basis(const Path& ambient_loop) const;

  /// Equal strings iff the pointed labeled graphs are isomorphic (for
  /// graphs produced by `fold`, which numbers vertices canonically).
  std::string canonical_form() const;

 private:
  void detach();

  GraphPtr ambient_;
  std::shared_ptr<Graph> graph_;
  std::vector<VertexId> vertex_label_;
  std::vector<EdgeId> edge_label_;
  std::vector<std::vector<int>> out_;  // [vertex][ambient dart] -> dart id | -1
  std::vector<int> fiber_count_;
  struct BasisData;
  const BasisData& basis_data() const;
  mutable std::shared_ptr<const BasisData> basis_;
};

/// Folded pointed core of the subgroup generated by closed paths at
/// `ambient_base`. Vertices are numbered breadth-first from the basepoint
/// scanning ambient darts in id order, so the result is canonical.
SubgroupGraph fold(GraphPtr ambient, VertexId ambient_base,
                   const std::vector<Path>& loops);

/// The whole group π₁(ambient, base), folded.
SubgroupGraph whole_group(GraphPtr ambient, VertexId base);

bool contains(const SubgroupGraph& h, const Path& loop);

/// Label-preserving embedding of pointed graphs, as a vertex map.
std::optional<std::vector<VertexId>> embeds_into(const SubgroupGraph& small,
                                                 const SubgroupGraph& big);

/// Finite covering of the ambient graph containing `h` as a pointed
/// subgraph. Open label slots are closed up by matching unmatched tails to
/// unmatched heads in vertex-id order, after padding fibers to equal size.
SubgroupGraph hall_completion(const SubgroupGraph& h);

/// Homomorphism between fundamental groups given on based loops: takes a
/// closed path at the source basepoint to a reduced closed path at `target`.
struct LoopMap {
  VertexId source = -1;
  VertexId target = -1;
  std::function<Path(const Path&)> apply;
};

/// f_* : π₁(Θ, v) → π₁(Θ, f(v)).
LoopMap induced_loop_map(const GraphMap& f, VertexId v);

/// Endomorphism of π₁(ambient, base) given by images of the spanning-tree
/// generators.
class Pi1Endomorphism {
 public:
  Pi1Endomorphism(GraphPtr ambient, VertexId base, std::vector<Path> images);

  const Graph& ambient() const { return *ambient_; }
  const GraphPtr& ambient_ptr() const { return ambient_; }
  VertexId base() const { return base_; }
  int rank() const { return static_cast<int>(generators_.size()); }
  EdgeId generator_edge(int i) const { return generators_[i]; }
  const std::vector<Path>& generator_loops() const { return loops_; }
  const std::vector<Path>& images() const { return images_; }

  Path apply(const Path& loop) const;
  LoopMap as_loop_map() const;

 private:
  GraphPtr ambient_;
  VertexId base_;
  std::vector<Dart> tree_;
  std::vector<EdgeId> generators_;
  std::vector<int> generator_index_;
  std::vector<Path> loops_;
  std::vector<Path> images_;
};

/// Requires f(v) = v.
Pi1Endomorphism pi1_endomorphism(const GraphMap& f, VertexId v);

/// Folded subgroup generated by the images of H's basis.
SubgroupGraph map_subgroup(const LoopMap& phi, const SubgroupGraph& h);
SubgroupGraph map_subgroup(const Pi1Endomorphism& phi, const SubgroupGraph& h);

/// φ^k(π₁); k = 0 is the whole group.
SubgroupGraph image_subgroup(const Pi1Endomorphism& phi, int k);

/// Rank comparison; exact because finitely generated free groups are Hopfian.
bool is_injective_on(const LoopMap& phi, const SubgroupGraph& h);
bool is_injective_on(const Pi1Endomorphism& phi, const SubgroupGraph& h);

/// Smallest K >= 0 with ker φ^K = ker φ^(K+1).
int kernel_stabilization(const Pi1Endomorphism& phi);

struct StableQuotientReport {
  int stabilization = 0;          // K
  SubgroupGraph image;            // J = φ^K(π₁)
  int rank = 0;                   // rank Q = rank J
  std::vector<Path> basis;        // basis of J as ambient words
  std::vector<std::vector<int>> restriction;  // φ(x_i) in the basis of J
  std::vector<int> image_ranks;   // rank φ^k(π₁), k = 0..K+1
};

StableQuotientReport stable_quotient(const Pi1Endomorphism& phi);

/// φ restricted to an invariant subgroup, written in H's basis.
std::vector<std::vector<int>> restriction_in_basis(const LoopMap& phi,
                                                   const SubgroupGraph& h);

std::string basis_word_to_string(const std::vector<int>& word);

}  // namespace ttforge
