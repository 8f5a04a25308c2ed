#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ttforge/freegroup.hpp"
#include "ttforge/graph_map.hpp"
#include "ttforge/matrix.hpp"

namespace ttforge {

using Rational = boost::multiprecision::cpp_rational;

/// A point of a graph: a vertex, or an interior point of an edge at
/// parameter λ ∈ (0,1) measured along the edge's stored orientation.
struct GraphPoint {
  VertexId vertex = -1;
  EdgeId edge = -1;
  Rational lambda = 0;

  static GraphPoint at_vertex(VertexId v) { return GraphPoint{v, -1, 0}; }
  /// Accepts λ ∈ [0,1]; endpoints become vertices.
  static GraphPoint on_edge(const Graph& g, EdgeId e, const Rational& lambda);
  /// Point at parameter μ ∈ [0,1] along a dart.
  static GraphPoint on_dart(const Graph& g, Dart d, const Rational& mu);

  bool is_vertex() const { return vertex >= 0; }
  friend bool operator==(const GraphPoint&, const GraphPoint&) = default;
};

/// Point (θ, t) of a mapping torus. Heights lie in [0,1) for M_F and in
/// [0, j) for the torus of a cover descriptor.
struct TorusPoint {
  GraphPoint position;
  Rational t = 0;
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

std::string to_string(const Graph& g, const GraphPoint& x);
std::string to_string(const Graph& g, const TorusPoint& x);

/// Graph map with a point action. The action on an edge is the composite of
/// the linear parametrizations of the factors in `chain` (applied first to
/// last), read off along the combinatorial image. The chain acts on the
/// domain itself, or on the image of the domain under `projection` when
/// the map is a lift. An empty chain means every edge maps isometrically.
class PlMap {
 public:
  PlMap(GraphMap map, std::vector<GraphMap> chain,
        std::optional<GraphMap> projection = std::nullopt);

  static PlMap uniform(const GraphMap& g) { return PlMap(g, {g}); }
  /// Lift of the chain through `projection` (labels of a cover).
  static PlMap lifted(const GraphMap& map, const GraphMap& factor, int times,
                      const GraphMap& projection);

  const GraphMap& map() const { return map_; }
  const std::vector<GraphMap>& chain() const { return chain_; }

  GraphPoint apply(const GraphPoint& x) const;
  /// Parameters in [0,1] on edge `e` whose images are vertices.
  std::vector<Rational> breakpoints(EdgeId e, std::size_t cap = 4096) const;

 private:
  Dart chain_dart(Dart d) const;
  /// Position along map_(d): dart index and parameter in [0,1).
  std::pair<std::size_t, Rational> locate(Dart d, Rational mu) const;
  void collect(Dart d, std::size_t level, const Rational& lo, const Rational& width,
               std::vector<Rational>& out, std::size_t cap) const;

  GraphMap map_;
  std::vector<GraphMap> chain_;
  std::optional<GraphMap> projection_;
  /// lengths_[l][dart] = length of the image of the dart under chain_[l..].
  std::vector<std::vector<BigInt>> lengths_;
};

/// Mapping torus of a self-map F with its semi-flow Ψ.
struct MappingTorus {
  GraphMap F;
  PlMap action;
  /// π₁-injective and π₁-surjective at a fixed or periodic vertex.
  bool homotopy_equivalence = false;

  static MappingTorus of(const GraphMap& F);
  const Graph& graph() const { return F.domain(); }
};

/// Ψ_s(θ,t) = (F^⌊s+t⌋(θ), s+t−⌊s+t⌋).
TorusPoint flow(const MappingTorus& m, const TorusPoint& x, const Rational& s);
/// Flow time until the point returns to the section: 1 − t.
Rational return_time(const TorusPoint& x);

struct HMaps {
  std::function<TorusPoint(const TorusPoint&)> h0;  // M_F → M
  std::function<TorusPoint(const TorusPoint&)> h1;  // M → M_F
};

/// h₀(θ,t) = Ψ_t(θ,0) and h₁(x) = (Ψ_ρ(x), 1 − ρ) with ρ the return time.
HMaps h_maps(const MappingTorus& m);

struct SampleCheck {
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::optional<std::string> first_failure;
  bool ok() const { return failures == 0; }
};

struct FlowHomotopyPair {
  std::function<TorusPoint(const TorusPoint&)> alpha_hat;  // M_X → M_Y
  std::function<TorusPoint(const TorusPoint&)> beta_hat;   // M_Y → M_X
  int k = 0;
  SampleCheck alpha_equivariance;
  SampleCheck beta_equivariance;
  SampleCheck beta_alpha;   // β̂α̂ = Ψ^X_{k+2}
  SampleCheck alpha_beta;   // α̂β̂ = Ψ^Y_{k+2}
  bool ok() const {
    return alpha_equivariance.ok() && beta_equivariance.ok() && beta_alpha.ok() &&
           alpha_beta.ok();
  }
};

/// Checks αF_X = F_Yα, βF_Y = F_Xβ, βα = F_X^k, αβ = F_Y^k on darts (throws
/// PreconditionFailed otherwise), then builds α̂ = h₀^Y α′ h₁^X and β̂
/// symmetrically and verifies the identities at the given sample points.
FlowHomotopyPair flow_homotopy_pair(const MappingTorus& x, const MappingTorus& y,
                                    const PlMap& alpha, const PlMap& beta, int k,
                                    const std::vector<TorusPoint>& samples_x,
                                    const std::vector<TorusPoint>& samples_y);

/// Random rational points plus the breakpoints of the given maps, at heights
/// that include 0.
std::vector<TorusPoint> sample_points(const MappingTorus& m, std::size_t count,
                                      std::uint64_t seed,
                                      const std::vector<const PlMap*>& maps = {});

/// Finite cover Δ → Θ with a lift g of F^j: (Δ, g, j).
struct CoverDescriptor {
  MappingTorus base;
  SubgroupGraph delta;
  PlMap g;
  int j = 1;
  int sheets = 1;  // deg(Δ → Θ)
  int degree() const { return j * sheets; }
};

/// Validates that Δ is a finite covering and p∘g = F^j∘p on every dart.
CoverDescriptor make_cover_descriptor(const MappingTorus& m, SubgroupGraph delta,
                                      const GraphMap& g, int j);

/// Smallest j <= max_j with φ^j(H) ⊆ H for the subgroup of the covering
/// Δ, and the lift of F^j fixing the basepoint. Requires F to fix the
/// basepoint's image vertex.
CoverDescriptor descriptor_from_subgroup(const MappingTorus& m, SubgroupGraph delta,
                                         int max_j = 64);

/// Flow on the torus of g, heights in [0, j): the first return is at time j.
TorusPoint lifted_flow(const CoverDescriptor& d, const TorusPoint& x, const Rational& s);
/// (δ, t) ↦ Ψ_{⌊t⌋}(p δ) at height t − ⌊t⌋.
TorusPoint project(const CoverDescriptor& d, const TorusPoint& x);

struct DualClass {
  /// Value on each basis cycle of the 1-skeleton of M_g, named by its
  /// non-tree edge: section edges and vertical edges `t_<vertex>`.
  std::vector<std::pair<std::string, BigInt>> values;
  /// Generator of the image in ℤ.
  BigInt index = 0;
};

/// Dual class of the section Θ ⊂ M_F pulled back to the torus of g.
DualClass dual_class(const CoverDescriptor& d);

struct FirstReturn {
  GraphMap g;
  int j = 0;
  BigInt dual_index = 0;
  bool verified = false;
};

FirstReturn section_first_return(const CoverDescriptor& d);

}  // namespace ttforge
