#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttforge/graph_map.hpp"
#include "ttforge/induced.hpp"

namespace ttforge {

struct PropertyOutcome {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct PropertyOptions {
  int legal_loop_pushes = 10;
  /// Exhaustive invariant-subgraph search only up to this many edges.
  int exhaustive_edges = 8;
  int flow_samples = 50;
};

struct CaseReport {
  std::vector<PropertyOutcome> outcomes;
  /// Set when build_induced rejected the input on its hypotheses.
  std::optional<std::string> rejected;
  std::optional<InducedPackage> package;
  bool ok() const;
  std::vector<std::string> failed() const;
};

/// Runs the invariant suite on one map: package identities, property
/// transfer, growth rates, ranks, n(i), lifted powers, legal loops,
/// invariant subgraphs, stable quotient rank and sampled flow identities.
CaseReport check_map_properties(const GraphMap& f, const PropertyOptions& opt = {});

/// Some proper nonempty edge subset is closed under images (subset enumeration).
bool has_invariant_subset_exhaustive(const GraphMap& f);

/// Pushes a cyclic path forward `times` times and checks every image is
/// cyclically reduced.
bool pushes_stay_immersed(const GraphMap& f, const CyclicPath& loop, int times);

}  // namespace ttforge
