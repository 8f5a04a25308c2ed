#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ttforge/graph_map.hpp"

namespace ttforge {

struct GeneratorOptions {
  int max_edges = 6;
  int max_vertices = 3;
  int max_image = 12;
  /// Reject maps whose total image length under f^power_budget_exponent
  /// exceeds this many darts.
  double power_budget = 2e5;
  int power_budget_exponent = 10;
  int max_attempts = 20000;
};

/// Random connected graph with no valence-one vertices and rank >= 2.
GraphPtr random_graph(std::mt19937_64& rng, const GeneratorOptions& opt);

/// Self-map of `g` built from a random derivative Df: every edge image starts
/// with Df(e), ends with Df(ē)⁻¹ and only crosses turns whose Df-orbit never
/// degenerates. Returns nullopt when some edge admits no such walk.
std::optional<GraphMap> random_legal_map(const GraphPtr& g, std::mt19937_64& rng,
                                         const GeneratorOptions& opt);

struct GeneratedMap {
  GraphMap f;
  int attempts = 0;
};

/// Rejection-samples an expanding irreducible train track map within the
/// size budget. Throws Error after max_attempts.
GeneratedMap generate_train_track(std::uint64_t seed, const GeneratorOptions& opt = {});

/// A valid, surjective self-map that is not a train track map.
GraphMap generate_non_train_track(std::uint64_t seed, const GeneratorOptions& opt = {});

/// Sum over edges of |f^p(e)|, computed from the transition matrix.
double power_image_length(const GraphMap& f, int p);

/// Greedy shrinking: repeatedly replaces an edge image by a shorter subpath
/// with the same endpoints, as long as the result is still an expanding
/// irreducible train track map and `fails` still holds.
GraphMap shrink(const GraphMap& f, const std::function<bool(const GraphMap&)>& fails,
                int max_rounds = 50);

/// Seed of case `index` in a run started from `seed`.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace ttforge
