#pragma once

#include <functional>
#include <random>
#include <set>
#include <vector>

#include "ttforge/freegroup.hpp"
#include "ttforge/graph_map.hpp"
#include "ttforge/matrix.hpp"

namespace ttforge::testing {

/// All reduced words of length <= max_length in the loops of a rose.
std::vector<Path> reduced_words(const Graph& rose, int max_length);

/// Smallest K with ker φ^K = ker φ^(K+1) on all reduced words of bounded length.
int brute_force_kernel_stabilization(const Pi1Endomorphism& phi, int max_length,
                                     int max_k = 8);

/// Words of length <= max_length that are products of at most `factors`
/// generators (and their inverses), freely reduced.
std::set<std::vector<Dart>> subgroup_ball(const std::vector<Path>& generators,
                                          int factors, int max_length);

/// Largest real root of the characteristic polynomial (n <= 3), by bisection
/// in long double.
long double characteristic_root(const IntMatrix& a);

/// Edge subsets closed under images, proper and nonempty, by enumeration.
bool has_invariant_subset_brute_force(const GraphMap& f);

/// Every edge image of f^n, computed by unreduced composition, is immersed.
bool powers_immersed(const GraphMap& f, int max_power);

/// Whether |f^m(e)| grows on every edge over the first `steps` iterates.
bool expanding_by_iteration(const GraphMap& f, int steps);

/// Random reduced loop at vertex `v` of length <= max_length.
Path random_reduced_loop(const Graph& g, VertexId v, int max_length,
                         std::mt19937_64& rng);

/// Random reduced path starting at `v` (not necessarily closed).
Path random_reduced_path(const Graph& g, VertexId v, int length,
                         std::mt19937_64& rng);

}  // namespace ttforge::testing
