#pragma once

#include <string>
#include <vector>

#include "ttforge/freegroup.hpp"
#include "ttforge/graph_map.hpp"

namespace ttforge::testing {

GraphPtr rose(const std::vector<std::string>& names);
GraphPtr two_cycle();

/// Self-map of `g` from vertex-image names and edge-image path strings.
GraphMap self_map(const GraphPtr& g, const std::vector<std::string>& vertices,
                  const std::vector<std::string>& edges);

GraphMap sigma();  // a -> a b, b -> a b
GraphMap fib();    // a -> b, b -> a b
GraphMap cyc2();   // c1 -> c2, c2 -> c1 c2 c1 on the 2-cycle
/// a -> c, b -> c, c -> a -b on the rank-3 rose.
Pi1Endomorphism nilp();

Path word(const Graph& g, const std::string& text);

}  // namespace ttforge::testing
