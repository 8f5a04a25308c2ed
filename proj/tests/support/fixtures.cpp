#include "fixtures.hpp"

#include <memory>

namespace ttforge::testing {

GraphPtr rose(const std::vector<std::string>& names) {
  return std::make_shared<const Graph>(make_rose(names));
}

GraphPtr two_cycle() {
  auto g = std::make_shared<Graph>();
  g->add_vertex("v0");
  g->add_vertex("v1");
  g->add_edge("c1", 0, 1);
  g->add_edge("c2", 1, 0);
  return g;
}

GraphMap self_map(const GraphPtr& g, const std::vector<std::string>& vertices,
                  const std::vector<std::string>& edges) {
  std::vector<VertexId> vmap;
  for (const auto& name : vertices) vmap.push_back(*g->find_vertex(name));
  std::vector<Path> images;
  for (const auto& text : edges) images.push_back(parse_path(*g, text));
  return GraphMap(g, g, std::move(vmap), std::move(images));
}

GraphMap sigma() { return self_map(rose({"a", "b"}), {"v"}, {"a b", "a b"}); }

GraphMap fib() { return self_map(rose({"a", "b"}), {"v"}, {"b", "a b"}); }

GraphMap cyc2() {
  return self_map(two_cycle(), {"v1", "v0"}, {"c2", "c1 c2 c1"});
}

Pi1Endomorphism nilp() {
  auto g = rose({"a", "b", "c"});
  return Pi1Endomorphism(g, 0, {word(*g, "c"), word(*g, "c"), word(*g, "a -b")});
}

Path word(const Graph& g, const std::string& text) {
  return parse_path(g, text, 0);
}

}  // namespace ttforge::testing
