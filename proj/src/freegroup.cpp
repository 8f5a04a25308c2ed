#include "ttforge/freegroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>

#include "ttforge/error.hpp"

namespace ttforge {

struct SubgroupGraph::BasisData {
  std::vector<Dart> tree;
  std::vector<int> generator_of_edge;  // -1 for tree edges
  std::vector<Path> loops;
};

SubgroupGraph::SubgroupGraph(GraphPtr ambient, VertexId ambient_base)
    : ambient_(std::move(ambient)), graph_(std::make_shared<Graph>()) {
  if (ambient_base < 0 || ambient_base >= ambient_->num_vertices()) {
    throw InvalidInput("SubgroupGraph: basepoint is not an ambient vertex");
  }
  fiber_count_.assign(ambient_->num_vertices(), 0);
  add_vertex(ambient_base);
}

void SubgroupGraph::detach() {
  if (graph_.use_count() > 1) graph_ = std::make_shared<Graph>(*graph_);
  basis_.reset();
}

VertexId SubgroupGraph::add_vertex(VertexId over) {
  detach();
  const int k = fiber_count_[over]++;
  const VertexId v =
      graph_->add_vertex(ambient_->vertex_name(over) + "_" + std::to_string(k));
  vertex_label_.push_back(over);
  out_.emplace_back(ambient_->num_darts(), -1);
  return v;
}

EdgeId SubgroupGraph::add_edge(VertexId from, VertexId to, EdgeId label) {
  const Dart fwd = Dart::along(label);
  const Dart back = fwd.inverse();
  if (vertex_label_[from] != ambient_->origin(fwd) ||
      vertex_label_[to] != ambient_->terminus(fwd)) {
    throw Error("SubgroupGraph::add_edge: endpoints do not lie over the label");
  }
  if (out_[from][fwd.id()] >= 0 || out_[to][back.id()] >= 0) {
    throw Error("SubgroupGraph::add_edge: edge would not be folded");
  }
  detach();
  int count = 0;
  for (EdgeId x : edge_label_) count += x == label ? 1 : 0;
  const EdgeId e = graph_->add_edge(
      ambient_->edge_name(label) + "_" + std::to_string(count), from, to);
  edge_label_.push_back(label);
  out_[from][fwd.id()] = Dart::along(e).id();
  out_[to][back.id()] = Dart::against(e).id();
  return e;
}

std::optional<Dart> SubgroupGraph::step(VertexId v, Dart ambient_dart) const {
  const int d = out_[v][ambient_dart.id()];
  if (d < 0) return std::nullopt;
  return Dart(d);
}

std::optional<Path> SubgroupGraph::read(VertexId from,
                                        const Path& ambient_path) const {
  if (vertex_label_[from] != ambient_path.start) return std::nullopt;
  Path lifted = Path::trivial(from);
  for (Dart a : ambient_path.darts) {
    auto d = step(lifted.finish, a);
    if (!d) return std::nullopt;
    lifted.darts.push_back(*d);
    lifted.finish = graph_->terminus(*d);
  }
  return lifted;
}

Path SubgroupGraph::project(const Path& p) const {
  Path out{vertex_label_[p.start], vertex_label_[p.finish], {}};
  out.darts.reserve(p.darts.size());
  for (Dart d : p.darts) out.darts.push_back(label(d));
  return out;
}

bool SubgroupGraph::is_core() const {
  for (VertexId v = 1; v < graph_->num_vertices(); ++v) {
    if (graph_->valence(v) < 2) return false;
  }
  return true;
}

bool SubgroupGraph::is_covering() const {
  for (VertexId v = 0; v < graph_->num_vertices(); ++v) {
    if (graph_->valence(v) != ambient_->valence(vertex_label_[v])) return false;
  }
  return degree() > 0;
}

int SubgroupGraph::degree() const {
  std::vector<int> count(ambient_->num_vertices(), 0);
  for (VertexId label : vertex_label_) ++count[label];
  for (int c : count) {
    if (c != count.front()) return -1;
  }
  return count.empty() ? -1 : count.front();
}

std::vector<VertexId> SubgroupGraph::fiber(VertexId ambient_vertex) const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < graph_->num_vertices(); ++v) {
    if (vertex_label_[v] == ambient_vertex) out.push_back(v);
  }
  return out;
}

const SubgroupGraph::BasisData& SubgroupGraph::basis_data() const {
  if (!basis_) {
    auto data = std::make_shared<BasisData>();
    data->tree = spanning_tree(*graph_, base());
    data->generator_of_edge.assign(graph_->num_edges(), -1);
    for (EdgeId e : non_tree_edges(*graph_, data->tree)) {
      data->generator_of_edge[e] = static_cast<int>(data->loops.size());
      const Dart d = Dart::along(e);
      Path loop = tree_path(*graph_, data->tree, base(), graph_->origin(d));
      append(loop, Path::single(*graph_, d));
      append(loop, reverse(tree_path(*graph_, data->tree, base(),
                                     graph_->terminus(d))));
      data->loops.push_back(std::move(loop));
    }
    basis_ = std::move(data);
  }
  return *basis_;
}

const std::vector<Path>& SubgroupGraph::basis_loops() const {
  return basis_data().loops;
}

std::vector<Path> SubgroupGraph::basis_words() const {
  std::vector<Path> out;
  for (const Path& p : basis_loops()) out.push_back(project(p));
  return out;
}

std::optional<std::vector<int>> SubgroupGraph::read_in_basis(
    const Path& ambient_loop) const {
  auto lifted = read(base(), tighten(ambient_loop));
  if (!lifted || lifted->finish != base()) return std::nullopt;
  const auto& data = basis_data();
  std::vector<int> word;
  for (Dart d : lifted->darts) {
    const int g = data.generator_of_edge[d.edge()];
    if (g >= 0) word.push_back(d.reversed() ? -(g + 1) : g + 1);
  }
  return word;
}

std::string SubgroupGraph::canonical_form() const {
  std::ostringstream out;
  out << "V" << graph_->num_vertices() << ":";
  for (VertexId label : vertex_label_) out << label << ",";
  std::vector<std::tuple<VertexId, EdgeId, VertexId>> edges;
  for (EdgeId e = 0; e < graph_->num_edges(); ++e) {
    const Dart d = Dart::along(e);
    edges.emplace_back(graph_->origin(d), edge_label_[e], graph_->terminus(d));
  }
  std::sort(edges.begin(), edges.end());
  out << "E";
  for (auto [u, l, w] : edges) out << "(" << u << " " << l << " " << w << ")";
  return out.str();
}

namespace {

/// Union-find workspace for Stallings folding.
class FoldingTable {
 public:
  explicit FoldingTable(const Graph& ambient) : ambient_(ambient) {}

  int add_vertex(VertexId over) {
    parent_.push_back(static_cast<int>(parent_.size()));
    over_.push_back(over);
    out_.emplace_back();
    return parent_.back();
  }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void link(int u, Dart label, int w) {
    pending_.emplace_back(u, label.id(), w);
    drain();
  }

  VertexId over(int v) const { return over_[v]; }

  /// Representative-level adjacency, targets resolved.
  std::map<int, int> darts_at(int v) {
    std::map<int, int> out;
    for (auto [l, t] : out_[find(v)]) out.emplace(l, find(t));
    return out;
  }

 private:
  void drain() {
    while (!pending_.empty()) {
      auto [u, l, w] = pending_.front();
      pending_.pop_front();
      attach(find(u), l, find(w));
      attach(find(w), l ^ 1, find(u));
    }
  }

  void attach(int u, int l, int w) {
    auto it = out_[u].find(l);
    if (it == out_[u].end()) {
      out_[u].emplace(l, w);
    } else {
      merge(it->second, w);
    }
  }

  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (out_[a].size() < out_[b].size()) std::swap(a, b);
    parent_[b] = a;
    for (auto [l, t] : out_[b]) pending_.emplace_back(a, l, t);
    out_[b].clear();
  }

  const Graph& ambient_;
  std::vector<int> parent_;
  std::vector<VertexId> over_;
  std::vector<std::map<int, int>> out_;
  std::deque<std::tuple<int, int, int>> pending_;
};

}  // namespace

SubgroupGraph fold(GraphPtr ambient, VertexId ambient_base,
                   const std::vector<Path>& loops) {
  FoldingTable table(*ambient);
  const int base = table.add_vertex(ambient_base);
  for (const Path& raw : loops) {
    const Path loop = tighten(raw);
    if (loop.start != ambient_base || loop.finish != ambient_base ||
        !is_path(*ambient, loop)) {
      throw PreconditionFailed("fold: input is not a closed path at the basepoint");
    }
    int at = base;
    for (std::size_t k = 0; k < loop.darts.size(); ++k) {
      const Dart d = loop.darts[k];
      const int next = k + 1 == loop.darts.size()
                           ? base
                           : table.add_vertex(ambient->terminus(d));
      table.link(at, d, next);
      at = next;
    }
  }

  // Collect the folded graph on representatives, then prune hairs.
  std::map<int, std::map<int, int>> adj;
  std::deque<int> queue{table.find(base)};
  adj[table.find(base)];
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    adj[v] = table.darts_at(v);
    for (auto [l, t] : adj[v]) {
      if (!adj.contains(t)) {
        adj[t];
        queue.push_back(t);
      }
    }
  }
  const int root = table.find(base);
  std::deque<int> hairs;
  for (const auto& [v, darts] : adj) {
    if (v != root && darts.size() == 1) hairs.push_back(v);
  }
  while (!hairs.empty()) {
    const int v = hairs.front();
    hairs.pop_front();
    if (!adj.contains(v) || adj[v].size() != 1) continue;
    auto [l, t] = *adj[v].begin();
    adj.erase(v);
    adj[t].erase(l ^ 1);
    if (t != root && adj[t].size() == 1) hairs.push_back(t);
  }

  // Canonical breadth-first numbering.
  SubgroupGraph out(ambient, ambient_base);
  std::map<int, VertexId> number{{root, 0}};
  std::vector<int> order{root};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto [l, t] : adj[order[i]]) {
      if (!number.contains(t)) {
        number.emplace(t, out.add_vertex(table.over(t)));
        order.push_back(t);
      }
    }
  }
  for (int v : order) {
    for (auto [l, t] : adj[v]) {
      if ((l & 1) == 0) out.add_edge(number.at(v), number.at(t), l >> 1);
    }
  }
  return out;
}

SubgroupGraph whole_group(GraphPtr ambient, VertexId base) {
  const auto tree = spanning_tree(*ambient, base);
  std::vector<Path> loops;
  for (EdgeId e : non_tree_edges(*ambient, tree)) {
    const Dart d = Dart::along(e);
    Path loop = tree_path(*ambient, tree, base, ambient->origin(d));
    append(loop, Path::single(*ambient, d));
    append(loop, reverse(tree_path(*ambient, tree, base, ambient->terminus(d))));
    loops.push_back(std::move(loop));
  }
  return fold(std::move(ambient), base, loops);
}

bool contains(const SubgroupGraph& h, const Path& loop) {
  auto lifted = h.read(h.base(), tighten(loop));
  return lifted && lifted->finish == h.base();
}

std::optional<std::vector<VertexId>> embeds_into(const SubgroupGraph& small,
                                                 const SubgroupGraph& big) {
  if (!same_graph(small.ambient_ptr(), big.ambient_ptr())) return std::nullopt;
  const Graph& g = small.graph();
  std::vector<VertexId> image(g.num_vertices(), -1);
  std::vector<bool> used(big.graph().num_vertices(), false);
  image[small.base()] = big.base();
  used[big.base()] = true;
  if (small.vertex_label(small.base()) != big.vertex_label(big.base())) {
    return std::nullopt;
  }
  std::deque<VertexId> queue{small.base()};
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (Dart d : g.star(v)) {
      auto target = big.step(image[v], small.label(d));
      if (!target) return std::nullopt;
      const VertexId w = g.terminus(d);
      const VertexId bw = big.graph().terminus(*target);
      if (image[w] < 0) {
        if (used[bw]) return std::nullopt;
        image[w] = bw;
        used[bw] = true;
        queue.push_back(w);
      } else if (image[w] != bw) {
        return std::nullopt;
      }
    }
  }
  return image;
}

SubgroupGraph hall_completion(const SubgroupGraph& h) {
  const Graph& amb = h.ambient();
  SubgroupGraph cover = h;
  int degree = 0;
  for (VertexId a = 0; a < amb.num_vertices(); ++a) {
    degree = std::max(degree, static_cast<int>(h.fiber(a).size()));
  }
  for (VertexId a = 0; a < amb.num_vertices(); ++a) {
    for (auto k = h.fiber(a).size(); k < static_cast<std::size_t>(degree); ++k) {
      cover.add_vertex(a);
    }
  }
  for (EdgeId e = 0; e < amb.num_edges(); ++e) {
    const Dart fwd = Dart::along(e);
    std::vector<VertexId> tails, heads;
    for (VertexId v : cover.fiber(amb.origin(fwd))) {
      if (!cover.step(v, fwd)) tails.push_back(v);
    }
    for (VertexId v : cover.fiber(amb.terminus(fwd))) {
      if (!cover.step(v, fwd.inverse())) heads.push_back(v);
    }
    if (tails.size() != heads.size()) {
      throw Inconsistency("hall_completion: unbalanced label permutation");
    }
    for (std::size_t i = 0; i < tails.size(); ++i) {
      cover.add_edge(tails[i], heads[i], e);
    }
  }
  if (cover.graph().is_connected()) return cover;

  // Keep the component of the basepoint; it is a covering on its own.
  const auto tree = spanning_tree(cover.graph(), cover.base());
  std::vector<VertexId> number(cover.graph().num_vertices(), -1);
  SubgroupGraph component(h.ambient_ptr(), h.vertex_label(h.base()));
  number[cover.base()] = component.base();
  for (VertexId v = 0; v < cover.graph().num_vertices(); ++v) {
    if (v != cover.base() && tree[v].id() >= 0) {
      number[v] = component.add_vertex(cover.vertex_label(v));
    }
  }
  for (EdgeId e = 0; e < cover.graph().num_edges(); ++e) {
    const Dart d = Dart::along(e);
    const VertexId u = cover.graph().origin(d);
    if (number[u] < 0) continue;
    component.add_edge(number[u], number[cover.graph().terminus(d)],
                       cover.edge_label(e));
  }
  return component;
}

LoopMap induced_loop_map(const GraphMap& f, VertexId v) {
  return LoopMap{v, f.vertex_image(v), [&f](const Path& p) {
                   return apply_path(f, p, Reduce::kYes);
                 }};
}

Pi1Endomorphism::Pi1Endomorphism(GraphPtr ambient, VertexId base,
                                 std::vector<Path> images)
    : ambient_(std::move(ambient)), base_(base) {
  tree_ = spanning_tree(*ambient_, base_);
  generators_ = non_tree_edges(*ambient_, tree_);
  generator_index_.assign(ambient_->num_edges(), -1);
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    const EdgeId e = generators_[i];
    generator_index_[e] = static_cast<int>(i);
    const Dart d = Dart::along(e);
    Path loop = tree_path(*ambient_, tree_, base_, ambient_->origin(d));
    append(loop, Path::single(*ambient_, d));
    append(loop, reverse(tree_path(*ambient_, tree_, base_, ambient_->terminus(d))));
    loops_.push_back(std::move(loop));
  }
  if (images.size() != generators_.size()) {
    throw InvalidInput("endomorphism: expected " +
                       std::to_string(generators_.size()) + " generator images");
  }
  for (auto& img : images) {
    if (img.start != base_ || img.finish != base_ || !is_path(*ambient_, img)) {
      throw InvalidInput("endomorphism: image is not a loop at the basepoint");
    }
    images_.push_back(tighten(img));
  }
}

Path Pi1Endomorphism::apply(const Path& loop) const {
  if (loop.start != base_ || loop.finish != base_) {
    throw PreconditionFailed("Pi1Endomorphism::apply: not a loop at the basepoint");
  }
  Path out = Path::trivial(base_);
  for (Dart d : loop.darts) {
    const int g = generator_index_[d.edge()];
    if (g < 0) continue;
    append(out, d.reversed() ? reverse(images_[g]) : images_[g]);
  }
  return tighten(out);
}

LoopMap Pi1Endomorphism::as_loop_map() const {
  return LoopMap{base_, base_, [this](const Path& p) { return apply(p); }};
}

Pi1Endomorphism pi1_endomorphism(const GraphMap& f, VertexId v) {
  if (!f.is_self_map()) throw PreconditionFailed("pi1_endomorphism: not a self-map");
  if (f.vertex_image(v) != v) {
    throw PreconditionFailed("pi1_endomorphism: basepoint " +
                             f.domain().vertex_name(v) + " is not fixed");
  }
  const auto tree = spanning_tree(f.domain(), v);
  std::vector<Path> images;
  for (EdgeId e : non_tree_edges(f.domain(), tree)) {
    const Dart d = Dart::along(e);
    Path loop = tree_path(f.domain(), tree, v, f.domain().origin(d));
    append(loop, Path::single(f.domain(), d));
    append(loop, reverse(tree_path(f.domain(), tree, v, f.domain().terminus(d))));
    images.push_back(apply_path(f, loop, Reduce::kYes));
  }
  return Pi1Endomorphism(f.domain_ptr(), v, std::move(images));
}

SubgroupGraph map_subgroup(const LoopMap& phi, const SubgroupGraph& h) {
  if (h.vertex_label(h.base()) != phi.source) {
    throw PreconditionFailed("map_subgroup: subgroup is based elsewhere");
  }
  std::vector<Path> images;
  for (const Path& w : h.basis_words()) images.push_back(phi.apply(w));
  return fold(h.ambient_ptr(), phi.target, images);
}

SubgroupGraph map_subgroup(const Pi1Endomorphism& phi, const SubgroupGraph& h) {
  return map_subgroup(phi.as_loop_map(), h);
}

SubgroupGraph image_subgroup(const Pi1Endomorphism& phi, int k) {
  SubgroupGraph h = whole_group(phi.ambient_ptr(), phi.base());
  for (int i = 0; i < k; ++i) h = map_subgroup(phi, h);
  return h;
}

bool is_injective_on(const LoopMap& phi, const SubgroupGraph& h) {
  return map_subgroup(phi, h).rank() == h.rank();
}

bool is_injective_on(const Pi1Endomorphism& phi, const SubgroupGraph& h) {
  return is_injective_on(phi.as_loop_map(), h);
}

int kernel_stabilization(const Pi1Endomorphism& phi) {
  return stable_quotient(phi).stabilization;
}

StableQuotientReport stable_quotient(const Pi1Endomorphism& phi) {
  SubgroupGraph j = whole_group(phi.ambient_ptr(), phi.base());
  std::vector<int> ranks{j.rank()};
  int k = 0;
  for (;;) {
    SubgroupGraph next = map_subgroup(phi, j);
    ranks.push_back(next.rank());
    if (next.rank() == j.rank()) break;
    j = std::move(next);
    ++k;
  }
  StableQuotientReport report{
      .stabilization = k,
      .image = j,
      .rank = j.rank(),
      .basis = j.basis_words(),
      .restriction = restriction_in_basis(phi.as_loop_map(), j),
      .image_ranks = std::move(ranks),
  };
  return report;
}

std::vector<std::vector<int>> restriction_in_basis(const LoopMap& phi,
                                                   const SubgroupGraph& h) {
  std::vector<std::vector<int>> out;
  for (const Path& w : h.basis_words()) {
    auto word = h.read_in_basis(phi.apply(w));
    if (!word) {
      throw PreconditionFailed("restriction_in_basis: subgroup is not invariant");
    }
    out.push_back(std::move(*word));
  }
  return out;
}

std::string basis_word_to_string(const std::vector<int>& word) {
  if (word.empty()) return "1";
  std::string out;
  for (int x : word) {
    if (!out.empty()) out += ' ';
    out += (x < 0 ? "-x" : "x") + std::to_string(std::abs(x));
  }
  return out;
}

}  // namespace ttforge
