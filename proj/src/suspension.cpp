#include "ttforge/suspension.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "ttforge/covers.hpp"
#include "ttforge/error.hpp"
#include "ttforge/induced.hpp"

namespace ttforge {

namespace {

BigInt floor_of(const Rational& x) {
  BigInt q = numerator(x) / denominator(x);
  if (x < 0 && Rational(q) != x) q -= 1;
  return q;
}

std::string rational_text(const Rational& x) {
  std::ostringstream out;
  out << x;
  return out.str();
}

}  // namespace

GraphPoint GraphPoint::on_edge(const Graph& g, EdgeId e, const Rational& lambda) {
  if (lambda < 0 || lambda > 1) throw InvalidInput("edge parameter outside [0,1]");
  if (lambda == 0) return at_vertex(g.origin(Dart::along(e)));
  if (lambda == 1) return at_vertex(g.terminus(Dart::along(e)));
  return GraphPoint{-1, e, lambda};
}

GraphPoint GraphPoint::on_dart(const Graph& g, Dart d, const Rational& mu) {
  return on_edge(g, d.edge(), d.reversed() ? Rational(1 - mu) : mu);
}

std::string to_string(const Graph& g, const GraphPoint& x) {
  if (x.is_vertex()) return g.vertex_name(x.vertex);
  return g.edge_name(x.edge) + "@" + rational_text(x.lambda);
}

std::string to_string(const Graph& g, const TorusPoint& x) {
  return "(" + to_string(g, x.position) + ", " + rational_text(x.t) + ")";
}

PlMap::PlMap(GraphMap map, std::vector<GraphMap> chain,
             std::optional<GraphMap> projection)
    : map_(std::move(map)), chain_(std::move(chain)), projection_(std::move(projection)) {
  const Graph& dom = map_.domain();
  if (projection_ && !same_graph(projection_->domain_ptr(), map_.domain_ptr())) {
    throw PreconditionFailed("PlMap: projection has the wrong domain");
  }
  if (chain_.empty()) {
    for (EdgeId e = 0; e < dom.num_edges(); ++e) {
      if (map_.edge_image(e).length() != 1) {
        throw PreconditionFailed("PlMap: isometric map sends an edge to a longer path");
      }
    }
    return;
  }
  const GraphPtr& first = projection_ ? projection_->codomain_ptr() : map_.domain_ptr();
  if (!same_graph(chain_.front().domain_ptr(), first)) {
    throw PreconditionFailed("PlMap: chain does not start at the domain");
  }
  for (std::size_t l = 0; l + 1 < chain_.size(); ++l) {
    if (!same_graph(chain_[l].codomain_ptr(), chain_[l + 1].domain_ptr())) {
      throw PreconditionFailed("PlMap: chain factors are not composable");
    }
  }
  const std::size_t levels = chain_.size();
  lengths_.resize(levels + 1);
  lengths_[levels].assign(chain_.back().codomain().num_darts(), 1);
  for (std::size_t l = levels; l-- > 0;) {
    const Graph& g = chain_[l].domain();
    lengths_[l].assign(g.num_darts(), 0);
    for (int d = 0; d < g.num_darts(); ++d) {
      for (Dart y : chain_[l].image(Dart(d)).darts) lengths_[l][d] += lengths_[l + 1][y.id()];
    }
  }
  for (EdgeId e = 0; e < dom.num_edges(); ++e) {
    if (lengths_[0][chain_dart(Dart::along(e)).id()] != map_.edge_image(e).length()) {
      throw PreconditionFailed("PlMap: chain length differs from the image of " +
                               dom.edge_name(e));
    }
  }
}

PlMap PlMap::lifted(const GraphMap& map, const GraphMap& factor, int times,
                    const GraphMap& projection) {
  return PlMap(map, std::vector<GraphMap>(times, factor), projection);
}

Dart PlMap::chain_dart(Dart d) const {
  if (!projection_) return d;
  const Path& p = projection_->image(d);
  if (p.length() != 1) throw PreconditionFailed("PlMap: projection is not isometric");
  return p.darts.front();
}

std::pair<std::size_t, Rational> PlMap::locate(Dart d, Rational mu) const {
  if (chain_.empty()) return {0, mu};
  Dart cur = chain_dart(d);
  BigInt index = 0;
  for (std::size_t l = 0; l < chain_.size(); ++l) {
    const Path& img = chain_[l].image(cur);
    const Rational s = mu * static_cast<long>(img.length());
    const BigInt i = floor_of(s);
    mu = s - Rational(i);
    const auto ii = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < ii; ++j) index += lengths_[l + 1][img.darts[j].id()];
    cur = img.darts[ii];
  }
  return {static_cast<std::size_t>(index), mu};
}

GraphPoint PlMap::apply(const GraphPoint& x) const {
  if (x.is_vertex()) return GraphPoint::at_vertex(map_.vertex_image(x.vertex));
  const auto [i, mu] = locate(Dart::along(x.edge), x.lambda);
  return GraphPoint::on_dart(map_.codomain(), map_.edge_image(x.edge).darts[i], mu);
}

void PlMap::collect(Dart d, std::size_t level, const Rational& lo, const Rational& width,
                    std::vector<Rational>& out, std::size_t cap) const {
  if (out.size() >= cap) return;
  if (level == chain_.size()) {
    out.push_back(lo);
    return;
  }
  const Path& img = chain_[level].image(d);
  const Rational step = width / static_cast<long>(img.length());
  for (std::size_t i = 0; i < img.length(); ++i) {
    collect(img.darts[i], level + 1, lo + step * static_cast<long>(i), step, out, cap);
  }
}

std::vector<Rational> PlMap::breakpoints(EdgeId e, std::size_t cap) const {
  std::vector<Rational> out;
  if (chain_.empty()) {
    out.push_back(0);
  } else {
    collect(chain_dart(Dart::along(e)), 0, 0, 1, out, cap);
  }
  out.push_back(1);
  return out;
}

MappingTorus MappingTorus::of(const GraphMap& F) {
  if (auto violation = validate(F)) {
    throw InvalidInput("mapping torus: " + to_string(violation->kind));
  }
  if (!F.is_self_map()) throw InvalidInput("mapping torus: not a self-map");
  MappingTorus m{F, PlMap::uniform(F), false};
  const auto [v, r] = find_periodic_vertex(F);
  const LoopMap phi = power_loop_map(F, v, r);
  const SubgroupGraph whole = whole_group(F.domain_ptr(), v);
  const SubgroupGraph image = map_subgroup(phi, whole);
  m.homotopy_equivalence = image.canonical_form() == whole.canonical_form();
  return m;
}

TorusPoint flow(const MappingTorus& m, const TorusPoint& x, const Rational& s) {
  if (s < 0) throw PreconditionFailed("flow: negative time");
  const Rational total = x.t + s;
  const BigInt n = floor_of(total);
  GraphPoint p = x.position;
  for (BigInt i = 0; i < n; ++i) p = m.action.apply(p);
  return TorusPoint{p, total - Rational(n)};
}

Rational return_time(const TorusPoint& x) { return 1 - x.t; }

HMaps h_maps(const MappingTorus& m) {
  return HMaps{
      [m](const TorusPoint& x) { return flow(m, TorusPoint{x.position, 0}, x.t); },
      [m](const TorusPoint& x) {
        const Rational rho = return_time(x);
        return TorusPoint{flow(m, x, rho).position, 1 - rho};
      },
  };
}

namespace {

bool maps_equal(const std::function<GraphMap()>& lhs,
                const std::function<GraphMap()>& rhs) {
  try {
    return lhs() == rhs();
  } catch (const Error&) {
    return false;
  }
}

void record(SampleCheck& c, bool ok, const std::function<std::string()>& what) {
  ++c.samples;
  if (!ok) {
    ++c.failures;
    if (!c.first_failure) c.first_failure = what();
  }
}

}  // namespace

FlowHomotopyPair flow_homotopy_pair(const MappingTorus& x, const MappingTorus& y,
                                    const PlMap& alpha, const PlMap& beta, int k,
                                    const std::vector<TorusPoint>& samples_x,
                                    const std::vector<TorusPoint>& samples_y) {
  const GraphMap& a = alpha.map();
  const GraphMap& b = beta.map();
  if (!maps_equal([&] { return compose(a, x.F); }, [&] { return compose(y.F, a); })) {
    throw PreconditionFailed("flow_homotopy_pair: alpha F_X != F_Y alpha");
  }
  if (!maps_equal([&] { return compose(b, y.F); }, [&] { return compose(x.F, b); })) {
    throw PreconditionFailed("flow_homotopy_pair: beta F_Y != F_X beta");
  }
  if (!maps_equal([&] { return compose(b, a); }, [&] { return power(x.F, k); })) {
    throw PreconditionFailed("flow_homotopy_pair: beta alpha != F_X^k");
  }
  if (!maps_equal([&] { return compose(a, b); }, [&] { return power(y.F, k); })) {
    throw PreconditionFailed("flow_homotopy_pair: alpha beta != F_Y^k");
  }

  FlowHomotopyPair out;
  out.k = k;
  const HMaps hx = h_maps(x);
  const HMaps hy = h_maps(y);
  out.alpha_hat = [hx, hy, alpha](const TorusPoint& p) {
    const TorusPoint q = hx.h1(p);
    return hy.h0(TorusPoint{alpha.apply(q.position), q.t});
  };
  out.beta_hat = [hx, hy, beta](const TorusPoint& p) {
    const TorusPoint q = hy.h1(p);
    return hx.h0(TorusPoint{beta.apply(q.position), q.t});
  };

  const Rational times[] = {Rational(1, 3), Rational(1), Rational(5, 2), Rational(0),
                            Rational(7, 4)};
  const Rational composite(k + 2);
  for (std::size_t i = 0; i < samples_x.size(); ++i) {
    const TorusPoint& p = samples_x[i];
    const Rational& s = times[i % 5];
    record(out.alpha_equivariance,
           out.alpha_hat(flow(x, p, s)) == flow(y, out.alpha_hat(p), s),
           [&] { return "alpha equivariance at " + to_string(x.graph(), p); });
    record(out.beta_alpha, out.beta_hat(out.alpha_hat(p)) == flow(x, p, composite),
           [&] { return "beta alpha at " + to_string(x.graph(), p); });
  }
  for (std::size_t i = 0; i < samples_y.size(); ++i) {
    const TorusPoint& p = samples_y[i];
    const Rational& s = times[i % 5];
    record(out.beta_equivariance,
           out.beta_hat(flow(y, p, s)) == flow(x, out.beta_hat(p), s),
           [&] { return "beta equivariance at " + to_string(y.graph(), p); });
    record(out.alpha_beta, out.alpha_hat(out.beta_hat(p)) == flow(y, p, composite),
           [&] { return "alpha beta at " + to_string(y.graph(), p); });
  }
  return out;
}

std::vector<TorusPoint> sample_points(const MappingTorus& m, std::size_t count,
                                      std::uint64_t seed,
                                      const std::vector<const PlMap*>& maps) {
  std::mt19937_64 rng(seed);
  const Graph& g = m.graph();
  auto random_height = [&]() -> Rational {
    if (rng() % 4 == 0) return 0;
    const long den = 2 + static_cast<long>(rng() % 40);
    return Rational(static_cast<long>(rng() % den), den);
  };
  std::vector<TorusPoint> out;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    out.push_back({GraphPoint::at_vertex(v), 0});
    out.push_back({GraphPoint::at_vertex(v), random_height()});
  }
  std::vector<const PlMap*> all{&m.action};
  for (const PlMap* p : maps) {
    if (same_graph(p->map().domain_ptr(), m.F.domain_ptr())) all.push_back(p);
  }
  for (const PlMap* p : all) {
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      for (const Rational& lam : p->breakpoints(e)) {
        const GraphPoint x = GraphPoint::on_edge(g, e, lam);
        out.push_back({x, 0});
        out.push_back({x, random_height()});
      }
    }
  }
  while (out.size() < count) {
    const EdgeId e = static_cast<EdgeId>(rng() % g.num_edges());
    const long den = 2 + static_cast<long>(rng() % 97);
    const long num = 1 + static_cast<long>(rng() % (den - 1));
    out.push_back({GraphPoint::on_edge(g, e, Rational(num, den)), random_height()});
  }
  return out;
}

namespace {

void check_lift_identity(const MappingTorus& m, const SubgroupGraph& delta,
                         const GraphMap& g, int j) {
  if (j < 1) throw PreconditionFailed("cover descriptor: j must be positive");
  if (!same_graph(delta.ambient_ptr(), m.F.domain_ptr())) {
    throw PreconditionFailed("cover descriptor: cover is over a different graph");
  }
  if (!delta.is_covering()) throw PreconditionFailed("cover descriptor: not a finite covering");
  if (!g.is_self_map() || !same_graph(g.domain_ptr(), delta.graph_ptr())) {
    throw PreconditionFailed("cover descriptor: g is not a self-map of the cover");
  }
  if (auto violation = validate(g)) {
    throw PreconditionFailed("cover descriptor: g is invalid: " + to_string(violation->kind));
  }
  const GraphMap fj = power(m.F, j);
  const Graph& dg = delta.graph();
  for (VertexId v = 0; v < dg.num_vertices(); ++v) {
    if (delta.vertex_label(g.vertex_image(v)) != fj.vertex_image(delta.vertex_label(v))) {
      throw PreconditionFailed("cover descriptor: p g != F^j p at vertex " +
                               dg.vertex_name(v));
    }
  }
  for (EdgeId e = 0; e < dg.num_edges(); ++e) {
    if (delta.project(g.edge_image(e)) != fj.image(delta.label(Dart::along(e)))) {
      throw PreconditionFailed("cover descriptor: p g != F^j p on edge " + dg.edge_name(e));
    }
  }
}

}  // namespace

CoverDescriptor make_cover_descriptor(const MappingTorus& m, SubgroupGraph delta,
                                      const GraphMap& g, int j) {
  check_lift_identity(m, delta, g, j);
  PlMap pl = PlMap::lifted(g, m.F, j, projection_map(delta));
  const int sheets = delta.degree();
  return CoverDescriptor{m, std::move(delta), std::move(pl), j, sheets};
}

CoverDescriptor descriptor_from_subgroup(const MappingTorus& m, SubgroupGraph delta,
                                         int max_j) {
  if (!delta.is_covering()) throw PreconditionFailed("descriptor: not a finite covering");
  const VertexId v = delta.vertex_label(delta.base());
  const auto basis = delta.basis_words();
  for (int j = 1; j <= max_j; ++j) {
    const LoopMap phi = power_loop_map(m.F, v, j);
    if (phi.target != v) continue;
    const bool preserved = std::all_of(basis.begin(), basis.end(), [&](const Path& w) {
      return contains(delta, phi.apply(w));
    });
    if (!preserved) continue;
    LazyCover cover(delta);
    const GraphMap fj = power(m.F, j);
    auto lift = lift_graph_map_to(fj, cover, delta.base(), delta.base());
    if (!lift) throw Inconsistency("descriptor: preserved subgroup but no lift");
    return make_cover_descriptor(m, delta, restrict_to_core(*lift, cover), j);
  }
  throw PreconditionFailed("descriptor: no power up to " + std::to_string(max_j) +
                           " preserves the subgroup");
}

TorusPoint lifted_flow(const CoverDescriptor& d, const TorusPoint& x, const Rational& s) {
  if (s < 0) throw PreconditionFailed("lifted_flow: negative time");
  const Rational total = x.t + s;
  const BigInt n = floor_of(total / d.j);
  GraphPoint p = x.position;
  for (BigInt i = 0; i < n; ++i) p = d.g.apply(p);
  return TorusPoint{p, total - Rational(n * d.j)};
}

TorusPoint project(const CoverDescriptor& d, const TorusPoint& x) {
  GraphPoint p = x.position.is_vertex()
                     ? GraphPoint::at_vertex(d.delta.vertex_label(x.position.vertex))
                     : GraphPoint{-1, d.delta.edge_label(x.position.edge), x.position.lambda};
  const BigInt n = floor_of(x.t);
  for (BigInt i = 0; i < n; ++i) p = d.base.action.apply(p);
  return TorusPoint{p, x.t - Rational(n)};
}

DualClass dual_class(const CoverDescriptor& d) {
  const Graph& dg = d.delta.graph();
  Graph skeleton;
  for (VertexId v = 0; v < dg.num_vertices(); ++v) skeleton.add_vertex(dg.vertex_name(v));
  std::vector<BigInt> value;
  for (EdgeId e = 0; e < dg.num_edges(); ++e) {
    skeleton.add_edge(dg.edge_name(e), dg.origin(Dart::along(e)), dg.terminus(Dart::along(e)));
    value.push_back(0);
  }
  for (VertexId v = 0; v < dg.num_vertices(); ++v) {
    skeleton.add_edge("t_" + dg.vertex_name(v), v, d.g.map().vertex_image(v));
    value.push_back(d.j);
  }
  const auto tree = spanning_tree(skeleton, 0);
  std::vector<BigInt> potential(skeleton.num_vertices(), 0);
  std::vector<VertexId> order{0};
  std::vector<bool> seen(skeleton.num_vertices(), false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Dart x : skeleton.star(order[i])) {
      const VertexId w = skeleton.terminus(x);
      if (!seen[w] && tree[w] == x) {
        seen[w] = true;
        potential[w] = potential[order[i]] + (x.reversed() ? -value[x.edge()] : value[x.edge()]);
        order.push_back(w);
      }
    }
  }
  DualClass out;
  for (EdgeId e : non_tree_edges(skeleton, tree)) {
    const Dart x = Dart::along(e);
    const BigInt cycle =
        potential[skeleton.origin(x)] + value[e] - potential[skeleton.terminus(x)];
    out.values.emplace_back(skeleton.edge_name(e), cycle);
    out.index = gcd(out.index, abs(cycle));
  }
  return out;
}

FirstReturn section_first_return(const CoverDescriptor& d) {
  FirstReturn out{d.g.map(), d.j, dual_class(d).index, false};
  try {
    check_lift_identity(d.base, d.delta, d.g.map(), d.j);
    out.verified = out.dual_index == d.j;
  } catch (const PreconditionFailed&) {
    out.verified = false;
  }
  return out;
}

}  // namespace ttforge
