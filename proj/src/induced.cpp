#include "ttforge/induced.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "ttforge/error.hpp"

namespace ttforge {

PeriodicVertex find_periodic_vertex(const GraphMap& f) {
  if (!f.is_self_map()) throw PreconditionFailed("find_periodic_vertex: not a self-map");
  const int nv = f.domain().num_vertices();
  PeriodicVertex best;
  for (VertexId v = 0; v < nv; ++v) {
    VertexId w = f.vertex_image(v);
    for (int r = 1; r <= nv; ++r, w = f.vertex_image(w)) {
      if (w == v) {
        if (best.v < 0 || r < best.r) best = {v, r};
        break;
      }
    }
  }
  return best;
}

LoopMap power_loop_map(const GraphMap& f, VertexId v, int m) {
  VertexId target = v;
  for (int i = 0; i < m; ++i) target = f.vertex_image(target);
  return LoopMap{v, target, [&f, m](const Path& p) {
                   Path q = tighten(p);
                   for (int i = 0; i < m; ++i) q = apply_path(f, q, Reduce::kYes);
                   return q;
                 }};
}

InjectivityExponent injectivity_exponent(const GraphMap& f, VertexId v, int r) {
  InjectivityExponent out;
  VertexId vi = v;
  for (int i = 0; i < r; ++i, vi = f.vertex_image(vi)) {
    out.orbit.push_back(vi);
    const LoopMap step = power_loop_map(f, vi, 1);
    const LoopMap cycle = power_loop_map(f, vi, r);
    if (cycle.target != vi) {
      throw PreconditionFailed("injectivity_exponent: vertex is not r-periodic");
    }
    SubgroupGraph j = map_subgroup(cycle, whole_group(f.domain_ptr(), vi));
    int n = 1;
    // Each failure strictly lowers the rank, so this stops within rank steps.
    while (!is_injective_on(step, j)) {
      j = map_subgroup(cycle, j);
      ++n;
    }
    out.per_vertex.push_back(n);
  }
  out.n = out.per_vertex.front();
  for (int x : out.per_vertex) {
    if (x != out.n) {
      throw Inconsistency("injectivity_exponent: n(i) is not constant along the orbit");
    }
  }
  return out;
}

namespace {

void require_hypotheses(const GraphMap& f) {
  if (auto violation = validate(f)) {
    throw PreconditionFailed("invalid graph map: " + to_string(violation->kind) +
                             " (" + violation->detail + ")");
  }
  if (!f.is_self_map()) throw PreconditionFailed("not a self-map");
  const Graph& g = f.domain();
  if (!g.is_connected()) throw PreconditionFailed("graph is not connected");
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (g.valence(v) < 2) {
      throw PreconditionFailed("vertex " + g.vertex_name(v) + " has valence " +
                               std::to_string(g.valence(v)));
    }
  }
  const auto tt = is_train_track(f);
  if (!tt.train_track) throw PreconditionFailed("not a train track map: " + tt.reason);
  const auto ex = is_expanding(f);
  if (!ex.expanding) {
    throw PreconditionFailed("not expanding: edge " +
                             g.edge_name(*ex.bounded_edge) + " stays bounded");
  }
  const auto irr = is_irreducible(transition_matrix(f));
  if (!irr.irreducible) {
    throw PreconditionFailed("not irreducible: no walk from edge " +
                             g.edge_name(irr.missing->first) + " to edge " +
                             g.edge_name(irr.missing->second));
  }
}

std::vector<bool> edges_hit(const GraphMap& m) {
  std::vector<bool> hit(m.codomain().num_edges(), false);
  for (EdgeId e = 0; e < m.domain().num_edges(); ++e) {
    for (Dart d : m.edge_image(e).darts) hit[d.edge()] = true;
  }
  return hit;
}

}  // namespace

InducedPackage build_induced(const GraphMap& f) {
  require_hypotheses(f);
  const auto [v, r] = find_periodic_vertex(f);
  const InjectivityExponent ie = injectivity_exponent(f, v, r);
  const int n = ie.n;

  const LoopMap cycle = power_loop_map(f, v, r);
  SubgroupGraph whole = whole_group(f.domain_ptr(), v);
  SubgroupGraph j = whole;
  for (int i = 0; i < n; ++i) j = map_subgroup(cycle, j);
  const bool trivial = j.canonical_form() == whole.canonical_form();

  std::optional<LazyCover> cover;
  GraphPtr theta_bar;
  std::optional<GraphMap> fbar, pbar;
  VertexId base;
  if (trivial) {
    theta_bar = f.domain_ptr();
    fbar = f;
    pbar = GraphMap::identity(theta_bar);
    base = v;
  } else {
    if (j.graph().valence(j.base()) < 2) {
      throw Inconsistency("build_induced: basepoint of J is not in its core");
    }
    cover.emplace(j);
    fbar = restrict_to_core(lift_graph_map(f, *cover, j.base()), *cover);
    pbar = projection_map(j);
    theta_bar = j.graph_ptr();
    base = j.base();
  }

  // Orbit of ṽ under f̄^r: preperiod μ and period λ.
  std::map<VertexId, int> seen;
  std::vector<VertexId> seq{base};
  for (;;) {
    const VertexId s = seq.back();
    if (auto it = seen.find(s); it != seen.end()) {
      break;
    }
    seen.emplace(s, static_cast<int>(seq.size()) - 1);
    VertexId next = s;
    for (int i = 0; i < r; ++i) next = fbar->vertex_image(next);
    seq.push_back(next);
  }
  const int mu = seen.at(seq.back());
  const int lambda = static_cast<int>(seq.size()) - 1 - mu;
  const int k = lambda * ((std::max(mu, 1) + lambda - 1) / lambda);
  const int m = k * n * r;

  GraphMap fhat = trivial ? power(f, m)
                          : restrict_to_core(based_lift_power(f, m, *cover, base), *cover);
  GraphMap P = compose(power(*fbar, m), fhat);
  const VertexId z = P.vertex_image(v);
  if (z != seq[mu + (k - mu) % lambda]) {
    throw Inconsistency("build_induced: P(v) is not f̄^{kr}(ṽ)");
  }

  return InducedPackage{
      .f = f,
      .v = v,
      .r = r,
      .n = n,
      .k = k,
      .K = 2 * m,
      .orbit = ie.orbit,
      .n_values = ie.per_vertex,
      .j = std::move(j),
      .trivial_cover = trivial,
      .cover_base = base,
      .z = z,
      .preperiod = mu,
      .period = lambda,
      .theta_bar = theta_bar,
      .fbar = std::move(*fbar),
      .pbar = std::move(*pbar),
      .P = std::move(P),
  };
}

bool lifted_power_onto_core(const InducedPackage& pkg, int m) {
  GraphMap image = pkg.trivial_cover
                       ? power(pkg.f, m)
                       : [&] {
                           LazyCover cover(pkg.j);
                           return restrict_to_core(
                               based_lift_power(pkg.f, m, cover, pkg.cover_base),
                               cover);
                         }();
  const auto hit = edges_hit(image);
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

VerificationReport verify_package(const InducedPackage& pkg) {
  VerificationReport rep;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) rep.failures.push_back(what);
    return ok;
  };
  auto equal = [](auto&& lhs, auto&& rhs) {
    try {
      return lhs() == rhs();
    } catch (const Error&) {
      return false;
    }
  };
  const GraphMap& f = pkg.f;
  rep.fbar_P_equals_P_f =
      check(equal([&] { return compose(pkg.fbar, pkg.P); },
                  [&] { return compose(pkg.P, f); }),
            "fbar P = P f");
  rep.pbar_fbar_equals_f_pbar =
      check(equal([&] { return compose(pkg.pbar, pkg.fbar); },
                  [&] { return compose(f, pkg.pbar); }),
            "pbar fbar = f pbar");
  rep.pbar_P_equals_f_K =
      check(equal([&] { return compose(pkg.pbar, pkg.P); },
                  [&] { return power(f, pkg.K); }),
            "pbar P = f^K");
  rep.P_pbar_equals_fbar_K =
      check(equal([&] { return compose(pkg.P, pkg.pbar); },
                  [&] { return power(pkg.fbar, pkg.K); }),
            "P pbar = fbar^K");
  rep.K_formula = check(pkg.K == 2 * pkg.k * pkg.n * pkg.r && pkg.k >= 1 &&
                            pkg.n >= 1 && pkg.r >= 1,
                        "K = 2knr");

  const Graph& tb = *pkg.theta_bar;
  rep.no_valence_one = true;
  for (VertexId x = 0; x < tb.num_vertices(); ++x) {
    if (tb.valence(x) < 2) rep.no_valence_one = false;
  }
  check(rep.no_valence_one, "Theta-bar has no valence-one vertex");

  rep.fbar_train_track = check(is_train_track(pkg.fbar).train_track, "fbar is train track");
  rep.fbar_expanding = check(is_expanding(pkg.fbar).expanding, "fbar is expanding");
  const IntMatrix a = transition_matrix(f);
  const IntMatrix abar = transition_matrix(pkg.fbar);
  rep.fbar_irreducible = check(is_irreducible(abar).irreducible, "fbar is irreducible");
  rep.f_positive_power = has_positive_power(a);
  rep.fbar_positive_power = has_positive_power(abar);
  rep.primitivity_transfers = check(
      !rep.f_positive_power || rep.fbar_positive_power.has_value(),
      "positive power transfers to fbar");

  rep.lambda_f = pf_eigenvalue(a).value;
  if (rep.fbar_irreducible) rep.lambda_fbar = pf_eigenvalue(abar).value;
  rep.lambda_difference = std::abs(rep.lambda_f - rep.lambda_fbar);
  rep.lambda_match = check(rep.lambda_difference <= 1e-8, "lambda(f) = lambda(fbar)");

  rep.core_rank = tb.rank();
  rep.j_rank = pkg.j.rank();
  rep.rank_matches = check(rep.core_rank == rep.j_rank, "rank Theta-bar = rank J");
  rep.n_values = pkg.n_values;
  rep.n_constant = check(
      std::all_of(pkg.n_values.begin(), pkg.n_values.end(),
                  [&](int x) { return x == pkg.n; }),
      "n(i) constant along the orbit");
  return rep;
}

namespace {

using Word = std::vector<int>;

Word reduce_word(Word w) {
  Word out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

Word conjugate(const Word& c, const Word& w) {
  Word out = c;
  out.insert(out.end(), w.begin(), w.end());
  for (auto it = c.rbegin(); it != c.rend(); ++it) out.push_back(-*it);
  return reduce_word(std::move(out));
}

}  // namespace

ConjugacyResult conjugacy_check(const InducedPackage& pkg,
                                const StableQuotientReport& quotient, int bound,
                                long budget) {
  ConjugacyResult out;
  out.bound = bound;
  const GraphMap& fbar = pkg.fbar;
  const Graph& tb = *pkg.theta_bar;
  const GraphMap fbar_r = power(fbar, pkg.r);

  // Loops at ṽ in Θ̄ that project to the basis of J.
  const std::vector<Path> loops =
      pkg.trivial_cover ? pkg.j.basis_words() : pkg.j.basis_loops();
  const VertexId s1 = fbar_r.vertex_image(pkg.cover_base);
  const auto tree = spanning_tree(tb, pkg.cover_base);
  const Path delta = tree_path(tb, tree, pkg.cover_base, s1);
  const Path c_amb = apply_path(pkg.pbar, delta, Reduce::kYes);
  out.ambient_conjugator = c_amb;

  const LoopMap phi = power_loop_map(pkg.f, pkg.v, pkg.r);
  out.ambient_identity_holds = true;
  for (const Path& gamma : loops) {
    Path transported = delta;
    append(transported, apply_path(fbar_r, gamma));
    append(transported, reverse(delta));
    const Path down = apply_path(pkg.pbar, transported, Reduce::kYes);
    auto word = pkg.j.read_in_basis(down);
    if (!word) throw Inconsistency("conjugacy_check: transported loop is not in J");
    out.fbar_star.push_back(*word);

    const Path base_loop = apply_path(pkg.pbar, gamma, Reduce::kYes);
    Path expected = c_amb;
    append(expected, phi.apply(base_loop));
    append(expected, reverse(c_amb));
    if (tighten(expected) != down) out.ambient_identity_holds = false;
  }
  out.phi_bar = restriction_in_basis(phi, pkg.j);
  out.rank_agrees = quotient.rank == pkg.j.rank();

  // Breadth-first over reduced words in the basis of J.
  const int rank = pkg.j.rank();
  auto matches = [&](const Word& c) {
    for (std::size_t i = 0; i < out.phi_bar.size(); ++i) {
      if (conjugate(c, out.phi_bar[i]) != out.fbar_star[i]) return false;
    }
    return true;
  };
  std::deque<Word> frontier{Word{}};
  while (!frontier.empty() && out.candidates < budget) {
    Word c = std::move(frontier.front());
    frontier.pop_front();
    ++out.candidates;
    if (matches(c)) {
      out.witness = c;
      break;
    }
    if (static_cast<int>(c.size()) == bound) continue;
    for (int g = 1; g <= rank; ++g) {
      for (int x : {g, -g}) {
        if (!c.empty() && c.back() == -x) continue;
        Word next = c;
        next.push_back(x);
        frontier.push_back(std::move(next));
      }
    }
  }
  if (out.witness) {
    out.summary = "conjugator " + basis_word_to_string(*out.witness) + " in J";
  } else {
    out.summary = "no conjugator in J of length <= " + std::to_string(bound) +
                  " (" + std::to_string(out.candidates) +
                  " candidates); ambient conjugator " + to_string(pkg.f.domain(), c_amb);
  }
  return out;
}

}  // namespace ttforge
