#include "ttforge/properties.hpp"

#include "ttforge/error.hpp"
#include "ttforge/suspension.hpp"
#include "ttforge/traintrack.hpp"

namespace ttforge {

bool CaseReport::ok() const { return failed().empty(); }

std::vector<std::string> CaseReport::failed() const {
  std::vector<std::string> out;
  for (const auto& o : outcomes) {
    if (!o.ok) out.push_back(o.name);
  }
  return out;
}

bool has_invariant_subset_exhaustive(const GraphMap& f) {
  const int n = f.domain().num_edges();
  if (n > 20) throw InvalidInput("exhaustive subset search: too many edges");
  const unsigned full = (1u << n) - 1;
  for (unsigned s = 1; s < full; ++s) {
    bool closed = true;
    for (int e = 0; e < n && closed; ++e) {
      if (!(s >> e & 1u)) continue;
      for (Dart d : f.edge_image(e).darts) closed = closed && (s >> d.edge() & 1u);
    }
    if (closed) return true;
  }
  return false;
}

bool pushes_stay_immersed(const GraphMap& f, const CyclicPath& loop, int times) {
  CyclicPath cur = loop;
  for (int k = 1; k <= times; ++k) {
    cur = apply_cyclic(f, cur);
    if (!is_cyclically_reduced(cur)) return false;
  }
  return true;
}

CaseReport check_map_properties(const GraphMap& f, const PropertyOptions& opt) {
  CaseReport out;
  auto record = [&](std::string name, bool ok, std::string detail = {}) {
    out.outcomes.push_back(PropertyOutcome{std::move(name), ok, std::move(detail)});
  };
  auto guarded = [&](const std::string& name, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      record(name, false, e.what());
    }
  };

  try {
    out.package = build_induced(f);
  } catch (const PreconditionFailed& e) {
    out.rejected = e.what();
    return out;
  } catch (const std::exception& e) {
    record("build_induced", false, e.what());
    return out;
  }
  const InducedPackage& pkg = *out.package;

  guarded("verify", [&] {
    const VerificationReport r = verify_package(pkg);
    std::string why;
    for (const auto& s : r.failures) why += (why.empty() ? "" : "; ") + s;
    record("identities", r.identities_hold() && r.K_formula, why);
    record("property_transfer",
           r.fbar_train_track && r.fbar_expanding && r.fbar_irreducible &&
               r.primitivity_transfers && r.no_valence_one,
           why);
    record("growth_rate", r.lambda_match, std::to_string(r.lambda_difference));
    record("rank", r.rank_matches);
    record("n_constant", r.n_constant);
  });

  guarded("lift_onto_core", [&] {
    const bool a = lifted_power_onto_core(pkg, pkg.n * pkg.r);
    const bool b = lifted_power_onto_core(pkg, (pkg.n + 1) * pkg.r);
    record("lift_onto_core", a && b);
  });

  guarded("legal_loops", [&] {
    bool ok = true;
    std::string detail;
    for (EdgeId e = 0; e < f.domain().num_edges() && ok; ++e) {
      const LegalLoop loop = legal_loop_through(f, e);
      const bool crosses = std::any_of(loop.darts.begin(), loop.darts.end(),
                                       [&](Dart d) { return d.edge() == e; });
      ok = crosses && certify_legal(f, loop.darts).has_value() &&
           pushes_stay_immersed(f, loop.darts, opt.legal_loop_pushes);
      if (!ok) detail = "edge " + f.domain().edge_name(e);
    }
    record("legal_loops", ok, detail);
  });

  if (f.domain().num_edges() <= opt.exhaustive_edges) {
    guarded("invariant_subgraph", [&] {
      const bool brute = has_invariant_subset_exhaustive(f);
      const bool found = find_invariant_subgraph(f).has_value();
      const bool reducible = !is_irreducible(transition_matrix(f)).irreducible;
      record("invariant_subgraph", brute == found && found == reducible);
    });
  }

  guarded("quotient_rank", [&] {
    const auto q = stable_quotient(pi1_endomorphism(power(f, pkg.r), pkg.v));
    record("quotient_rank", q.rank == pkg.j.rank(),
           std::to_string(q.rank) + " vs " + std::to_string(pkg.j.rank()));
  });

  guarded("flow", [&] {
    const MappingTorus x = MappingTorus::of(pkg.f);
    const MappingTorus y = MappingTorus::of(pkg.fbar);
    const PlMap alpha(pkg.P, std::vector<GraphMap>(pkg.K, pkg.f));
    const PlMap beta(pkg.pbar, {});
    const auto sx = sample_points(x, opt.flow_samples, 1, {&alpha});
    const auto sy = sample_points(y, opt.flow_samples, 2, {&beta});
    const HMaps h = h_maps(x);
    bool ok = true;
    for (const TorusPoint& p : sx) {
      ok = ok && h.h1(h.h0(p)) == flow(x, p, 1) && h.h0(h.h1(p)) == flow(x, p, 1) &&
           flow(x, p, Rational(7, 3)) == flow(x, flow(x, p, Rational(4, 3)), 1);
    }
    const auto pair = flow_homotopy_pair(x, y, alpha, beta, pkg.K, sx, sy);
    record("flow", ok && pair.ok(), pair.beta_alpha.first_failure.value_or(""));
  });
  return out;
}

}  // namespace ttforge
