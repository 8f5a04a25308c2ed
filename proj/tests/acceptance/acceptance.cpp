// Runs the ten acceptance criteria and prints one PASS/FAIL line each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "ttforge/generator.hpp"
#include "ttforge/induced.hpp"
#include "ttforge/properties.hpp"
#include "ttforge/suspension.hpp"
#include "ttforge/traintrack.hpp"

using namespace ttforge;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Entry {
  std::string name;
  GraphMap f;
  std::optional<InducedPackage> pkg;
  std::optional<VerificationReport> report;
  std::string error;
};

struct Corpus {
  std::vector<Entry> entries;
  double build_seconds = 0;
};

constexpr std::uint64_t kCorpusSeed = 20240611;
constexpr int kRandomMaps = 100;

Corpus build_corpus() {
  Corpus c;
  const auto start = Clock::now();
  c.entries.push_back({"SIGMA", testing::sigma(), {}, {}, {}});
  c.entries.push_back({"FIB", testing::fib(), {}, {}, {}});
  c.entries.push_back({"CYC2", testing::cyc2(), {}, {}, {}});
  for (int i = 0; i < kRandomMaps; ++i) {
    c.entries.push_back({"random#" + std::to_string(i),
                         generate_train_track(case_seed(kCorpusSeed, i)).f, {}, {}, {}});
  }
  for (Entry& e : c.entries) {
    try {
      e.pkg = build_induced(e.f);
      e.report = verify_package(*e.pkg);
    } catch (const std::exception& ex) {
      e.error = ex.what();
    }
  }
  c.build_seconds = seconds_since(start);
  return c;
}

struct Outcome {
  bool ok = true;
  std::string detail;
  std::string first_failure;

  void fail(const std::string& what) {
    if (ok) first_failure = what;
    ok = false;
  }
};

int report(int index, const std::string& title, const Outcome& o) {
  std::printf("%s  %2d  %s: %s%s%s\n", o.ok ? "PASS" : "FAIL", index, title.c_str(),
              o.detail.c_str(), o.ok ? "" : "; first failure: ", o.first_failure.c_str());
  std::fflush(stdout);
  return o.ok ? 0 : 1;
}

template <typename... Args>
std::string fmt(const char* pattern, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

Outcome criterion_identities(const Corpus& c) {
  Outcome o;
  for (const Entry& e : c.entries) {
    if (!e.report) {
      o.fail(e.name + ": " + e.error);
      continue;
    }
    const InducedPackage& p = *e.pkg;
    if (!e.report->identities_hold()) o.fail(e.name + ": identity");
    if (p.K != 2 * p.k * p.n * p.r || p.k < 1 || p.n < 1 || p.r < 1) o.fail(e.name + ": K");
  }
  if (c.build_seconds >= 10.0) o.fail(fmt("runtime %.2f s", c.build_seconds));
  o.detail = fmt("%zu maps, fbar P = P f, pbar fbar = f pbar, pbar P = f^K, P pbar = fbar^K, "
                 "K = 2knr (%.2f s)",
                 c.entries.size(), c.build_seconds);
  return o;
}

Outcome criterion_transfer(const Corpus& c) {
  Outcome o;
  int primitive = 0;
  for (const Entry& e : c.entries) {
    if (!e.report) {
      o.fail(e.name + ": no package");
      continue;
    }
    const VerificationReport& r = *e.report;
    if (!r.fbar_train_track) o.fail(e.name + ": fbar not a train track map");
    if (!r.fbar_expanding) o.fail(e.name + ": fbar not expanding");
    if (!r.fbar_irreducible) o.fail(e.name + ": fbar reducible");
    if (r.f_positive_power) {
      ++primitive;
      if (!r.fbar_positive_power) o.fail(e.name + ": A(fbar) has no positive power");
    }
  }
  o.detail = fmt("fbar train track, expanding, irreducible on %zu maps; positive power "
                 "transfers on %d primitive ones",
                 c.entries.size(), primitive);
  return o;
}

Outcome criterion_growth(const Corpus& c) {
  Outcome o;
  double worst = 0;
  for (const Entry& e : c.entries) {
    if (!e.report) {
      o.fail(e.name + ": no package");
      continue;
    }
    worst = std::max(worst, e.report->lambda_difference);
    if (e.report->lambda_difference > 1e-8) o.fail(e.name + ": growth rates differ");
  }
  auto expect = [&](int i, double target) {
    const VerificationReport& r = *c.entries[i].report;
    if (std::abs(r.lambda_f - target) > 1e-9 || std::abs(r.lambda_fbar - target) > 1e-9) {
      o.fail(c.entries[i].name + fmt(": lambda %.12f", r.lambda_f));
    }
  };
  if (c.entries[0].report && c.entries[1].report && c.entries[2].report) {
    expect(0, 2.0);
    expect(1, 1.6180339887);
    expect(2, 2.0);
  }
  o.detail = fmt("max |lambda(f) - lambda(fbar)| = %.2e; SIGMA %.10f, FIB %.10f, CYC2 %.10f",
                 worst, c.entries[0].report ? c.entries[0].report->lambda_f : 0.0,
                 c.entries[1].report ? c.entries[1].report->lambda_f : 0.0,
                 c.entries[2].report ? c.entries[2].report->lambda_f : 0.0);
  return o;
}

Outcome criterion_stable_quotient() {
  Outcome o;
  const auto start = Clock::now();
  struct Case {
    std::string name;
    Pi1Endomorphism phi;
    int K;
    int rank;
    std::vector<std::string> phi_bar;
  };
  const std::vector<Case> cases = {
      {"SIGMA", pi1_endomorphism(testing::sigma(), 0), 1, 1, {"x1 x1"}},
      {"FIB", pi1_endomorphism(testing::fib(), 0), 0, 2, {}},
      {"NILP", testing::nilp(), 3, 0, {}},
  };
  std::ostringstream detail;
  for (const Case& c : cases) {
    const StableQuotientReport q = stable_quotient(c.phi);
    const int oracle = testing::brute_force_kernel_stabilization(c.phi, 6);
    if (q.stabilization != c.K) o.fail(c.name + ": K = " + std::to_string(q.stabilization));
    if (oracle != c.K) o.fail(c.name + ": word oracle K = " + std::to_string(oracle));
    if (q.rank != c.rank) o.fail(c.name + ": rank " + std::to_string(q.rank));
    if (!c.phi_bar.empty()) {
      std::vector<std::string> got;
      for (const auto& w : q.restriction) got.push_back(basis_word_to_string(w));
      if (got != c.phi_bar) o.fail(c.name + ": phi_bar is not squaring");
    }
    detail << c.name << " (K=" << q.stabilization << ", rank " << q.rank << ") ";
  }
  const double t = seconds_since(start);
  if (t >= 5.0) o.fail(fmt("runtime %.2f s", t));
  detail << "matches the oracle on words of length <= 6, phi_bar(x1) = x1 x1 for SIGMA"
         << fmt(" (%.2f s)", t);
  o.detail = detail.str();
  return o;
}

Outcome criterion_structure(const Corpus& c) {
  Outcome o;
  for (const Entry& e : c.entries) {
    if (!e.report) {
      o.fail(e.name + ": no package");
      continue;
    }
    if (!e.report->n_constant) o.fail(e.name + ": n(i) varies");
    const InducedPackage& p = *e.pkg;
    for (int m : {p.n * p.r, (p.n + 1) * p.r}) {
      if (!lifted_power_onto_core(p, m)) o.fail(e.name + ": lift of f^" + std::to_string(m));
    }
  }
  o.detail = fmt("n(i) constant and the based lift of f^m covers the core for m in {nr, (n+1)r} "
                 "on %zu maps",
                 c.entries.size());
  return o;
}

Outcome criterion_legal_loops(const Corpus& c) {
  Outcome o;
  int loops = 0;
  for (const Entry& e : c.entries) {
    for (EdgeId edge = 0; edge < e.f.domain().num_edges(); ++edge) {
      try {
        const LegalLoop loop = legal_loop_through(e.f, edge);
        ++loops;
        const bool crosses = std::any_of(loop.darts.begin(), loop.darts.end(),
                                         [&](Dart d) { return d.edge() == edge; });
        if (!crosses) o.fail(e.name + ": loop misses its edge");
        if (!certify_legal(e.f, loop.darts)) o.fail(e.name + ": certificate rejected");
        if (!pushes_stay_immersed(e.f, loop.darts, 10)) o.fail(e.name + ": push not immersed");
      } catch (const std::exception& ex) {
        o.fail(e.name + ": " + ex.what());
      }
    }
  }
  o.detail = fmt("%d certified loops, f^k-images immersed for k <= 10", loops);
  return o;
}

Outcome criterion_invariant_subgraphs(const Corpus& c) {
  Outcome o;
  std::vector<std::pair<std::string, GraphMap>> maps;
  for (const Entry& e : c.entries) {
    maps.emplace_back(e.name, e.f);
    if (e.pkg) maps.emplace_back(e.name + " fbar", e.pkg->fbar);
  }
  GeneratorOptions opt;
  opt.max_edges = 8;
  for (int i = 0; i < 200; ++i) {
    maps.emplace_back("non-tt#" + std::to_string(i),
                      generate_non_train_track(case_seed(kCorpusSeed + 1, i), opt));
  }
  int checked = 0, reducible = 0;
  for (const auto& [name, f] : maps) {
    if (f.domain().num_edges() > 8) continue;
    ++checked;
    const bool brute = testing::has_invariant_subset_brute_force(f);
    const auto found = find_invariant_subgraph(f);
    const bool irreducible = is_irreducible(transition_matrix(f)).irreducible;
    reducible += brute ? 1 : 0;
    if (brute != found.has_value()) o.fail(name + ": disagrees with subset search");
    if (brute == irreducible) o.fail(name + ": disagrees with is_irreducible");
    if (found) {
      for (EdgeId e : *found) {
        for (EdgeId x : image_closure(f, e)) {
          if (std::find(found->begin(), found->end(), x) == found->end()) {
            o.fail(name + ": witness not invariant");
          }
        }
      }
    }
  }
  o.detail = fmt("%d self-maps with <= 8 edges (%d reducible) agree with exhaustive search "
                 "and is_irreducible",
                 checked, reducible);
  return o;
}

Outcome criterion_flow(const Corpus& c) {
  Outcome o;
  const auto start = Clock::now();
  std::size_t total = 0;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 3; ++i) {
    const Entry& e = c.entries[i];
    if (!e.pkg) {
      o.fail(e.name + ": no package");
      continue;
    }
    const InducedPackage& p = *e.pkg;
    const MappingTorus x = MappingTorus::of(p.f);
    const MappingTorus y = MappingTorus::of(p.fbar);
    const PlMap alpha(p.P, std::vector<GraphMap>(p.K, p.f));
    const PlMap beta(p.pbar, {});
    const auto sx = sample_points(x, 1000, 100 + i, {&alpha});
    const auto sy = sample_points(y, 1000, 200 + i, {&beta});
    const HMaps h = h_maps(x);
    for (const TorusPoint& pt : sx) {
      const Rational s(static_cast<long>(rng() % 24), 1 + static_cast<long>(rng() % 6));
      const Rational s2(static_cast<long>(rng() % 24), 1 + static_cast<long>(rng() % 6));
      if (flow(x, pt, s + s2) != flow(x, flow(x, pt, s), s2)) o.fail(e.name + ": semigroup");
      if (h.h1(h.h0(pt)) != flow(x, pt, 1)) o.fail(e.name + ": h1 h0");
      if (h.h0(h.h1(pt)) != flow(x, pt, 1)) o.fail(e.name + ": h0 h1");
    }
    const auto pair = flow_homotopy_pair(x, y, alpha, beta, p.K, sx, sy);
    if (!pair.beta_alpha.ok()) o.fail(e.name + ": beta alpha");
    if (!pair.alpha_beta.ok()) o.fail(e.name + ": alpha beta");
    if (!pair.alpha_equivariance.ok() || !pair.beta_equivariance.ok()) {
      o.fail(e.name + ": equivariance");
    }
    if (sx.size() < 1000) o.fail(e.name + ": too few samples");
    total += sx.size();
  }
  const double t = seconds_since(start);
  if (t >= 5.0) o.fail(fmt("runtime %.2f s", t));
  o.detail = fmt("semigroup law, h1h0 = Psi_1, h0h1 = phi_1, beta^alpha^ = Psi_{K+2} exact at "
                 "%zu points incl. breakpoints (%.2f s)",
                 total, t);
  return o;
}

Outcome criterion_descriptors() {
  Outcome o;
  const MappingTorus m = MappingTorus::of(testing::fib());
  const Graph& g = m.graph();
  const std::vector<std::pair<std::string, SubgroupGraph>> covers = {
      {"trivial", whole_group(m.F.domain_ptr(), 0)},
      {"index-2", fold(m.F.domain_ptr(), 0,
                       {testing::word(g, "a"), testing::word(g, "b a -b"),
                        testing::word(g, "b b")})}};
  std::mt19937_64 rng(9);
  std::ostringstream detail;
  for (const auto& [name, delta] : covers) {
    try {
      const CoverDescriptor d = descriptor_from_subgroup(m, delta);
      const FirstReturn fr = section_first_return(d);
      const CoverDescriptor again = make_cover_descriptor(m, d.delta, fr.g, fr.j);
      if (!fr.verified || again.g.map() != d.g.map() || again.j != d.j) {
        o.fail(name + ": round trip");
      }
      const Graph& dg = d.delta.graph();
      for (int i = 0; i < 100; ++i) {
        const long den = 2 + static_cast<long>(rng() % 30);
        const GraphPoint p =
            i % 10 == 0
                ? GraphPoint::at_vertex(static_cast<VertexId>(rng() % dg.num_vertices()))
                : GraphPoint::on_edge(dg, static_cast<EdgeId>(rng() % dg.num_edges()),
                                      Rational(1 + static_cast<long>(rng() % (den - 1)), den));
        const TorusPoint x{p, Rational(static_cast<long>(rng() % (7 * d.j)), 7)};
        const Rational s(static_cast<long>(rng() % 50), 1 + static_cast<long>(rng() % 5));
        if (project(d, lifted_flow(d, x, s)) != flow(m, project(d, x), s)) {
          o.fail(name + ": lifted flow does not commute");
        }
      }
      detail << name << " (j=" << d.j << ", degree " << d.degree() << ") ";
    } catch (const std::exception& ex) {
      o.fail(name + ": " + ex.what());
    }
  }
  detail << "round-trip; lifted flow commutes with projection at 100 samples each";
  o.detail = detail.str();
  return o;
}

Outcome criterion_hall() {
  Outcome o;
  std::mt19937_64 rng(10);
  int max_degree = 0;
  for (int i = 0; i < 50; ++i) {
    const int n = 1 + static_cast<int>(rng() % 3);
    std::vector<std::string> names;
    for (int e = 0; e < n; ++e) names.push_back(std::string(1, static_cast<char>('a' + e)));
    auto g = testing::rose(names);
    std::vector<Path> gens;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 3); ++k) {
      gens.push_back(testing::random_reduced_loop(*g, 0, 1 + static_cast<int>(rng() % 6), rng));
    }
    const SubgroupGraph h = fold(g, 0, gens);
    const SubgroupGraph cover = hall_completion(h);
    const std::string tag = "core #" + std::to_string(i);
    if (!cover.is_covering()) o.fail(tag + ": not a covering");
    if (!embeds_into(h, cover)) o.fail(tag + ": core does not embed");
    if (cover.degree() > h.graph().num_vertices()) o.fail(tag + ": degree too large");
    for (const Path& w : gens) {
      if (!contains(cover, w)) o.fail(tag + ": generator lost");
    }
    max_degree = std::max(max_degree, cover.degree());
  }
  o.detail = fmt("50 random cores over roses of rank <= 3 complete to coverings containing "
                 "them (max degree %d)",
                 max_degree);
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  const Corpus corpus = build_corpus();
  failures += report(1, "Package identities", criterion_identities(corpus));
  failures += report(2, "Property transfer", criterion_transfer(corpus));
  failures += report(3, "Growth-rate invariance", criterion_growth(corpus));
  failures += report(4, "Stable quotient", criterion_stable_quotient());
  failures += report(5, "Structural facts", criterion_structure(corpus));
  failures += report(6, "Legal loops", criterion_legal_loops(corpus));
  failures += report(7, "Invariant subgraphs", criterion_invariant_subgraphs(corpus));
  failures += report(8, "Flow algebra", criterion_flow(corpus));
  failures += report(9, "Cover descriptors", criterion_descriptors());
  failures += report(10, "Hall completion", criterion_hall());
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
