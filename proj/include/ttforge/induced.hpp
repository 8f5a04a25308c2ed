#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttforge/covers.hpp"
#include "ttforge/freegroup.hpp"
#include "ttforge/graph_map.hpp"
#include "ttforge/traintrack.hpp"

namespace ttforge {

struct PeriodicVertex {
  VertexId v = -1;
  int r = 0;
};

/// Smallest-id vertex among those of minimal period, with its exact period.
PeriodicVertex find_periodic_vertex(const GraphMap& f);

/// (f^m)_* : π₁(Θ, v) → π₁(Θ, f^m(v)), reducing after every application.
LoopMap power_loop_map(const GraphMap& f, VertexId v, int m);

struct InjectivityExponent {
  int n = 0;
  /// v_i = f^i(v) for i < r, and n(i) at each of them.
  std::vector<VertexId> orbit;
  std::vector<int> per_vertex;
};

/// Smallest n >= 1 such that f_* is injective on J_i = (f^r)_*^n(B_i),
/// computed at every vertex of the orbit. Throws Inconsistency if the values
/// differ along the orbit.
InjectivityExponent injectivity_exponent(const GraphMap& f, VertexId v, int r);

/// Induced map on a finite cover together with the semi-conjugacies to f.
struct InducedPackage {
  GraphMap f;
  VertexId v = -1;
  int r = 0;
  int n = 0;
  int k = 0;
  int K = 0;
  std::vector<VertexId> orbit;
  std::vector<int> n_values;

  /// J = (f^r)_*^n(π₁(Θ, v)) folded at v. When the cover is nontrivial its
  /// graph is Θ̄ itself and the basepoint 0 is ṽ.
  SubgroupGraph j;
  bool trivial_cover = false;
  VertexId cover_base = -1;  // ṽ in Θ̄
  VertexId z = -1;           // f̄^{kr}(ṽ)
  int preperiod = 0;         // of ṽ under f̄^r
  int period = 0;

  GraphPtr theta_bar;
  GraphMap fbar;
  GraphMap pbar;
  GraphMap P;
};

/// Requires an expanding irreducible train track map on a connected graph
/// without valence-one vertices; throws PreconditionFailed otherwise.
InducedPackage build_induced(const GraphMap& f);

/// Image of the based lift of f^m, as a subset of core edges, is all of Θ̄.
bool lifted_power_onto_core(const InducedPackage& pkg, int m);

struct VerificationReport {
  bool fbar_P_equals_P_f = false;
  bool pbar_fbar_equals_f_pbar = false;
  bool pbar_P_equals_f_K = false;
  bool P_pbar_equals_fbar_K = false;
  bool K_formula = false;
  bool no_valence_one = false;
  bool fbar_train_track = false;
  bool fbar_expanding = false;
  bool fbar_irreducible = false;
  std::optional<int> f_positive_power;
  std::optional<int> fbar_positive_power;
  bool primitivity_transfers = false;
  double lambda_f = 0;
  double lambda_fbar = 0;
  double lambda_difference = 0;
  bool lambda_match = false;
  int core_rank = 0;
  int j_rank = 0;
  bool rank_matches = false;
  std::vector<int> n_values;
  bool n_constant = false;
  std::vector<std::string> failures;

  bool identities_hold() const {
    return fbar_P_equals_P_f && pbar_fbar_equals_f_pbar && pbar_P_equals_f_K &&
           P_pbar_equals_fbar_K;
  }
  bool passed() const { return failures.empty(); }
};

VerificationReport verify_package(const InducedPackage& pkg);

struct ConjugacyResult {
  /// (f̄^r)_* at ṽ, transported back along a core path δ from f̄^r(ṽ), and
  /// (f^r)_* restricted to J, both written in the basis of J.
  std::vector<std::vector<int>> fbar_star;
  std::vector<std::vector<int>> phi_bar;
  /// Conjugator c in J's basis with fbar_star = inn(c) ∘ phi_bar.
  std::optional<std::vector<int>> witness;
  int bound = 0;
  long candidates = 0;
  /// p̄(δ) as an ambient loop; always conjugates one into the other.
  Path ambient_conjugator;
  bool ambient_identity_holds = false;
  bool rank_agrees = false;
  std::string summary;
};

/// Bounded conjugator search. `quotient` is the stable quotient of
/// (f^r)_* at v; only its rank is compared, since the package works with
/// J = φ^n(F) and n = max(K, 1).
ConjugacyResult conjugacy_check(const InducedPackage& pkg,
                                const StableQuotientReport& quotient,
                                int bound = 8, long budget = 2'000'000);

}  // namespace ttforge
