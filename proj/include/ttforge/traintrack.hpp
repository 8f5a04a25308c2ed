#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttforge/graph_map.hpp"
#include "ttforge/matrix.hpp"

namespace ttforge {

/// Rows and columns are indexed by edge id; entry (e', e) counts the
/// occurrences of e and -e in f(e').
IntMatrix transition_matrix(const GraphMap& f);

struct Irreducibility {
  bool irreducible = false;
  /// reach[i][j]: some positive power of A has a positive (i, j) entry.
  std::vector<std::vector<bool>> reach;
  /// A pair with no connecting walk, when reducible.
  std::optional<std::pair<int, int>> missing;
};

Irreducibility is_irreducible(const IntMatrix& a);

/// Smallest t <= n^2 with A^t > 0, if the matrix is primitive.
std::optional<int> has_positive_power(const IntMatrix& a);

struct Expansion {
  bool expanding = false;
  /// First edge whose iterated images stay bounded, with its eventual length.
  std::optional<EdgeId> bounded_edge;
  BigInt stable_length = 0;
};

/// Decided from the strongly connected components of the transition digraph:
/// an edge stays bounded iff every walk from it meets only SCCs that are
/// simple cycles of multiplicity one, and at most one of those.
Expansion is_expanding(const GraphMap& f);

struct PerronFrobenius {
  double value = 0;
  /// Collatz–Wielandt bracket for the spectral radius.
  double lower = 0;
  double upper = 0;
  int iterations = 0;
};

/// Spectral radius of an irreducible matrix to within 1e-9. Runs power
/// iteration on A + I (primitive whenever A is irreducible) and stops once
/// the Collatz–Wielandt bracket is narrower than 1e-10.
PerronFrobenius pf_eigenvalue(const IntMatrix& a);

/// Unordered pair of darts with a common origin, stored with first <= second.
struct Turn {
  Dart first;
  Dart second;

  static Turn of(Dart a, Dart b) { return a <= b ? Turn{a, b} : Turn{b, a}; }
  bool degenerate() const { return first == second; }
  friend auto operator<=>(const Turn&, const Turn&) = default;
};

std::string to_string(const Graph& g, const Turn& t);

class TurnSystem {
 public:
  explicit TurnSystem(const GraphMap& f);

  /// Df: first dart of the image of d.
  Dart derivative(Dart d) const { return derivative_[d.id()]; }
  Turn image(const Turn& t) const {
    return Turn::of(derivative(t.first), derivative(t.second));
  }
  /// Turns crossed inside edge images, sorted and deduplicated.
  const std::vector<Turn>& taken_turns() const { return taken_; }

  /// Follows the Df-orbit of `t` until it repeats. Returns the orbit prefix
  /// ending at a degenerate turn, or nullopt if the orbit never degenerates.
  std::optional<std::vector<Turn>> degenerating_orbit(const Turn& t) const;

 private:
  std::vector<Dart> derivative_;
  std::vector<Turn> taken_;
};

/// Turns of a path, in order: {d_k^-1, d_{k+1}}.
std::vector<Turn> turns_of(std::span<const Dart> darts);
/// Same, including the wrap-around turn of a closed word.
std::vector<Turn> cyclic_turns_of(std::span<const Dart> loop);

struct TrainTrackCertificate {
  enum class Failure { kNone, kNotSelfMap, kInvalidMap, kNotSurjective, kIllegalTurn };
  bool train_track = false;
  Failure failure = Failure::kNone;
  std::string reason;
  /// Closed set of turns reachable from taken turns (when train track).
  std::vector<Turn> closure;
  /// Orbit from a taken turn to a degenerate turn (when illegal).
  std::vector<Turn> offending_orbit;
};

TrainTrackCertificate is_train_track(const GraphMap& f);

struct LegalLoop {
  CyclicPath darts;
  /// Df-closure of the loop's turns; contains no degenerate turn.
  std::vector<Turn> certificate;
};

/// Checks that every turn of the closed word has a non-degenerating orbit.
std::optional<std::vector<Turn>> certify_legal(const GraphMap& f,
                                               std::span<const Dart> loop);

/// Legal closed path crossing `e`, obtained from a repeated dart in some
/// f^j(e) and pushed forward until it crosses `e`. Requires an expanding
/// irreducible train track map.
LegalLoop legal_loop_through(const GraphMap& f, EdgeId e);

/// Minimal proper nonempty edge set closed under taking images, or nullopt.
/// Candidates are closures of single edges in id order; the first proper
/// closure that contains no smaller closure is returned.
std::optional<std::vector<EdgeId>> find_invariant_subgraph(const GraphMap& f);

/// Edges reachable from `e` by repeatedly taking images (including e).
std::vector<EdgeId> image_closure(const GraphMap& f, EdgeId e);

}  // namespace ttforge
