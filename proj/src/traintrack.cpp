#include "ttforge/traintrack.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "ttforge/error.hpp"

namespace ttforge {

namespace {

using Float = boost::multiprecision::cpp_bin_float_50;

void require_self_map(const GraphMap& f, const char* what) {
  if (!f.is_self_map()) {
    throw PreconditionFailed(std::string(what) + ": not a self-map");
  }
}

std::vector<std::vector<int>> successors(const IntMatrix& a) {
  std::vector<std::vector<int>> out(a.size());
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) {
      if (a.at(i, j) > 0) out[i].push_back(j);
    }
  }
  return out;
}

// Tarjan; components come out in reverse topological order.
std::vector<int> strong_components(const std::vector<std::vector<int>>& adj,
                                   int& count) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int next = 0;
  count = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = next++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : adj[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = count;
      } while (w != v);
      ++count;
    }
  };
  for (int v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return comp;
}

}  // namespace

IntMatrix transition_matrix(const GraphMap& f) {
  require_self_map(f, "transition_matrix");
  const int n = f.domain().num_edges();
  IntMatrix a(n);
  for (EdgeId e = 0; e < n; ++e) {
    for (Dart d : f.edge_image(e).darts) a.at(e, d.edge()) += 1;
  }
  return a;
}

Irreducibility is_irreducible(const IntMatrix& a) {
  const int n = a.size();
  const auto adj = successors(a);
  Irreducibility result;
  result.reach.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) {
    // Walks of length >= 1 only.
    std::deque<int> queue(adj[i].begin(), adj[i].end());
    for (int j : adj[i]) result.reach[i][j] = true;
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : adj[v]) {
        if (!result.reach[i][w]) {
          result.reach[i][w] = true;
          queue.push_back(w);
        }
      }
    }
  }
  result.irreducible = n > 0;
  for (int i = 0; i < n && result.irreducible; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!result.reach[i][j]) {
        result.irreducible = false;
        result.missing = std::make_pair(i, j);
        break;
      }
    }
  }
  return result;
}

std::optional<int> has_positive_power(const IntMatrix& a) {
  const int n = a.size();
  if (n == 0) return std::nullopt;
  using Bits = std::vector<std::vector<bool>>;
  Bits base(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) base[i][j] = a.at(i, j) > 0;
  }
  Bits power = base;
  for (int t = 1; t <= n * n; ++t) {
    bool positive = true;
    for (int i = 0; i < n && positive; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!power[i][j]) {
          positive = false;
          break;
        }
      }
    }
    if (positive) return t;
    Bits next(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) {
        if (!power[i][k]) continue;
        for (int j = 0; j < n; ++j) {
          if (base[k][j]) next[i][j] = true;
        }
      }
    }
    power = std::move(next);
  }
  return std::nullopt;
}

Expansion is_expanding(const GraphMap& f) {
  const IntMatrix a = transition_matrix(f);
  const int n = a.size();
  const auto adj = successors(a);
  int ncomp = 0;
  const auto comp = strong_components(adj, ncomp);

  std::vector<int> size(ncomp, 0);
  std::vector<BigInt> internal_weight(ncomp, 0);
  std::vector<bool> has_internal(ncomp, false);
  std::vector<std::set<int>> comp_succ(ncomp);
  for (int i = 0; i < n; ++i) {
    ++size[comp[i]];
    for (int j : adj[i]) {
      if (comp[i] == comp[j]) {
        has_internal[comp[i]] = true;
        internal_weight[comp[i]] += a.at(i, j);
      } else {
        comp_succ[comp[i]].insert(comp[j]);
      }
    }
  }
  // Tarjan numbering is reverse topological: successors have smaller ids.
  std::vector<bool> grows(ncomp, false);
  std::vector<int> cycles(ncomp, 0);
  for (int c = 0; c < ncomp; ++c) {
    const bool cyclic = has_internal[c];
    grows[c] = cyclic && internal_weight[c] != size[c];
    int best = 0;
    for (int s : comp_succ[c]) {
      grows[c] = grows[c] || grows[s];
      best = std::max(best, cycles[s]);
    }
    cycles[c] = best + (cyclic ? 1 : 0);
  }

  Expansion result;
  result.expanding = true;
  for (EdgeId e = 0; e < n; ++e) {
    const int c = comp[e];
    if (grows[c] || cycles[c] >= 2) continue;
    result.expanding = false;
    result.bounded_edge = e;
    // Lengths are constant once every walk has entered its terminal cycle.
    std::vector<BigInt> len(n, 1);
    for (int m = 0; m < n; ++m) len = a.apply(len);
    result.stable_length = len[e];
    break;
  }
  return result;
}

PerronFrobenius pf_eigenvalue(const IntMatrix& a) {
  const int n = a.size();
  if (!is_irreducible(a).irreducible) {
    throw PreconditionFailed("pf_eigenvalue: matrix is reducible");
  }
  IntMatrix b = a;
  for (int i = 0; i < n; ++i) b.at(i, i) += 1;

  constexpr int kMaxSteps = 10000;
  const Float tolerance("1e-10");
  const unsigned kKeepBits = 512;
  std::vector<BigInt> x(n, 1);
  PerronFrobenius result;
  for (int step = 1; step <= kMaxSteps; ++step) {
    std::vector<BigInt> y = b.apply(x);
    Float lo = std::numeric_limits<double>::max(), hi = 0;
    for (int i = 0; i < n; ++i) {
      const Float ratio = Float(y[i]) / Float(x[i]);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    result.iterations = step;
    result.lower = static_cast<double>(lo - 1);
    result.upper = static_cast<double>(hi - 1);
    if (hi - lo <= tolerance) {
      result.value = static_cast<double>((lo + hi) / 2 - 1);
      return result;
    }
    // Any positive vector gives a valid bracket, so rescaling is harmless.
    const BigInt& biggest = *std::max_element(y.begin(), y.end());
    const unsigned bits = static_cast<unsigned>(msb(biggest)) + 1;
    if (bits > 2 * kKeepBits) {
      const unsigned shift = bits - kKeepBits;
      for (auto& v : y) {
        v >>= shift;
        if (v == 0) v = 1;
      }
    }
    x = std::move(y);
  }
  throw Error("pf_eigenvalue: Collatz-Wielandt bracket did not close within " +
              std::to_string(kMaxSteps) + " steps");
}

std::string to_string(const Graph& g, const Turn& t) {
  return "{" + g.dart_name(t.first) + "," + g.dart_name(t.second) + "}";
}

std::vector<Turn> turns_of(std::span<const Dart> darts) {
  std::vector<Turn> out;
  for (std::size_t k = 0; k + 1 < darts.size(); ++k) {
    out.push_back(Turn::of(darts[k].inverse(), darts[k + 1]));
  }
  return out;
}

std::vector<Turn> cyclic_turns_of(std::span<const Dart> loop) {
  std::vector<Turn> out = turns_of(loop);
  if (!loop.empty()) out.push_back(Turn::of(loop.back().inverse(), loop.front()));
  return out;
}

TurnSystem::TurnSystem(const GraphMap& f) {
  const Graph& g = f.domain();
  derivative_.resize(g.num_darts());
  for (int d = 0; d < g.num_darts(); ++d) {
    const Path& img = f.image(Dart(d));
    if (img.is_trivial()) throw PreconditionFailed("TurnSystem: collapsed edge");
    derivative_[d] = img.darts.front();
  }
  std::set<Turn> taken;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    for (const Turn& t : turns_of(f.edge_image(e).darts)) taken.insert(t);
  }
  taken_.assign(taken.begin(), taken.end());
}

std::optional<std::vector<Turn>> TurnSystem::degenerating_orbit(
    const Turn& t) const {
  std::vector<Turn> orbit{t};
  std::set<Turn> seen{t};
  Turn at = t;
  while (!at.degenerate()) {
    at = image(at);
    orbit.push_back(at);
    if (!seen.insert(at).second) return std::nullopt;
  }
  return orbit;
}

TrainTrackCertificate is_train_track(const GraphMap& f) {
  TrainTrackCertificate cert;
  using F = TrainTrackCertificate::Failure;
  if (!f.is_self_map()) {
    cert.failure = F::kNotSelfMap;
    cert.reason = "not a self-map";
    return cert;
  }
  if (auto v = validate(f)) {
    cert.failure = F::kInvalidMap;
    cert.reason = to_string(v->kind) + ": " + v->detail;
    return cert;
  }
  const Graph& g = f.domain();
  std::vector<bool> covered(g.num_edges(), false);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    for (Dart d : f.edge_image(e).darts) covered[d.edge()] = true;
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!covered[e]) {
      cert.failure = F::kNotSurjective;
      cert.reason = "edge " + g.edge_name(e) + " is not in the image";
      return cert;
    }
  }

  const TurnSystem turns(f);
  std::set<Turn> closure;
  std::map<Turn, Turn> parent;
  std::deque<Turn> queue;
  for (const Turn& t : turns.taken_turns()) {
    if (closure.insert(t).second) queue.push_back(t);
  }
  auto trace = [&](Turn t) {
    std::vector<Turn> orbit{t};
    while (parent.contains(orbit.back())) orbit.push_back(parent.at(orbit.back()));
    std::reverse(orbit.begin(), orbit.end());
    return orbit;
  };
  while (!queue.empty()) {
    const Turn t = queue.front();
    queue.pop_front();
    if (t.degenerate()) {
      cert.failure = F::kIllegalTurn;
      cert.offending_orbit = trace(t);
      cert.reason = "turn orbit reaches degenerate turn " + to_string(g, t);
      return cert;
    }
    const Turn next = turns.image(t);
    if (closure.insert(next).second) {
      parent.emplace(next, t);
      queue.push_back(next);
    }
  }
  cert.train_track = true;
  cert.closure.assign(closure.begin(), closure.end());
  return cert;
}

std::optional<std::vector<Turn>> certify_legal(const GraphMap& f,
                                               std::span<const Dart> loop) {
  const TurnSystem turns(f);
  std::set<Turn> closure;
  std::deque<Turn> queue;
  for (const Turn& t : cyclic_turns_of(loop)) {
    if (closure.insert(t).second) queue.push_back(t);
  }
  while (!queue.empty()) {
    const Turn t = queue.front();
    queue.pop_front();
    if (t.degenerate()) return std::nullopt;
    const Turn next = turns.image(t);
    if (closure.insert(next).second) queue.push_back(next);
  }
  return std::vector<Turn>(closure.begin(), closure.end());
}

LegalLoop legal_loop_through(const GraphMap& f, EdgeId e) {
  if (!is_train_track(f).train_track) {
    throw PreconditionFailed("legal_loop_through: not a train track map");
  }
  if (!is_expanding(f).expanding) {
    throw PreconditionFailed("legal_loop_through: map is not expanding");
  }
  if (!is_irreducible(transition_matrix(f)).irreducible) {
    throw PreconditionFailed("legal_loop_through: map is not irreducible");
  }
  constexpr std::size_t kMaxLength = 1 << 22;
  const Graph& g = f.domain();

  // Find the closest pair of equal darts in some f^j(e).
  Path image = Path::single(g, Dart::along(e));
  CyclicPath loop;
  while (loop.empty()) {
    image = apply_path(f, image);
    if (image.length() > kMaxLength) {
      throw Inconsistency("legal_loop_through: no repeated dart found");
    }
    std::vector<int> last(g.num_darts(), -1);
    int best_i = -1, best_len = 0;
    for (int k = 0; k < static_cast<int>(image.length()); ++k) {
      const Dart d = image.darts[k];
      const int prev = last[d.id()];
      if (prev >= 0 && (best_i < 0 || k - prev < best_len)) {
        best_i = prev;
        best_len = k - prev;
      }
      last[d.id()] = k;
    }
    if (best_i >= 0) {
      loop.assign(image.darts.begin() + best_i,
                  image.darts.begin() + best_i + best_len);
    }
  }

  auto crosses = [e](const CyclicPath& c) {
    return std::any_of(c.begin(), c.end(),
                       [e](Dart d) { return d.edge() == e; });
  };
  while (!crosses(loop)) {
    loop = apply_cyclic(f, loop);
    if (loop.size() > kMaxLength) {
      throw Inconsistency("legal_loop_through: loop never crosses the edge");
    }
  }
  auto cert = certify_legal(f, loop);
  if (!cert) throw Inconsistency("legal_loop_through: loop is not legal");
  return LegalLoop{std::move(loop), std::move(*cert)};
}

std::vector<EdgeId> image_closure(const GraphMap& f, EdgeId e) {
  const Graph& g = f.domain();
  std::vector<bool> in(g.num_edges(), false);
  std::deque<EdgeId> queue{e};
  in[e] = true;
  while (!queue.empty()) {
    const EdgeId x = queue.front();
    queue.pop_front();
    for (Dart d : f.edge_image(x).darts) {
      if (!in[d.edge()]) {
        in[d.edge()] = true;
        queue.push_back(d.edge());
      }
    }
  }
  std::vector<EdgeId> out;
  for (EdgeId x = 0; x < g.num_edges(); ++x) {
    if (in[x]) out.push_back(x);
  }
  return out;
}

std::optional<std::vector<EdgeId>> find_invariant_subgraph(const GraphMap& f) {
  require_self_map(f, "find_invariant_subgraph");
  const int n = f.domain().num_edges();
  std::vector<std::vector<EdgeId>> closures(n);
  for (EdgeId e = 0; e < n; ++e) closures[e] = image_closure(f, e);
  for (EdgeId e = 0; e < n; ++e) {
    const auto& c = closures[e];
    if (static_cast<int>(c.size()) == n) continue;
    const bool minimal = std::all_of(c.begin(), c.end(), [&](EdgeId x) {
      return closures[x].size() == c.size();
    });
    if (minimal) return c;
  }
  return std::nullopt;
}

}  // namespace ttforge
