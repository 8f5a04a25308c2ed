#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace ttforge::testing {

std::vector<Path> reduced_words(const Graph& rose, int max_length) {
  std::vector<Path> out{Path::trivial(0)};
  std::vector<Path> frontier{Path::trivial(0)};
  for (int len = 1; len <= max_length; ++len) {
    std::vector<Path> next;
    for (const Path& p : frontier) {
      for (int d = 0; d < rose.num_darts(); ++d) {
        if (!p.darts.empty() && p.darts.back().inverse() == Dart(d)) continue;
        Path q = p;
        q.darts.push_back(Dart(d));
        next.push_back(q);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

int brute_force_kernel_stabilization(const Pi1Endomorphism& phi, int max_length,
                                     int max_k) {
  const auto words = reduced_words(phi.ambient(), max_length);
  std::vector<Path> current = words;
  std::vector<bool> dead(words.size(), false);
  std::vector<std::size_t> kernel_sizes{1};  // the empty word
  for (int k = 1; k <= max_k + 1; ++k) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (!dead[i]) {
        current[i] = phi.apply(current[i]);
        dead[i] = current[i].is_trivial();
      }
      count += dead[i] ? 1 : 0;
    }
    kernel_sizes.push_back(count);
    if (kernel_sizes[k] == kernel_sizes[k - 1]) return k - 1;
  }
  return -1;
}

std::set<std::vector<Dart>> subgroup_ball(const std::vector<Path>& generators,
                                          int factors, int max_length) {
  std::vector<Path> letters;
  for (const Path& g : generators) {
    letters.push_back(g);
    letters.push_back(reverse(g));
  }
  std::set<std::vector<Dart>> out;
  std::function<void(const Path&, int, int)> grow = [&](const Path& p, int left,
                                                        int last) {
    const Path t = tighten(p);
    if (static_cast<int>(t.length()) <= max_length) out.insert(t.darts);
    if (left == 0) return;
    for (int i = 0; i < static_cast<int>(letters.size()); ++i) {
      if (last >= 0 && (i ^ 1) == last) continue;
      grow(concat(t, letters[i]), left - 1, i);
    }
  };
  if (!generators.empty()) {
    grow(Path::trivial(generators.front().start), factors, -1);
  } else {
    out.insert(std::vector<Dart>{});
  }
  return out;
}

long double characteristic_root(const IntMatrix& a) {
  const int n = a.size();
  auto m = [&](int i, int j) { return static_cast<long double>(a.at(i, j)); };
  std::function<long double(long double)> p;
  if (n == 1) {
    return m(0, 0);
  } else if (n == 2) {
    p = [&](long double x) {
      return (x - m(0, 0)) * (x - m(1, 1)) - m(0, 1) * m(1, 0);
    };
  } else {
    p = [&](long double x) {
      const long double a00 = x - m(0, 0), a11 = x - m(1, 1), a22 = x - m(2, 2);
      return a00 * (a11 * a22 - m(1, 2) * m(2, 1)) -
             (-m(0, 1)) * ((-m(1, 0)) * a22 - m(1, 2) * m(2, 0)) +
             (-m(0, 2)) * (m(1, 0) * m(2, 1) + a11 * m(2, 0));
    };
  }
  long double hi = 1;
  for (int i = 0; i < n; ++i) {
    long double row = 0;
    for (int j = 0; j < n; ++j) row += m(i, j);
    hi = std::max(hi, row);
  }
  hi += 1;
  // Scan downward for the largest sign change, then bisect.
  const int steps = 20000;
  long double prev_x = hi, prev = p(hi);
  for (int s = 1; s <= steps; ++s) {
    const long double x = hi - hi * s / steps;
    const long double y = p(x);
    if ((y <= 0) != (prev <= 0) || y == 0) {
      long double lo = x, up = prev_x;
      for (int it = 0; it < 200; ++it) {
        const long double mid = (lo + up) / 2;
        if ((p(mid) <= 0) == (p(lo) <= 0)) lo = mid; else up = mid;
      }
      return (lo + up) / 2;
    }
    prev_x = x;
    prev = y;
  }
  return 0;
}

bool has_invariant_subset_brute_force(const GraphMap& f) {
  const int n = f.domain().num_edges();
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    bool closed = true;
    for (int e = 0; e < n && closed; ++e) {
      if (!(mask >> e & 1)) continue;
      for (Dart d : f.edge_image(e).darts) {
        if (!(mask >> d.edge() & 1)) {
          closed = false;
          break;
        }
      }
    }
    if (closed) return true;
  }
  return false;
}

bool powers_immersed(const GraphMap& f, int max_power) {
  GraphMap g = f;
  for (int k = 1; k <= max_power; ++k) {
    for (EdgeId e = 0; e < g.domain().num_edges(); ++e) {
      if (!is_reduced(g.edge_image(e).darts)) return false;
    }
    if (k < max_power) g = compose(f, g);
  }
  return true;
}

bool expanding_by_iteration(const GraphMap& f, int steps) {
  const int n = f.domain().num_edges();
  // Track lengths via the transition counts to avoid huge paths.
  std::vector<std::vector<long double>> len(n, std::vector<long double>(n, 0));
  for (int e = 0; e < n; ++e) {
    for (Dart d : f.edge_image(e).darts) len[e][d.edge()] += 1;
  }
  std::vector<std::vector<long double>> power(n, std::vector<long double>(n, 0));
  for (int i = 0; i < n; ++i) power[i][i] = 1;
  std::vector<long double> previous(n, 1);
  std::vector<bool> grew(n, false);
  for (int s = 1; s <= steps; ++s) {
    std::vector<std::vector<long double>> next(n, std::vector<long double>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (power[i][k] != 0)
          for (int j = 0; j < n; ++j) next[i][j] += power[i][k] * len[k][j];
    power = std::move(next);
    for (int i = 0; i < n; ++i) {
      long double total = 0;
      for (int j = 0; j < n; ++j) total += power[i][j];
      if (s > steps / 2 && total > previous[i]) grew[i] = true;
      previous[i] = total;
    }
  }
  return std::all_of(grew.begin(), grew.end(), [](bool b) { return b; });
}

Path random_reduced_path(const Graph& g, VertexId v, int length,
                         std::mt19937_64& rng) {
  Path p = Path::trivial(v);
  for (int i = 0; i < length; ++i) {
    std::vector<Dart> options;
    for (Dart d : g.star(p.finish)) {
      if (p.darts.empty() || d != p.darts.back().inverse()) options.push_back(d);
    }
    if (options.empty()) break;
    const Dart d = options[rng() % options.size()];
    p.darts.push_back(d);
    p.finish = g.terminus(d);
  }
  return p;
}

Path random_reduced_loop(const Graph& g, VertexId v, int max_length,
                         std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Path p = random_reduced_path(g, v, 1 + rng() % max_length, rng);
    // Close up through a shortest tree path and tighten.
    const auto tree = spanning_tree(g, v);
    append(p, reverse(tree_path(g, tree, v, p.finish)));
    p = tighten(p);
    if (static_cast<int>(p.length()) <= max_length) return p;
  }
  return Path::trivial(v);
}

}  // namespace ttforge::testing
