#include "ttforge/generator.hpp"

#include <algorithm>

#include "ttforge/error.hpp"
#include "ttforge/traintrack.hpp"

namespace ttforge {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// illegal[a][b]: the Df-orbits of darts a and b eventually meet.
std::vector<std::vector<bool>> illegal_pairs(const std::vector<Dart>& df) {
  const int n = static_cast<int>(df.size());
  std::vector<std::vector<bool>> out(n, std::vector<bool>(n, false));
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      int x = a, y = b;
      bool meet = false;
      for (int step = 0; step <= n * n; ++step) {
        if (x == y) {
          meet = true;
          break;
        }
        x = df[x].id();
        y = df[y].id();
      }
      out[a][b] = out[b][a] = meet;
    }
  }
  return out;
}

int image_length_bound(std::mt19937_64& rng, const GeneratorOptions& opt) {
  if (uniform(rng, 0, 9) == 0) return uniform(rng, 1, opt.max_image);
  return uniform(rng, 1, std::min(4, opt.max_image));
}

std::optional<Path> legal_walk(const Graph& g, Dart first, Dart last,
                               const std::vector<std::vector<bool>>& illegal,
                               std::mt19937_64& rng, const GeneratorOptions& opt) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    const int length = image_length_bound(rng, opt);
    if (length == 1) {
      if (first == last) return Path::single(g, first);
      continue;
    }
    std::vector<Dart> walk{first};
    bool stuck = false;
    while (static_cast<int>(walk.size()) < length - 1) {
      const Dart back = walk.back().inverse();
      std::vector<Dart> options;
      for (Dart d : g.star(g.terminus(walk.back()))) {
        if (!illegal[back.id()][d.id()]) options.push_back(d);
      }
      if (options.empty()) {
        stuck = true;
        break;
      }
      walk.push_back(options[uniform(rng, 0, static_cast<int>(options.size()) - 1)]);
    }
    if (stuck) continue;
    if (g.origin(last) != g.terminus(walk.back())) continue;
    if (illegal[walk.back().inverse().id()][last.id()]) continue;
    walk.push_back(last);
    return Path::of(g, std::move(walk));
  }
  return std::nullopt;
}

bool admissible(const GraphMap& f, const GeneratorOptions& opt) {
  if (validate(f)) return false;
  if (!is_train_track(f).train_track) return false;
  if (!is_expanding(f).expanding) return false;
  if (!is_irreducible(transition_matrix(f)).irreducible) return false;
  return power_image_length(f, opt.power_budget_exponent) <= opt.power_budget;
}

bool surjective(const GraphMap& f) {
  std::vector<bool> hit(f.domain().num_edges(), false);
  for (EdgeId e = 0; e < f.domain().num_edges(); ++e) {
    for (Dart d : f.edge_image(e).darts) hit[d.edge()] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

}  // namespace

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix(splitmix(seed) ^ index);
}

GraphPtr random_graph(std::mt19937_64& rng, const GeneratorOptions& opt) {
  for (;;) {
    const int nv = uniform(rng, 1, std::max(1, opt.max_vertices));
    if (nv + 1 > opt.max_edges) continue;
    const int ne = uniform(rng, nv + 1, opt.max_edges);
    auto g = std::make_shared<Graph>();
    for (int v = 0; v < nv; ++v) g->add_vertex(nv == 1 ? "v" : "v" + std::to_string(v));
    auto name = [](int e) {
      return e < 26 ? std::string(1, static_cast<char>('a' + e)) : "e" + std::to_string(e);
    };
    int e = 0;
    for (int v = 1; v < nv; ++v, ++e) {
      const int u = uniform(rng, 0, v - 1);
      if (uniform(rng, 0, 1) == 0) {
        g->add_edge(name(e), u, v);
      } else {
        g->add_edge(name(e), v, u);
      }
    }
    for (; e < ne; ++e) g->add_edge(name(e), uniform(rng, 0, nv - 1), uniform(rng, 0, nv - 1));
    bool ok = true;
    for (int v = 0; v < nv; ++v) ok = ok && g->valence(v) >= 2;
    if (ok) return g;
  }
}

std::optional<GraphMap> random_legal_map(const GraphPtr& g, std::mt19937_64& rng,
                                         const GeneratorOptions& opt) {
  std::vector<VertexId> vmap(g->num_vertices());
  for (VertexId& v : vmap) v = uniform(rng, 0, g->num_vertices() - 1);
  std::vector<Dart> df(g->num_darts());
  for (int d = 0; d < g->num_darts(); ++d) {
    const auto star = g->star(vmap[g->origin(Dart(d))]);
    if (star.empty()) return std::nullopt;
    df[d] = star[uniform(rng, 0, static_cast<int>(star.size()) - 1)];
  }
  const auto illegal = illegal_pairs(df);
  std::vector<Path> images;
  for (EdgeId e = 0; e < g->num_edges(); ++e) {
    auto walk = legal_walk(*g, df[Dart::along(e).id()], df[Dart::against(e).id()].inverse(),
                           illegal, rng, opt);
    if (!walk) return std::nullopt;
    images.push_back(std::move(*walk));
  }
  return GraphMap(g, g, std::move(vmap), std::move(images));
}

double power_image_length(const GraphMap& f, int p) {
  const IntMatrix a = transition_matrix(f);
  const int n = a.size();
  std::vector<double> len(n, 1.0);
  for (int step = 0; step < p; ++step) {
    std::vector<double> next(n, 0.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) next[i] += a.at(i, j).convert_to<double>() * len[j];
    }
    len = std::move(next);
  }
  double total = 0;
  for (double x : len) total += x;
  return total;
}

GeneratedMap generate_train_track(std::uint64_t seed, const GeneratorOptions& opt) {
  std::mt19937_64 rng(seed);
  for (int attempt = 1; attempt <= opt.max_attempts; ++attempt) {
    auto g = random_graph(rng, opt);
    auto f = random_legal_map(g, rng, opt);
    if (f && admissible(*f, opt)) return GeneratedMap{std::move(*f), attempt};
  }
  throw Error("generator: no admissible map after " + std::to_string(opt.max_attempts) +
              " attempts");
}

GraphMap generate_non_train_track(std::uint64_t seed, const GeneratorOptions& opt) {
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    auto g = random_graph(rng, opt);
    std::vector<VertexId> vmap(g->num_vertices());
    for (VertexId& v : vmap) v = uniform(rng, 0, g->num_vertices() - 1);
    std::vector<Path> images;
    for (EdgeId e = 0; e < g->num_edges(); ++e) {
      const VertexId from = vmap[g->origin(Dart::along(e))];
      const VertexId to = vmap[g->terminus(Dart::along(e))];
      std::optional<Path> found;
      for (int tries = 0; tries < 100 && !found; ++tries) {
        const int length = uniform(rng, 1, std::min(4, opt.max_image));
        std::vector<Dart> walk;
        VertexId at = from;
        for (int i = 0; i < length; ++i) {
          std::vector<Dart> options;
          for (Dart d : g->star(at)) {
            if (walk.empty() || d != walk.back().inverse()) options.push_back(d);
          }
          walk.push_back(options[uniform(rng, 0, static_cast<int>(options.size()) - 1)]);
          at = g->terminus(walk.back());
        }
        if (at == to) found = Path::of(*g, std::move(walk));
      }
      if (!found) break;
      images.push_back(std::move(*found));
    }
    if (static_cast<int>(images.size()) != g->num_edges()) continue;
    GraphMap f(g, g, std::move(vmap), std::move(images));
    if (!validate(f) && surjective(f) && !is_train_track(f).train_track) return f;
  }
  throw Error("generator: no non-train-track map found");
}

GraphMap shrink(const GraphMap& f, const std::function<bool(const GraphMap&)>& fails,
                int max_rounds) {
  GeneratorOptions unlimited;
  unlimited.power_budget = 1e300;
  GraphMap best = f;
  for (int round = 0; round < max_rounds; ++round) {
    bool improved = false;
    const Graph& g = best.domain();
    for (EdgeId e = 0; e < g.num_edges() && !improved; ++e) {
      const Path& img = best.edge_image(e);
      const std::size_t n = img.length();
      for (std::size_t len = 1; len < n && !improved; ++len) {
        for (std::size_t i = 0; i + len <= n && !improved; ++i) {
          std::vector<Dart> sub(img.darts.begin() + i, img.darts.begin() + i + len);
          Path p = Path::of(g, std::move(sub));
          if (p.start != img.start || p.finish != img.finish) continue;
          std::vector<Path> images;
          for (EdgeId x = 0; x < g.num_edges(); ++x) {
            images.push_back(x == e ? p : best.edge_image(x));
          }
          GraphMap candidate(best.domain_ptr(), best.codomain_ptr(), best.vertex_map(),
                             std::move(images));
          if (admissible(candidate, unlimited) && fails(candidate)) {
            best = std::move(candidate);
            improved = true;
          }
        }
      }
    }
    if (!improved) break;
  }
  return best;
}

}  // namespace ttforge
