#pragma once

// Brute-force reference implementations used as test oracles. They share no
// code with the library beyond the Digraph container.

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <vector>

#include "bdt/digraph.hpp"
#include "bdt/rng.hpp"

namespace bdt::testing {

// Calls visit(phi) for every injective map from k pattern vertices into n host
// vertices.
inline void ForEachInjection(int k, int n,
                             const std::function<void(const std::vector<Vertex>&)>& visit) {
  std::vector<Vertex> phi(k, -1);
  std::vector<bool> used(n, false);
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      visit(phi);
      return;
    }
    for (Vertex v = 0; v < n; ++v) {
      if (used[v]) continue;
      used[v] = true;
      phi[i] = v;
      rec(i + 1);
      used[v] = false;
    }
  };
  if (k <= n) rec(0);
}

inline long long CountSubgraphMaps(const Digraph& g, const Digraph& h) {
  long long count = 0;
  ForEachInjection(h.n(), g.n(), [&](const std::vector<Vertex>& phi) {
    for (const Edge& e : h.edges()) {
      if (!g.has_edge(phi[e.from], phi[e.to])) return;
    }
    ++count;
  });
  return count;
}

inline long long CountInducedMaps(const Digraph& g, const Digraph& h) {
  long long count = 0;
  ForEachInjection(h.n(), g.n(), [&](const std::vector<Vertex>& phi) {
    for (Vertex a = 0; a < h.n(); ++a) {
      for (Vertex b = 0; b < h.n(); ++b) {
        if (a != b && h.has_edge(a, b) != g.has_edge(phi[a], phi[b])) return;
      }
    }
    ++count;
  });
  return count;
}

// reach[u][v]: a directed path from u to v exists (reflexive), by
// Floyd-Warshall style closure.
inline std::vector<std::vector<bool>> Reachability(const Digraph& g) {
  const int n = g.n();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (Vertex v = 0; v < n; ++v) {
    r[v][v] = true;
    for (Vertex u : g.out_neighbours(v)) r[v][u] = true;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (r[k][j]) r[i][j] = true;
      }
    }
  }
  return r;
}

inline bool BruteRooted(const Digraph& g) {
  const auto r = Reachability(g);
  const int n = g.n();
  // Weak components via symmetric closure of reachability on the underlying
  // undirected graph.
  std::vector<int> comp(n, -1);
  int c = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<Vertex> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex u = 0; u < n; ++u) {
        if (comp[u] < 0 && (g.has_edge(v, u) || g.has_edge(u, v))) {
          comp[u] = c;
          stack.push_back(u);
        }
      }
    }
    ++c;
  }
  for (int k = 0; k < c; ++k) {
    bool has_root = false;
    for (Vertex v = 0; v < n && !has_root; ++v) {
      if (comp[v] != k) continue;
      bool all = true;
      for (Vertex u = 0; u < n; ++u) {
        if (comp[u] == k && !r[v][u]) all = false;
      }
      has_root = all;
    }
    if (!has_root) return false;
  }
  return true;
}

inline bool BruteSinkMember(const Digraph& g) {
  if (g.n() == 0) return true;
  const auto r = Reachability(g);
  for (Vertex s = 0; s < g.n(); ++s) {
    bool all = true;
    for (Vertex v = 0; v < g.n(); ++v) {
      if (!r[v][s]) all = false;
    }
    if (all) return true;
  }
  return false;
}

// All ordered pairs (a, b), a != b, on n vertices.
inline std::vector<Edge> AllPairs(int n) {
  std::vector<Edge> pairs;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = 0; b < n; ++b) {
      if (a != b) pairs.push_back({a, b});
    }
  }
  return pairs;
}

inline bool WithinBounds(int n, int d, Model model, const std::vector<Edge>& edges) {
  std::vector<int> out(n, 0), in(n, 0);
  for (const Edge& e : edges) {
    ++out[e.from];
    ++in[e.to];
  }
  for (Vertex v = 0; v < n; ++v) {
    if (out[v] > d) return false;
    if (model != Model::kF && in[v] > d) return false;
  }
  if (model == Model::kUndirected) {
    std::set<Edge> s(edges.begin(), edges.end());
    for (const Edge& e : edges) {
      if (!s.count({e.to, e.from})) return false;
    }
  }
  return true;
}

// Every graph on n labelled vertices within the model's bounds.
inline std::vector<Digraph> AllGraphs(int n, int d, Model model) {
  std::vector<Digraph> out;
  if (model == Model::kUndirected) {
    std::vector<std::pair<Vertex, Vertex>> pairs;
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = a + 1; b < n; ++b) pairs.push_back({a, b});
    }
    for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (mask >> i & 1) {
          edges.push_back({pairs[i].first, pairs[i].second});
          edges.push_back({pairs[i].second, pairs[i].first});
        }
      }
      if (WithinBounds(n, d, model, edges)) out.emplace_back(n, d, model, edges);
    }
    return out;
  }
  const auto pairs = AllPairs(n);
  for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (mask >> i & 1) edges.push_back(pairs[i]);
    }
    if (WithinBounds(n, d, model, edges)) out.emplace_back(n, d, model, edges);
  }
  return out;
}

// Edit distance between two graphs on the same vertex set; undirected edges
// count once.
inline int EditDistance(const Digraph& a, const Digraph& b) {
  auto ea = a.edges(), eb = b.edges();
  std::vector<Edge> diff;
  std::set_symmetric_difference(ea.begin(), ea.end(), eb.begin(), eb.end(),
                                std::back_inserter(diff));
  const int arcs = static_cast<int>(diff.size());
  return a.model() == Model::kUndirected ? arcs / 2 : arcs;
}

// Minimum edit distance from g to any graph of AllGraphs satisfying member,
// or -1 if none does.
inline int BruteDistance(const Digraph& g, const std::function<bool(const Digraph&)>& member) {
  int best = -1;
  for (const Digraph& h : AllGraphs(g.n(), g.d(), g.model())) {
    if (!member(h)) continue;
    const int dist = EditDistance(g, h);
    if (best < 0 || dist < best) best = dist;
  }
  return best;
}

// Random graph: each ordered pair kept with probability p, then arcs that
// break the bound dropped in a random order.
inline Digraph RandomGraph(int n, int d, Model model, double p, Rng& rng) {
  std::vector<Edge> kept;
  std::vector<int> out(n, 0), in(n, 0);
  if (model == Model::kUndirected) {
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = a + 1; b < n; ++b) {
        if (rng.Real() < p && out[a] < d && out[b] < d) {
          kept.push_back({a, b});
          kept.push_back({b, a});
          ++out[a];
          ++out[b];
        }
      }
    }
    return Digraph(n, d, model, kept);
  }
  auto pairs = AllPairs(n);
  for (std::size_t i = pairs.size(); i > 1; --i) {
    std::swap(pairs[i - 1], pairs[rng.UniformInt(static_cast<int>(i))]);
  }
  for (const Edge& e : pairs) {
    if (rng.Real() >= p) continue;
    if (out[e.from] >= d) continue;
    if (model == Model::kFB && in[e.to] >= d) continue;
    kept.push_back(e);
    ++out[e.from];
    ++in[e.to];
  }
  return Digraph(n, d, model, kept);
}

}  // namespace bdt::testing
