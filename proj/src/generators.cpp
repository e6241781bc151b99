#include "bdt/generators.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "bdt/errors.hpp"

namespace bdt {

PatternGraph DirectedCyclePattern(int k) {
  if (k < 2) throw UsageError("cycle pattern needs k >= 2");
  std::vector<Edge> e;
  for (int i = 0; i < k; ++i) e.push_back({i, (i + 1) % k});
  return PatternGraph(k, e);
}

PatternGraph DirectedPathPattern(int vertices) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < vertices; ++i) e.push_back({i, i + 1});
  return PatternGraph(vertices, e);
}

PatternGraph OutStarPattern(int leaves) {
  std::vector<Edge> e;
  for (int i = 1; i <= leaves; ++i) e.push_back({0, i});
  return PatternGraph(leaves + 1, e);
}

PatternGraph TwoSourcesPattern() { return PatternGraph(3, {{0, 1}, {2, 1}}); }

PatternGraph DisjointUnion(const PatternGraph& a, const PatternGraph& b) {
  std::vector<Edge> e = a.graph().edges();
  for (const Edge& x : b.graph().edges()) {
    e.push_back({x.from + a.size(), x.to + a.size()});
  }
  return PatternGraph(a.size() + b.size(), e);
}

Digraph DisjointCopies(const PatternGraph& h, int n, int d, Model model) {
  const int k = h.size();
  if (k == 0) throw ConfigError("disjoint copies of the empty pattern");
  if (n < 0) throw ConfigError("negative n");
  std::vector<Edge> e;
  const auto pattern_edges = h.graph().edges();
  for (int c = 0; c + k <= n; c += k) {
    for (const Edge& x : pattern_edges) e.push_back({x.from + c, x.to + c});
  }
  return Digraph(n, d, model, std::move(e));
}

Digraph DirectedCycle(int n, int d, Model model) {
  if (n < 2) throw ConfigError("directed cycle needs n >= 2");
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Digraph(n, d, model, std::move(e));
}

Digraph DirectedPath(int n, int d, Model model) {
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Digraph(n, d, model, std::move(e));
}

Digraph DirectedMatching(int n, int d, Model model) {
  if (n % 2 != 0) throw ConfigError("matching needs even n");
  std::vector<Edge> e;
  for (int i = 0; i < n; i += 2) e.push_back({i, i + 1});
  return Digraph(n, d, model, std::move(e));
}

Digraph TwoCycles(int n, int d, Model model) {
  if (n % 2 != 0 || n < 4) throw ConfigError("two cycles need even n >= 4");
  const int half = n / 2;
  std::vector<Edge> e;
  for (int i = 0; i < half; ++i) {
    e.push_back({i, (i + 1) % half});
    e.push_back({half + i, half + (i + 1) % half});
  }
  return Digraph(n, d, model, std::move(e));
}

Digraph TransitiveTournament(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  }
  return Digraph::Unbounded(n, std::move(e));
}

Digraph UndirectedCycle(int n, int d) {
  if (n < 3) throw ConfigError("undirected cycle needs n >= 3");
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Digraph::FromUndirected(n, d, e);
}

Digraph UndirectedPath(int n, int d) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Digraph::FromUndirected(n, d, e);
}

Digraph UndirectedStar(int k, int d) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (int i = 1; i <= k; ++i) e.push_back({0, i});
  return Digraph::FromUndirected(k + 1, d, e);
}

Digraph RandomRelabel(const Digraph& g, Rng& rng) {
  std::vector<Vertex> perm(g.n());
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = g.n() - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.UniformInt(i + 1)]);
  }
  return g.Relabelled(perm).WithModel(g.d(), g.model());
}

Digraph RandomBounded(int n, int d, Model model, int attempts, Rng& rng) {
  if (n < 2) return Digraph(n, d, model, {});
  std::vector<int> out(n, 0), in(n, 0);
  std::set<std::pair<int, int>> arcs;
  for (int a = 0; a < attempts; ++a) {
    const Vertex u = rng.UniformInt(n);
    const Vertex v = rng.UniformInt(n);
    if (u == v || arcs.count({u, v})) continue;
    if (model == Model::kUndirected) {
      if (out[u] >= d || out[v] >= d) continue;
      arcs.insert({u, v});
      arcs.insert({v, u});
      ++out[u];
      ++out[v];
      continue;
    }
    if (out[u] >= d) continue;
    if (model == Model::kFB && in[v] >= d) continue;
    arcs.insert({u, v});
    ++out[u];
    ++in[v];
  }
  std::vector<Edge> e;
  for (auto [u, v] : arcs) e.push_back({u, v});
  return Digraph(n, d, model, std::move(e));
}

int UndirectedGirth(const Digraph& g) {
  const int n = g.n();
  int best = 0;
  std::vector<int> dist(n), parent(n);
  for (Vertex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    parent[s] = -1;
    std::queue<Vertex> q;
    q.push(s);
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop();
      for (Vertex u : g.out_neighbours(v)) {
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          parent[u] = v;
          q.push(u);
        } else if (u != parent[v]) {
          const int len = dist[u] + dist[v] + 1;
          if (best == 0 || len < best) best = len;
        }
      }
    }
  }
  return best;
}

Digraph RandomRegular(int n, int d, int girth_floor, Rng& rng,
                      int max_retries) {
  if (d < 0 || d >= n || (static_cast<long long>(n) * d) % 2 != 0) {
    throw ConfigError("no simple " + std::to_string(d) + "-regular graph on " +
                      std::to_string(n) + " vertices");
  }
  std::vector<Vertex> points(static_cast<std::size_t>(n) * d);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      points[i] = static_cast<Vertex>(i / d);
    }
    for (std::size_t i = points.size(); i > 1; --i) {
      std::swap(points[i - 1], points[rng.Uniform(i)]);
    }
    std::set<std::pair<Vertex, Vertex>> seen;
    std::vector<std::pair<Vertex, Vertex>> pairs;
    bool simple = true;
    for (std::size_t i = 0; i < points.size() && simple; i += 2) {
      Vertex a = points[i], b = points[i + 1];
      if (a == b) simple = false;
      if (a > b) std::swap(a, b);
      if (!seen.insert({a, b}).second) simple = false;
      pairs.push_back({a, b});
    }
    if (!simple) continue;
    Digraph g = Digraph::FromUndirected(n, d, pairs);
    const int girth = UndirectedGirth(g);
    if (girth == 0 || girth > girth_floor) return g;
  }
  throw ConfigError("random regular graph: retry budget exhausted");
}

Digraph Generate(const GeneratorSpec& s, std::uint64_t seed) {
  Rng rng(seed);
  const std::string& k = s.kind;
  if (k == "disjoint-copies") return DisjointCopies(s.pattern, s.n, s.d, s.model);
  if (k == "permuted-copies") {
    return RandomRelabel(DisjointCopies(s.pattern, s.n, s.d, s.model), rng);
  }
  if (k == "cycle") return DirectedCycle(s.n, s.d, s.model);
  if (k == "path") return DirectedPath(s.n, s.d, s.model);
  if (k == "matching") return DirectedMatching(s.n, s.d, s.model);
  if (k == "two-cycles") return TwoCycles(s.n, s.d, s.model);
  if (k == "ucycle") return UndirectedCycle(s.n, s.d);
  if (k == "upath") return UndirectedPath(s.n, s.d);
  if (k == "random") {
    return RandomBounded(s.n, s.d, s.model, s.attempts > 0 ? s.attempts : s.n * s.d,
                         rng);
  }
  if (k == "regular") return RandomRegular(s.n, s.d, s.girth_floor, rng);
  throw UsageError("unknown generator kind '" + k + "'");
}

}  // namespace bdt
