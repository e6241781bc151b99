#include "bdt/structure.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <tuple>

#include "bdt/errors.hpp"

namespace bdt {

std::vector<std::vector<Vertex>> Components(const Digraph& g) {
  std::vector<int> comp(g.n(), -1);
  std::vector<std::vector<Vertex>> result;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(result.size());
    result.emplace_back();
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      result[id].push_back(v);
      for (auto list : {g.out_neighbours(v), g.in_neighbours(v)}) {
        for (Vertex u : list) {
          if (comp[u] < 0) {
            comp[u] = id;
            stack.push_back(u);
          }
        }
      }
    }
    std::sort(result[id].begin(), result[id].end());
  }
  return result;
}

std::vector<Vertex> ForwardReachable(const Digraph& g, Vertex source) {
  std::vector<bool> seen(g.n(), false);
  std::vector<Vertex> order{source};
  seen[source] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (Vertex u : g.out_neighbours(order[i])) {
      if (!seen[u]) {
        seen[u] = true;
        order.push_back(u);
      }
    }
  }
  std::sort(order.begin(), order.end());
  return order;
}

bool IsRooted(const Digraph& g) {
  for (const auto& comp : Components(g)) {
    bool has_root = false;
    for (Vertex v : comp) {
      if (ForwardReachable(g, v).size() == comp.size()) {
        has_root = true;
        break;
      }
    }
    if (!has_root) return false;
  }
  return true;
}

SccDecomposition StronglyConnectedComponents(const Digraph& g) {
  const int n = g.n();
  SccDecomposition out;
  out.component.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<Vertex> stack;
  // Explicit call stack of (vertex, next out-neighbour position).
  std::vector<std::pair<Vertex, int>> calls;
  int counter = 0;
  for (Vertex s = 0; s < n; ++s) {
    if (index[s] >= 0) continue;
    calls.push_back({s, 0});
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = true;
    while (!calls.empty()) {
      auto& [v, pos] = calls.back();
      auto succ = g.out_neighbours(v);
      if (pos < static_cast<int>(succ.size())) {
        Vertex u = succ[pos++];
        if (index[u] < 0) {
          index[u] = low[u] = counter++;
          stack.push_back(u);
          on_stack[u] = true;
          calls.push_back({u, 0});
        } else if (on_stack[u]) {
          low[v] = std::min(low[v], index[u]);
        }
        continue;
      }
      const Vertex done = v;
      calls.pop_back();
      if (!calls.empty()) {
        Vertex parent = calls.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          out.component[w] = out.count;
        } while (w != done);
        ++out.count;
      }
    }
  }
  return out;
}

std::vector<std::vector<Vertex>> SinkComponents(const Digraph& g) {
  auto scc = StronglyConnectedComponents(g);
  std::vector<bool> is_sink(scc.count, true);
  for (Vertex v = 0; v < g.n(); ++v) {
    for (Vertex u : g.out_neighbours(v)) {
      if (scc.component[u] != scc.component[v]) {
        is_sink[scc.component[v]] = false;
      }
    }
  }
  std::vector<std::vector<Vertex>> members(scc.count);
  for (Vertex v = 0; v < g.n(); ++v) members[scc.component[v]].push_back(v);
  std::vector<std::vector<Vertex>> sinks;
  for (int c = 0; c < scc.count; ++c) {
    if (is_sink[c]) sinks.push_back(std::move(members[c]));
  }
  std::sort(sinks.begin(), sinks.end());
  return sinks;
}

bool HasReachableByAll(const Digraph& g) {
  return g.n() == 0 || SinkComponents(g).size() == 1;
}

namespace {

std::vector<std::uint64_t> AdjacencyBits(const Digraph& g,
                                         const std::vector<Vertex>& order) {
  // order[i] is the original vertex placed at position i.
  const int n = g.n();
  std::vector<std::uint64_t> bits((n * n + 63) / 64, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && g.has_edge(order[i], order[j])) {
        const int k = i * n + j;
        bits[k / 64] |= std::uint64_t{1} << (63 - k % 64);
      }
    }
  }
  return bits;
}

}  // namespace

std::vector<std::uint64_t> CanonicalForm(const Digraph& g,
                                         const std::vector<int>& colours) {
  const int n = g.n();
  if (n > 10) throw UsageError("CanonicalForm supports at most 10 vertices");
  if (!colours.empty() && static_cast<int>(colours.size()) != n) {
    throw UsageError("colour vector size mismatch");
  }
  using Key = std::tuple<int, int, int>;
  std::vector<Key> key(n);
  for (Vertex v = 0; v < n; ++v) {
    key[v] = {colours.empty() ? 0 : colours[v], g.out_degree(v),
              g.in_degree(v)};
  }
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Vertex a, Vertex b) { return std::tie(key[a], a) < std::tie(key[b], b); });
  // Class boundaries in the sorted order; permutations stay within classes.
  std::vector<std::pair<int, int>> classes;
  for (int i = 0; i < n;) {
    int j = i;
    while (j < n && key[order[j]] == key[order[i]]) ++j;
    classes.push_back({i, j});
    i = j;
  }

  std::vector<std::uint64_t> best;
  bool have_best = false;
  // Odometer over within-class permutations.
  std::function<void(std::size_t)> rec = [&](std::size_t c) {
    if (c == classes.size()) {
      auto bits = AdjacencyBits(g, order);
      if (!have_best || bits < best) {
        best = std::move(bits);
        have_best = true;
      }
      return;
    }
    auto [lo, hi] = classes[c];
    std::sort(order.begin() + lo, order.begin() + hi);
    do {
      rec(c + 1);
    } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
  };
  rec(0);

  std::vector<std::uint64_t> form{static_cast<std::uint64_t>(n)};
  for (Vertex v : order) {
    auto [c, o, i] = key[v];
    form.push_back((static_cast<std::uint64_t>(c) << 32) |
                   (static_cast<std::uint64_t>(o) << 16) |
                   static_cast<std::uint64_t>(i));
  }
  form.insert(form.end(), best.begin(), best.end());
  return form;
}

bool Isomorphic(const Digraph& a, const Digraph& b) {
  if (a.n() != b.n() || a.num_arcs() != b.num_arcs()) return false;
  return CanonicalForm(a) == CanonicalForm(b);
}

}  // namespace bdt
