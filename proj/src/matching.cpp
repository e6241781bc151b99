#include "bdt/matching.hpp"

#include <algorithm>

#include "bdt/errors.hpp"

namespace bdt {

namespace {

struct Step {
  Vertex p;
  // Earlier pattern vertex adjacent to p through a required arc, or -1.
  Vertex anchor;
  bool anchor_is_tail;  // required arc anchor -> p (else p -> anchor)
};

std::vector<Step> SearchOrder(const Digraph& pattern) {
  const int k = pattern.n();
  std::vector<int> pos(k, -1);
  std::vector<Step> order;
  order.reserve(k);
  for (Vertex s = 0; s < k; ++s) {
    if (pos[s] >= 0) continue;
    pos[s] = static_cast<int>(order.size());
    order.push_back({s, -1, false});
    for (std::size_t i = pos[s]; i < order.size(); ++i) {
      const Vertex v = order[i].p;
      std::vector<Vertex> next;
      for (Vertex u : pattern.out_neighbours(v)) next.push_back(u);
      for (Vertex u : pattern.in_neighbours(v)) next.push_back(u);
      std::sort(next.begin(), next.end());
      for (Vertex u : next) {
        if (pos[u] >= 0) continue;
        pos[u] = static_cast<int>(order.size());
        order.push_back({u, v, pattern.has_edge(v, u)});
      }
    }
  }
  return order;
}

class Searcher {
 public:
  Searcher(const MatchProblem& problem,
           const std::function<bool(const Embedding&)>& visit)
      : pr_(problem),
        host_(*problem.host),
        pat_(problem.required),
        visit_(visit),
        order_(SearchOrder(pat_)),
        phi_(pat_.n(), -1),
        used_(host_.n(), false) {}

  long long Run() {
    if (pat_.n() > host_.n()) return 0;
    Extend(0);
    return count_;
  }

 private:
  bool Feasible(Vertex p, Vertex h) const {
    if (used_[h]) return false;
    if (host_.out_degree(h) < pat_.out_degree(p)) return false;
    if (host_.in_degree(h) < pat_.in_degree(p)) return false;
    if (pr_.unary && !pr_.unary(p, h)) return false;
    for (Vertex q : pat_.out_neighbours(p)) {
      if (phi_[q] >= 0 && !host_.has_edge(h, phi_[q])) return false;
    }
    for (Vertex q : pat_.in_neighbours(p)) {
      if (phi_[q] >= 0 && !host_.has_edge(phi_[q], h)) return false;
    }
    if (pr_.pair) {
      for (std::size_t i = 0; i < placed_; ++i) {
        const Vertex q = order_[i].p;
        if (!pr_.pair(q, phi_[q], p, h)) return false;
      }
    }
    return true;
  }

  // Returns false once the visitor asked to stop.
  bool Extend(std::size_t depth) {
    if (depth == order_.size()) {
      ++count_;
      return visit_(phi_);
    }
    const Step& step = order_[depth];
    auto try_candidate = [&](Vertex h) {
      if (!Feasible(step.p, h)) return true;
      phi_[step.p] = h;
      used_[h] = true;
      placed_ = depth + 1;
      const bool go_on = Extend(depth + 1);
      used_[h] = false;
      phi_[step.p] = -1;
      placed_ = depth;
      return go_on;
    };
    if (step.anchor >= 0) {
      const Vertex a = phi_[step.anchor];
      auto candidates = step.anchor_is_tail ? host_.out_neighbours(a)
                                            : host_.in_neighbours(a);
      for (Vertex h : candidates) {
        if (!try_candidate(h)) return false;
      }
    } else {
      for (Vertex h = 0; h < host_.n(); ++h) {
        if (!try_candidate(h)) return false;
      }
    }
    return true;
  }

  const MatchProblem& pr_;
  const Digraph& host_;
  const Digraph& pat_;
  const std::function<bool(const Embedding&)>& visit_;
  std::vector<Step> order_;
  Embedding phi_;
  std::vector<bool> used_;
  std::size_t placed_ = 0;
  long long count_ = 0;
};

}  // namespace

long long ForEachEmbedding(const MatchProblem& problem,
                           const std::function<bool(const Embedding&)>& visit) {
  if (problem.host == nullptr) throw UsageError("match problem without host");
  Searcher s(problem, visit);
  return s.Run();
}

std::optional<Embedding> FindEmbedding(const MatchProblem& problem) {
  std::optional<Embedding> found;
  ForEachEmbedding(problem, [&](const Embedding& phi) {
    found = phi;
    return false;
  });
  return found;
}

MatchProblem SubgraphProblem(const Digraph& host, const Digraph& pattern) {
  MatchProblem pr;
  pr.host = &host;
  pr.required = Digraph::Unbounded(pattern.n(), pattern.edges());
  return pr;
}

MatchProblem InducedProblem(const Digraph& host, const Digraph& pattern,
                            std::function<bool(Vertex, Vertex)> known) {
  MatchProblem pr = SubgraphProblem(host, pattern);
  // Captured by value: a pointer into `pr` would dangle once it is returned.
  Digraph pcopy = pr.required;
  pr.pair = [&host, pcopy = std::move(pcopy), known = std::move(known)](
                Vertex pa, Vertex ha, Vertex pb, Vertex hb) {
    if (!pcopy.has_edge(pa, pb)) {
      if (host.has_edge(ha, hb)) return false;
      if (known && !known(ha, hb)) return false;
    }
    if (!pcopy.has_edge(pb, pa)) {
      if (host.has_edge(hb, ha)) return false;
      if (known && !known(hb, ha)) return false;
    }
    return true;
  };
  return pr;
}

std::optional<Embedding> SubgraphAppearance(const Digraph& g,
                                            const PatternGraph& h) {
  return FindEmbedding(SubgraphProblem(g, h.graph()));
}

std::optional<Embedding> InducedAppearance(const Digraph& g,
                                           const PatternGraph& h) {
  return FindEmbedding(InducedProblem(g, h.graph()));
}

namespace {

bool ValidMap(const Digraph& g, const Digraph& h, const Embedding& phi) {
  if (static_cast<int>(phi.size()) != h.n()) return false;
  std::vector<Vertex> sorted(phi);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return false;
  }
  return std::all_of(phi.begin(), phi.end(),
                     [&](Vertex v) { return v >= 0 && v < g.n(); });
}

}  // namespace

bool IsSubgraphEmbedding(const Digraph& g, const Digraph& h,
                         const Embedding& phi) {
  if (!ValidMap(g, h, phi)) return false;
  for (const Edge& e : h.edges()) {
    if (!g.has_edge(phi[e.from], phi[e.to])) return false;
  }
  return true;
}

bool IsInducedEmbedding(const Digraph& g, const Digraph& h,
                        const Embedding& phi) {
  if (!ValidMap(g, h, phi)) return false;
  for (Vertex a = 0; a < h.n(); ++a) {
    for (Vertex b = 0; b < h.n(); ++b) {
      if (a != b && h.has_edge(a, b) != g.has_edge(phi[a], phi[b])) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace bdt
