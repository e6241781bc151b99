#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bdt/digraph.hpp"

namespace bdt {

// phi[p] = host vertex assigned to pattern vertex p.
using Embedding = std::vector<Vertex>;

// A backtracking injective-map search. `required` is a digraph on the pattern
// vertices whose arcs must all map onto host arcs; `unary` and `pair` add
// further constraints. `pair` is evaluated once for every pair of mapped
// pattern vertices (pa mapped before pb).
struct MatchProblem {
  const Digraph* host = nullptr;
  Digraph required;
  std::function<bool(Vertex p, Vertex h)> unary;
  std::function<bool(Vertex pa, Vertex ha, Vertex pb, Vertex hb)> pair;
};

// Visits embeddings in a fixed order (pattern vertices by BFS over weak
// components from the lowest id; host candidates ascending). The visitor
// returns false to stop. Returns the number of embeddings visited.
long long ForEachEmbedding(const MatchProblem& problem,
                           const std::function<bool(const Embedding&)>& visit);

std::optional<Embedding> FindEmbedding(const MatchProblem& problem);

MatchProblem SubgraphProblem(const Digraph& host, const Digraph& pattern);

// Edges must match biconditionally on the image. If `known` is given, every
// pattern non-edge (a,b) additionally needs known(phi a, phi b): the host pair
// is certified absent rather than just unobserved.
MatchProblem InducedProblem(
    const Digraph& host, const Digraph& pattern,
    std::function<bool(Vertex, Vertex)> known = nullptr);

std::optional<Embedding> SubgraphAppearance(const Digraph& g,
                                            const PatternGraph& h);
std::optional<Embedding> InducedAppearance(const Digraph& g,
                                           const PatternGraph& h);

// Checks a concrete map. Used to re-verify tester witnesses against the full
// graph.
bool IsSubgraphEmbedding(const Digraph& g, const Digraph& h,
                         const Embedding& phi);
bool IsInducedEmbedding(const Digraph& g, const Digraph& h,
                        const Embedding& phi);

}  // namespace bdt
