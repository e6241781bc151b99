#pragma once

#include <cstdint>
#include <vector>

#include "bdt/digraph.hpp"

namespace bdt {

// Weakly connected components, each sorted ascending; components are ordered
// by their smallest vertex.
std::vector<std::vector<Vertex>> Components(const Digraph& g);

// Vertices reachable from `source` by directed paths (including source),
// ascending.
std::vector<Vertex> ForwardReachable(const Digraph& g, Vertex source);

// True iff every weak component has a vertex reaching all of the component.
bool IsRooted(const Digraph& g);
inline bool IsRooted(const PatternGraph& h) { return IsRooted(h.graph()); }

// Tarjan SCC. component[v] is the SCC index of v; indices are a reverse
// topological order of the condensation (sinks first).
struct SccDecomposition {
  std::vector<int> component;
  int count = 0;
};
SccDecomposition StronglyConnectedComponents(const Digraph& g);

// SCCs of the condensation with no outgoing arcs.
std::vector<std::vector<Vertex>> SinkComponents(const Digraph& g);

// Member of the Sink property: some vertex is reachable from every vertex.
// The empty graph is a member.
bool HasReachableByAll(const Digraph& g);

// Canonical form for small graphs (n <= 8): the lexicographically smallest
// adjacency bit string over all relabellings, optionally refined by a
// per-vertex colour that relabelling must preserve.
std::vector<std::uint64_t> CanonicalForm(const Digraph& g,
                                         const std::vector<int>& colours = {});

bool Isomorphic(const Digraph& a, const Digraph& b);

}  // namespace bdt
