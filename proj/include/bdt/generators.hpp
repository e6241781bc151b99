#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bdt/digraph.hpp"
#include "bdt/rng.hpp"

namespace bdt {

// Small named patterns.
PatternGraph DirectedCyclePattern(int k);
PatternGraph DirectedPathPattern(int vertices);
PatternGraph OutStarPattern(int leaves);
// a -> b <- c on three vertices.
PatternGraph TwoSourcesPattern();
PatternGraph DisjointUnion(const PatternGraph& a, const PatternGraph& b);

// floor(n/|H|) vertex-disjoint copies of h followed by isolated padding.
// Copy i occupies vertices [i|H|, (i+1)|H|).
Digraph DisjointCopies(const PatternGraph& h, int n, int d, Model model);

Digraph DirectedCycle(int n, int d, Model model = Model::kF);
Digraph DirectedPath(int n, int d, Model model = Model::kF);
// Edges 2i -> 2i+1; n must be even.
Digraph DirectedMatching(int n, int d, Model model = Model::kF);
// Two disjoint directed cycles of length n/2; n must be even.
Digraph TwoCycles(int n, int d, Model model = Model::kF);
Digraph TransitiveTournament(int n);
Digraph UndirectedCycle(int n, int d);
Digraph UndirectedPath(int n, int d);
// Centre 0 joined to leaves 1..k.
Digraph UndirectedStar(int k, int d);

// Relabels g by a uniformly random permutation.
Digraph RandomRelabel(const Digraph& g, Rng& rng);

// Random d-bounded graph in the given model built by attempting `attempts`
// uniformly random arcs (pairs for kUndirected) and keeping those that
// respect the bounds.
Digraph RandomBounded(int n, int d, Model model, int attempts, Rng& rng);

// Random simple d-regular undirected graph with girth > girth_floor,
// by the pairing model with restarts. Throws ConfigError if dn is odd, d >= n,
// or the retry budget runs out.
Digraph RandomRegular(int n, int d, int girth_floor, Rng& rng,
                      int max_retries = 100000);

// Length of the shortest cycle of an undirected graph, or 0 if acyclic.
int UndirectedGirth(const Digraph& g);

// Named dispatcher used by the command line and experiment plans.
struct GeneratorSpec {
  std::string kind;  // disjoint-copies, cycle, path, matching, two-cycles,
                     // random, regular, ucycle, upath, permuted-copies
  int n = 0;
  int d = 1;
  Model model = Model::kF;
  PatternGraph pattern;  // for disjoint-copies / permuted-copies
  int girth_floor = 0;   // for regular
  int attempts = 0;      // for random; 0 means d*n
};
Digraph Generate(const GeneratorSpec& spec, std::uint64_t seed);

}  // namespace bdt
