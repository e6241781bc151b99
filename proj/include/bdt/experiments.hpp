#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdt/digraph.hpp"
#include "bdt/exact.hpp"
#include "bdt/family.hpp"
#include "bdt/generators.hpp"
#include "bdt/monte_carlo.hpp"

namespace bdt {

// ---------------------------------------------------------------------------
// Rejection curves over an (n, epsilon) grid.

enum class Certificate { kNone, kExactDistance, kDisjointCopies, kSinkComponents };

struct ExperimentPlan {
  std::string name;
  TesterKind tester = TesterKind::kMonotone;
  Model model = Model::kF;
  int d = 1;
  ForbiddenFamily family;       // unused by the sink tester
  GeneratorSpec generator;      // n and d are filled per cell
  std::vector<double> epsilons;
  std::vector<int> ns;
  long long trials = 100;
  std::uint64_t base_seed = 1;
  bool expect_far = false;
  Certificate certificate = Certificate::kNone;
  int certificate_n = 0;        // small n for kExactDistance
  bool flat_queries = false;    // assert max charged queries equal across n
  int jobs = 1;
};

// Loads and validates a JSON plan; relative file paths resolve against
// base_dir. Throws ConfigError for uncertified far labels or for probability
// cells with fewer than 100 trials.
ExperimentPlan ParsePlan(const std::string& json_text,
                         const std::string& base_dir = ".");

struct CellResult {
  int n = 0;
  double epsilon = 0;
  Summary summary;
  double threshold = 0;   // required reject rate (far) or 0 (member)
  std::string certificate_value;
  bool certified = true;
  bool passed = true;
};

struct CurveResult {
  std::vector<CellResult> cells;
  std::vector<std::string> trial_log;  // JSON lines, cell-major
  bool flat_ok = true;
  bool passed = true;
  std::string Csv() const;
};

CurveResult RejectionCurve(const ExperimentPlan& plan);

// ---------------------------------------------------------------------------
// Monotonicity of P_C against upwards-closure, exhaustively at small sizes
// in the F model.

struct MonotoneClosureReport {
  int configs = 0;                 // configurations on <= max_pattern vertices
  long long hosts = 0;             // labelled hosts on 1..max_host vertices
  long long distinct_masks = 0;    // distinct appearance sets over all hosts
  long long deletion_pairs = 0;    // distinct (mask(G), mask(G - e))
  long long families = 0;
  long long closed = 0;
  long long monotone = 0;
  long long monotone_not_closed = 0;
  long long closed_not_monotone = 0;
  long long empty_property = 0;    // monotone_not_closed with P_C empty on every host
  long long nonempty_at_max_host = 0;  // monotone_not_closed with a max_host-vertex member
  long long closure_mismatches = 0;  // fast closure test vs IsUpwardsClosed
  long long cross_checked = 0;     // hosts re-checked with CAppearance
  long long cross_mismatches = 0;
  std::vector<std::string> examples;  // discrepancies with a max_host-vertex member
  long long discrepancies() const { return monotone_not_closed + closed_not_monotone; }
  std::string Json() const;
};

// Families are all sets of at most max_family configurations. P_C is
// monotone when no host in P_C leaves it after deleting one arc.
MonotoneClosureReport CheckMonotoneClosure(int max_pattern, int max_host, int d,
                                           int max_family, long long cross_checks,
                                           std::uint64_t seed);

// ---------------------------------------------------------------------------
// Lower-bound game for non-rooted patterns.

enum class GameStrategy {
  kAugmented,   // q uniform vertices, each answered by its forward closure
  kFixedIds,    // query vertices 0..q-1 with the same answers
  kForwardBfs,  // next query is the smallest discovered unqueried vertex
  kCanonical,   // q uniform vertices with replacement, |H|-discs
};
std::string StrategyName(GameStrategy s);

struct GameCell {
  GameStrategy strategy;
  int q = 0;
  long long trials = 0;
  long long detections = 0;
  double rate = 0;
  double bound = 0;  // C(q,2)|H|/n
};

// Draws fresh samples of floor(n/|H|) disjoint copies of h (plus isolated
// padding) under a uniformly random labelling and plays each strategy.
// Detection means the discovered graph contains h as a subgraph.
std::vector<GameCell> LowerBoundGame(const PatternGraph& h, int n,
                                     const std::vector<int>& qs,
                                     const std::vector<GameStrategy>& strategies,
                                     long long trials, std::uint64_t seed,
                                     int jobs = 1);

// ---------------------------------------------------------------------------
// Two-colourability: locally bipartite yet far from bipartite.

struct MaxCutResult {
  int cut = 0;
  std::vector<int> side;  // 0/1 per vertex
};
// Exhaustive (Gray code) maximum cut of an undirected graph, n <= 26.
MaxCutResult ExactMaxCut(const Digraph& g);
// Local-search cut (upper bound on the distance to bipartite).
MaxCutResult LocalSearchCut(const Digraph& g, Rng& rng, int restarts = 20);
// Greedy packing of edge-disjoint odd cycles (lower bound on the distance).
int OddCyclePacking(const Digraph& g);

// Length of the shortest odd cycle, or 0 if bipartite.
int ShortestOddCycle(const Digraph& g);
// Brute force: some connected vertex set of size <= limit induces a
// non-bipartite graph.
bool HasSmallNonBipartiteSubgraph(const Digraph& g, int limit);

struct TwoColourReport {
  Digraph graph;
  int n = 0, d = 0, girth_floor = 0;
  int girth = 0;
  int shortest_odd_cycle = 0;
  bool small_non_bipartite = false;  // must be false
  int edges = 0;
  bool exact = false;
  int distance_lower = 0;  // exact when `exact`
  int distance_upper = 0;
  double epsilon = 0;
  bool far = false;        // distance_lower > epsilon d n
  std::string Json() const;
};
TwoColourReport TwoColourabilityDemo(int d, double epsilon, int girth_floor,
                                     int n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// k-star minors.

// Some connected S has at least k vertices outside S adjacent to S.
bool HasKStarMinor(const Digraph& g, int k);

// s = floor(k/epsilon + k d).
int KStarSizeBound(int k, double epsilon, int d);

// Forbidden family for "no k-star minor" at size bound s: k-leaf trees with
// no degree-2 vertices except on subdivided internal edges, max degree <= d.
ForbiddenFamily KStarFamily(int k, double epsilon, int d);

struct Decomposition {
  std::vector<std::vector<Edge>> cuts;  // undirected cut edges per step
  int total_cut = 0;
  int max_component = 0;
  double cut_bound = 0;  // (n / (s - k)) d k
  int s = 0;
};
// Repeatedly removes a BFS-grown connected piece of s-k vertices from a
// component larger than s-k. Throws UsageError if g has a k-star minor.
Decomposition KStarDecomposition(const Digraph& g, int k, double epsilon);

}  // namespace bdt
