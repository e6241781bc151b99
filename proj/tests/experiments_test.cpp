#include <gtest/gtest.h>

#include <bit>
#include <filesystem>
#include <fstream>

#include "bdt/errors.hpp"
#include "bdt/experiments.hpp"
#include "bdt/structure.hpp"
#include "support.hpp"

namespace bdt {
namespace {

const char* kMemberPlan = R"({
  "name": "paths",
  "tester": "monotone",
  "d": 2,
  "family": "family subgraph\n3 1 F\n0: 1\n1: 2\n2: 0\n",
  "generator": {"kind": "path"},
  "epsilon": [0.2, 0.4],
  "n": [30, 60],
  "trials": 100,
  "base_seed": 9
})";

std::string FarPlan(double eps, int jobs) {
  return R"({
  "name": "triangles",
  "tester": "monotone",
  "d": 2,
  "family": "family subgraph\n3 1 F\n0: 1\n1: 2\n2: 0\n",
  "generator": {"kind": "disjoint-copies", "pattern": "3 1 F\n0: 1\n1: 2\n2: 0\n"},
  "epsilon": )" + std::to_string(eps) + R"(,
  "n": [30, 60],
  "trials": 100,
  "base_seed": 3,
  "expect": "far",
  "certificate": "disjoint_copies",
  "flat_queries": true,
  "jobs": )" + std::to_string(jobs) + "}";
}

TEST(Plan, ParsesAndRejectsBadPlans) {
  ExperimentPlan p = ParsePlan(kMemberPlan);
  EXPECT_EQ(p.name, "paths");
  EXPECT_EQ(p.tester, TesterKind::kMonotone);
  EXPECT_EQ(p.epsilons, (std::vector<double>{0.2, 0.4}));
  EXPECT_EQ(p.ns, (std::vector<int>{30, 60}));
  EXPECT_EQ(p.family.t(), 1);
  EXPECT_FALSE(p.expect_far);

  auto edit = [](std::string text, const std::string& from, const std::string& to) {
    text.replace(text.find(from), from.size(), to);
    return text;
  };
  EXPECT_THROW(ParsePlan("{"), ConfigError);
  EXPECT_THROW(ParsePlan(edit(kMemberPlan, "\"trials\": 100", "\"trials\": 99")), ConfigError);
  EXPECT_THROW(ParsePlan(edit(kMemberPlan, "\"base_seed\": 9", "\"base_seed\": 9, \"expect\": \"far\"")), ConfigError);
  std::string far = FarPlan(0.1, 1);
  EXPECT_NO_THROW(ParsePlan(far));
  EXPECT_THROW(ParsePlan(edit(far, "disjoint_copies", "guess")), ConfigError);
  EXPECT_THROW(ParsePlan(edit(far, "disjoint_copies", "exact_distance")), ConfigError);
  EXPECT_NO_THROW(ParsePlan(edit(far, "\"disjoint_copies\"", "\"exact_distance\", \"certificate_n\": 9")));
  EXPECT_THROW(ParsePlan(edit(far, "\"disjoint_copies\"", "\"exact_distance\", \"certificate_n\": 13")), ConfigError);
  EXPECT_THROW(ParsePlan(edit(far, "disjoint_copies", "sink_components")), ConfigError);
  EXPECT_THROW(ParsePlan(edit(kMemberPlan, "\"tester\": \"monotone\"", "\"tester\": \"magic\"")), ConfigError);
  EXPECT_THROW(ParsePlan(edit(kMemberPlan, "\"n\": [30, 60]", "\"n\": []")), ConfigError);
  std::string no_family = edit(kMemberPlan, "\"family\"", "\"unused\"");
  EXPECT_THROW(ParsePlan(no_family), ConfigError);
}

TEST(Plan, FamilyFileResolvesAgainstBaseDir) {
  const auto dir = std::filesystem::temp_directory_path() / "bdt_plan_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "c3.fam") << "family subgraph\n3 1 F\n0: 1\n1: 2\n2: 0\n";
  std::string text = kMemberPlan;
  const std::string inline_family = "\"family\": \"family subgraph\\n3 1 F\\n0: 1\\n1: 2\\n2: 0\\n\"";
  text.replace(text.find(inline_family), inline_family.size(), "\"family_file\": \"c3.fam\"");
  ExperimentPlan p = ParsePlan(text, dir.string());
  EXPECT_EQ(p.family.patterns()[0].size(), 3);
  EXPECT_THROW(ParsePlan(text, "/nonexistent"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(RejectionCurve, MemberCellsNeverReject) {
  CurveResult r = RejectionCurve(ParsePlan(kMemberPlan));
  ASSERT_EQ(r.cells.size(), 4u);
  for (const auto& c : r.cells) {
    EXPECT_EQ(c.summary.rejections, 0);
    EXPECT_TRUE(c.passed);
  }
  EXPECT_EQ(r.trial_log.size(), 400u);
  EXPECT_TRUE(r.passed);
}

TEST(RejectionCurve, FarCellsRejectAndAreDeterministic) {
  CurveResult a = RejectionCurve(ParsePlan(FarPlan(0.1, 1)));
  CurveResult b = RejectionCurve(ParsePlan(FarPlan(0.1, 3)));
  EXPECT_TRUE(a.passed);
  EXPECT_TRUE(a.flat_ok);
  for (const auto& c : a.cells) {
    EXPECT_TRUE(c.certified);
    EXPECT_GE(c.summary.reject_rate, c.threshold);
    EXPECT_EQ(c.summary.unverified_rejections, 0);
  }
  EXPECT_EQ(a.Csv(), b.Csv());
  EXPECT_EQ(a.trial_log, b.trial_log);
}

TEST(RejectionCurve, UncertifiedFarCellFails) {
  // n/3 deletions against 0.4 * 2 * n: not far.
  CurveResult r = RejectionCurve(ParsePlan(FarPlan(0.4, 1)));
  EXPECT_FALSE(r.passed);
  for (const auto& c : r.cells) {
    EXPECT_FALSE(c.certified);
    EXPECT_FALSE(c.passed);
  }
}

TEST(LowerBound, GameRatesAndErrors) {
  const PatternGraph h = TwoSourcesPattern();
  const std::vector<GameStrategy> all = {GameStrategy::kAugmented, GameStrategy::kFixedIds,
                                         GameStrategy::kForwardBfs, GameStrategy::kCanonical};
  auto cells = LowerBoundGame(h, 1000, {0, 5, 12}, all, 600, 4, 2);
  ASSERT_EQ(cells.size(), 12u);
  for (const auto& c : cells) {
    EXPECT_EQ(c.trials, 600);
    EXPECT_DOUBLE_EQ(c.bound, c.q * (c.q - 1) / 2.0 * 3 / 1000);
    if (c.q == 0) EXPECT_EQ(c.detections, 0);
    if (c.strategy == GameStrategy::kAugmented) EXPECT_LE(c.rate, c.bound + 0.02);
  }
  EXPECT_EQ(LowerBoundGame(h, 1000, {0, 5, 12}, all, 600, 4, 1).size(), 12u);
  auto again = LowerBoundGame(h, 1000, {5, 12}, {GameStrategy::kAugmented}, 600, 4, 1);
  auto par = LowerBoundGame(h, 1000, {5, 12}, {GameStrategy::kAugmented}, 600, 4, 3);
  for (std::size_t i = 0; i < again.size(); ++i) EXPECT_EQ(again[i].detections, par[i].detections);
  EXPECT_THROW(LowerBoundGame(DirectedPathPattern(3), 100, {1}, all, 10, 1), UsageError);
  EXPECT_THROW(LowerBoundGame(h, 2, {1}, all, 10, 1), UsageError);
  // Small n: many queries find the pattern.
  auto dense = LowerBoundGame(h, 9, {9}, {GameStrategy::kAugmented}, 100, 1);
  EXPECT_GT(dense[0].rate, 0.5);
}

int BruteMaxCut(const Digraph& g) {
  int best = 0;
  for (unsigned mask = 0; mask < (1u << g.n()); ++mask) {
    int cut = 0;
    for (const Edge& e : g.edges()) {
      if (e.from < e.to && ((mask >> e.from) & 1) != ((mask >> e.to) & 1)) ++cut;
    }
    best = std::max(best, cut);
  }
  return best;
}

int CutOf(const Digraph& g, const std::vector<int>& side) {
  int cut = 0;
  for (const Edge& e : g.edges()) cut += e.from < e.to && side[e.from] != side[e.to];
  return cut;
}

TEST(TwoColour, MaxCutMatchesBruteForce) {
  Rng rng(51);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 1 + rng.UniformInt(10);
    Digraph g = testing::RandomGraph(n, 3, Model::kUndirected, 0.5, rng);
    MaxCutResult exact = ExactMaxCut(g);
    EXPECT_EQ(exact.cut, BruteMaxCut(g));
    EXPECT_EQ(CutOf(g, exact.side), exact.cut);
    MaxCutResult local = LocalSearchCut(g, rng, 5);
    EXPECT_LE(local.cut, exact.cut);
    EXPECT_EQ(CutOf(g, local.side), local.cut);
    const int edges = g.num_arcs() / 2;
    EXPECT_LE(OddCyclePacking(g), edges - exact.cut);
    EXPECT_EQ(ShortestOddCycle(g) == 0, exact.cut == edges);
  }
  Digraph even = UndirectedCycle(8, 2);
  EXPECT_EQ(ExactMaxCut(even).cut, 8);
  EXPECT_EQ(ShortestOddCycle(even), 0);
  Digraph odd = UndirectedCycle(7, 2);
  EXPECT_EQ(ExactMaxCut(odd).cut, 6);
  EXPECT_EQ(ShortestOddCycle(odd), 7);
  EXPECT_EQ(OddCyclePacking(odd), 1);
  EXPECT_FALSE(HasSmallNonBipartiteSubgraph(odd, 6));
  EXPECT_TRUE(HasSmallNonBipartiteSubgraph(odd, 7));
}

TEST(TwoColour, DemoIsLocallyBipartite) {
  TwoColourReport r = TwoColourabilityDemo(3, 0.01, 4, 20, 7);
  EXPECT_EQ(r.n, 20);
  EXPECT_GT(r.girth, 4);
  EXPECT_TRUE(r.shortest_odd_cycle == 0 || r.shortest_odd_cycle > 4);
  EXPECT_FALSE(r.small_non_bipartite);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.edges, 30);
  EXPECT_EQ(r.distance_lower, r.edges - BruteMaxCut(r.graph));
  EXPECT_EQ(r.distance_upper, r.distance_lower);
  EXPECT_EQ(r.far, r.distance_lower > 0.01 * 3 * 20);
  EXPECT_EQ(TwoColourabilityDemo(3, 0.01, 4, 20, 7).Json(), r.Json());
  EXPECT_THROW(TwoColourabilityDemo(2, 0.1, 3, 20, 1), UsageError);
}

// Definition of a k-star minor by enumerating every vertex subset.
bool BruteKStar(const Digraph& g, int k) {
  const int n = g.n();
  for (unsigned s = 1; s < (1u << n); ++s) {
    // Connectivity of S.
    unsigned reach = s & -s, prev = 0;
    while (reach != prev) {
      prev = reach;
      for (Vertex v = 0; v < n; ++v) {
        if (!(reach >> v & 1)) continue;
        for (Vertex u : g.out_neighbours(v)) {
          if (s >> u & 1) reach |= 1u << u;
        }
      }
    }
    if (reach != s) continue;
    unsigned outside = 0;
    for (Vertex v = 0; v < n; ++v) {
      if (!(s >> v & 1)) continue;
      for (Vertex u : g.out_neighbours(v)) {
        if (!(s >> u & 1)) outside |= 1u << u;
      }
    }
    if (std::popcount(outside) >= k) return true;
  }
  return false;
}

TEST(KStar, MinorExamplesAndBruteForce) {
  for (int k = 3; k <= 5; ++k) {
    EXPECT_TRUE(HasKStarMinor(UndirectedStar(k, k), k));
    EXPECT_FALSE(HasKStarMinor(UndirectedStar(k - 1, k), k));
    EXPECT_FALSE(HasKStarMinor(UndirectedPath(12, 2), k));
    EXPECT_FALSE(HasKStarMinor(UndirectedCycle(12, 2), k));
  }
  EXPECT_TRUE(HasKStarMinor(UndirectedPath(3, 2), 2));
  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    Digraph g = testing::RandomGraph(2 + rng.UniformInt(8), 3, Model::kUndirected, 0.3, rng);
    const int k = 2 + rng.UniformInt(4);
    EXPECT_EQ(HasKStarMinor(g, k), BruteKStar(g, k)) << SerializeGraph(g) << k;
  }
}

TEST(KStar, FamilyIsTreesWithKLeaves) {
  EXPECT_EQ(KStarSizeBound(3, 0.5, 3), 15);
  EXPECT_EQ(KStarSizeBound(4, 0.1, 3), 52);
  ForbiddenFamily fam = KStarFamily(3, 0.5, 3);
  ASSERT_FALSE(fam.empty());
  bool has_star = false;
  for (const auto& h : fam.patterns()) {
    const Digraph& t = h.graph();
    EXPECT_EQ(t.num_arcs(), 2 * (t.n() - 1));
    EXPECT_EQ(Components(t).size(), 1u);
    int leaves = 0;
    for (Vertex v = 0; v < t.n(); ++v) {
      leaves += t.out_degree(v) == 1;
      EXPECT_LE(t.out_degree(v), 3);
      EXPECT_EQ(t.out_degree(v), t.in_degree(v));
    }
    EXPECT_EQ(leaves, 3);
    EXPECT_LE(t.n(), 15);
    EXPECT_TRUE(HasKStarMinor(t, 3));
    has_star |= t.n() == 4;
  }
  EXPECT_TRUE(has_star);
  EXPECT_THROW(KStarFamily(2, 0.5, 3), UsageError);
  EXPECT_THROW(KStarFamily(7, 0.5, 3), UsageError);
}

TEST(KStar, DecompositionOfFamilyFreeGraphs) {
  Digraph path = UndirectedPath(200, 2);
  Decomposition d = KStarDecomposition(path, 3, 0.2);
  EXPECT_EQ(d.s, KStarSizeBound(3, 0.2, 2));
  EXPECT_LE(d.max_component, d.s - 3);
  EXPECT_LE(d.total_cut, d.cut_bound);
  int cut = 0;
  for (const auto& c : d.cuts) cut += static_cast<int>(c.size());
  EXPECT_EQ(cut, d.total_cut);
  Digraph cycle = UndirectedCycle(90, 2);
  Decomposition e = KStarDecomposition(cycle, 4, 0.3);
  EXPECT_LE(e.max_component, e.s - 4);
  EXPECT_LE(e.total_cut, e.cut_bound);
  EXPECT_THROW(KStarDecomposition(UndirectedStar(3, 3), 3, 0.2), UsageError);
  EXPECT_THROW(KStarDecomposition(DirectedPath(5, 1), 3, 0.2), UsageError);
}

TEST(MonotoneClosure, SmallSweepHasNoClosedNonMonotoneFamilies) {
  MonotoneClosureReport r = CheckMonotoneClosure(2, 4, 2, 2, 200, 1);
  EXPECT_EQ(r.closed_not_monotone, 0);
  EXPECT_EQ(r.closure_mismatches, 0);
  EXPECT_EQ(r.cross_mismatches, 0);
  EXPECT_GT(r.cross_checked, 0);
  EXPECT_GT(r.closed, 0);
  EXPECT_LE(r.closed, r.monotone);
  EXPECT_EQ(r.discrepancies(), r.monotone_not_closed);
  EXPECT_EQ(CheckMonotoneClosure(2, 4, 2, 2, 200, 1).Json(), r.Json());
  EXPECT_THROW(CheckMonotoneClosure(4, 4, 2, 2, 0, 1), UsageError);
}

}  // namespace
}  // namespace bdt
