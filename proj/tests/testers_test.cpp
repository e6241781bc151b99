#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "bdt/errors.hpp"
#include "bdt/family.hpp"
#include "bdt/generators.hpp"
#include "bdt/matching.hpp"
#include "bdt/monte_carlo.hpp"
#include "bdt/structure.hpp"
#include "bdt/testers.hpp"
#include "support.hpp"

namespace bdt {
namespace {

using testing::RandomGraph;

ForbiddenFamily C3Family() {
  return ForbiddenFamily({DirectedCyclePattern(3)}, FamilyMode::kSubgraph);
}

ForbiddenFamily InducedTwoPath() {
  return ForbiddenFamily({DirectedPathPattern(3)}, FamilyMode::kInduced);
}

TesterParams Params(double epsilon, std::uint64_t seed, bool transcript = false) {
  TesterParams p;
  p.epsilon = epsilon;
  p.seed = seed;
  p.record_transcript = transcript;
  return p;
}

TEST(Testers, RepetitionFormulas) {
  // (1 * 9 * 3 * 9) * 2 ln 3 = 533.93...
  EXPECT_EQ(MonotoneRepetitions(1, 3, 3, 1.0 / 9), 534);
  // ln 1 = 0: the max(1, .) guard.
  EXPECT_EQ(MonotoneRepetitions(1, 1, 2, 0.1), 1);
  EXPECT_EQ(MonotoneRepetitions(2, 2, 2, 0.5), CeilCount(2 * 4 * 2 / 0.5 * 2 * std::log(2.0)));
  // 8 ln 3 / 0.5 = 17.58
  EXPECT_EQ(HereditaryEdgeTarget(1, 3, 1, 0.5), 18);
  EXPECT_EQ(HereditarySamplerCalls(1, 18, 0.5), 144);
  EXPECT_EQ(SinkSamples(2, 0.1), 5000);
  EXPECT_EQ(SinkRadius(2, 0.1), 10);
  EXPECT_EQ(SinkRadius(3, 0.2), 4);
  EXPECT_EQ(CeilCount(0.2), 1);
  EXPECT_EQ(CeilCount(3.0000000000001), 3);
  EXPECT_EQ(CeilCount(3.01), 4);
  EXPECT_THROW(MonotoneRepetitions(1, 3, 3, 0.0), UsageError);
  EXPECT_THROW(SinkSamples(2, 1.0), UsageError);
}

TEST(Testers, MonotoneIssuesExactlyEllDiscs) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    Digraph g = RandomBounded(300, 3, Model::kF, 600, rng);
    Oracle o(g);
    const double eps = 0.1 + 0.8 * rng.Real();
    TrialReport rep = MonotoneTester(o, C3Family(), Params(eps, trial));
    const long long ell = MonotoneRepetitions(1, 3, 3, eps);
    if (rep.verdict == Verdict::kAccept) EXPECT_EQ(rep.disc_queries, ell);
    EXPECT_LE(rep.charged_queries, ell * 27);
    EXPECT_LE(rep.charged_queries, 4 * MonotoneQueryFormula(1, 3, 3, eps));
  }
}

TEST(Testers, OneSidedErrorMonotone) {
  Rng rng(11);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 8 + rng.UniformInt(30);
    Digraph g = RandomGraph(n, 2, Model::kF, 2.0 / n, rng);
    if (SubgraphAppearance(g, DirectedCyclePattern(3))) continue;
    ++checked;
    Oracle o(g);
    EXPECT_EQ(MonotoneTester(o, C3Family(), Params(0.2, trial)).verdict, Verdict::kAccept);
  }
  EXPECT_GT(checked, 50);
  Digraph path = DirectedPath(500, 3);
  Oracle o(path);
  EXPECT_EQ(MonotoneTester(o, C3Family(), Params(1.0 / 9, 1)).verdict, Verdict::kAccept);
}

TEST(Testers, TwoComponentPatternNeverFoundInTriangles) {
  ForbiddenFamily fam(
      {DisjointUnion(DirectedCyclePattern(3), DirectedCyclePattern(4))},
      FamilyMode::kSubgraph);
  Digraph g = DisjointCopies(DirectedCyclePattern(3), 60, 2, Model::kF);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Oracle o(g);
    EXPECT_EQ(MonotoneTester(o, fam, Params(0.5, seed)).verdict, Verdict::kAccept);
  }
  // Both components present in different copies: found across discs.
  Digraph both = Digraph(7, 2, Model::kF, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 6}, {6, 3}});
  Oracle o(both);
  TrialReport rep = MonotoneTester(o, fam, Params(0.5, 3));
  ASSERT_EQ(rep.verdict, Verdict::kReject);
  EXPECT_TRUE(VerifyWitness(both, *rep.witness));
}

TEST(Testers, DisjointTrianglesRejected) {
  Digraph g = DisjointCopies(DirectedCyclePattern(3), 300, 3, Model::kF);
  int rejects = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Oracle o(g);
    TrialReport rep = MonotoneTester(o, C3Family(), Params(1.0 / 9, seed));
    if (rep.verdict == Verdict::kReject) {
      ++rejects;
      ASSERT_TRUE(rep.witness);
      EXPECT_TRUE(VerifyWitness(g, *rep.witness));
    }
  }
  EXPECT_EQ(rejects, 40);
}

TEST(Testers, RejectionsCarryVerifiableWitnesses) {
  Rng rng(13);
  const std::vector<PatternGraph> pool = {DirectedCyclePattern(2), DirectedCyclePattern(3),
                                          DirectedPathPattern(3), OutStarPattern(2)};
  int rejects = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const Model model = trial % 2 ? Model::kFB : Model::kF;
    Digraph g = RandomGraph(20 + rng.UniformInt(20), 2, model, 0.1, rng);
    const PatternGraph& h = pool[rng.UniformInt(static_cast<int>(pool.size()))];
    for (FamilyMode mode : {FamilyMode::kSubgraph, FamilyMode::kInduced}) {
      ForbiddenFamily fam({h}, mode);
      Oracle o(g);
      TesterParams p = Params(0.3, trial);
      TrialReport rep = mode == FamilyMode::kSubgraph ? MonotoneTester(o, fam, p)
                                                      : HereditaryTester(o, fam, p);
      if (rep.verdict == Verdict::kReject) {
        ++rejects;
        ASSERT_TRUE(rep.witness);
        EXPECT_TRUE(VerifyWitness(g, *rep.witness));
      } else {
        EXPECT_FALSE(rep.witness);
      }
      if (!fam.Contains(g)) EXPECT_EQ(rep.verdict, Verdict::kAccept);
    }
  }
  EXPECT_GT(rejects, 20);
}

TEST(Testers, OneSidedErrorHereditary) {
  Rng rng(19);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 10 + rng.UniformInt(20);
    Digraph g = RandomGraph(n, 2, Model::kF, 0.4 / n, rng);
    if (InducedAppearance(g, DirectedPathPattern(3))) continue;
    ++checked;
    Oracle o(g);
    EXPECT_EQ(HereditaryTester(o, InducedTwoPath(), Params(0.25, trial)).verdict,
              Verdict::kAccept);
  }
  EXPECT_GT(checked, 20);
  // Closing every 2-path into a triangle kills every induced copy.
  Digraph t = TransitiveTournament(3).WithModel(2, Model::kF);
  Oracle o(t);
  EXPECT_EQ(HereditaryTester(o, InducedTwoPath(), Params(0.25, 1)).verdict, Verdict::kAccept);
}

TEST(Testers, HereditaryAcceptsWhenSamplerStarves) {
  Digraph g(1000, 1, Model::kF, {{0, 1}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Oracle o(g);
    TrialReport rep = HereditaryTester(o, InducedTwoPath(), Params(0.5, seed));
    EXPECT_EQ(rep.verdict, Verdict::kAccept);
    EXPECT_EQ(rep.vertex_queries, HereditarySamplerCalls(1, HereditaryEdgeTarget(1, 3, 1, 0.5), 0.5));
    EXPECT_EQ(rep.disc_queries, 0);
  }
}

TEST(Testers, HereditaryFindsInducedPathsOnCycles) {
  Digraph g = DisjointCopies(DirectedCyclePattern(5), 300, 1, Model::kF);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Oracle o(g);
    TrialReport rep = HereditaryTester(o, InducedTwoPath(), Params(0.5, seed));
    ASSERT_EQ(rep.verdict, Verdict::kReject);
    EXPECT_TRUE(VerifyWitness(g, *rep.witness));
  }
}

TEST(Testers, PreconditionErrors) {
  ForbiddenFamily unrooted({TwoSourcesPattern()}, FamilyMode::kSubgraph);
  Digraph g = DirectedCycle(10, 2, Model::kFB);
  Oracle f(g, Model::kF);
  EXPECT_THROW(MonotoneTester(f, unrooted, Params(0.2, 0)), ConfigError);
  ForbiddenFamily unrooted_induced({TwoSourcesPattern()}, FamilyMode::kInduced);
  EXPECT_THROW(HereditaryTester(f, unrooted_induced, Params(0.2, 0)), ConfigError);
  Oracle fb(g, Model::kFB);
  EXPECT_NO_THROW(MonotoneTester(fb, unrooted, Params(0.2, 0)));
  EXPECT_NO_THROW(HereditaryTester(fb, unrooted_induced, Params(0.2, 0)));
  EXPECT_THROW(MonotoneTester(f, InducedTwoPath(), Params(0.2, 0)), UsageError);
  EXPECT_THROW(HereditaryTester(f, C3Family(), Params(0.2, 0)), UsageError);
  ForbiddenFamily star({OutStarPattern(3)}, FamilyMode::kSubgraph);
  EXPECT_THROW(MonotoneTester(f, star, Params(0.2, 0)), ConfigError);
  EXPECT_THROW(SinkTester(f, Params(0.5, 0)), UsageError);
  EXPECT_THROW(SinkTester(f, Params(0.6, 0)), UsageError);
  EXPECT_THROW(SinkTester(fb, Params(0.1, 0)), UsageError);
}

TEST(Testers, SamplerEdgeCases) {
  Rng rng(1);
  Digraph full = DirectedCycle(10, 1);
  Oracle o(full);
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(SampleRandomEdge(o, 1, rng).has_value());
  Digraph empty(10, 2, Model::kF, {});
  Oracle e(empty);
  for (int i = 0; i < 100; ++i) EXPECT_FALSE(SampleRandomEdge(e, 2, rng).has_value());
  EXPECT_DOUBLE_EQ(SamplerSuccessProbability(full), 1.0);
  EXPECT_DOUBLE_EQ(SamplerSuccessProbability(empty), 0.0);
}

TEST(Testers, SamplerIsUniformOnEdges) {
  Rng gen(77);
  Digraph g = RandomBounded(20, 3, Model::kF, 40, gen);
  const auto edges = g.edges();
  ASSERT_GT(edges.size(), 10u);
  Oracle o(g);
  Rng rng(78);
  std::map<Edge, long long> hits;
  long long successes = 0;
  const long long samples = 100000;
  for (long long i = 0; i < samples; ++i) {
    if (auto e = SampleRandomEdge(o, g.d(), rng)) {
      ASSERT_TRUE(g.has_edge(e->from, e->to));
      ++hits[*e];
      ++successes;
    }
  }
  double tv = 0;
  for (const Edge& e : edges) {
    tv += std::abs(static_cast<double>(hits[e]) / successes - 1.0 / edges.size());
  }
  EXPECT_LT(tv / 2, 0.02);
  const double p = SamplerSuccessProbability(g);
  EXPECT_DOUBLE_EQ(p, static_cast<double>(edges.size()) / (20.0 * 3));
  EXPECT_NEAR(static_cast<double>(successes) / samples, p, 0.01);
}

TEST(Testers, SamplerSuccessAtLeastEpsilonOverD) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + rng.UniformInt(4);
    Digraph g = RandomBounded(30, d, Model::kF, rng.UniformInt(120), rng);
    const double eps = 0.01 + 0.98 * rng.Real();
    if (g.num_arcs() < eps * g.n() * d) continue;
    EXPECT_GE(SamplerSuccessProbability(g), eps / d);
  }
}

TEST(Testers, Determinism) {
  Digraph g = DisjointCopies(DirectedCyclePattern(3), 99, 2, Model::kF);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Oracle a(g, true), b(g, true);
    TrialReport x = MonotoneTester(a, C3Family(), Params(0.3, seed, true));
    TrialReport y = MonotoneTester(b, C3Family(), Params(0.3, seed, true));
    EXPECT_EQ(TrialReportJson(x, 0), TrialReportJson(y, 0));
    ASSERT_EQ(x.transcript.size(), y.transcript.size());
    for (std::size_t i = 0; i < x.transcript.size(); ++i) {
      EXPECT_EQ(TranscriptJson(x.transcript[i]), TranscriptJson(y.transcript[i]));
    }
    Oracle c(g, true), e(g, true);
    EXPECT_EQ(TrialReportJson(SinkTester(c, Params(0.2, seed)), 1),
              TrialReportJson(SinkTester(e, Params(0.2, seed)), 1));
  }
}

TEST(Testers, CanonicalWithFamilyDeciderEqualsMonotone) {
  Rng rng(9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Digraph g = RandomBounded(200, 2, Model::kF, 300, rng);
    Oracle a(g, true), b(g, true);
    TesterParams p = Params(0.4, seed, true);
    TrialReport m = MonotoneTester(a, C3Family(), p);
    TrialReport c = CanonicalTester(b, 3, MonotoneRepetitions(1, 3, 2, 0.4),
                                    FamilyDecider(C3Family()), p);
    EXPECT_EQ(TrialReportJson(m, 0), TrialReportJson(c, 0));
    ASSERT_EQ(m.transcript.size(), c.transcript.size());
    for (std::size_t i = 0; i < m.transcript.size(); ++i) {
      EXPECT_EQ(TranscriptJson(m.transcript[i]), TranscriptJson(c.transcript[i]));
    }
  }
}

TEST(Testers, OutDegreeDecider) {
  const int d = 3;
  // Every vertex of a directed 2-regular-out graph has out-degree d - 1.
  std::vector<Edge> edges;
  for (Vertex v = 0; v < 50; ++v) {
    edges.push_back({v, (v + 1) % 50});
    edges.push_back({v, (v + 2) % 50});
  }
  Digraph all(50, d, Model::kF, edges);
  Digraph none = DirectedCycle(50, d);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Oracle a(all), b(none);
    TrialReport ra = CanonicalTester(a, 1, 5, OutDegreeDecider(d - 1), Params(0.1, seed));
    ASSERT_EQ(ra.verdict, Verdict::kReject);
    EXPECT_TRUE(VerifyWitness(all, *ra.witness));
    EXPECT_EQ(CanonicalTester(b, 1, 5, OutDegreeDecider(d - 1), Params(0.1, seed)).verdict,
              Verdict::kAccept);
    Oracle c(all);
    Decider accept = [](const DiscoveredGraph&, int, const std::vector<Vertex>&) {
      return std::optional<Witness>();
    };
    EXPECT_EQ(CanonicalTester(c, 2, 10, accept, Params(0.1, seed)).verdict, Verdict::kAccept);
  }
}

TEST(Testers, SinkTester) {
  Digraph cycle = DirectedCycle(400, 2);
  Digraph matching = DirectedMatching(200, 2);
  const long long b = SinkSamples(2, 0.1);
  const int radius = SinkRadius(2, 0.1);
  long long expanded = 0;
  for (int i = 0; i <= radius; ++i) expanded += static_cast<long long>(std::pow(2, i));
  int rejects = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Oracle o(cycle);
    EXPECT_EQ(SinkTester(o, Params(0.1, seed)).verdict, Verdict::kAccept);
    Oracle m(matching);
    TrialReport rep = SinkTester(m, Params(0.1, seed));
    EXPECT_LE(rep.charged_queries, b * expanded);
    EXPECT_LE(rep.charged_queries, b * static_cast<long long>(std::pow(2, radius)));
    if (rep.verdict == Verdict::kReject) {
      ++rejects;
      EXPECT_TRUE(VerifyWitness(matching, *rep.witness));
    }
  }
  EXPECT_EQ(rejects, 10);
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    Digraph g = RandomGraph(30, 2, Model::kF, 0.08, rng);
    if (!HasReachableByAll(g)) continue;
    Oracle o(g);
    EXPECT_EQ(SinkTester(o, Params(0.3, trial)).verdict, Verdict::kAccept);
  }
}

TEST(Testers, ClosePropertyHalvesEpsilon) {
  Digraph g = DisjointCopies(DirectedCyclePattern(3), 90, 2, Model::kF);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Oracle a(g, true), b(g, true);
    TrialReport wrapped = ClosePropertyTester(a, C3Family(), Params(0.2, seed, true));
    TrialReport inner = MonotoneTester(b, C3Family(), Params(0.1, seed, true));
    EXPECT_EQ(TrialReportJson(wrapped, 0), TrialReportJson(inner, 0));
    EXPECT_EQ(wrapped.transcript.size(), inner.transcript.size());
  }
  Digraph path = DirectedPath(100, 2);
  Oracle o(path);
  EXPECT_EQ(ClosePropertyTester(o, C3Family(), Params(0.2, 1)).verdict, Verdict::kAccept);
  Oracle h(path);
  EXPECT_EQ(ClosePropertyTester(h, ForbiddenFamily({DirectedCyclePattern(2)}, FamilyMode::kInduced),
                                Params(0.2, 1)).verdict,
            Verdict::kAccept);
}

TEST(MonteCarlo, OutputIndependentOfJobs) {
  Digraph g = DisjointCopies(DirectedCyclePattern(3), 300, 3, Model::kF);
  TrialFn trial = [&](std::uint64_t seed) {
    Oracle o(g);
    return MonotoneTester(o, C3Family(), Params(0.5, seed));
  };
  MonteCarloResult one = RunTrials(g, trial, 60, 42, 1);
  MonteCarloResult four = RunTrials(g, trial, 60, 42, 4);
  EXPECT_EQ(SummaryJson(one.summary), SummaryJson(four.summary));
  ASSERT_EQ(one.reports.size(), 60u);
  for (std::size_t i = 0; i < one.reports.size(); ++i) {
    EXPECT_EQ(TrialReportJson(one.reports[i], i), TrialReportJson(four.reports[i], i));
    EXPECT_EQ(one.reports[i].seed, DeriveSeed(42, i));
  }
  EXPECT_EQ(one.summary.unverified_rejections, 0);
  EXPECT_EQ(one.summary.trials, 60);
}

TEST(MonteCarlo, HalfRateThreshold) {
  EXPECT_LT(HalfRateThreshold(200), 0.5);
  EXPECT_GT(HalfRateThreshold(200), 0.35);
  EXPECT_LT(HalfRateThreshold(100), HalfRateThreshold(10000));
}

}  // namespace
}  // namespace bdt
