#include <gtest/gtest.h>

#include <set>

#include "bdt/configuration.hpp"
#include "bdt/exact.hpp"
#include "bdt/generators.hpp"
#include "bdt/matching.hpp"
#include "bdt/structure.hpp"
#include "support.hpp"

namespace bdt {
namespace {

using testing::AllGraphs;
using testing::BruteDistance;
using testing::BruteSinkMember;
using testing::CountSubgraphMaps;
using testing::EditDistance;
using testing::ForEachInjection;
using testing::RandomGraph;

constexpr Label D = Label::kDeveloped;
constexpr Label F = Label::kFrontier;

ForbiddenFamily Subgraph(PatternGraph h) {
  return ForbiddenFamily({std::move(h)}, FamilyMode::kSubgraph);
}

TEST(Exact, SinkMembershipMatchesReachabilityExhaustively) {
  long long graphs = 0;
  for (int n = 0; n <= 5; ++n) {
    for (const Digraph& g : AllGraphs(n, std::max(1, n - 1), Model::kF)) {
      ASSERT_EQ(IsMember(g, PropertySpec::Sink()), BruteSinkMember(g)) << SerializeGraph(g);
      ++graphs;
    }
  }
  EXPECT_EQ(graphs, 1 + 1 + 4 + 64 + 4096 + 1048576);
}

TEST(Exact, MembershipExamples) {
  EXPECT_TRUE(IsMember(DirectedCycle(7, 1), PropertySpec::Sink()));
  EXPECT_FALSE(IsMember(DirectedMatching(4, 1), PropertySpec::Sink()));
  EXPECT_FALSE(IsMember(DirectedMatching(10, 1), PropertySpec::Sink()));
  EXPECT_TRUE(IsMember(Digraph(), PropertySpec::Sink()));
  PropertySpec empty = PropertySpec::Forbidden(ForbiddenFamily({}, FamilyMode::kSubgraph), Model::kF);
  EXPECT_TRUE(IsMember(DisjointCopies(DirectedCyclePattern(3), 9, 2, Model::kF), empty));
  EXPECT_TRUE(IsMember(DirectedCycle(4, 2), PropertySpec::Configs({}, Model::kF)));
}

TEST(Exact, DistanceExamples) {
  Digraph two_c3 = DisjointCopies(DirectedCyclePattern(3), 6, 3, Model::kF);
  DistanceResult free = ExactDistance(two_c3, PropertySpec::Forbidden(Subgraph(DirectedCyclePattern(3)), Model::kF));
  EXPECT_EQ(free.status, DistanceResult::Status::kExact);
  EXPECT_EQ(free.distance, 2);
  ASSERT_TRUE(free.nearest);
  EXPECT_EQ(EditDistance(two_c3, *free.nearest), 2);
  EXPECT_FALSE(SubgraphAppearance(*free.nearest, DirectedCyclePattern(3)));

  DistanceResult sink = ExactDistance(two_c3, PropertySpec::Sink());
  EXPECT_EQ(sink.distance, 1);
  EXPECT_TRUE(HasReachableByAll(*sink.nearest));

  DistanceResult zero = ExactDistance(DirectedCycle(6, 1), PropertySpec::Sink());
  EXPECT_EQ(zero.distance, 0);

  DistanceResult capped = ExactDistance(two_c3, PropertySpec::Forbidden(Subgraph(DirectedCyclePattern(3)), Model::kF), 1);
  EXPECT_EQ(capped.status, DistanceResult::Status::kExceedsLimit);
}

// PropertySpec instances exercised against the brute-force distance.
struct Case {
  PropertySpec spec;
  std::function<bool(const Digraph&)> member;
};

std::vector<Case> Cases(Model model) {
  std::vector<Case> out;
  for (auto h : {DirectedCyclePattern(2), DirectedCyclePattern(3), DirectedPathPattern(3), OutStarPattern(2)}) {
    out.push_back({PropertySpec::Forbidden(Subgraph(h), model),
                   [h](const Digraph& g) { return CountSubgraphMaps(g, h.graph()) == 0; }});
    ForbiddenFamily ind({h}, FamilyMode::kInduced);
    out.push_back({PropertySpec::Forbidden(ind, model),
                   [h](const Digraph& g) { return testing::CountInducedMaps(g, h.graph()) == 0; }});
  }
  if (model == Model::kF) {
    out.push_back({PropertySpec::Sink(), [](const Digraph& g) { return BruteSinkMember(g); }});
  }
  Configuration star(OutStarPattern(2), {D, F, F});
  Configuration arc(DirectedPathPattern(2), {D, D});
  ConfigurationFamily cf{{star, arc}};
  out.push_back({PropertySpec::Configs(cf, model),
                 [cf, model](const Digraph& g) { return InPC(g, cf, model); }});
  auto even_arcs = [](const Digraph& g) { return g.num_arcs() % 4 == 0; };
  out.push_back({PropertySpec::Predicate(even_arcs, model), even_arcs});
  return out;
}

TEST(Exact, DistanceMatchesBruteForce) {
  Rng rng(29);
  for (Model model : {Model::kF, Model::kFB, Model::kUndirected}) {
    const auto cases = Cases(model);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 1 + rng.UniformInt(4);
      const int d = 1 + rng.UniformInt(2);
      Digraph g = RandomGraph(n, d, model, 0.5, rng);
      for (const Case& c : cases) {
        const int brute = BruteDistance(g, c.member);
        DistanceResult r = ExactDistance(g, c.spec);
        if (brute < 0) {
          EXPECT_EQ(r.status, DistanceResult::Status::kUnreachable) << SerializeGraph(g);
          continue;
        }
        ASSERT_EQ(r.status, DistanceResult::Status::kExact) << SerializeGraph(g);
        EXPECT_EQ(r.distance, brute) << SerializeGraph(g);
        ASSERT_TRUE(r.nearest);
        EXPECT_TRUE(c.member(*r.nearest));
        EXPECT_EQ(EditDistance(g, *r.nearest), brute);
        EXPECT_EQ(r.distance == 0, IsMember(g, c.spec));
      }
    }
  }
}

TEST(Exact, TriangleBound) {
  Rng rng(37);
  const auto cases = Cases(Model::kF);
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 3 + rng.UniformInt(3);
    Digraph g = RandomGraph(n, 2, Model::kF, 0.4, rng);
    Digraph h = RandomGraph(n, 2, Model::kF, 0.4, rng);
    const Case& c = cases[rng.UniformInt(static_cast<int>(cases.size()))];
    DistanceResult a = ExactDistance(g, c.spec), b = ExactDistance(h, c.spec);
    if (a.status != DistanceResult::Status::kExact) continue;
    ASSERT_EQ(b.status, DistanceResult::Status::kExact);
    EXPECT_LE(a.distance, EditDistance(g, h) + b.distance);
  }
}

TEST(Exact, AdditivityOverDisjointCopies) {
  for (int m = 1; m <= 3; ++m) {
    Digraph g = DisjointCopies(DirectedCyclePattern(3), 3 * m, 2, Model::kF);
    EXPECT_EQ(ExactDistance(g, PropertySpec::Forbidden(Subgraph(DirectedCyclePattern(3)), Model::kF)).distance, m);
    Digraph s = DisjointCopies(OutStarPattern(2), 3 * m, 2, Model::kF);
    EXPECT_EQ(ExactDistance(s, PropertySpec::Forbidden(Subgraph(DirectedPathPattern(2)), Model::kF)).distance, 2 * m);
    Digraph arcs = DirectedMatching(2 * m, 1, Model::kFB);
    ForbiddenFamily ind({DirectedPathPattern(2)}, FamilyMode::kInduced);
    EXPECT_EQ(ExactDistance(arcs, PropertySpec::Forbidden(ind, Model::kFB)).distance, m);
  }
  ForbiddenFamily two_path({DirectedPathPattern(3)}, FamilyMode::kInduced);
  PropertySpec p = PropertySpec::Forbidden(two_path, Model::kF);
  EXPECT_EQ(ExactDistance(DirectedCycle(5, 1), p).distance, 3);
  EXPECT_EQ(ExactDistance(DisjointCopies(DirectedCyclePattern(5), 10, 1, Model::kF), p).distance, 6);
}

TEST(Exact, SingletonAndPathFamily) {
  PropertySpec p = PropertySpec::Configs(SingletonAndPathFamily(), Model::kUndirected);
  for (int n = 1; n <= 6; ++n) {
    Digraph g = UndirectedPath(n, 2);
    DistanceResult r = ExactDistance(g, p);
    auto nonempty = PropertyNonEmpty(p, n, 2, Model::kUndirected);
    ASSERT_TRUE(nonempty);
    if (n % 2) {
      EXPECT_EQ(r.status, DistanceResult::Status::kUnreachable);
      EXPECT_FALSE(*nonempty);
    } else {
      ASSERT_EQ(r.status, DistanceResult::Status::kExact);
      EXPECT_TRUE(*nonempty);
      // A path on an even number of vertices keeps every other edge.
      EXPECT_EQ(r.distance, n / 2 - 1);
      EXPECT_EQ(r.nearest->num_arcs(), n);
    }
  }
}

TEST(Exact, PropertyNonEmptyMatchesBruteForce) {
  PropertySpec cfg = PropertySpec::Configs(SingletonAndPathFamily(), Model::kUndirected);
  for (int n = 1; n <= 4; ++n) {
    bool any = false;
    for (const Digraph& g : AllGraphs(n, 2, Model::kUndirected)) any |= IsMember(g, cfg);
    auto got = PropertyNonEmpty(cfg, n, 2, Model::kUndirected);
    ASSERT_TRUE(got);
    EXPECT_EQ(*got, any);
  }
  EXPECT_EQ(MaxDegreeTwoGraphs(4).size(), 7u);
  EXPECT_EQ(MaxDegreeTwoGraphs(5).size(), 11u);
}

// Appearances as distinct (image set, mapped arc set) pairs, by brute force.
long long BruteAppearances(const Digraph& g, const PatternGraph& h, std::set<Vertex>& covered) {
  std::set<std::pair<std::vector<Vertex>, std::vector<Edge>>> seen;
  ForEachInjection(h.size(), g.n(), [&](const std::vector<Vertex>& phi) {
    std::vector<Edge> arcs;
    for (const Edge& e : h.graph().edges()) {
      if (!g.has_edge(phi[e.from], phi[e.to])) return;
      arcs.push_back({phi[e.from], phi[e.to]});
    }
    std::sort(arcs.begin(), arcs.end());
    std::vector<Vertex> image(phi);
    std::sort(image.begin(), image.end());
    covered.insert(image.begin(), image.end());
    seen.insert({image, arcs});
  });
  return static_cast<long long>(seen.size());
}

TEST(Exact, CountAppearances) {
  ForbiddenFamily c3 = Subgraph(DirectedCyclePattern(3));
  EXPECT_EQ(CountAppearances(DirectedPath(6, 1), c3).total(), 0);
  AppearanceCount one = CountAppearances(DirectedCycle(3, 1), c3);
  EXPECT_EQ(one.total(), 1);
  EXPECT_EQ(CountSubgraphMaps(DirectedCycle(3, 1), DirectedCyclePattern(3).graph()), 3);
  for (int k = 1; k <= 4; ++k) {
    AppearanceCount c = CountAppearances(DisjointCopies(DirectedCyclePattern(3), 3 * k, 2, Model::kF), c3);
    EXPECT_EQ(c.total(), k);
    EXPECT_EQ(static_cast<int>(c.covered.size()), 3 * k);
  }
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    Digraph g = RandomGraph(2 + rng.UniformInt(6), 2, Model::kF, 0.4, rng);
    ForbiddenFamily fam({DirectedPathPattern(3), DirectedCyclePattern(2)}, FamilyMode::kSubgraph);
    AppearanceCount c = CountAppearances(g, fam);
    std::set<Vertex> covered;
    ASSERT_EQ(c.per_pattern.size(), fam.patterns().size());
    long long total = 0;
    for (std::size_t i = 0; i < fam.patterns().size(); ++i) {
      const long long b = BruteAppearances(g, fam.patterns()[i], covered);
      EXPECT_EQ(c.per_pattern[i], b);
      total += b;
    }
    EXPECT_EQ(c.total(), total);
    EXPECT_EQ(c.covered, std::vector<Vertex>(covered.begin(), covered.end()));
  }
}

TEST(Exact, ConfigurationAppearanceCounts) {
  ConfigurationFamily fam{{Configuration(OutStarPattern(2), {D, F, F})}};
  Digraph g(5, 2, Model::kF, {{0, 1}, {0, 2}, {3, 4}});
  AppearanceCount c = CountAppearances(g, fam, Model::kF);
  EXPECT_EQ(c.total(), 1);
  EXPECT_EQ(c.covered, (std::vector<Vertex>{0, 1, 2}));
}

TEST(Exact, RemovalLemmaSmallSweep) {
  RemovalReport r = VerifyRemovalLemmaD2(300, 3, 8, 5);
  EXPECT_EQ(r.instances, 300);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.empty_property + r.members + r.near + r.far, r.instances);
  EXPECT_GT(r.members, 0);
  EXPECT_EQ(VerifyRemovalLemmaD2(300, 3, 8, 5, 3).Json(), r.Json());
}

}  // namespace
}  // namespace bdt
