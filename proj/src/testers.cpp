#include "bdt/testers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "bdt/errors.hpp"
#include "bdt/structure.hpp"

namespace bdt {

long long CeilCount(double x) {
  if (!(x >= 1.0)) return 1;
  // Values like 2 / (d * 0.1) may land a few ulps above an integer; snap
  // anything within 1e-9 relative of an integer before rounding up.
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * x) return static_cast<long long>(nearest);
  return static_cast<long long>(std::ceil(x));
}

namespace {

void CheckEpsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw UsageError("epsilon must lie in (0,1)");
  }
}

}  // namespace

long long MonotoneRepetitions(int t, int r, int d, double epsilon) {
  CheckEpsilon(epsilon);
  const double x =
      (static_cast<double>(t) * r * r * d / epsilon) * 2.0 * std::log(r);
  return CeilCount(x);
}

long long HereditaryEdgeTarget(int t, int r, int d, double epsilon) {
  CheckEpsilon(epsilon);
  return CeilCount(8.0 * t * d * std::log(r) / epsilon);
}

long long HereditarySamplerCalls(int d, long long ell, double epsilon) {
  CheckEpsilon(epsilon);
  return CeilCount(4.0 * d * static_cast<double>(ell) / epsilon);
}

long long SinkSamples(int d, double epsilon) {
  CheckEpsilon(epsilon);
  return CeilCount(200.0 / (static_cast<double>(d) * d * epsilon * epsilon));
}

int SinkRadius(int d, double epsilon) {
  CheckEpsilon(epsilon);
  return static_cast<int>(CeilCount(2.0 / (d * epsilon)));
}

double MonotoneQueryFormula(int t, int r, int d, double epsilon) {
  return static_cast<double>(t) * r * r * std::pow(d, r + 1) * std::log(r) /
         epsilon;
}

bool VerifyWitness(const Digraph& g, const Witness& w) {
  using K = Witness::Kind;
  switch (w.kind) {
    case K::kAppearance:
      return IsSubgraphEmbedding(g, w.pattern.graph(), w.map);
    case K::kInducedAppearance:
      return IsInducedEmbedding(g, w.pattern.graph(), w.map);
    case K::kOutDegree:
      return w.map.size() == 1 && w.map[0] >= 0 && w.map[0] < g.n() &&
             g.out_degree(w.map[0]) == w.value;
    case K::kDiscPair: {
      if (w.sets.size() != 2 || w.centers.size() != 2) return false;
      for (int i = 0; i < 2; ++i) {
        if (w.centers[i] < 0 || w.centers[i] >= g.n()) return false;
        if (ForwardReachable(g, w.centers[i]) != w.sets[i]) return false;
      }
      std::vector<Vertex> common;
      std::set_intersection(w.sets[0].begin(), w.sets[0].end(),
                            w.sets[1].begin(), w.sets[1].end(),
                            std::back_inserter(common));
      return common.empty();
    }
  }
  return false;
}

std::optional<Edge> SampleRandomEdge(Oracle& o, int d, Rng& rng) {
  if (o.n() == 0 || d <= 0) return std::nullopt;
  const Vertex v = rng.UniformInt(o.n());
  const int slot = rng.UniformInt(d);
  NeighbourAnswer a = o.VertexQuery(v);
  if (slot < static_cast<int>(a.out.size())) return Edge{v, a.out[slot]};
  return std::nullopt;
}

double SamplerSuccessProbability(const Digraph& g) {
  if (g.n() == 0 || g.d() == 0) return 0.0;
  return static_cast<double>(g.num_arcs()) /
         (static_cast<double>(g.n()) * g.d());
}

namespace {

void CheckFamilyForOracle(const Oracle& o, const ForbiddenFamily& fam) {
  if (o.model() == Model::kF && !fam.AllRooted()) {
    throw ConfigError("F-model tester needs rooted patterns");
  }
  if (fam.MaxOutDegree() > o.d()) {
    throw ConfigError("pattern exceeds the out-degree bound d");
  }
}

void FillCounters(const Oracle& o, const TesterParams& p, TrialReport& rep) {
  rep.vertex_queries = o.vertex_queries();
  rep.disc_queries = o.disc_queries();
  rep.charged_queries = o.charged_queries();
  rep.seed = p.seed;
  rep.transcript = o.transcript();
}

}  // namespace

TrialReport CanonicalTester(Oracle& o, int r, long long q,
                            const Decider& decide, const TesterParams& p) {
  Rng rng(p.seed);
  std::vector<Disc> discs;
  std::vector<Vertex> centers;
  discs.reserve(q);
  for (long long i = 0; i < q && o.n() > 0; ++i) {
    const Vertex v = rng.UniformInt(o.n());
    centers.push_back(v);
    discs.push_back(o.DiscQuery(v, r));
  }
  DiscoveredGraph view = UnionView(discs, o.model());
  TrialReport rep;
  rep.witness = decide(view, o.n(), centers);
  rep.verdict = rep.witness ? Verdict::kReject : Verdict::kAccept;
  FillCounters(o, p, rep);
  return rep;
}

Decider FamilyDecider(const ForbiddenFamily& fam) {
  return [fam](const DiscoveredGraph& view, int,
               const std::vector<Vertex>&) -> std::optional<Witness> {
    for (std::size_t i = 0; i < fam.patterns().size(); ++i) {
      const PatternGraph& h = fam.patterns()[i];
      if (auto phi = SubgraphAppearance(view.graph, h)) {
        Witness w;
        w.kind = Witness::Kind::kAppearance;
        w.pattern_index = static_cast<int>(i);
        w.pattern = h;
        w.map = view.ToOriginal(*phi);
        return w;
      }
    }
    return std::nullopt;
  };
}

Decider OutDegreeDecider(int k) {
  return [k](const DiscoveredGraph& view, int,
             const std::vector<Vertex>& centers) -> std::optional<Witness> {
    for (Vertex c : centers) {
      const int local = view.Local(c);
      if (local >= 0 && view.developed[local] &&
          view.graph.out_degree(local) == k) {
        Witness w;
        w.kind = Witness::Kind::kOutDegree;
        w.map = {c};
        w.value = k;
        return w;
      }
    }
    return std::nullopt;
  };
}

TrialReport MonotoneTester(Oracle& o, const ForbiddenFamily& fam,
                           const TesterParams& p) {
  if (fam.mode() != FamilyMode::kSubgraph) {
    throw UsageError("monotone tester needs a subgraph-mode family");
  }
  CheckFamilyForOracle(o, fam);
  const long long ell = MonotoneRepetitions(fam.t(), fam.r(), o.d(), p.epsilon);
  return CanonicalTester(o, fam.r(), ell, FamilyDecider(fam), p);
}

TrialReport HereditaryTester(Oracle& o, const ForbiddenFamily& fam,
                             const TesterParams& p) {
  if (fam.mode() != FamilyMode::kInduced) {
    throw UsageError("hereditary tester needs an induced-mode family");
  }
  CheckFamilyForOracle(o, fam);
  const int r = fam.r();
  const long long ell = HereditaryEdgeTarget(fam.t(), r, o.d(), p.epsilon);
  const long long calls = HereditarySamplerCalls(o.d(), ell, p.epsilon);
  Rng rng(p.seed);
  std::vector<Edge> sampled;
  for (long long i = 0; i < calls; ++i) {
    if (auto e = SampleRandomEdge(o, o.d(), rng)) sampled.push_back(*e);
  }
  TrialReport rep;
  if (static_cast<long long>(sampled.size()) >= ell) {
    std::vector<Disc> discs;
    for (long long i = 0; i < ell; ++i) {
      discs.push_back(o.DiscQuery(sampled[i].from, r));
      discs.push_back(o.DiscQuery(sampled[i].to, r));
    }
    DiscoveredGraph view = UnionView(discs, o.model());
    auto known = [&view](Vertex x, Vertex y) { return view.Known(x, y); };
    for (std::size_t i = 0; i < fam.patterns().size() && !rep.witness; ++i) {
      const PatternGraph& h = fam.patterns()[i];
      if (auto phi = FindEmbedding(InducedProblem(view.graph, h.graph(), known))) {
        Witness w;
        w.kind = Witness::Kind::kInducedAppearance;
        w.pattern_index = static_cast<int>(i);
        w.pattern = h;
        w.map = view.ToOriginal(*phi);
        rep.witness = std::move(w);
      }
    }
  }
  rep.verdict = rep.witness ? Verdict::kReject : Verdict::kAccept;
  FillCounters(o, p, rep);
  return rep;
}

TrialReport SinkTester(Oracle& o, const TesterParams& p) {
  if (o.model() != Model::kF) throw UsageError("sink tester runs in the F model");
  CheckEpsilon(p.epsilon);
  if (!(p.epsilon * o.d() < 1.0)) {
    throw UsageError("sink tester needs epsilon < 1/d");
  }
  const long long b = SinkSamples(o.d(), p.epsilon);
  const int radius = SinkRadius(o.d(), p.epsilon);
  Rng rng(p.seed);
  // S_i is the radius-R disc; expanding one more layer tells whether any arc
  // leaves it, which holds iff the radius-(R+1) disc has a frontier vertex.
  std::vector<Disc> closed;
  std::map<std::vector<Vertex>, std::size_t> distinct;
  for (long long i = 0; i < b && o.n() > 0; ++i) {
    const Vertex v = rng.UniformInt(o.n());
    Disc disc = o.DiscQuery(v, radius + 1);
    if (disc.Closed() && !distinct.count(disc.vertices)) {
      distinct.emplace(disc.vertices, closed.size());
      closed.push_back(std::move(disc));
    }
  }
  TrialReport rep;
  for (std::size_t i = 0; i < closed.size() && !rep.witness; ++i) {
    for (std::size_t j = i + 1; j < closed.size(); ++j) {
      const auto& a = closed[i].vertices;
      const auto& c = closed[j].vertices;
      std::vector<Vertex> common;
      std::set_intersection(a.begin(), a.end(), c.begin(), c.end(),
                            std::back_inserter(common));
      if (common.empty()) {
        Witness w;
        w.kind = Witness::Kind::kDiscPair;
        w.centers = {closed[i].center, closed[j].center};
        w.sets = {a, c};
        rep.witness = std::move(w);
        break;
      }
    }
  }
  rep.verdict = rep.witness ? Verdict::kReject : Verdict::kAccept;
  FillCounters(o, p, rep);
  return rep;
}

TrialReport ClosePropertyTester(Oracle& o, const ForbiddenFamily& fam,
                                const TesterParams& p) {
  TesterParams inner = p;
  inner.epsilon = p.epsilon / 2.0;
  return fam.mode() == FamilyMode::kSubgraph ? MonotoneTester(o, fam, inner)
                                             : HereditaryTester(o, fam, inner);
}

std::string VerdictName(Verdict v) {
  return v == Verdict::kReject ? "REJECT" : "ACCEPT";
}

std::string TrialReportJson(const TrialReport& r, long long trial) {
  nlohmann::ordered_json j;
  j["trial"] = trial;
  j["seed"] = r.seed;
  j["verdict"] = VerdictName(r.verdict);
  if (r.witness) {
    const Witness& w = *r.witness;
    nlohmann::ordered_json wj;
    switch (w.kind) {
      case Witness::Kind::kAppearance:
        wj["kind"] = "subgraph";
        break;
      case Witness::Kind::kInducedAppearance:
        wj["kind"] = "induced";
        break;
      case Witness::Kind::kDiscPair:
        wj["kind"] = "disc_pair";
        break;
      case Witness::Kind::kOutDegree:
        wj["kind"] = "out_degree";
        break;
    }
    if (w.pattern_index >= 0) wj["pattern"] = w.pattern_index;
    if (!w.map.empty()) wj["map"] = w.map;
    if (!w.centers.empty()) wj["centers"] = w.centers;
    if (!w.sets.empty()) wj["sets"] = w.sets;
    if (w.kind == Witness::Kind::kOutDegree) wj["value"] = w.value;
    j["witness"] = wj;
  } else {
    j["witness"] = nullptr;
  }
  j["vertex_queries"] = r.vertex_queries;
  j["disc_queries"] = r.disc_queries;
  j["charged_queries"] = r.charged_queries;
  return j.dump();
}

}  // namespace bdt
