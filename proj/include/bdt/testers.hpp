#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bdt/digraph.hpp"
#include "bdt/family.hpp"
#include "bdt/matching.hpp"
#include "bdt/oracle.hpp"
#include "bdt/rng.hpp"

namespace bdt {

enum class Verdict { kAccept, kReject };

// Evidence attached to a rejection, in original vertex ids. Every kind can be
// re-checked against the full graph with VerifyWitness.
struct Witness {
  enum class Kind {
    kAppearance,         // pattern is a subgraph on map
    kInducedAppearance,  // pattern is induced on map
    kDiscPair,           // two disjoint forward-closed vertex sets
    kOutDegree,          // map[0] has out-degree `value`
  };
  Kind kind = Kind::kAppearance;
  int pattern_index = -1;
  PatternGraph pattern;
  Embedding map;
  std::vector<Vertex> centers;
  std::vector<std::vector<Vertex>> sets;
  int value = 0;
};

bool VerifyWitness(const Digraph& g, const Witness& w);

struct TrialReport {
  Verdict verdict = Verdict::kAccept;
  std::optional<Witness> witness;
  long long vertex_queries = 0;
  long long disc_queries = 0;
  long long charged_queries = 0;
  std::uint64_t seed = 0;
  std::vector<TranscriptEntry> transcript;
};

struct TesterParams {
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  bool record_transcript = false;
};

// ceil(max(1, x)), tolerant of floating error just above an integer.
long long CeilCount(double x);

// Repetition counts, exactly as used by the testers.
long long MonotoneRepetitions(int t, int r, int d, double epsilon);
long long HereditaryEdgeTarget(int t, int r, int d, double epsilon);
long long HereditarySamplerCalls(int d, long long ell, double epsilon);
long long SinkSamples(int d, double epsilon);
int SinkRadius(int d, double epsilon);
// t r^2 d^(r+1) ln r / epsilon.
double MonotoneQueryFormula(int t, int r, int d, double epsilon);

// Lemma-style edge sampler: a uniform vertex v and a uniform slot among d;
// returns the slot's out-edge if it exists. Conditioned on success the edge is
// uniform over E.
std::optional<Edge> SampleRandomEdge(Oracle& o, int d, Rng& rng);

// Exact success probability of SampleRandomEdge: |E| / (n d).
double SamplerSuccessProbability(const Digraph& g);

// Forbidden-subgraph tester: MonotoneRepetitions uniform r-discs, reject iff
// a pattern is a subgraph of their union. F oracle requires rooted patterns.
TrialReport MonotoneTester(Oracle& o, const ForbiddenFamily& fam,
                           const TesterParams& p);

// Forbidden-induced-subgraph tester driven by sampled edges.
TrialReport HereditaryTester(Oracle& o, const ForbiddenFamily& fam,
                             const TesterParams& p);

// Tester for having a vertex reachable from every vertex. Needs
// epsilon < 1/d.
TrialReport SinkTester(Oracle& o, const TesterParams& p);

// Canonical tester: q uniform vertices, an r-disc around each, verdict from
// `decide`. The vertex sampling is shared with MonotoneTester so both see the
// same centres under the same seed. `decide` returns a witness to reject.
using Decider = std::function<std::optional<Witness>(
    const DiscoveredGraph& view, int n, const std::vector<Vertex>& centers)>;
TrialReport CanonicalTester(Oracle& o, int r, long long q,
                            const Decider& decide, const TesterParams& p);

// Decider rejecting iff some pattern of fam appears (as subgraph) in the view.
Decider FamilyDecider(const ForbiddenFamily& fam);
// Decider rejecting iff some centre has out-degree exactly k (centres must be
// developed, so r >= 1).
Decider OutDegreeDecider(int k);

// Runs the monotone or hereditary tester (by family mode) at epsilon / 2.
TrialReport ClosePropertyTester(Oracle& o, const ForbiddenFamily& fam,
                                const TesterParams& p);

std::string VerdictName(Verdict v);
std::string TrialReportJson(const TrialReport& r, long long trial);

}  // namespace bdt
