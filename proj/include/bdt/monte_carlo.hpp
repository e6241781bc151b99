#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bdt/digraph.hpp"
#include "bdt/family.hpp"
#include "bdt/testers.hpp"

namespace bdt {

enum class TesterKind { kMonotone, kHereditary, kSink, kClose };
TesterKind ParseTesterKind(const std::string& name);
std::string TesterKindName(TesterKind kind);

// Builds an oracle of the given model over g and runs one tester.
TrialReport RunTester(TesterKind kind, const Digraph& g, Model model,
                      const ForbiddenFamily& fam, const TesterParams& p);

struct Summary {
  long long trials = 0;
  long long rejections = 0;
  long long unverified_rejections = 0;
  double reject_rate = 0.0;
  double mean_charged_queries = 0.0;
  long long max_charged_queries = 0;
};

struct MonteCarloResult {
  std::vector<TrialReport> reports;  // ordered by trial index
  std::vector<bool> witness_verified;
  Summary summary;
};

// One trial: the seed is DeriveSeed(base_seed, index).
using TrialFn = std::function<TrialReport(std::uint64_t seed)>;

// Runs trials on `jobs` threads. Every REJECT witness is re-verified against
// g. Output is independent of `jobs`.
MonteCarloResult RunTrials(const Digraph& g, const TrialFn& trial,
                           long long trials, std::uint64_t base_seed,
                           int jobs = 1);

// Generic parallel map over indices, results in index order.
void ParallelFor(long long count, int jobs,
                 const std::function<void(long long)>& body);

std::string SummaryJson(const Summary& s);

// One-sided binomial slack used by every "rate >= 1/2" assertion.
double HalfRateThreshold(long long trials);

}  // namespace bdt
