#include "bdt/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "bdt/errors.hpp"
#include "bdt/oracle.hpp"
#include "bdt/rng.hpp"

namespace bdt {

TesterKind ParseTesterKind(const std::string& name) {
  if (name == "monotone") return TesterKind::kMonotone;
  if (name == "hereditary") return TesterKind::kHereditary;
  if (name == "sink") return TesterKind::kSink;
  if (name == "close") return TesterKind::kClose;
  throw UsageError("unknown tester '" + name + "'");
}

std::string TesterKindName(TesterKind kind) {
  switch (kind) {
    case TesterKind::kMonotone:
      return "monotone";
    case TesterKind::kHereditary:
      return "hereditary";
    case TesterKind::kSink:
      return "sink";
    case TesterKind::kClose:
      return "close";
  }
  return "?";
}

TrialReport RunTester(TesterKind kind, const Digraph& g, Model model,
                      const ForbiddenFamily& fam, const TesterParams& p) {
  Oracle o(g, model, p.record_transcript);
  switch (kind) {
    case TesterKind::kMonotone:
      return MonotoneTester(o, fam, p);
    case TesterKind::kHereditary:
      return HereditaryTester(o, fam, p);
    case TesterKind::kSink:
      return SinkTester(o, p);
    case TesterKind::kClose:
      return ClosePropertyTester(o, fam, p);
  }
  throw UsageError("unknown tester");
}

void ParallelFor(long long count, int jobs,
                 const std::function<void(long long)>& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (long long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) {
    pool.emplace_back([&] {
      while (true) {
        const long long i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

MonteCarloResult RunTrials(const Digraph& g, const TrialFn& trial,
                           long long trials, std::uint64_t base_seed,
                           int jobs) {
  MonteCarloResult out;
  out.reports.resize(trials);
  out.witness_verified.assign(trials, true);
  std::vector<char> verified(trials, 1);
  ParallelFor(trials, jobs, [&](long long i) {
    TrialReport rep = trial(DeriveSeed(base_seed, i));
    if (rep.verdict == Verdict::kReject) {
      verified[i] = rep.witness && VerifyWitness(g, *rep.witness);
    }
    out.reports[i] = std::move(rep);
  });
  Summary& s = out.summary;
  s.trials = trials;
  long double charged = 0;
  for (long long i = 0; i < trials; ++i) {
    const TrialReport& r = out.reports[i];
    out.witness_verified[i] = verified[i] != 0;
    if (r.verdict == Verdict::kReject) {
      ++s.rejections;
      if (!verified[i]) ++s.unverified_rejections;
    }
    charged += r.charged_queries;
    s.max_charged_queries = std::max(s.max_charged_queries, r.charged_queries);
  }
  if (trials > 0) {
    s.reject_rate = static_cast<double>(s.rejections) / trials;
    s.mean_charged_queries = static_cast<double>(charged / trials);
  }
  return out;
}

std::string SummaryJson(const Summary& s) {
  nlohmann::ordered_json j;
  j["trials"] = s.trials;
  j["rejections"] = s.rejections;
  j["reject_rate"] = s.reject_rate;
  j["mean_charged_queries"] = s.mean_charged_queries;
  j["max_charged_queries"] = s.max_charged_queries;
  j["unverified_rejections"] = s.unverified_rejections;
  return j.dump();
}

double HalfRateThreshold(long long trials) {
  return 0.5 - 3.0 * std::sqrt(0.25 / static_cast<double>(trials));
}

}  // namespace bdt
