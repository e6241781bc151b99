#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bdt/configuration.hpp"
#include "bdt/digraph.hpp"
#include "bdt/family.hpp"
#include "bdt/rng.hpp"

namespace bdt {

struct PropertySpec {
  enum class Kind { kForbidden, kConfigs, kSink, kPredicate };
  Kind kind = Kind::kSink;
  Model model = Model::kF;
  ForbiddenFamily family;
  ConfigurationFamily configs;
  std::function<bool(const Digraph&)> predicate;

  static PropertySpec Forbidden(ForbiddenFamily fam, Model model);
  static PropertySpec Configs(ConfigurationFamily fam, Model model);
  static PropertySpec Sink();
  static PropertySpec Predicate(std::function<bool(const Digraph&)> fn,
                                Model model);
};

bool IsMember(const Digraph& g, const PropertySpec& p);

struct DistanceResult {
  enum class Status {
    kExact,         // distance is the exact edit distance
    kExceedsLimit,  // no member within `limit` edits: distance > limit
    kUnreachable,   // no n-vertex member exists
  };
  Status status = Status::kExact;
  int distance = 0;
  std::optional<Digraph> nearest;  // a closest member, when kExact
  long long nodes = 0;             // search nodes expanded
};

std::string DistanceText(const DistanceResult& r);

// Minimum number of edge insertions and deletions turning g into a member of
// p on the same vertex set within g's model and degree bound. Undirected
// edges count once. Searches edit sets by increasing size (limit < 0 means
// no limit), branching only on pairs that any member must differ on.
DistanceResult ExactDistance(const Digraph& g, const PropertySpec& p,
                             int limit = -1);

// Whether some n-vertex graph of the model and bound lies in p. Decided
// structurally where possible, by enumerating all undirected graphs of
// maximum degree <= 2 up to isomorphism, or (n <= 4) by brute force;
// otherwise nullopt.
std::optional<bool> PropertyNonEmpty(const PropertySpec& p, int n, int d,
                                     Model model);

// Undirected graphs with maximum degree <= 2 on n vertices, one per
// isomorphism class (disjoint unions of paths and cycles).
std::vector<Digraph> MaxDegreeTwoGraphs(int n);

struct AppearanceCount {
  std::vector<long long> per_pattern;  // unordered appearances
  std::vector<Vertex> covered;         // vertices in at least one appearance
  long long total() const;
};
// An appearance is (pattern, image set, matched arc set); automorphic maps
// collapse.
AppearanceCount CountAppearances(const Digraph& g, const ForbiddenFamily& fam);
AppearanceCount CountAppearances(const Digraph& g,
                                 const ConfigurationFamily& fam, Model model);

// Randomised sweep checking the d = 2 removal lemma: for sampled
// (configuration family, undirected graph) pairs with a non-empty P_n and
// distance > epsilon*d*n, the number of covered vertices must be at least
// epsilon^2 n / k.
struct RemovalInstance {
  ConfigurationFamily family;
  Digraph graph;
  double epsilon = 0;
  int covered = 0;
  DistanceResult distance;
};
struct RemovalReport {
  long long instances = 0;
  long long empty_property = 0;
  long long members = 0;
  long long near = 0;  // non-members within epsilon*d*n
  long long far = 0;
  long long violations = 0;
  std::vector<RemovalInstance> violating;
  double min_slack = 0;  // min over far instances of covered - eps^2 n / k
  std::string Json() const;
};
RemovalReport VerifyRemovalLemmaD2(long long trials, int k, int n_max,
                                   std::uint64_t seed, int jobs = 1);

// The two-member family from the removal-lemma discussion: an isolated
// developed vertex and a frontier-developed-frontier path. Its P_n consists
// of perfect matchings, so it is empty for odd n.
ConfigurationFamily SingletonAndPathFamily();

}  // namespace bdt
