#include "bdt/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

#include <json.hpp>

#include "bdt/errors.hpp"
#include "bdt/generators.hpp"
#include "bdt/matching.hpp"
#include "bdt/monte_carlo.hpp"
#include "bdt/structure.hpp"

namespace bdt {

PropertySpec PropertySpec::Forbidden(ForbiddenFamily fam, Model model) {
  PropertySpec p;
  p.kind = Kind::kForbidden;
  p.family = std::move(fam);
  p.model = model;
  return p;
}

PropertySpec PropertySpec::Configs(ConfigurationFamily fam, Model model) {
  PropertySpec p;
  p.kind = Kind::kConfigs;
  p.configs = std::move(fam);
  p.model = model;
  return p;
}

PropertySpec PropertySpec::Sink() {
  PropertySpec p;
  p.kind = Kind::kSink;
  return p;
}

PropertySpec PropertySpec::Predicate(std::function<bool(const Digraph&)> fn,
                                     Model model) {
  PropertySpec p;
  p.kind = Kind::kPredicate;
  p.predicate = std::move(fn);
  p.model = model;
  return p;
}

bool IsMember(const Digraph& g, const PropertySpec& p) {
  switch (p.kind) {
    case PropertySpec::Kind::kForbidden:
      return !p.family.Contains(g);
    case PropertySpec::Kind::kConfigs:
      return InPC(g, p.configs, p.model);
    case PropertySpec::Kind::kSink:
      return HasReachableByAll(g);
    case PropertySpec::Kind::kPredicate:
      return p.predicate(g);
  }
  return false;
}

std::string DistanceText(const DistanceResult& r) {
  switch (r.status) {
    case DistanceResult::Status::kExact:
      return std::to_string(r.distance);
    case DistanceResult::Status::kExceedsLimit:
      return ">" + std::to_string(r.distance);
    case DistanceResult::Status::kUnreachable:
      return "unreachable";
  }
  return "?";
}

namespace {

using Rows = std::vector<std::uint32_t>;

struct Pair {
  Vertex u, v;  // ordered arc; for undirected, the edge {u, v} with u < v
};

Rows RowsOf(const Digraph& g) {
  Rows rows(g.n(), 0);
  for (const Edge& e : g.edges()) rows[e.from] |= 1u << e.to;
  return rows;
}

Digraph FromRows(const Rows& rows) {
  std::vector<Edge> e;
  for (int u = 0; u < static_cast<int>(rows.size()); ++u) {
    for (std::uint32_t m = rows[u]; m; m &= m - 1) {
      e.push_back({u, std::countr_zero(m)});
    }
  }
  return Digraph::Unbounded(static_cast<int>(rows.size()), std::move(e));
}

struct Analysis {
  bool member = false;
  int lower_bound = 0;
  std::vector<Pair> pairs;
};

class DistanceSearch {
 public:
  DistanceSearch(const Digraph& g, const PropertySpec& p)
      : n_(g.n()),
        d_(g.d()),
        model_(g.model()),
        spec_(p),
        orig_(RowsOf(g)) {}

  int n() const { return n_; }
  long long nodes() const { return nodes_; }
  const Rows& nearest() const { return nearest_; }

  int TotalPairs() const {
    return model_ == Model::kUndirected ? n_ * (n_ - 1) / 2 : n_ * (n_ - 1);
  }

  Analysis Analyse(const Rows& rows) const {
    Analysis a;
    std::vector<int> out(n_), in(n_, 0);
    for (int u = 0; u < n_; ++u) {
      out[u] = std::popcount(rows[u]);
      for (std::uint32_t m = rows[u]; m; m &= m - 1) ++in[std::countr_zero(m)];
    }
    int out_excess = 0, in_excess = 0;
    int bad_out = -1, bad_in = -1;
    for (int v = 0; v < n_; ++v) {
      if (out[v] > d_) {
        out_excess += out[v] - d_;
        if (bad_out < 0) bad_out = v;
      }
      if (model_ == Model::kFB && in[v] > d_) {
        in_excess += in[v] - d_;
        if (bad_in < 0) bad_in = v;
      }
    }
    if (bad_out >= 0 || bad_in >= 0) {
      if (model_ == Model::kUndirected) {
        a.lower_bound = (out_excess + 1) / 2;
      } else {
        a.lower_bound = std::max(out_excess, in_excess);
      }
      if (bad_out >= 0) {
        for (std::uint32_t m = rows[bad_out]; m; m &= m - 1) {
          a.pairs.push_back(Norm(bad_out, std::countr_zero(m)));
        }
      } else {
        for (int u = 0; u < n_; ++u) {
          if (rows[u] >> bad_in & 1u) a.pairs.push_back({u, bad_in});
        }
      }
      return a;
    }
    const Digraph g = FromRows(rows);
    switch (spec_.kind) {
      case PropertySpec::Kind::kForbidden:
        AnalyseForbidden(g, a);
        break;
      case PropertySpec::Kind::kConfigs:
        AnalyseConfigs(g, a);
        break;
      case PropertySpec::Kind::kSink:
        AnalyseSink(g, a);
        break;
      case PropertySpec::Kind::kPredicate:
        a.member = spec_.predicate(g);
        if (!a.member) {
          a.lower_bound = 1;
          AllPairs(a.pairs);
        }
        break;
    }
    return a;
  }

  bool Dfs(Rows& rows, int budget) {
    ++nodes_;
    Analysis a = Analyse(rows);
    if (a.member) {
      nearest_ = rows;
      return true;
    }
    if (a.lower_bound > budget || budget == 0) return false;
    std::string key(reinterpret_cast<const char*>(rows.data()),
                    rows.size() * sizeof(std::uint32_t));
    auto it = failed_.find(key);
    if (it != failed_.end() && it->second >= budget) return false;
    for (const Pair& p : a.pairs) {
      if (Frozen(rows, p)) continue;
      Toggle(rows, p);
      const bool found = Dfs(rows, budget - 1);
      Toggle(rows, p);
      if (found) return true;
    }
    failed_[key] = std::max(it == failed_.end() ? -1 : it->second, budget);
    return false;
  }

  Rows start() const { return orig_; }
  int StartLowerBound() const {
    Analysis a = Analyse(orig_);
    return a.member ? 0 : std::max(1, a.lower_bound);
  }

 private:
  Pair Norm(Vertex u, Vertex v) const {
    if (model_ == Model::kUndirected && u > v) std::swap(u, v);
    return {u, v};
  }

  void AllPairs(std::vector<Pair>& out) const {
    for (int u = 0; u < n_; ++u) {
      for (int v = 0; v < n_; ++v) {
        if (u == v) continue;
        if (model_ == Model::kUndirected && u > v) continue;
        out.push_back({u, v});
      }
    }
  }

  bool Frozen(const Rows& rows, const Pair& p) const {
    return ((rows[p.u] ^ orig_[p.u]) >> p.v & 1u) != 0;
  }

  void Toggle(Rows& rows, const Pair& p) const {
    rows[p.u] ^= 1u << p.v;
    if (model_ == Model::kUndirected) rows[p.v] ^= 1u << p.u;
  }

  void AddUnique(std::vector<Pair>& pairs, Pair p) const {
    p = Norm(p.u, p.v);
    for (const Pair& q : pairs) {
      if (q.u == p.u && q.v == p.v) return;
    }
    pairs.push_back(p);
  }

  void AnalyseForbidden(const Digraph& g, Analysis& a) const {
    const auto& fam = spec_.family;
    const bool induced = fam.mode() == FamilyMode::kInduced;
    // Greedy packing of appearances with pairwise disjoint pair sets gives
    // a lower bound; the first appearance found supplies the branching set.
    std::vector<std::vector<Pair>> packed;
    std::vector<std::uint32_t> used(n_, 0);
    long long budget = 2000;
    for (const auto& h : fam.patterns()) {
      MatchProblem pr = induced ? InducedProblem(g, h.graph())
                                : SubgraphProblem(g, h.graph());
      ForEachEmbedding(pr, [&](const Embedding& phi) {
        std::vector<Pair> pairs;
        if (induced) {
          for (std::size_t i = 0; i < phi.size(); ++i) {
            for (std::size_t j = 0; j < phi.size(); ++j) {
              if (i != j) AddUnique(pairs, {phi[i], phi[j]});
            }
          }
        } else {
          for (const Edge& e : h.graph().edges()) {
            AddUnique(pairs, {phi[e.from], phi[e.to]});
          }
        }
        bool disjoint = true;
        for (const Pair& p : pairs) {
          if (used[p.u] >> p.v & 1u) disjoint = false;
        }
        if (disjoint) {
          for (const Pair& p : pairs) used[p.u] |= 1u << p.v;
          packed.push_back(std::move(pairs));
        }
        return --budget > 0;
      });
    }
    if (packed.empty()) {
      a.member = true;
      return;
    }
    a.lower_bound = static_cast<int>(packed.size());
    a.pairs = packed.front();
  }

  void AnalyseConfigs(const Digraph& g, Analysis& a) const {
    const Model m = spec_.model;
    for (const auto& c : spec_.configs.configs) {
      auto phi = CAppearance(g, c, m);
      if (!phi) continue;
      a.lower_bound = 1;
      for (Vertex v = 0; v < c.size(); ++v) {
        if (!c.developed(v)) continue;
        const Vertex x = (*phi)[v];
        for (Vertex y = 0; y < n_; ++y) {
          if (y == x) continue;
          AddUnique(a.pairs, {x, y});
          if (m != Model::kF) AddUnique(a.pairs, {y, x});
        }
      }
      return;
    }
    a.member = true;
  }

  void AnalyseSink(const Digraph& g, Analysis& a) const {
    auto sinks = SinkComponents(g);
    if (n_ == 0 || sinks.size() <= 1) {
      a.member = true;
      return;
    }
    a.lower_bound = static_cast<int>(sinks.size()) - 1;
    std::stable_sort(sinks.begin(), sinks.end(),
                     [](const auto& x, const auto& y) {
                       return x.size() < y.size();
                     });
    for (int s = 0; s < 2; ++s) {
      std::vector<bool> inside(n_, false);
      for (Vertex v : sinks[s]) inside[v] = true;
      for (Vertex x : sinks[s]) {
        for (Vertex y = 0; y < n_; ++y) {
          if (!inside[y]) AddUnique(a.pairs, {x, y});
        }
      }
    }
  }

  int n_;
  int d_;
  Model model_;
  const PropertySpec& spec_;
  Rows orig_;
  Rows nearest_;
  long long nodes_ = 0;
  std::unordered_map<std::string, int> failed_;
};

}  // namespace

DistanceResult ExactDistance(const Digraph& g, const PropertySpec& p,
                             int limit) {
  if (g.n() > 32) throw UsageError("exact distance supports n <= 32");
  DistanceResult res;
  DistanceSearch search(g, p);
  const int total = search.TotalPairs();
  if (limit < 0 || limit > total) limit = total;
  const int lb = search.StartLowerBound();
  if (lb == 0) {
    res.nearest = g;
    return res;
  }
  auto nonempty = PropertyNonEmpty(p, g.n(), g.d(), g.model());
  if (nonempty && !*nonempty) {
    res.status = DistanceResult::Status::kUnreachable;
    return res;
  }
  for (int k = lb; k <= limit; ++k) {
    Rows rows = search.start();
    if (search.Dfs(rows, k)) {
      res.distance = k;
      res.nearest = FromRows(search.nearest()).WithModel(g.d(), g.model());
      res.nodes = search.nodes();
      return res;
    }
  }
  res.nodes = search.nodes();
  if (limit == total) {
    res.status = DistanceResult::Status::kUnreachable;
  } else {
    res.status = DistanceResult::Status::kExceedsLimit;
    res.distance = limit;
  }
  return res;
}

std::vector<Digraph> MaxDegreeTwoGraphs(int n) {
  // A part is (size, is_cycle); parts are listed in non-increasing order.
  std::vector<Digraph> out;
  std::vector<std::pair<int, int>> parts;
  std::function<void(int, std::pair<int, int>)> rec =
      [&](int left, std::pair<int, int> cap) {
        if (left == 0) {
          std::vector<std::pair<Vertex, Vertex>> e;
          int base = 0;
          for (auto [size, cycle] : parts) {
            for (int i = 0; i + 1 < size; ++i) e.push_back({base + i, base + i + 1});
            if (cycle) e.push_back({base + size - 1, base});
            base += size;
          }
          out.push_back(Digraph::FromUndirected(n, 2, e));
          return;
        }
        for (int size = std::min(left, cap.first); size >= 1; --size) {
          for (int cycle = 1; cycle >= 0; --cycle) {
            if (cycle && size < 3) continue;
            std::pair<int, int> part{size, cycle};
            if (part > cap) continue;
            parts.push_back(part);
            rec(left - size, part);
            parts.pop_back();
          }
        }
      };
  rec(n, {n, 1});
  return out;
}

std::optional<bool> PropertyNonEmpty(const PropertySpec& p, int n, int d,
                                     Model model) {
  switch (p.kind) {
    case PropertySpec::Kind::kForbidden:
      return true;  // the edgeless graph
    case PropertySpec::Kind::kSink:
      if (n <= 1) return true;
      if (model == Model::kUndirected) return d >= 2 || (d == 1 && n == 2);
      return d >= 1;
    default:
      break;
  }
  if (model == Model::kUndirected && d <= 2) {
    for (const Digraph& g : MaxDegreeTwoGraphs(n)) {
      if (g.max_out_degree() > d) continue;
      if (IsMember(g.WithModel(d, model), p)) return true;
    }
    return false;
  }
  if (n <= 4) {
    std::vector<Edge> slots;
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        if (u == v || (model == Model::kUndirected && u > v)) continue;
        slots.push_back({u, v});
      }
    }
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
      std::vector<Edge> e;
      for (std::size_t i = 0; i < slots.size(); ++i) {
        if (mask >> i & 1u) {
          e.push_back(slots[i]);
          if (model == Model::kUndirected) e.push_back({slots[i].to, slots[i].from});
        }
      }
      Digraph g = Digraph::Unbounded(n, e);
      if (g.max_out_degree() > d) continue;
      if (model != Model::kF && g.max_in_degree() > d) continue;
      if (IsMember(g.WithModel(d, model), p)) return true;
    }
    return false;
  }
  return std::nullopt;
}

long long AppearanceCount::total() const {
  long long t = 0;
  for (long long c : per_pattern) t += c;
  return t;
}

namespace {

using AppearanceKey = std::pair<std::vector<Vertex>, std::vector<Edge>>;

void Collect(const MatchProblem& pr, const Digraph& h,
             std::set<AppearanceKey>& keys, std::vector<bool>& covered) {
  ForEachEmbedding(pr, [&](const Embedding& phi) {
    std::vector<Vertex> image(phi);
    std::sort(image.begin(), image.end());
    std::vector<Edge> arcs;
    for (const Edge& e : h.edges()) arcs.push_back({phi[e.from], phi[e.to]});
    std::sort(arcs.begin(), arcs.end());
    keys.insert({std::move(image), std::move(arcs)});
    for (Vertex x : phi) covered[x] = true;
    return true;
  });
}

AppearanceCount Finish(const std::vector<std::set<AppearanceKey>>& keys,
                       const std::vector<bool>& covered) {
  AppearanceCount out;
  for (const auto& k : keys) out.per_pattern.push_back(static_cast<long long>(k.size()));
  for (Vertex v = 0; v < static_cast<int>(covered.size()); ++v) {
    if (covered[v]) out.covered.push_back(v);
  }
  return out;
}

}  // namespace

AppearanceCount CountAppearances(const Digraph& g, const ForbiddenFamily& fam) {
  std::vector<std::set<AppearanceKey>> keys(fam.patterns().size());
  std::vector<bool> covered(g.n(), false);
  for (std::size_t i = 0; i < fam.patterns().size(); ++i) {
    const Digraph& h = fam.patterns()[i].graph();
    MatchProblem pr = fam.mode() == FamilyMode::kInduced
                          ? InducedProblem(g, h)
                          : SubgraphProblem(g, h);
    Collect(pr, h, keys[i], covered);
  }
  return Finish(keys, covered);
}

AppearanceCount CountAppearances(const Digraph& g,
                                 const ConfigurationFamily& fam, Model model) {
  std::vector<std::set<AppearanceKey>> keys(fam.configs.size());
  std::vector<bool> covered(g.n(), false);
  for (std::size_t i = 0; i < fam.configs.size(); ++i) {
    const Configuration& c = fam.configs[i];
    Collect(CAppearanceProblem(g, c, model), c.graph(), keys[i], covered);
  }
  return Finish(keys, covered);
}

ConfigurationFamily SingletonAndPathFamily() {
  ConfigurationFamily fam;
  fam.configs.emplace_back(PatternGraph(1, {}),
                           std::vector<Label>{Label::kDeveloped});
  fam.configs.emplace_back(
      PatternGraph(3, {{0, 1}, {1, 0}, {1, 2}, {2, 1}}),
      std::vector<Label>{Label::kFrontier, Label::kDeveloped, Label::kFrontier});
  return fam;
}

namespace {

// A random undirected configuration: a path or cycle, sometimes with a
// second path component, with random labels.
Configuration RandomUndirectedConfiguration(Rng& rng) {
  std::vector<Edge> e;
  int n = 0;
  const int components = rng.Bernoulli(0.2) ? 2 : 1;
  for (int c = 0; c < components; ++c) {
    const bool cycle = c == 0 && rng.Bernoulli(0.25);
    const int size = cycle ? 3 + rng.UniformInt(2) : 1 + rng.UniformInt(components == 1 ? 4 : 2);
    for (int i = 0; i + 1 < size; ++i) {
      e.push_back({n + i, n + i + 1});
      e.push_back({n + i + 1, n + i});
    }
    if (cycle) {
      e.push_back({n + size - 1, n});
      e.push_back({n, n + size - 1});
    }
    n += size;
  }
  std::vector<Label> labels(n);
  for (auto& l : labels) l = rng.Bernoulli(0.6) ? Label::kDeveloped : Label::kFrontier;
  return Configuration(PatternGraph(n, e), labels);
}

}  // namespace

std::string RemovalReport::Json() const {
  nlohmann::ordered_json j;
  j["instances"] = instances;
  j["empty_property"] = empty_property;
  j["members"] = members;
  j["near"] = near;
  j["far"] = far;
  j["violations"] = violations;
  j["min_slack"] = min_slack;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& v : violating) {
    nlohmann::ordered_json x;
    x["family"] = SerializeConfigurationFamily(v.family);
    x["graph"] = SerializeGraph(v.graph);
    x["epsilon"] = v.epsilon;
    x["covered"] = v.covered;
    x["distance"] = DistanceText(v.distance);
    list.push_back(x);
  }
  j["violating"] = list;
  return j.dump();
}

RemovalReport VerifyRemovalLemmaD2(long long trials, int k, int n_max,
                                   std::uint64_t seed, int jobs) {
  if (k < 1 || n_max < 1 || n_max > 16) {
    throw UsageError("removal check needs k >= 1 and 1 <= n_max <= 16");
  }
  std::vector<std::vector<Digraph>> hosts(n_max + 1);
  for (int n = 1; n <= n_max; ++n) hosts[n] = MaxDegreeTwoGraphs(n);

  enum Outcome { kEmpty, kMember, kNear, kFar };
  std::vector<Outcome> outcome(trials);
  std::vector<double> slack(trials, 0);
  std::vector<std::optional<RemovalInstance>> bad(trials);
  ParallelFor(trials, jobs, [&](long long t) {
    Rng rng(DeriveSeed(seed, t));
    const int n = 1 + rng.UniformInt(n_max);
    const int members = 1 + rng.UniformInt(k);
    ConfigurationFamily fam;
    for (int i = 0; i < members; ++i) {
      fam.configs.push_back(RandomUndirectedConfiguration(rng));
    }
    const double eps = (0.05 + 0.9 * rng.Real()) / (4.0 * members);
    const auto& pool = hosts[n];
    Digraph g = RandomRelabel(pool[rng.Uniform(pool.size())], rng);
    const PropertySpec p = PropertySpec::Configs(fam, Model::kUndirected);
    if (IsMember(g, p)) {
      outcome[t] = kMember;
      return;
    }
    if (!*PropertyNonEmpty(p, n, 2, Model::kUndirected)) {
      outcome[t] = kEmpty;
      return;
    }
    const double threshold = eps * 2 * n;
    const int limit = static_cast<int>(std::floor(threshold));
    DistanceResult dist = ExactDistance(g, p, limit);
    if (dist.status == DistanceResult::Status::kExact) {
      outcome[t] = kNear;
      return;
    }
    outcome[t] = kFar;
    const int covered =
        static_cast<int>(CountAppearances(g, fam, Model::kUndirected).covered.size());
    const double need = eps * eps * n / members;
    slack[t] = covered - need;
    if (covered < need) {
      bad[t] = RemovalInstance{fam, g, eps, covered, dist};
    }
  });
  RemovalReport rep;
  rep.instances = trials;
  bool first_far = true;
  for (long long t = 0; t < trials; ++t) {
    switch (outcome[t]) {
      case kEmpty:
        ++rep.empty_property;
        break;
      case kMember:
        ++rep.members;
        break;
      case kNear:
        ++rep.near;
        break;
      case kFar:
        ++rep.far;
        if (first_far || slack[t] < rep.min_slack) rep.min_slack = slack[t];
        first_far = false;
        break;
    }
    if (bad[t]) {
      ++rep.violations;
      rep.violating.push_back(*bad[t]);
    }
  }
  return rep;
}

}  // namespace bdt
