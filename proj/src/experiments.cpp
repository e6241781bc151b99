#include "bdt/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "bdt/errors.hpp"
#include "bdt/matching.hpp"
#include "bdt/oracle.hpp"
#include "bdt/structure.hpp"

namespace bdt {

using Json = nlohmann::json;

namespace {

std::string LoadInlineOrFile(const Json& j, const std::string& inline_key,
                             const std::string& file_key,
                             const std::string& base_dir) {
  if (j.contains(inline_key)) return j.at(inline_key).get<std::string>();
  if (j.contains(file_key)) {
    std::filesystem::path p = j.at(file_key).get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    return ReadTextFile(p);
  }
  return {};
}

template <typename T>
std::vector<T> ScalarOrArray(const Json& j) {
  if (j.is_array()) return j.get<std::vector<T>>();
  return {j.get<T>()};
}

Certificate ParseCertificate(const std::string& s) {
  if (s == "exact_distance") return Certificate::kExactDistance;
  if (s == "disjoint_copies") return Certificate::kDisjointCopies;
  if (s == "sink_components") return Certificate::kSinkComponents;
  if (s.empty() || s == "none") return Certificate::kNone;
  throw ConfigError("unknown certificate '" + s + "'");
}

PropertySpec PlanProperty(const ExperimentPlan& plan) {
  if (plan.tester == TesterKind::kSink) return PropertySpec::Sink();
  return PropertySpec::Forbidden(plan.family, plan.model);
}

}  // namespace

ExperimentPlan ParsePlan(const std::string& json_text,
                         const std::string& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("plan is not valid JSON: ") + e.what());
  }
  ExperimentPlan plan;
  try {
    plan.name = j.value("name", std::string("plan"));
    plan.tester = ParseTesterKind(j.at("tester").get<std::string>());
    plan.model = ParseModel(j.value("model", std::string("F")));
    plan.d = j.at("d").get<int>();
    const std::string fam_text =
        LoadInlineOrFile(j, "family", "family_file", base_dir);
    if (!fam_text.empty()) plan.family = ParseFamily(fam_text);
    if (plan.tester != TesterKind::kSink && plan.family.empty()) {
      throw ConfigError("plan needs a family for this tester");
    }
    const Json& gen = j.at("generator");
    plan.generator.kind = gen.at("kind").get<std::string>();
    plan.generator.model = plan.model;
    plan.generator.girth_floor = gen.value("girth_floor", 0);
    plan.generator.attempts = gen.value("attempts", 0);
    const std::string pattern_text =
        LoadInlineOrFile(gen, "pattern", "pattern_file", base_dir);
    if (!pattern_text.empty()) {
      plan.generator.pattern = PatternGraph(ParseGraph(pattern_text));
    }
    plan.epsilons = ScalarOrArray<double>(j.at("epsilon"));
    plan.ns = ScalarOrArray<int>(j.at("n"));
    plan.trials = j.value("trials", 100LL);
    plan.base_seed = j.value("base_seed", std::uint64_t{1});
    const std::string expect = j.value("expect", std::string("member"));
    if (expect != "far" && expect != "member") {
      throw ConfigError("expect must be 'far' or 'member'");
    }
    plan.expect_far = expect == "far";
    plan.certificate = ParseCertificate(j.value("certificate", std::string()));
    plan.certificate_n = j.value("certificate_n", 0);
    plan.flat_queries = j.value("flat_queries", false);
    plan.jobs = j.value("jobs", 1);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("bad plan field: ") + e.what());
  } catch (const UsageError& e) {
    throw ConfigError(e.what());
  } catch (const ParseError& e) {
    throw ConfigError(e.what());
  }
  if (plan.expect_far) {
    if (plan.certificate == Certificate::kNone) {
      throw ConfigError("far label without a certificate");
    }
    if (plan.certificate == Certificate::kExactDistance &&
        (plan.certificate_n < 1 || plan.certificate_n > 12)) {
      throw ConfigError("exact_distance certificate needs 1 <= certificate_n <= 12");
    }
    if (plan.certificate == Certificate::kDisjointCopies &&
        plan.generator.pattern.size() == 0) {
      throw ConfigError("disjoint_copies certificate needs a generator pattern");
    }
    if (plan.certificate == Certificate::kSinkComponents &&
        plan.tester != TesterKind::kSink) {
      throw ConfigError("sink_components certificate only applies to sink");
    }
  }
  if (plan.trials < 100) {
    throw ConfigError("probability cells need at least 100 trials");
  }
  if (plan.epsilons.empty() || plan.ns.empty()) {
    throw ConfigError("empty epsilon or n grid");
  }
  return plan;
}

namespace {

Digraph PlanGraph(const ExperimentPlan& plan, int n, std::uint64_t seed) {
  GeneratorSpec spec = plan.generator;
  spec.n = n;
  spec.d = plan.d;
  return Generate(spec, seed);
}

// Returns (certified, human-readable value).
std::pair<bool, std::string> Certify(const ExperimentPlan& plan, int n,
                                     double eps, const Digraph& g) {
  const PropertySpec prop = PlanProperty(plan);
  const double d = plan.d;
  switch (plan.certificate) {
    case Certificate::kNone:
      return {true, ""};
    case Certificate::kExactDistance: {
      const int m = plan.certificate_n;
      Digraph small = PlanGraph(plan, m, plan.base_seed);
      const int limit = static_cast<int>(std::floor(eps * d * m));
      DistanceResult r = ExactDistance(small, prop, limit);
      const bool ok = r.status != DistanceResult::Status::kExact;
      return {ok, "dist(n=" + std::to_string(m) + ")=" + DistanceText(r) +
                      " vs " + std::to_string(eps * d * m)};
    }
    case Certificate::kDisjointCopies: {
      const PatternGraph& h = plan.generator.pattern;
      Digraph one = DisjointCopies(h, h.size(), plan.d, plan.model);
      DistanceResult r = ExactDistance(one, prop);
      if (r.status != DistanceResult::Status::kExact) {
        return {false, "per-copy distance " + DistanceText(r)};
      }
      const long long copies = n / h.size();
      const long long total = copies * r.distance;
      return {total > eps * d * n, std::to_string(copies) + "x" +
                                       std::to_string(r.distance) + "=" +
                                       std::to_string(total) + " vs " +
                                       std::to_string(eps * d * n)};
    }
    case Certificate::kSinkComponents: {
      const long long lower = static_cast<long long>(SinkComponents(g).size()) - 1;
      return {lower > eps * d * n, "sinks-1=" + std::to_string(lower) + " vs " +
                                       std::to_string(eps * d * n)};
    }
  }
  return {false, "?"};
}

}  // namespace

CurveResult RejectionCurve(const ExperimentPlan& plan) {
  CurveResult out;
  std::map<double, std::set<long long>> max_by_eps;
  for (int n : plan.ns) {
    const Digraph g = PlanGraph(plan, n, plan.base_seed);
    for (double eps : plan.epsilons) {
      CellResult cell;
      cell.n = n;
      cell.epsilon = eps;
      auto trial = [&](std::uint64_t seed) {
        TesterParams p;
        p.epsilon = eps;
        p.seed = seed;
        return RunTester(plan.tester, g, plan.model, plan.family, p);
      };
      const std::uint64_t cell_seed =
          DeriveSeed(plan.base_seed, static_cast<std::uint64_t>(out.cells.size()));
      MonteCarloResult mc = RunTrials(g, trial, plan.trials, cell_seed, plan.jobs);
      cell.summary = mc.summary;
      for (long long i = 0; i < plan.trials; ++i) {
        Json line;
        line["plan"] = plan.name;
        line["n"] = n;
        line["epsilon"] = eps;
        line["report"] = Json::parse(TrialReportJson(mc.reports[i], i));
        out.trial_log.push_back(line.dump());
      }
      if (plan.expect_far) {
        cell.threshold = HalfRateThreshold(plan.trials);
        auto [ok, value] = Certify(plan, n, eps, g);
        cell.certified = ok;
        cell.certificate_value = value;
        cell.passed = ok && cell.summary.reject_rate >= cell.threshold;
      } else {
        cell.passed = cell.summary.rejections == 0;
      }
      if (cell.summary.unverified_rejections > 0) cell.passed = false;
      max_by_eps[eps].insert(cell.summary.max_charged_queries);
      out.passed = out.passed && cell.passed;
      out.cells.push_back(std::move(cell));
    }
  }
  if (plan.flat_queries) {
    for (const auto& [eps, values] : max_by_eps) {
      if (values.size() != 1) out.flat_ok = false;
    }
    out.passed = out.passed && out.flat_ok;
  }
  return out;
}

std::string CurveResult::Csv() const {
  std::ostringstream s;
  s << "n,epsilon,trials,rejections,reject_rate,threshold,mean_charged_queries,"
       "max_charged_queries,unverified_rejections,certificate,passed\n";
  for (const auto& c : cells) {
    s << c.n << ',' << c.epsilon << ',' << c.summary.trials << ','
      << c.summary.rejections << ',' << c.summary.reject_rate << ','
      << c.threshold << ',' << c.summary.mean_charged_queries << ','
      << c.summary.max_charged_queries << ','
      << c.summary.unverified_rejections << ",\"" << c.certificate_value
      << "\"," << (c.passed ? "true" : "false") << '\n';
  }
  return s.str();
}

// ---------------------------------------------------------------------------

std::string MonotoneClosureReport::Json() const {
  nlohmann::ordered_json j;
  j["configs"] = configs;
  j["hosts"] = hosts;
  j["distinct_masks"] = distinct_masks;
  j["deletion_pairs"] = deletion_pairs;
  j["families"] = families;
  j["closed"] = closed;
  j["monotone"] = monotone;
  j["monotone_not_closed"] = monotone_not_closed;
  j["closed_not_monotone"] = closed_not_monotone;
  j["empty_property"] = empty_property;
  j["nonempty_at_max_host"] = nonempty_at_max_host;
  j["closure_mismatches"] = closure_mismatches;
  j["cross_checked"] = cross_checked;
  j["cross_mismatches"] = cross_mismatches;
  j["examples"] = examples;
  return j.dump();
}

namespace {

// Appearance sets of every labelled F(d) host on n vertices. A
// configuration appears on image S with developed set D exactly when the
// out-neighbours of D lie in S; the configuration is then S with the arcs
// leaving D. Contributions of D are tabulated per vertex, pair and triple.
class HostSweep {
 public:
  HostSweep(int n, int d, int max_pattern, const std::vector<int>& key_table)
      : n_(n), k_(max_pattern), table_(key_table) {
    for (Vertex v = 0; v < n; ++v) {
      std::vector<std::uint32_t> opts;
      for (std::uint32_t s = 0; s < (1u << n); ++s) {
        if (!(s >> v & 1) && std::popcount(s) <= d) opts.push_back(s);
      }
      options_.push_back(std::move(opts));
    }
    m_ = static_cast<int>(options_[0].size());
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
      if (std::popcount(s) <= k_) images_.push_back(s);
    }
    for (std::uint32_t s : images_) base_ |= Contribution(0, {}, {}, s);
    remove_.resize(n);
    for (Vertex v = 0; v < n; ++v) {
      remove_[v].assign(m_ * n, -1);
      for (int o = 0; o < m_; ++o) {
        for (Vertex x = 0; x < n; ++x) {
          const std::uint32_t s = options_[v][o];
          if (!(s >> x & 1)) continue;
          const auto it = std::find(options_[v].begin(), options_[v].end(), s & ~(1u << x));
          remove_[v][o * n + x] = static_cast<int>(it - options_[v].begin());
        }
      }
    }
    single_.assign(n, std::vector<std::uint64_t>(m_));
    for (Vertex v = 0; v < n; ++v) {
      for (int o = 0; o < m_; ++o) single_[v][o] = Tabulate({v}, {options_[v][o]});
    }
    pair_.assign(n * n, {});
    for (Vertex u = 0; u < n; ++u) {
      for (Vertex v = u + 1; v < n; ++v) {
        auto& t = pair_[u * n + v];
        t.resize(m_ * m_);
        for (int a = 0; a < m_; ++a) {
          for (int b = 0; b < m_; ++b) {
            t[a * m_ + b] = Tabulate({u, v}, {options_[u][a], options_[v][b]});
          }
        }
      }
    }
    if (k_ >= 3) {
      triple_.assign(n * n * n, {});
      for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
          for (Vertex w = v + 1; w < n; ++w) {
            auto& t = triple_[(u * n + v) * n + w];
            t.resize(m_ * m_ * m_);
            for (int a = 0; a < m_; ++a) {
              for (int b = 0; b < m_; ++b) {
                for (int c = 0; c < m_; ++c) {
                  t[(a * m_ + b) * m_ + c] = Tabulate(
                      {u, v, w}, {options_[u][a], options_[v][b], options_[w][c]});
                }
              }
            }
          }
        }
      }
    }
  }

  int options() const { return m_; }
  long long hosts() const {
    long long h = 1;
    for (int v = 0; v < n_; ++v) h *= m_;
    return h;
  }
  std::uint32_t out_set(Vertex v, int o) const { return options_[v][o]; }
  int removed(Vertex v, int o, Vertex x) const { return remove_[v][o * n_ + x]; }

  // masks[index] for index = sum o_v m^v.
  std::vector<std::uint64_t> Masks() const {
    std::vector<std::uint64_t> masks(hosts());
    std::vector<int> digit(n_, 0);
    Fill(n_ - 1, base_, 0, digit, masks);
    return masks;
  }

  Digraph Host(long long index, int d) const {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n_; ++v) {
      const std::uint32_t s = options_[v][index % m_];
      index /= m_;
      for (Vertex x = 0; x < n_; ++x) {
        if (s >> x & 1) edges.push_back({v, x});
      }
    }
    return Digraph(n_, d, Model::kF, edges);
  }

 private:
  void Fill(int v, std::uint64_t acc, long long index, std::vector<int>& digit,
            std::vector<std::uint64_t>& masks) const {
    long long pw = 1;
    for (int i = 0; i < v; ++i) pw *= m_;
    for (int o = 0; o < m_; ++o) {
      digit[v] = o;
      std::uint64_t m = acc | single_[v][o];
      for (Vertex u = v + 1; u < n_; ++u) {
        m |= pair_[v * n_ + u][o * m_ + digit[u]];
        if (k_ >= 3) {
          for (Vertex w = u + 1; w < n_; ++w) {
            m |= triple_[(v * n_ + u) * n_ + w][(o * m_ + digit[u]) * m_ + digit[w]];
          }
        }
      }
      const long long idx = index + o * pw;
      if (v == 0) {
        masks[idx] = m;
      } else {
        Fill(v - 1, m, idx, digit, masks);
      }
    }
  }

  std::uint64_t Tabulate(const std::vector<Vertex>& dev,
                         const std::vector<std::uint32_t>& outs) const {
    std::uint32_t need = 0;
    for (std::size_t i = 0; i < dev.size(); ++i) need |= (1u << dev[i]) | outs[i];
    if (std::popcount(need) > k_) return 0;
    std::uint64_t m = 0;
    for (std::uint32_t s : images_) {
      if ((s & need) == need) m |= Contribution(static_cast<int>(dev.size()), dev, outs, s);
    }
    return m;
  }

  std::uint64_t Contribution(int nd, const std::vector<Vertex>& dev,
                             const std::vector<std::uint32_t>& outs,
                             std::uint32_t s) const {
    const int k = std::popcount(s);
    std::vector<int> pos(n_, -1);
    int next = 0;
    for (Vertex x = 0; x < n_; ++x) {
      if (s >> x & 1) pos[x] = next++;
    }
    int labels = 0, edges = 0;
    for (int i = 0; i < nd; ++i) {
      const int a = pos[dev[i]];
      labels |= 1 << a;
      for (Vertex x = 0; x < n_; ++x) {
        if (!(outs[i] >> x & 1)) continue;
        const int b = pos[x];
        edges |= 1 << (a * (k - 1) + (b > a ? b - 1 : b));
      }
    }
    const int id = table_[(k * 8 + labels) * 64 + edges];
    if (id < 0) throw std::logic_error("appearance outside the configuration universe");
    return std::uint64_t{1} << id;
  }

  int n_, k_, m_ = 0;
  const std::vector<int>& table_;
  std::vector<std::vector<std::uint32_t>> options_;
  std::vector<std::uint32_t> images_;
  std::uint64_t base_ = 0;
  std::vector<std::vector<int>> remove_;
  std::vector<std::vector<std::uint64_t>> single_;
  std::vector<std::vector<std::uint64_t>> pair_;
  std::vector<std::vector<std::uint64_t>> triple_;
};

std::string FamilyText(const std::vector<Configuration>& universe, std::uint64_t fam) {
  std::string s;
  for (int i = 0; i < static_cast<int>(universe.size()); ++i) {
    if (!(fam >> i & 1)) continue;
    const Configuration& c = universe[i];
    if (!s.empty()) s += " | ";
    for (Vertex v = 0; v < c.size(); ++v) s += c.developed(v) ? 'D' : 'F';
    for (const Edge& e : c.graph().edges()) {
      s += " " + std::to_string(e.from) + ">" + std::to_string(e.to);
    }
  }
  return "{" + s + "}";
}

}  // namespace

MonotoneClosureReport CheckMonotoneClosure(int max_pattern, int max_host, int d,
                                           int max_family, long long cross_checks,
                                           std::uint64_t seed) {
  if (max_pattern < 1 || max_pattern > 3) throw UsageError("max_pattern must be 1..3");
  if (max_host < 1 || max_host > 6) throw UsageError("max_host must be 1..6");
  const std::vector<Configuration> universe = AllConfigurations(max_pattern, d);
  if (universe.size() > 64) throw UsageError("configuration universe exceeds 64");
  MonotoneClosureReport rep;
  rep.configs = static_cast<int>(universe.size());

  std::map<std::vector<std::uint64_t>, int> id_of;
  for (int i = 0; i < rep.configs; ++i) id_of[universe[i].Canonical()] = i;
  std::vector<int> table(4 * 8 * 64, -1);
  for (int k = 1; k <= max_pattern; ++k) {
    for (int labels = 0; labels < (1 << k); ++labels) {
      for (int edges = 0; edges < (1 << (k * (k - 1))); ++edges) {
        std::vector<Edge> arcs;
        std::vector<int> outdeg(k, 0);
        bool ok = true;
        for (int a = 0; a < k; ++a) {
          for (int b = 0; b < k; ++b) {
            if (a == b) continue;
            if (!(edges >> (a * (k - 1) + (b > a ? b - 1 : b)) & 1)) continue;
            if (!(labels >> a & 1) || ++outdeg[a] > d) ok = false;
            arcs.push_back({a, b});
          }
        }
        if (!ok) continue;
        std::vector<Label> lab(k);
        for (int v = 0; v < k; ++v) {
          lab[v] = (labels >> v & 1) ? Label::kDeveloped : Label::kFrontier;
        }
        table[(k * 8 + labels) * 64 + edges] =
            id_of.at(Configuration(PatternGraph(k, arcs), lab).Canonical());
      }
    }
  }

  std::unordered_map<std::uint64_t, std::uint32_t> mask_id;
  std::set<std::uint64_t> top_masks;  // masks of hosts on max_host vertices
  std::vector<std::uint64_t> masks_by_id;
  std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
  Rng rng(seed);
  for (int n = 1; n <= max_host; ++n) {
    HostSweep sweep(n, d, max_pattern, table);
    const std::vector<std::uint64_t> masks = sweep.Masks();
    const long long hosts = sweep.hosts();
    rep.hosts += hosts;
    std::vector<std::uint32_t> ids(hosts);
    for (long long i = 0; i < hosts; ++i) {
      auto [it, fresh] = mask_id.try_emplace(masks[i], masks_by_id.size());
      if (fresh) masks_by_id.push_back(masks[i]);
      ids[i] = it->second;
    }
    if (n == max_host) {
      std::vector<char> mark(masks_by_id.size(), 0);
      for (long long i = 0; i < hosts; ++i) mark[ids[i]] = 1;
      for (std::size_t id = 0; id < mark.size(); ++id) {
        if (mark[id]) top_masks.insert(masks_by_id[id]);
      }
    }
    const int m = sweep.options();
    std::vector<long long> pw(n, 1);
    for (int v = 1; v < n; ++v) pw[v] = pw[v - 1] * m;
    std::vector<std::uint64_t> seen;  // bitset over id pairs for this n
    const std::size_t k = masks_by_id.size();
    seen.assign((k * k + 63) / 64, 0);
    std::vector<int> digit(n, 0);
    for (long long i = 0; i < hosts; ++i) {
      for (Vertex v = 0; v < n; ++v) {
        const std::uint32_t s = sweep.out_set(v, digit[v]);
        for (Vertex x = 0; x < n; ++x) {
          if (!(s >> x & 1)) continue;
          const long long j = i + (sweep.removed(v, digit[v], x) - digit[v]) * pw[v];
          const std::size_t bit = static_cast<std::size_t>(ids[i]) * k + ids[j];
          if (!(seen[bit / 64] >> (bit % 64) & 1)) {
            seen[bit / 64] |= std::uint64_t{1} << (bit % 64);
            pairs.insert({ids[i], ids[j]});
          }
        }
      }
      for (Vertex v = 0; v < n && ++digit[v] == m; ++v) digit[v] = 0;
    }
    const long long checks = std::min<long long>(cross_checks, hosts);
    for (long long c = 0; c < checks; ++c) {
      long long index = 0;
      for (int v = n - 1; v >= 0; --v) index = index * m + rng.UniformInt(m);
      const Digraph g = sweep.Host(index, d);
      std::uint64_t direct = 0;
      for (int id = 0; id < rep.configs; ++id) {
        if (CAppearance(g, universe[id], Model::kF)) direct |= std::uint64_t{1} << id;
      }
      ++rep.cross_checked;
      if (direct != masks[index]) ++rep.cross_mismatches;
    }
  }
  rep.distinct_masks = static_cast<long long>(masks_by_id.size());
  rep.deletion_pairs = static_cast<long long>(pairs.size());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pair_masks;
  for (auto [a, b] : pairs) pair_masks.push_back({masks_by_id[a], masks_by_id[b]});

  std::vector<std::uint64_t> steps(rep.configs, 0);
  std::vector<bool> escapes(rep.configs, false);
  for (int i = 0; i < rep.configs; ++i) {
    for (const auto& next : UpwardSteps(universe[i], d)) {
      auto it = next.size() <= max_pattern ? id_of.find(next.Canonical()) : id_of.end();
      if (it == id_of.end()) {
        escapes[i] = true;
      } else {
        steps[i] |= std::uint64_t{1} << it->second;
      }
    }
  }

  std::vector<int> chosen;
  std::function<void(int)> rec = [&](int start) {
    if (!chosen.empty()) {
      std::uint64_t fam = 0;
      for (int i : chosen) fam |= std::uint64_t{1} << i;
      bool closed = true;
      for (int i : chosen) {
        if (escapes[i] || (steps[i] & ~fam)) closed = false;
      }
      ConfigurationFamily cf;
      for (int i : chosen) cf.configs.push_back(universe[i]);
      if (IsUpwardsClosed(cf, d) != closed) ++rep.closure_mismatches;
      bool monotone = true;
      for (auto [a, b] : pair_masks) {
        if (!(a & fam) && (b & fam)) {
          monotone = false;
          break;
        }
      }
      ++rep.families;
      rep.closed += closed;
      rep.monotone += monotone;
      if (monotone && !closed) {
        ++rep.monotone_not_closed;
        const bool empty = std::all_of(masks_by_id.begin(), masks_by_id.end(),
                                       [&](std::uint64_t a) { return (a & fam) != 0; });
        rep.empty_property += empty;
        const bool top = std::any_of(top_masks.begin(), top_masks.end(),
                                     [&](std::uint64_t a) { return (a & fam) == 0; });
        rep.nonempty_at_max_host += top;
        if (top && rep.examples.size() < 5) rep.examples.push_back(FamilyText(universe, fam));
      }
      if (closed && !monotone) {
        ++rep.closed_not_monotone;
        if (rep.examples.size() < 10) rep.examples.push_back(FamilyText(universe, fam));
      }
    }
    if (static_cast<int>(chosen.size()) == max_family) return;
    for (int i = start; i < rep.configs; ++i) {
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
  };
  rec(0);
  return rep;
}

// ---------------------------------------------------------------------------

std::string StrategyName(GameStrategy s) {
  switch (s) {
    case GameStrategy::kAugmented:
      return "augmented";
    case GameStrategy::kFixedIds:
      return "fixed_ids";
    case GameStrategy::kForwardBfs:
      return "forward_bfs";
    case GameStrategy::kCanonical:
      return "canonical";
  }
  return "?";
}

namespace {

bool PlayOnce(const Digraph& g, const PatternGraph& h, GameStrategy strategy,
              int q, Rng& rng) {
  Oracle o(g);
  const int n = g.n();
  const int radius = h.size();
  std::vector<Disc> discs;
  std::vector<bool> queried(n, false);
  std::set<Vertex> discovered;
  auto fresh = [&]() {
    Vertex v;
    do {
      v = rng.UniformInt(n);
    } while (queried[v]);
    return v;
  };
  for (int i = 0; i < q && i < n; ++i) {
    Vertex v = 0;
    switch (strategy) {
      case GameStrategy::kAugmented:
        v = fresh();
        break;
      case GameStrategy::kFixedIds:
        v = i;
        break;
      case GameStrategy::kForwardBfs: {
        v = -1;
        for (Vertex x : discovered) {
          if (!queried[x]) {
            v = x;
            break;
          }
        }
        if (v < 0) v = fresh();
        break;
      }
      case GameStrategy::kCanonical:
        v = rng.UniformInt(n);
        break;
    }
    queried[v] = true;
    discs.push_back(o.DiscQuery(v, radius));
    discovered.insert(discs.back().vertices.begin(),
                      discs.back().vertices.end());
  }
  DiscoveredGraph view = UnionView(discs, Model::kF);
  return SubgraphAppearance(view.graph, h).has_value();
}

}  // namespace

std::vector<GameCell> LowerBoundGame(const PatternGraph& h, int n,
                                     const std::vector<int>& qs,
                                     const std::vector<GameStrategy>& strategies,
                                     long long trials, std::uint64_t seed,
                                     int jobs) {
  if (IsRooted(h)) {
    throw UsageError("the lower-bound game needs a non-rooted pattern");
  }
  if (n < h.size()) throw UsageError("n smaller than the pattern");
  const int d = std::max(1, h.graph().max_out_degree());
  const Digraph base = DisjointCopies(h, n, d, Model::kF);
  const std::size_t cells = qs.size() * strategies.size();
  std::vector<std::vector<char>> hit(cells, std::vector<char>(trials, 0));
  ParallelFor(trials, jobs, [&](long long t) {
    Rng rng(DeriveSeed(seed, t));
    const Digraph g = RandomRelabel(base, rng);
    std::size_t c = 0;
    for (GameStrategy s : strategies) {
      for (int q : qs) {
        Rng play = rng.Split(c);
        hit[c][t] = PlayOnce(g, h, s, q, play);
        ++c;
      }
    }
  });
  std::vector<GameCell> out;
  std::size_t c = 0;
  for (GameStrategy s : strategies) {
    for (int q : qs) {
      GameCell cell;
      cell.strategy = s;
      cell.q = q;
      cell.trials = trials;
      cell.detections = std::count(hit[c].begin(), hit[c].end(), 1);
      cell.rate = trials ? static_cast<double>(cell.detections) / trials : 0;
      cell.bound = q * (q - 1) / 2.0 * h.size() / n;
      out.push_back(cell);
      ++c;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

MaxCutResult ExactMaxCut(const Digraph& g) {
  const int n = g.n();
  if (n > 26) throw UsageError("exact max-cut supports n <= 26");
  MaxCutResult best;
  best.side.assign(n, 0);
  if (n <= 1) return best;
  std::vector<int> side(n, 0);
  int cut = 0;
  best.cut = 0;
  // Vertex n-1 stays on side 0; Gray code over the others.
  const std::uint64_t steps = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < steps; ++i) {
    const int v = std::countr_zero(i);
    int delta = 0;
    for (Vertex u : g.out_neighbours(v)) delta += side[u] == side[v] ? 1 : -1;
    side[v] ^= 1;
    cut += delta;
    if (cut > best.cut) {
      best.cut = cut;
      best.side = side;
    }
  }
  return best;
}

MaxCutResult LocalSearchCut(const Digraph& g, Rng& rng, int restarts) {
  const int n = g.n();
  MaxCutResult best;
  best.side.assign(n, 0);
  for (int r = 0; r < restarts; ++r) {
    std::vector<int> side(n);
    for (auto& s : side) s = rng.UniformInt(2);
    bool improved = true;
    while (improved) {
      improved = false;
      for (Vertex v = 0; v < n; ++v) {
        int same = 0, other = 0;
        for (Vertex u : g.out_neighbours(v)) (side[u] == side[v] ? same : other)++;
        if (same > other) {
          side[v] ^= 1;
          improved = true;
        }
      }
    }
    int cut = 0;
    for (const Edge& e : g.edges()) {
      if (e.from < e.to && side[e.from] != side[e.to]) ++cut;
    }
    if (cut > best.cut || r == 0) {
      best.cut = cut;
      best.side = side;
    }
  }
  return best;
}

namespace {

// Shortest odd closed walk through BFS layers; returns its arcs (u<v pairs)
// or an empty list if the graph is bipartite.
std::vector<std::pair<Vertex, Vertex>> ShortestOddWalk(
    const std::vector<std::set<Vertex>>& adj) {
  const int n = static_cast<int>(adj.size());
  int best = 0;
  std::vector<std::pair<Vertex, Vertex>> best_walk;
  std::vector<int> dist(n), parent(n);
  for (Vertex s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    parent[s] = -1;
    std::queue<Vertex> q;
    q.push(s);
    while (!q.empty()) {
      Vertex v = q.front();
      q.pop();
      for (Vertex u : adj[v]) {
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          parent[u] = v;
          q.push(u);
        } else if (dist[u] == dist[v] && v < u) {
          const int len = 2 * dist[v] + 1;
          if (best == 0 || len < best) {
            best = len;
            best_walk.clear();
            best_walk.push_back({std::min(u, v), std::max(u, v)});
            for (Vertex x : {u, v}) {
              while (parent[x] >= 0) {
                best_walk.push_back({std::min(x, parent[x]), std::max(x, parent[x])});
                x = parent[x];
              }
            }
          }
        }
      }
    }
  }
  return best_walk;
}

std::vector<std::set<Vertex>> AdjacencySets(const Digraph& g) {
  std::vector<std::set<Vertex>> adj(g.n());
  for (const Edge& e : g.edges()) {
    adj[e.from].insert(e.to);
    adj[e.to].insert(e.from);
  }
  return adj;
}

// Visits each connected vertex set of size <= limit exactly once; the visitor
// returns false to stop. Sets grow from their smallest vertex.
void ForEachConnectedSet(const std::vector<std::set<Vertex>>& adj, int limit,
                         const std::function<bool(const std::vector<Vertex>&)>& visit) {
  const int n = static_cast<int>(adj.size());
  std::vector<Vertex> set;
  std::vector<int> mark(n, 0);  // 1 in set, 2 neighbour of set
  bool stop = false;
  std::function<void(std::vector<Vertex>, Vertex)> extend =
      [&](std::vector<Vertex> ext, Vertex root) {
        if (stop) return;
        if (!visit(set)) {
          stop = true;
          return;
        }
        if (static_cast<int>(set.size()) >= limit) return;
        while (!ext.empty() && !stop) {
          const Vertex w = ext.back();
          ext.pop_back();
          std::vector<Vertex> next = ext;
          std::vector<Vertex> newly;
          for (Vertex u : adj[w]) {
            if (u > root && mark[u] == 0) {
              next.push_back(u);
              newly.push_back(u);
            }
          }
          for (Vertex u : newly) mark[u] = 2;
          mark[w] = 1;
          set.push_back(w);
          extend(next, root);
          set.pop_back();
          mark[w] = 2;
          for (Vertex u : newly) mark[u] = 0;
        }
      };
  for (Vertex v = 0; v < n && !stop; ++v) {
    std::fill(mark.begin(), mark.end(), 0);
    mark[v] = 1;
    set = {v};
    std::vector<Vertex> ext;
    for (Vertex u : adj[v]) {
      if (u > v) {
        ext.push_back(u);
        mark[u] = 2;
      }
    }
    for (Vertex u : adj[v]) {
      if (u < v) mark[u] = 2;
    }
    extend(ext, v);
  }
}

bool InducedBipartite(const std::vector<std::set<Vertex>>& adj,
                      const std::vector<Vertex>& set) {
  std::map<Vertex, int> colour;
  for (Vertex s : set) colour[s] = -1;
  for (Vertex s : set) {
    if (colour[s] >= 0) continue;
    colour[s] = 0;
    std::vector<Vertex> stack{s};
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (Vertex u : adj[v]) {
        auto it = colour.find(u);
        if (it == colour.end()) continue;
        if (it->second < 0) {
          it->second = 1 - colour[v];
          stack.push_back(u);
        } else if (it->second == colour[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

int OddCyclePacking(const Digraph& g) {
  auto adj = AdjacencySets(g);
  int count = 0;
  while (true) {
    auto walk = ShortestOddWalk(adj);
    if (walk.empty()) return count;
    ++count;
    for (auto [u, v] : walk) {
      adj[u].erase(v);
      adj[v].erase(u);
    }
  }
}

int ShortestOddCycle(const Digraph& g) {
  return static_cast<int>(ShortestOddWalk(AdjacencySets(g)).size());
}

bool HasSmallNonBipartiteSubgraph(const Digraph& g, int limit) {
  const auto adj = AdjacencySets(g);
  bool found = false;
  ForEachConnectedSet(adj, limit, [&](const std::vector<Vertex>& s) {
    if (!InducedBipartite(adj, s)) found = true;
    return !found;
  });
  return found;
}

std::string TwoColourReport::Json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["d"] = d;
  j["girth_floor"] = girth_floor;
  j["girth"] = girth;
  j["shortest_odd_cycle"] = shortest_odd_cycle;
  j["small_non_bipartite"] = small_non_bipartite;
  j["edges"] = edges;
  j["exact"] = exact;
  j["distance_lower"] = distance_lower;
  j["distance_upper"] = distance_upper;
  j["epsilon"] = epsilon;
  j["far"] = far;
  return j.dump();
}

TwoColourReport TwoColourabilityDemo(int d, double epsilon, int girth_floor,
                                     int n, std::uint64_t seed) {
  if (d < 3) throw UsageError("the two-colourability demo needs d >= 3");
  Rng rng(seed);
  TwoColourReport rep;
  rep.graph = RandomRegular(n, d, girth_floor, rng);
  rep.n = n;
  rep.d = d;
  rep.girth_floor = girth_floor;
  rep.epsilon = epsilon;
  rep.girth = UndirectedGirth(rep.graph);
  rep.shortest_odd_cycle = ShortestOddCycle(rep.graph);
  rep.small_non_bipartite = HasSmallNonBipartiteSubgraph(rep.graph, girth_floor);
  rep.edges = rep.graph.num_arcs() / 2;
  if (n <= 24) {
    rep.exact = true;
    rep.distance_lower = rep.distance_upper = rep.edges - ExactMaxCut(rep.graph).cut;
  } else {
    rep.distance_lower = OddCyclePacking(rep.graph);
    rep.distance_upper = rep.edges - LocalSearchCut(rep.graph, rng).cut;
  }
  rep.far = rep.distance_lower > epsilon * d * n;
  return rep;
}

// ---------------------------------------------------------------------------

bool HasKStarMinor(const Digraph& g, int k) {
  if (k <= 0) return true;
  const auto adj = AdjacencySets(g);
  bool found = false;
  std::vector<int> seen(g.n(), 0);
  int stamp = 0;
  ForEachConnectedSet(adj, g.n(), [&](const std::vector<Vertex>& s) {
    ++stamp;
    for (Vertex v : s) seen[v] = -stamp;
    int outside = 0;
    for (Vertex v : s) {
      for (Vertex u : adj[v]) {
        if (seen[u] != -stamp && seen[u] != stamp) {
          seen[u] = stamp;
          ++outside;
        }
      }
    }
    if (outside >= k) found = true;
    return !found;
  });
  return found;
}

int KStarSizeBound(int k, double epsilon, int d) {
  const double s = k / epsilon + static_cast<double>(k) * d;
  return static_cast<int>(std::floor(s + 1e-9));
}

namespace {

// AHU encoding of an unrooted tree (minimum over its centres).
std::string TreeCode(const std::vector<std::vector<Vertex>>& adj) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> degree(n);
  std::vector<Vertex> layer;
  for (Vertex v = 0; v < n; ++v) {
    degree[v] = static_cast<int>(adj[v].size());
    if (degree[v] <= 1) layer.push_back(v);
  }
  int left = n;
  while (left > 2) {
    std::vector<Vertex> next;
    for (Vertex v : layer) {
      --left;
      for (Vertex u : adj[v]) {
        if (--degree[u] == 1) next.push_back(u);
      }
    }
    layer = std::move(next);
  }
  std::function<std::string(Vertex, Vertex)> code = [&](Vertex v, Vertex parent) {
    std::vector<std::string> kids;
    for (Vertex u : adj[v]) {
      if (u != parent) kids.push_back(code(u, v));
    }
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    return s + ")";
  };
  std::string best;
  for (Vertex c : layer) {
    std::string s = code(c, -1);
    if (best.empty() || s < best) best = s;
  }
  return best;
}

std::vector<std::vector<std::pair<Vertex, Vertex>>> TopologicalTrees(int k) {
  // Trees with exactly k leaves and no vertex of degree 2.
  std::vector<std::vector<std::pair<Vertex, Vertex>>> out;
  std::set<std::string> seen;
  for (int m = k + 1; m <= 2 * k - 2; ++m) {
    std::vector<int> seq(m - 2, 0);
    while (true) {
      std::vector<int> degree(m, 1);
      for (int x : seq) ++degree[x];
      int leaves = 0;
      bool ok = true;
      for (int v = 0; v < m; ++v) {
        if (degree[v] == 1) ++leaves;
        if (degree[v] == 2) ok = false;
      }
      if (ok && leaves == k) {
        std::vector<std::pair<Vertex, Vertex>> edges;
        std::vector<int> deg = degree;
        for (int x : seq) {
          for (int v = 0; v < m; ++v) {
            if (deg[v] == 1) {
              edges.push_back({v, x});
              --deg[v];
              --deg[x];
              break;
            }
          }
        }
        std::vector<Vertex> last;
        for (int v = 0; v < m; ++v) {
          if (deg[v] == 1) last.push_back(v);
        }
        edges.push_back({last[0], last[1]});
        std::vector<std::vector<Vertex>> adj(m);
        for (auto [a, b] : edges) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
        if (seen.insert(TreeCode(adj)).second) out.push_back(edges);
      }
      int i = 0;
      while (i < m - 2 && ++seq[i] == m) seq[i++] = 0;
      if (i == m - 2) break;
    }
  }
  return out;
}

}  // namespace

ForbiddenFamily KStarFamily(int k, double epsilon, int d) {
  if (k < 3 || k > 6) throw UsageError("k-star family supports 3 <= k <= 6");
  const int s = KStarSizeBound(k, epsilon, d);
  std::vector<PatternGraph> patterns;
  std::set<std::string> seen;
  for (const auto& tree : TopologicalTrees(k)) {
    const int m = static_cast<int>(tree.size()) + 1;
    if (m > s) continue;
    std::vector<int> degree(m, 0);
    for (auto [a, b] : tree) {
      ++degree[a];
      ++degree[b];
    }
    if (*std::max_element(degree.begin(), degree.end()) > d) continue;
    std::vector<std::pair<Vertex, Vertex>> internal, leaf;
    for (auto e : tree) {
      (degree[e.first] > 1 && degree[e.second] > 1 ? internal : leaf).push_back(e);
    }
    // Distribute up to s - m subdivision vertices over the internal edges.
    std::vector<int> extra(internal.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i == internal.size()) {
        int next = m;
        std::vector<std::pair<Vertex, Vertex>> edges = leaf;
        for (std::size_t j = 0; j < internal.size(); ++j) {
          Vertex prev = internal[j].first;
          for (int x = 0; x < extra[j]; ++x) {
            edges.push_back({prev, next});
            prev = next++;
          }
          edges.push_back({prev, internal[j].second});
        }
        std::vector<std::vector<Vertex>> adj(next);
        for (auto [a, b] : edges) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
        if (!seen.insert(TreeCode(adj)).second) return;
        std::vector<Edge> arcs;
        for (auto [a, b] : edges) {
          arcs.push_back({a, b});
          arcs.push_back({b, a});
        }
        patterns.emplace_back(next, arcs);
        return;
      }
      for (int x = 0; x <= left; ++x) {
        extra[i] = x;
        rec(i + 1, left - x);
      }
      extra[i] = 0;
    };
    rec(0, s - m);
  }
  return ForbiddenFamily(std::move(patterns), FamilyMode::kSubgraph);
}

Decomposition KStarDecomposition(const Digraph& g, int k, double epsilon) {
  if (g.model() != Model::kUndirected) {
    throw UsageError("k-star decomposition needs an undirected graph");
  }
  if (HasKStarMinor(g, k)) {
    throw UsageError("graph has a k-star minor; decomposition needs a family-free graph");
  }
  Decomposition dec;
  dec.s = KStarSizeBound(k, epsilon, g.d());
  const int piece = dec.s - k;
  if (piece < 1) throw UsageError("s - k must be positive");
  dec.cut_bound = static_cast<double>(g.n()) / piece * g.d() * k;
  auto adj = AdjacencySets(g);
  const int n = g.n();
  while (true) {
    std::vector<int> comp(n, -1);
    std::vector<std::vector<Vertex>> comps;
    for (Vertex s = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      comps.emplace_back();
      std::vector<Vertex> stack{s};
      comp[s] = static_cast<int>(comps.size()) - 1;
      while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        comps.back().push_back(v);
        for (Vertex u : adj[v]) {
          if (comp[u] < 0) {
            comp[u] = comp[s];
            stack.push_back(u);
          }
        }
      }
    }
    const std::vector<Vertex>* large = nullptr;
    dec.max_component = 0;
    for (const auto& c : comps) {
      dec.max_component = std::max<int>(dec.max_component, c.size());
      if (!large && static_cast<int>(c.size()) > piece) large = &c;
    }
    if (!large) break;
    const Vertex root = *std::min_element(large->begin(), large->end());
    std::vector<bool> in(n, false);
    std::vector<Vertex> order{root};
    in[root] = true;
    for (std::size_t i = 0; i < order.size() && static_cast<int>(order.size()) < piece; ++i) {
      for (Vertex u : adj[order[i]]) {
        if (!in[u] && static_cast<int>(order.size()) < piece) {
          in[u] = true;
          order.push_back(u);
        }
      }
    }
    std::vector<Edge> cut;
    for (Vertex v : order) {
      for (Vertex u : adj[v]) {
        if (!in[u]) cut.push_back({std::min(u, v), std::max(u, v)});
      }
    }
    for (const Edge& e : cut) {
      adj[e.from].erase(e.to);
      adj[e.to].erase(e.from);
    }
    dec.total_cut += static_cast<int>(cut.size());
    dec.cuts.push_back(std::move(cut));
  }
  return dec;
}

}  // namespace bdt
