#include "bdt/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdt/configuration.hpp"
#include "bdt/digraph.hpp"
#include "bdt/errors.hpp"
#include "bdt/exact.hpp"
#include "bdt/experiments.hpp"
#include "bdt/family.hpp"
#include "bdt/generators.hpp"
#include "bdt/monte_carlo.hpp"
#include "bdt/testers.hpp"

namespace bdt {

using OJson = nlohmann::ordered_json;

namespace {

struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void Emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    WriteTextFile(path, text);
  }
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind, model = "F", pattern, out;
  int n = 0, d = 1, girth_floor = 0, attempts = 0;
  std::uint64_t seed = 1;
};

int DoGen(const GenArgs& a, std::ostream& out, std::ostream& err) {
  err << "seed: " << a.seed << '\n';
  GeneratorSpec spec;
  spec.kind = a.kind;
  spec.n = a.n;
  spec.d = a.d;
  spec.model = ParseModel(a.model);
  spec.girth_floor = a.girth_floor;
  spec.attempts = a.attempts;
  if (!a.pattern.empty()) spec.pattern = PatternGraph(ReadGraphFile(a.pattern));
  Emit(SerializeGraph(Generate(spec, a.seed)), a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct TestArgs {
  std::string descriptor, tester, model, family, graph, out, log;
  double epsilon = 0.1;
  long long trials = 100;
  std::uint64_t seed = 1;
  int jobs = 1;
  bool transcript = false;
};

void LoadDescriptor(TestArgs& a) {
  const std::filesystem::path path = a.descriptor;
  OJson j;
  try {
    j = OJson::parse(ReadTextFile(path));
  } catch (const OJson::exception& e) {
    throw ConfigError(std::string("bad test descriptor: ") + e.what());
  }
  auto resolve = [&](const std::string& p) {
    std::filesystem::path q = p;
    if (q.is_relative()) q = path.parent_path() / q;
    return q.string();
  };
  try {
    a.tester = j.at("tester").get<std::string>();
    a.graph = resolve(j.at("graph_file").get<std::string>());
    if (j.contains("family_file")) a.family = resolve(j["family_file"].get<std::string>());
    if (j.contains("model")) a.model = j["model"].get<std::string>();
    a.epsilon = j.at("epsilon").get<double>();
    a.trials = j.value("trials", a.trials);
    a.seed = j.value("base_seed", a.seed);
  } catch (const OJson::exception& e) {
    throw ConfigError(std::string("bad test descriptor: ") + e.what());
  }
}

int DoTest(TestArgs a, std::ostream& out, std::ostream& err) {
  if (!a.descriptor.empty()) LoadDescriptor(a);
  if (a.tester.empty() || a.graph.empty()) {
    throw UsageError("test needs --tester and --graph (or --descriptor)");
  }
  err << "seed: " << a.seed << '\n';
  const TesterKind kind = ParseTesterKind(a.tester);
  const Digraph g = ReadGraphFile(a.graph);
  const Model model = a.model.empty() ? g.model() : ParseModel(a.model);
  ForbiddenFamily fam;
  if (kind != TesterKind::kSink) {
    if (a.family.empty()) throw UsageError("this tester needs --family");
    fam = ReadFamilyFile(a.family);
  }
  auto trial = [&](std::uint64_t seed) {
    TesterParams p;
    p.epsilon = a.epsilon;
    p.seed = seed;
    p.record_transcript = a.transcript;
    return RunTester(kind, g, model, fam, p);
  };
  MonteCarloResult mc = RunTrials(g, trial, a.trials, a.seed, a.jobs);
  OJson j;
  j["tester"] = TesterKindName(kind);
  j["model"] = ModelName(model);
  j["epsilon"] = a.epsilon;
  j["n"] = g.n();
  j["base_seed"] = a.seed;
  const OJson s = OJson::parse(SummaryJson(mc.summary));
  for (auto it = s.begin(); it != s.end(); ++it) j[it.key()] = it.value();
  Emit(j.dump() + "\n", a.out, out);
  if (!a.log.empty()) {
    std::string lines;
    for (long long i = 0; i < a.trials; ++i) {
      lines += TrialReportJson(mc.reports[i], i) + "\n";
    }
    WriteTextFile(a.log, lines);
  }
  if (mc.summary.unverified_rejections > 0) {
    throw AssertionFailure("a rejection witness failed re-verification");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PropertyArgs {
  std::string graph, property = "family", family, configs, model, out;
  int limit = -1;
};

PropertySpec LoadProperty(const PropertyArgs& a, const Digraph& g) {
  const Model model = a.model.empty() ? g.model() : ParseModel(a.model);
  if (a.property == "sink") return PropertySpec::Sink();
  if (a.property == "family") {
    if (a.family.empty()) throw UsageError("--property family needs --family");
    return PropertySpec::Forbidden(ReadFamilyFile(a.family), model);
  }
  if (a.property == "configs") {
    if (a.configs.empty()) throw UsageError("--property configs needs --configs");
    return PropertySpec::Configs(ReadConfigurationFamilyFile(a.configs), model);
  }
  throw UsageError("unknown property '" + a.property + "'");
}

int DoDist(const PropertyArgs& a, std::ostream& out) {
  const Digraph g = ReadGraphFile(a.graph);
  const DistanceResult r = ExactDistance(g, LoadProperty(a, g), a.limit);
  Emit(DistanceText(r) + "\n", a.out, out);
  return kExitOk;
}

int DoCount(const PropertyArgs& a, std::ostream& out) {
  const Digraph g = ReadGraphFile(a.graph);
  const Model model = a.model.empty() ? g.model() : ParseModel(a.model);
  AppearanceCount c;
  if (!a.configs.empty()) {
    c = CountAppearances(g, ReadConfigurationFamilyFile(a.configs), model);
  } else if (!a.family.empty()) {
    c = CountAppearances(g, ReadFamilyFile(a.family));
  } else {
    throw UsageError("count needs --family or --configs");
  }
  OJson j;
  j["per_pattern"] = c.per_pattern;
  j["total"] = c.total();
  j["covered"] = c.covered.size();
  j["covered_vertices"] = c.covered;
  Emit(j.dump() + "\n", a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct UpArgs {
  std::string configs, out;
  int d = 2;
  bool closure = false;
};

int DoUpclosed(const UpArgs& a, std::ostream& out) {
  const ConfigurationFamily fam = ReadConfigurationFamilyFile(a.configs);
  if (a.closure) {
    Emit(SerializeConfigurationFamily(UpwardClosure(fam, a.d)), a.out, out);
  } else {
    Emit(IsUpwardsClosed(fam, a.d) ? "true\n" : "false\n", a.out, out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RemovalArgs {
  long long trials = 1000;
  int k = 3, n_max = 12, jobs = 1;
  std::uint64_t seed = 1;
  std::string out;
};

int DoRemoval(const RemovalArgs& a, std::ostream& out, std::ostream& err) {
  err << "seed: " << a.seed << '\n';
  const RemovalReport r = VerifyRemovalLemmaD2(a.trials, a.k, a.n_max, a.seed, a.jobs);
  Emit(r.Json() + "\n", a.out, out);
  if (r.violations > 0) throw AssertionFailure("covered-vertex bound violated");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GameArgs {
  std::string pattern, qs = "10", strategies = "augmented", out;
  int n = 10000, jobs = 1;
  long long trials = 1000;
  std::uint64_t seed = 1;
  double slack = 0.01;
};

GameStrategy ParseStrategy(const std::string& s) {
  for (GameStrategy g : {GameStrategy::kAugmented, GameStrategy::kFixedIds,
                         GameStrategy::kForwardBfs, GameStrategy::kCanonical}) {
    if (StrategyName(g) == s) return g;
  }
  throw UsageError("unknown strategy '" + s + "'");
}

int DoGame(const GameArgs& a, std::ostream& out, std::ostream& err) {
  err << "seed: " << a.seed << '\n';
  const PatternGraph h = a.pattern.empty() ? TwoSourcesPattern()
                                           : PatternGraph(ReadGraphFile(a.pattern));
  std::vector<int> qs;
  for (const auto& s : SplitList(a.qs)) {
    try {
      qs.push_back(std::stoi(s));
    } catch (const std::exception&) {
      throw UsageError("bad --q entry '" + s + "'");
    }
    if (qs.back() < 0) throw UsageError("--q entries must be non-negative");
  }
  std::vector<GameStrategy> strategies;
  for (const auto& s : SplitList(a.strategies)) strategies.push_back(ParseStrategy(s));
  const auto cells = LowerBoundGame(h, a.n, qs, strategies, a.trials, a.seed, a.jobs);
  std::ostringstream csv;
  csv << "strategy,q,trials,detections,rate,bound\n";
  bool ok = true;
  for (const auto& c : cells) {
    csv << StrategyName(c.strategy) << ',' << c.q << ',' << c.trials << ','
        << c.detections << ',' << c.rate << ',' << c.bound << '\n';
    if (c.strategy == GameStrategy::kAugmented && c.rate > c.bound + a.slack) ok = false;
  }
  Emit(csv.str(), a.out, out);
  if (!ok) throw AssertionFailure("augmented detection rate above the analytic bound");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DemoArgs {
  std::string which = "two-colour", graph, out;
  int d = 3, girth_floor = 4, n = 24, k = 3;
  double epsilon = 0.01;
  std::uint64_t seed = 1;
};

int DoDemo(const DemoArgs& a, std::ostream& out, std::ostream& err) {
  if (a.which == "two-colour") {
    err << "seed: " << a.seed << '\n';
    const TwoColourReport r = TwoColourabilityDemo(a.d, a.epsilon, a.girth_floor, a.n, a.seed);
    Emit(r.Json() + "\n", a.out, out);
    if (r.small_non_bipartite) throw AssertionFailure("small non-bipartite subgraph found");
    return kExitOk;
  }
  if (a.which == "kstar") {
    if (a.graph.empty()) throw UsageError("demo kstar needs --graph");
    const Digraph g = ReadGraphFile(a.graph);
    if (g.model() != Model::kUndirected) throw UsageError("demo kstar needs an undirected graph");
    OJson j;
    const bool minor = HasKStarMinor(g, a.k);
    j["has_minor"] = minor;
    j["s"] = KStarSizeBound(a.k, a.epsilon, g.d());
    j["family_size"] = KStarFamily(a.k, a.epsilon, g.d()).patterns().size();
    if (!minor) {
      const Decomposition dec = KStarDecomposition(g, a.k, a.epsilon);
      OJson cuts = OJson::array();
      for (const auto& step : dec.cuts) {
        OJson s = OJson::array();
        for (const Edge& e : step) s.push_back({e.from, e.to});
        cuts.push_back(s);
      }
      j["cuts"] = cuts;
      j["total_cut"] = dec.total_cut;
      j["cut_bound"] = dec.cut_bound;
      j["max_component"] = dec.max_component;
      Emit(j.dump() + "\n", a.out, out);
      if (dec.total_cut > dec.cut_bound || dec.max_component > dec.s - a.k) {
        throw AssertionFailure("decomposition outside its bounds");
      }
      return kExitOk;
    }
    Emit(j.dump() + "\n", a.out, out);
    return kExitOk;
  }
  throw UsageError("unknown demo '" + a.which + "'");
}

// ---------------------------------------------------------------------------

struct PlanArgs {
  std::string plan, out, log;
  int jobs = 0;
};

int DoPlan(const PlanArgs& a, std::ostream& out, std::ostream& err) {
  const std::filesystem::path path = a.plan;
  ExperimentPlan plan = ParsePlan(ReadTextFile(path), path.parent_path().string());
  if (a.jobs > 0) plan.jobs = a.jobs;
  err << "seed: " << plan.base_seed << '\n';
  const CurveResult r = RejectionCurve(plan);
  Emit(r.Csv(), a.out, out);
  if (!a.log.empty()) {
    std::string lines;
    for (const auto& l : r.trial_log) lines += l + "\n";
    WriteTextFile(a.log, lines);
  }
  for (const auto& c : r.cells) {
    if (!c.passed) {
      err << "cell n=" << c.n << " epsilon=" << c.epsilon
          << " failed: rate " << c.summary.reject_rate;
      if (!c.certificate_value.empty()) err << " certificate " << c.certificate_value;
      err << '\n';
    }
  }
  if (!r.flat_ok) err << "charged queries vary across n\n";
  if (!r.passed) throw AssertionFailure("plan assertions failed");
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"bounded-degree digraph property testing toolkit", "bdt"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a graph file");
  g->add_option("--kind", gen.kind, "generator kind")->required();
  g->add_option("--n", gen.n, "number of vertices")->required();
  g->add_option("--d", gen.d, "degree bound");
  g->add_option("--model", gen.model, "F, FB or U");
  g->add_option("--pattern", gen.pattern, "pattern graph file");
  g->add_option("--girth-floor", gen.girth_floor, "regular: reject girth <= this");
  g->add_option("--attempts", gen.attempts, "random: arc attempts");
  g->add_option("--seed", gen.seed, "random seed");
  g->add_option("--out", gen.out, "output file");

  TestArgs test;
  auto* t = app.add_subcommand("test", "run a tester repeatedly");
  t->add_option("--descriptor", test.descriptor, "JSON test descriptor");
  t->add_option("--tester", test.tester, "monotone, hereditary, sink or close");
  t->add_option("--model", test.model, "access model (default: graph's)");
  t->add_option("--family", test.family, "forbidden family file");
  t->add_option("--graph", test.graph, "graph file");
  t->add_option("--epsilon", test.epsilon, "proximity parameter");
  t->add_option("--trials", test.trials, "number of trials")->check(CLI::PositiveNumber);
  t->add_option("--seed", test.seed, "base seed");
  t->add_option("--jobs", test.jobs, "worker threads")->check(CLI::PositiveNumber);
  t->add_option("--out", test.out, "summary output file");
  t->add_option("--log", test.log, "JSON-lines trial log");
  t->add_flag("--transcript", test.transcript, "record query transcripts in the log");

  PropertyArgs dist;
  auto* di = app.add_subcommand("dist", "exact edit distance to a property");
  di->add_option("--graph", dist.graph, "graph file")->required();
  di->add_option("--property", dist.property, "sink, family or configs");
  di->add_option("--family", dist.family, "forbidden family file");
  di->add_option("--configs", dist.configs, "configuration family file");
  di->add_option("--model", dist.model, "model (default: graph's)");
  di->add_option("--limit", dist.limit, "stop above this many edits");
  di->add_option("--out", dist.out, "output file");

  PropertyArgs count;
  auto* co = app.add_subcommand("count", "count appearances");
  co->add_option("--graph", count.graph, "graph file")->required();
  co->add_option("--family", count.family, "forbidden family file");
  co->add_option("--configs", count.configs, "configuration family file");
  co->add_option("--model", count.model, "model (default: graph's)");
  co->add_option("--out", count.out, "output file");

  UpArgs up;
  auto* u = app.add_subcommand("upclosed", "check upward closure of a configuration family");
  u->add_option("--configs", up.configs, "configuration family file")->required();
  u->add_option("--d", up.d, "degree bound");
  u->add_flag("--closure", up.closure, "print the upward closure instead");
  u->add_option("--out", up.out, "output file");

  RemovalArgs rem;
  auto* r = app.add_subcommand("removal-check", "sample the d <= 2 removal lemma");
  r->add_option("--trials", rem.trials, "instances")->check(CLI::PositiveNumber);
  r->add_option("--k", rem.k, "max configuration size");
  r->add_option("--n-max", rem.n_max, "max host size");
  r->add_option("--seed", rem.seed, "seed");
  r->add_option("--jobs", rem.jobs, "worker threads")->check(CLI::PositiveNumber);
  r->add_option("--out", rem.out, "output file");

  GameArgs game;
  auto* lb = app.add_subcommand("lbgame", "lower-bound game for a non-rooted pattern");
  lb->add_option("--pattern", game.pattern, "pattern graph file (default: a->b<-c)");
  lb->add_option("--n", game.n, "vertices");
  lb->add_option("--q", game.qs, "comma-separated query counts");
  lb->add_option("--strategies", game.strategies, "comma-separated strategies");
  lb->add_option("--trials", game.trials, "trials")->check(CLI::PositiveNumber);
  lb->add_option("--seed", game.seed, "seed");
  lb->add_option("--slack", game.slack, "allowed excess over the bound");
  lb->add_option("--jobs", game.jobs, "worker threads")->check(CLI::PositiveNumber);
  lb->add_option("--out", game.out, "output file");

  DemoArgs demo;
  auto* de = app.add_subcommand("demo", "applications: two-colour or kstar");
  de->add_option("which", demo.which, "two-colour or kstar");
  de->add_option("--d", demo.d, "degree");
  de->add_option("--epsilon", demo.epsilon, "proximity parameter");
  de->add_option("--girth-floor", demo.girth_floor, "girth floor");
  de->add_option("--n", demo.n, "vertices");
  de->add_option("--k", demo.k, "star size");
  de->add_option("--graph", demo.graph, "graph file (kstar)");
  de->add_option("--seed", demo.seed, "seed");
  de->add_option("--out", demo.out, "output file");

  PlanArgs plan;
  auto* p = app.add_subcommand("plan", "run an experiment plan");
  p->add_option("plan", plan.plan, "plan JSON file")->required();
  p->add_option("--out", plan.out, "CSV output file");
  p->add_option("--log", plan.log, "JSON-lines trial log");
  p->add_option("--jobs", plan.jobs, "override plan jobs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (g->parsed()) return DoGen(gen, out, err);
    if (t->parsed()) return DoTest(test, out, err);
    if (di->parsed()) return DoDist(dist, out);
    if (co->parsed()) return DoCount(count, out);
    if (u->parsed()) return DoUpclosed(up, out);
    if (r->parsed()) return DoRemoval(rem, out, err);
    if (lb->parsed()) return DoGame(game, out, err);
    if (de->parsed()) return DoDemo(demo, out, err);
    if (p->parsed()) return DoPlan(plan, out, err);
  } catch (const AssertionFailure& e) {
    err << "assertion failed: " << e.what() << '\n';
    return kExitAssertion;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const ConfigError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace bdt
