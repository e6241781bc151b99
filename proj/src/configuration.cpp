#include "bdt/configuration.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "bdt/errors.hpp"
#include "bdt/structure.hpp"

namespace bdt {

Configuration::Configuration(PatternGraph h, std::vector<Label> labels)
    : h_(std::move(h)), labels_(std::move(labels)) {
  if (static_cast<int>(labels_.size()) != h_.size()) {
    throw ConfigError("configuration needs one label per pattern vertex");
  }
}

int Configuration::num_developed() const {
  return static_cast<int>(
      std::count(labels_.begin(), labels_.end(), Label::kDeveloped));
}

bool Configuration::ValidFor(Model model) const {
  if (model != Model::kF) return true;
  for (Vertex v = 0; v < size(); ++v) {
    if (!developed(v) && graph().out_degree(v) > 0) return false;
  }
  return true;
}

void Configuration::Validate(Model model) const {
  if (!ValidFor(model)) {
    throw UsageError("F-model configuration has a frontier vertex with "
                     "positive out-degree");
  }
}

std::vector<std::uint64_t> Configuration::Canonical() const {
  std::vector<int> colours(size());
  for (Vertex v = 0; v < size(); ++v) colours[v] = developed(v) ? 0 : 1;
  return CanonicalForm(graph(), colours);
}

int ConfigurationFamily::r() const {
  int r = 0;
  for (const auto& c : configs) r = std::max(r, c.size());
  return r;
}

bool ConfigurationFamily::ContainsIsomorphic(const Configuration& c) const {
  const auto key = c.Canonical();
  return std::any_of(configs.begin(), configs.end(), [&](const auto& x) {
    return x.size() == c.size() && x.Canonical() == key;
  });
}

MatchProblem CAppearanceProblem(const Digraph& g, const Configuration& c,
                                Model model) {
  c.Validate(model);
  const Digraph& h = c.graph();
  MatchProblem pr;
  pr.host = &g;
  std::vector<Edge> required;
  for (const Edge& e : h.edges()) {
    if (c.developed(e.from) || (model != Model::kF && c.developed(e.to))) {
      required.push_back(e);
    }
  }
  pr.required = Digraph::Unbounded(h.n(), std::move(required));
  const bool both = model != Model::kF;
  pr.unary = [&g, c, both](Vertex p, Vertex x) {
    if (!c.developed(p)) return true;
    if (g.out_degree(x) != c.graph().out_degree(p)) return false;
    return !both || g.in_degree(x) == c.graph().in_degree(p);
  };
  pr.pair = [&g, c, both](Vertex pa, Vertex ha, Vertex pb, Vertex hb) {
    const Digraph& h = c.graph();
    const bool da = c.developed(pa), db = c.developed(pb);
    if (both) {
      if (!da && !db) return true;
      return h.has_edge(pa, pb) == g.has_edge(ha, hb) &&
             h.has_edge(pb, pa) == g.has_edge(hb, ha);
    }
    if (da && h.has_edge(pa, pb) != g.has_edge(ha, hb)) return false;
    if (db && h.has_edge(pb, pa) != g.has_edge(hb, ha)) return false;
    return true;
  };
  return pr;
}

std::optional<Embedding> CAppearance(const Digraph& g, const Configuration& c,
                                     Model model) {
  return FindEmbedding(CAppearanceProblem(g, c, model));
}

bool IsCAppearance(const Digraph& g, const Configuration& c, Model model,
                   const Embedding& phi) {
  c.Validate(model);
  const Digraph& h = c.graph();
  const int k = h.n();
  if (static_cast<int>(phi.size()) != k) return false;
  std::vector<Vertex> image(phi);
  std::sort(image.begin(), image.end());
  if (std::adjacent_find(image.begin(), image.end()) != image.end()) {
    return false;
  }
  for (Vertex x : image) {
    if (x < 0 || x >= g.n()) return false;
  }
  auto in_image = [&](Vertex x) {
    return std::binary_search(image.begin(), image.end(), x);
  };
  for (Vertex v = 0; v < k; ++v) {
    if (!c.developed(v)) continue;
    for (Vertex u = 0; u < k; ++u) {
      if (u == v) continue;
      if (h.has_edge(v, u) != g.has_edge(phi[v], phi[u])) return false;
      if (model != Model::kF &&
          h.has_edge(u, v) != g.has_edge(phi[u], phi[v])) {
        return false;
      }
    }
    for (Vertex x : g.out_neighbours(phi[v])) {
      if (!in_image(x)) return false;
    }
    if (model != Model::kF) {
      for (Vertex x : g.in_neighbours(phi[v])) {
        if (!in_image(x)) return false;
      }
    }
  }
  return true;
}

bool InPC(const Digraph& g, const ConfigurationFamily& fam, Model model) {
  return std::none_of(fam.configs.begin(), fam.configs.end(),
                      [&](const Configuration& c) {
                        return CAppearance(g, c, model).has_value();
                      });
}

FactCheck CheckAppearanceFacts(const Digraph& g, const Configuration& c) {
  FactCheck out;
  const Digraph& h = c.graph();
  if (auto phi = CAppearance(g, c, Model::kF)) {
    out.has_appearance = true;
    out.appearance_implies_subgraph =
        IsSubgraphEmbedding(g, h, *phi) &&
        SubgraphAppearance(g, c.h()).has_value();
  }
  ForEachEmbedding(InducedProblem(g, h), [&](const Embedding& phi) {
    out.has_induced = true;
    std::vector<bool> in_image(g.n(), false);
    for (Vertex x : phi) in_image[x] = true;
    std::vector<Edge> kept;
    for (const Edge& e : g.edges()) {
      if (!in_image[e.from] || in_image[e.to]) kept.push_back(e);
    }
    Digraph trimmed = Digraph::Unbounded(g.n(), std::move(kept));
    if (!IsCAppearance(trimmed, c, Model::kF, phi)) {
      out.induced_gives_appearance = false;
      return false;
    }
    return true;
  });
  return out;
}

std::vector<PatternGraph> Closure(const Configuration& c, int d) {
  c.Validate(Model::kF);
  const Digraph& h = c.graph();
  const int k = h.n();
  std::vector<std::vector<std::vector<Vertex>>> choices;  // per frontier
  for (Vertex f = 0; f < k; ++f) {
    if (c.developed(f)) continue;
    std::vector<Vertex> targets;
    for (Vertex u = 0; u < k; ++u) {
      if (u != f) targets.push_back(u);
    }
    std::vector<std::vector<Vertex>> subsets;
    const int m = static_cast<int>(targets.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      if (std::popcount(mask) > d) continue;
      std::vector<Vertex> s;
      for (int i = 0; i < m; ++i) {
        if (mask & (1u << i)) s.push_back(targets[i]);
      }
      subsets.push_back(std::move(s));
    }
    choices.push_back(std::move(subsets));
  }
  std::vector<Vertex> frontier;
  for (Vertex f = 0; f < k; ++f) {
    if (!c.developed(f)) frontier.push_back(f);
  }
  std::vector<PatternGraph> out;
  std::set<std::vector<Edge>> seen;
  std::vector<std::size_t> pick(frontier.size(), 0);
  while (true) {
    std::vector<Edge> e = h.edges();
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      for (Vertex u : choices[i][pick[i]]) e.push_back({frontier[i], u});
    }
    std::sort(e.begin(), e.end());
    if (seen.insert(e).second) out.emplace_back(k, e);
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == choices[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return out;
}

std::vector<Configuration> UpwardSteps(const Configuration& c, int d) {
  const Digraph& h = c.graph();
  const int k = h.n();
  std::vector<Configuration> out;
  for (Vertex v = 0; v < k; ++v) {
    if (!c.developed(v) || h.out_degree(v) >= d) continue;
    for (Vertex u = 0; u < k; ++u) {
      if (u == v || h.has_edge(v, u)) continue;
      auto e = h.edges();
      e.push_back({v, u});
      out.emplace_back(PatternGraph(k, e), c.labels());
    }
    auto e = h.edges();
    e.push_back({v, k});
    auto labels = c.labels();
    labels.push_back(Label::kFrontier);
    out.emplace_back(PatternGraph(k + 1, e), labels);
  }
  return out;
}

bool IsUpwardsClosed(const ConfigurationFamily& fam, int d) {
  std::set<std::vector<std::uint64_t>> keys;
  for (const auto& c : fam.configs) keys.insert(c.Canonical());
  for (const auto& c : fam.configs) {
    for (const auto& next : UpwardSteps(c, d)) {
      if (!keys.count(next.Canonical())) return false;
    }
  }
  return true;
}

ConfigurationFamily UpwardClosure(const ConfigurationFamily& seeds, int d) {
  ConfigurationFamily out;
  std::set<std::vector<std::uint64_t>> keys;
  std::vector<Configuration> queue;
  for (const auto& c : seeds.configs) {
    if (keys.insert(c.Canonical()).second) queue.push_back(c);
  }
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (auto& next : UpwardSteps(queue[i], d)) {
      if (keys.insert(next.Canonical()).second) queue.push_back(next);
    }
  }
  out.configs = std::move(queue);
  return out;
}

std::vector<Configuration> AllConfigurations(int max_size, int d) {
  if (max_size > 4) throw UsageError("AllConfigurations supports max_size <= 4");
  std::vector<Configuration> out;
  for (int k = 1; k <= max_size; ++k) {
    std::map<std::vector<std::uint64_t>, Configuration> classes;
    std::vector<Edge> pairs;
    for (Vertex a = 0; a < k; ++a) {
      for (Vertex b = 0; b < k; ++b) {
        if (a != b) pairs.push_back({a, b});
      }
    }
    for (unsigned dev = 0; dev < (1u << k); ++dev) {
      std::vector<Label> labels(k);
      for (int v = 0; v < k; ++v) {
        labels[v] = (dev >> v & 1) ? Label::kDeveloped : Label::kFrontier;
      }
      for (unsigned bits = 0; bits < (1u << pairs.size()); ++bits) {
        std::vector<Edge> edges;
        std::vector<int> outdeg(k, 0);
        bool ok = true;
        for (std::size_t i = 0; i < pairs.size() && ok; ++i) {
          if (!(bits >> i & 1)) continue;
          const Edge e = pairs[i];
          if (!(dev >> e.from & 1) || ++outdeg[e.from] > d) ok = false;
          edges.push_back(e);
        }
        if (!ok) continue;
        Configuration c(PatternGraph(k, edges), labels);
        classes.emplace(c.Canonical(), std::move(c));
      }
    }
    for (auto& [key, c] : classes) out.push_back(std::move(c));
  }
  return out;
}

namespace {

Configuration ParseConfigurationLines(std::span<const SourceLine> lines) {
  if (lines.empty()) throw ParseError(0, "empty configuration");
  const SourceLine& last = lines.back();
  const std::string prefix = "labels:";
  if (last.text.rfind(prefix, 0) != 0) {
    throw ParseError(last.number, "expected 'labels: ...'");
  }
  Digraph g = ParseGraphLines(lines.first(lines.size() - 1));
  std::vector<Label> labels;
  std::string rest = last.text.substr(prefix.size());
  for (char ch : rest) {
    if (ch == 'D') {
      labels.push_back(Label::kDeveloped);
    } else if (ch == 'F') {
      labels.push_back(Label::kFrontier);
    } else if (ch != ' ' && ch != '\t') {
      throw ParseError(last.number, std::string("bad label '") + ch + "'");
    }
  }
  if (static_cast<int>(labels.size()) != g.n()) {
    throw ParseError(last.number, "label count does not match vertex count");
  }
  return Configuration(PatternGraph(g), std::move(labels));
}

}  // namespace

Configuration ParseConfiguration(std::string_view text) {
  auto lines = SplitLines(text);
  return ParseConfigurationLines(lines);
}

std::string SerializeConfiguration(const Configuration& c) {
  std::string out = SerializeGraph(c.graph());
  out += "labels:";
  for (Label l : c.labels()) out += l == Label::kDeveloped ? " D" : " F";
  out += "\n";
  return out;
}

ConfigurationFamily ParseConfigurationFamily(std::string_view text) {
  auto lines = SplitLines(text);
  if (lines.empty() || lines[0].text != "configs") {
    throw ParseError(lines.empty() ? 0 : lines[0].number,
                     "expected 'configs' header");
  }
  ConfigurationFamily fam;
  std::size_t start = 1;
  for (std::size_t i = 1; i <= lines.size(); ++i) {
    if (i == lines.size() || lines[i].text == "---") {
      if (i > start) {
        fam.configs.push_back(ParseConfigurationLines(
            std::span<const SourceLine>(lines.data() + start, i - start)));
      }
      start = i + 1;
    }
  }
  return fam;
}

std::string SerializeConfigurationFamily(const ConfigurationFamily& fam) {
  std::string out = "configs\n";
  for (std::size_t i = 0; i < fam.configs.size(); ++i) {
    if (i > 0) out += "---\n";
    out += SerializeConfiguration(fam.configs[i]);
  }
  return out;
}

ConfigurationFamily ReadConfigurationFamilyFile(
    const std::filesystem::path& path) {
  return ParseConfigurationFamily(ReadTextFile(path));
}

}  // namespace bdt
