#include "bdt/digraph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "bdt/errors.hpp"

namespace bdt {

std::string_view ModelName(Model model) {
  switch (model) {
    case Model::kF:
      return "F";
    case Model::kFB:
      return "FB";
    case Model::kUndirected:
      return "U";
  }
  return "?";
}

Model ParseModel(std::string_view name) {
  if (name == "F") return Model::kF;
  if (name == "FB") return Model::kFB;
  if (name == "U" || name == "UNDIRECTED") return Model::kUndirected;
  throw UsageError("unknown model '" + std::string(name) + "'");
}

namespace {

void BuildCsr(int n, std::vector<Edge>& edges, std::vector<int>& out_offsets,
              std::vector<Vertex>& out_targets, std::vector<int>& in_offsets,
              std::vector<Vertex>& in_sources) {
  std::sort(edges.begin(), edges.end());
  out_offsets.assign(n + 1, 0);
  in_offsets.assign(n + 1, 0);
  for (const Edge& e : edges) {
    ++out_offsets[e.from + 1];
    ++in_offsets[e.to + 1];
  }
  for (int v = 0; v < n; ++v) {
    out_offsets[v + 1] += out_offsets[v];
    in_offsets[v + 1] += in_offsets[v];
  }
  out_targets.resize(edges.size());
  in_sources.resize(edges.size());
  std::vector<int> in_fill(in_offsets.begin(), in_offsets.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out_targets[i] = edges[i].to;
    // Edges are sorted by source, so each in-list is filled in ascending order.
    in_sources[in_fill[edges[i].to]++] = edges[i].from;
  }
}

void CheckStructure(int n, const std::vector<Edge>& sorted) {
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Edge& e = sorted[i];
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) {
      throw ConfigError("edge (" + std::to_string(e.from) + "," +
                        std::to_string(e.to) + ") out of range for n=" +
                        std::to_string(n));
    }
    if (e.from == e.to) {
      throw ConfigError("self-loop at vertex " + std::to_string(e.from));
    }
    if (i > 0 && sorted[i - 1] == e) {
      throw ConfigError("duplicate edge (" + std::to_string(e.from) + "," +
                        std::to_string(e.to) + ")");
    }
  }
}

}  // namespace

Digraph::Digraph(UncheckedTag, int n, int d, Model model,
                 std::vector<Edge> edges)
    : n_(n), d_(d), model_(model) {
  if (n < 0) throw ConfigError("negative vertex count");
  std::sort(edges.begin(), edges.end());
  CheckStructure(n, edges);
  BuildCsr(n, edges, out_offsets_, out_targets_, in_offsets_, in_sources_);
}

Digraph::Digraph(int n, int d, Model model, std::vector<Edge> edges)
    : Digraph(UncheckedTag{}, n, d, model, std::move(edges)) {
  if (d < 0) throw ConfigError("negative degree bound");
  ValidateBounds();
}

Digraph Digraph::FromUndirected(
    int n, int d, std::span<const std::pair<Vertex, Vertex>> edges) {
  std::vector<Edge> arcs;
  arcs.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    arcs.push_back({u, v});
    arcs.push_back({v, u});
  }
  return Digraph(n, d, Model::kUndirected, std::move(arcs));
}

Digraph Digraph::Unbounded(int n, std::vector<Edge> edges) {
  Digraph g(UncheckedTag{}, n, 0, Model::kF, std::move(edges));
  g.d_ = std::max(g.max_out_degree(), g.max_in_degree());
  return g;
}

void Digraph::ValidateBounds() const {
  for (Vertex v = 0; v < n_; ++v) {
    if (out_degree(v) > d_) {
      throw ConfigError("vertex " + std::to_string(v) + " has out-degree " +
                        std::to_string(out_degree(v)) + " > d=" +
                        std::to_string(d_));
    }
    if (model_ != Model::kF && in_degree(v) > d_) {
      throw ConfigError("vertex " + std::to_string(v) + " has in-degree " +
                        std::to_string(in_degree(v)) + " > d=" +
                        std::to_string(d_));
    }
  }
  if (model_ == Model::kUndirected) {
    for (Vertex v = 0; v < n_; ++v) {
      for (Vertex u : out_neighbours(v)) {
        if (!has_edge(u, v)) {
          throw ConfigError("undirected graph missing reverse of (" +
                            std::to_string(v) + "," + std::to_string(u) + ")");
        }
      }
    }
  }
}

void Digraph::CheckVertex(Vertex v) const {
  if (v < 0 || v >= n_) {
    throw UsageError("vertex " + std::to_string(v) + " out of range [0," +
                     std::to_string(n_) + ")");
  }
}

std::span<const Vertex> Digraph::out_neighbours(Vertex v) const {
  CheckVertex(v);
  return {out_targets_.data() + out_offsets_[v],
          static_cast<std::size_t>(out_offsets_[v + 1] - out_offsets_[v])};
}

std::span<const Vertex> Digraph::in_neighbours(Vertex v) const {
  CheckVertex(v);
  return {in_sources_.data() + in_offsets_[v],
          static_cast<std::size_t>(in_offsets_[v + 1] - in_offsets_[v])};
}

int Digraph::out_degree(Vertex v) const {
  CheckVertex(v);
  return out_offsets_[v + 1] - out_offsets_[v];
}

int Digraph::in_degree(Vertex v) const {
  CheckVertex(v);
  return in_offsets_[v + 1] - in_offsets_[v];
}

bool Digraph::has_edge(Vertex from, Vertex to) const {
  auto out = out_neighbours(from);
  return std::binary_search(out.begin(), out.end(), to);
}

std::vector<Edge> Digraph::edges() const {
  std::vector<Edge> result;
  result.reserve(out_targets_.size());
  for (Vertex v = 0; v < n_; ++v) {
    for (Vertex u : out_neighbours(v)) result.push_back({v, u});
  }
  return result;
}

int Digraph::max_out_degree() const {
  int best = 0;
  for (Vertex v = 0; v < n_; ++v) best = std::max(best, out_degree(v));
  return best;
}

int Digraph::max_in_degree() const {
  int best = 0;
  for (Vertex v = 0; v < n_; ++v) best = std::max(best, in_degree(v));
  return best;
}

Digraph Digraph::WithModel(int d, Model model) const {
  return Digraph(n_, d, model, edges());
}

Digraph Digraph::Relabelled(std::span<const Vertex> perm) const {
  if (static_cast<int>(perm.size()) != n_) {
    throw UsageError("permutation size mismatch");
  }
  std::vector<Edge> mapped;
  mapped.reserve(out_targets_.size());
  for (const Edge& e : edges()) mapped.push_back({perm[e.from], perm[e.to]});
  Digraph g(UncheckedTag{}, n_, d_, model_, std::move(mapped));
  return g;
}

Digraph Digraph::Induced(std::span<const Vertex> vertices) const {
  std::vector<int> index(n_, -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    CheckVertex(vertices[i]);
    index[vertices[i]] = static_cast<int>(i);
  }
  std::vector<Edge> kept;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (Vertex u : out_neighbours(vertices[i])) {
      if (index[u] >= 0) kept.push_back({static_cast<Vertex>(i), index[u]});
    }
  }
  return Unbounded(static_cast<int>(vertices.size()), std::move(kept));
}

PatternGraph::PatternGraph(int n, std::vector<Edge> edges)
    : graph_(Digraph::Unbounded(n, std::move(edges))) {}

PatternGraph::PatternGraph(const Digraph& g)
    : graph_(Digraph::Unbounded(g.n(), g.edges())) {}

// ---------------------------------------------------------------------------
// Text format

std::vector<SourceLine> SplitLines(std::string_view text) {
  std::vector<SourceLine> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    if (!line.empty()) lines.push_back({number, std::string(line)});
    pos = end + 1;
  }
  return lines;
}

namespace {

int ParseInt(std::string_view token, int line) {
  int value = 0;
  auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected integer, got '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string> Tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Digraph ParseGraphLines(std::span<const SourceLine> lines) {
  if (lines.empty()) throw ParseError(0, "empty graph text");
  auto header = Tokens(lines[0].text);
  if (header.size() != 3) {
    throw ParseError(lines[0].number, "header must be 'n d model'");
  }
  const int n = ParseInt(header[0], lines[0].number);
  const int d = ParseInt(header[1], lines[0].number);
  Model model;
  try {
    model = ParseModel(header[2]);
  } catch (const UsageError& e) {
    throw ParseError(lines[0].number, e.what());
  }
  if (n < 0 || d < 0) throw ParseError(lines[0].number, "negative n or d");

  std::vector<Edge> edges;
  std::vector<bool> seen(n, false);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [number, text] = lines[i];
    auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError(number, "expected 'v: ...'");
    const int v = ParseInt(std::string_view(text).substr(0, colon), number);
    if (v < 0 || v >= n) throw ParseError(number, "vertex out of range");
    if (seen[v]) throw ParseError(number, "vertex listed twice");
    seen[v] = true;
    for (const auto& tok : Tokens(std::string_view(text).substr(colon + 1))) {
      const int u = ParseInt(tok, number);
      if (u < 0 || u >= n) throw ParseError(number, "neighbour out of range");
      if (u == v) throw ParseError(number, "self-loop");
      edges.push_back({v, u});
    }
  }
  try {
    return Digraph(n, d, model, std::move(edges));
  } catch (const ConfigError& e) {
    throw ParseError(lines[0].number, e.what());
  }
}

Digraph ParseGraph(std::string_view text) {
  auto lines = SplitLines(text);
  return ParseGraphLines(lines);
}

std::string SerializeGraph(const Digraph& g) {
  std::string out;
  out += std::to_string(g.n()) + " " + std::to_string(g.d()) + " " +
         std::string(ModelName(g.model())) + "\n";
  for (Vertex v = 0; v < g.n(); ++v) {
    out += std::to_string(v) + ":";
    for (Vertex u : g.out_neighbours(v)) out += " " + std::to_string(u);
    out += "\n";
  }
  return out;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << text;
}

Digraph ReadGraphFile(const std::filesystem::path& path) {
  return ParseGraph(ReadTextFile(path));
}

void WriteGraphFile(const std::filesystem::path& path, const Digraph& g) {
  WriteTextFile(path, SerializeGraph(g));
}

}  // namespace bdt
