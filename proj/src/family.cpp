#include "bdt/family.hpp"

#include <algorithm>

#include "bdt/errors.hpp"
#include "bdt/matching.hpp"
#include "bdt/structure.hpp"

namespace bdt {

namespace {

PatternGraph StripIsolated(const PatternGraph& h) {
  const Digraph& g = h.graph();
  std::vector<Vertex> keep;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (g.out_degree(v) + g.in_degree(v) > 0) keep.push_back(v);
  }
  return PatternGraph(g.Induced(keep));
}

bool ContainsAs(const PatternGraph& big, const PatternGraph& small,
                FamilyMode mode) {
  if (small.size() > big.size()) return false;
  return mode == FamilyMode::kSubgraph
             ? SubgraphAppearance(big.graph(), small).has_value()
             : InducedAppearance(big.graph(), small).has_value();
}

}  // namespace

ForbiddenFamily::ForbiddenFamily(std::vector<PatternGraph> patterns,
                                 FamilyMode mode)
    : mode_(mode) {
  std::vector<PatternGraph> input;
  for (auto& h : patterns) {
    if (mode == FamilyMode::kInduced) {
      PatternGraph stripped = StripIsolated(h);
      if (stripped.size() == 0) {
        throw ConfigError(
            "induced pattern with no edges: property trivially empty for "
            "large n");
      }
      input.push_back(std::move(stripped));
    } else {
      if (h.edgeless()) {
        throw ConfigError(
            "edgeless subgraph pattern: property trivially empty for large n");
      }
      input.push_back(std::move(h));
    }
  }
  // Drop p if some other pattern q is contained in it. Among isomorphic
  // patterns only the first survives.
  for (std::size_t i = 0; i < input.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < input.size() && !redundant; ++j) {
      if (i == j || !ContainsAs(input[i], input[j], mode)) continue;
      const bool same = input[i].size() == input[j].size() &&
                        input[i].graph().num_arcs() ==
                            input[j].graph().num_arcs();
      redundant = !same || j < i;
    }
    if (!redundant) patterns_.push_back(input[i]);
  }
  for (const auto& h : patterns_) r_ = std::max(r_, h.size());
}

bool ForbiddenFamily::AllRooted() const {
  return std::all_of(patterns_.begin(), patterns_.end(),
                     [](const PatternGraph& h) { return IsRooted(h); });
}

int ForbiddenFamily::MaxOutDegree() const {
  int best = 0;
  for (const auto& h : patterns_) {
    best = std::max(best, h.graph().max_out_degree());
  }
  return best;
}

int ForbiddenFamily::FirstAppearing(const Digraph& g) const {
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    const bool found = mode_ == FamilyMode::kSubgraph
                           ? SubgraphAppearance(g, patterns_[i]).has_value()
                           : InducedAppearance(g, patterns_[i]).has_value();
    if (found) return static_cast<int>(i);
  }
  return -1;
}

ForbiddenFamily ParseFamily(std::string_view text) {
  auto lines = SplitLines(text);
  if (lines.empty()) throw ParseError(0, "empty family text");
  FamilyMode mode;
  if (lines[0].text == "family subgraph") {
    mode = FamilyMode::kSubgraph;
  } else if (lines[0].text == "family induced") {
    mode = FamilyMode::kInduced;
  } else {
    throw ParseError(lines[0].number,
                     "expected 'family subgraph' or 'family induced'");
  }
  std::vector<PatternGraph> patterns;
  std::size_t start = 1;
  for (std::size_t i = 1; i <= lines.size(); ++i) {
    if (i == lines.size() || lines[i].text == "---") {
      if (i > start) {
        std::span<const SourceLine> block(lines.data() + start, i - start);
        patterns.emplace_back(ParseGraphLines(block));
      }
      start = i + 1;
    }
  }
  try {
    return ForbiddenFamily(std::move(patterns), mode);
  } catch (const ConfigError& e) {
    throw ParseError(lines[0].number, e.what());
  }
}

std::string SerializeFamily(const ForbiddenFamily& family) {
  std::string out = family.mode() == FamilyMode::kSubgraph
                        ? "family subgraph\n"
                        : "family induced\n";
  for (std::size_t i = 0; i < family.patterns().size(); ++i) {
    if (i > 0) out += "---\n";
    const Digraph& g = family.patterns()[i].graph();
    out += SerializeGraph(g);
  }
  return out;
}

ForbiddenFamily ReadFamilyFile(const std::filesystem::path& path) {
  return ParseFamily(ReadTextFile(path));
}

}  // namespace bdt
