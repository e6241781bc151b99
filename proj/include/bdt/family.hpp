#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "bdt/digraph.hpp"

namespace bdt {

enum class FamilyMode {
  kSubgraph,  // monotone property: H-free as subgraphs
  kInduced,   // hereditary property: H-free as induced subgraphs
};

// A finite family of forbidden patterns, normalised at construction:
//   kSubgraph: edgeless patterns are refused; a pattern containing another
//              pattern as a subgraph is dropped, as are isomorphic repeats.
//   kInduced:  isolated vertices are stripped; repeats and patterns that
//              contain another pattern as an induced subgraph are dropped, so
//              the result is non-redundant. A pattern with no edges at all is
//              refused, because it makes the property empty for large n.
class ForbiddenFamily {
 public:
  ForbiddenFamily() = default;
  ForbiddenFamily(std::vector<PatternGraph> patterns, FamilyMode mode);

  const std::vector<PatternGraph>& patterns() const { return patterns_; }
  FamilyMode mode() const { return mode_; }
  int r() const { return r_; }
  int t() const { return static_cast<int>(patterns_.size()); }
  bool empty() const { return patterns_.empty(); }

  bool AllRooted() const;
  int MaxOutDegree() const;

  // Index of the first pattern appearing in g (as subgraph or induced,
  // according to mode), or -1.
  int FirstAppearing(const Digraph& g) const;
  bool Contains(const Digraph& g) const { return FirstAppearing(g) >= 0; }

 private:
  std::vector<PatternGraph> patterns_;
  FamilyMode mode_ = FamilyMode::kSubgraph;
  int r_ = 0;
};

// File format: a first line "family subgraph" or "family induced", then
// patterns in graph format separated by lines containing "---".
ForbiddenFamily ParseFamily(std::string_view text);
std::string SerializeFamily(const ForbiddenFamily& family);
ForbiddenFamily ReadFamilyFile(const std::filesystem::path& path);

}  // namespace bdt
