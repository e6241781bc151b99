#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdt/digraph.hpp"
#include "bdt/matching.hpp"

namespace bdt {

enum class Label { kDeveloped, kFrontier };

// A pattern together with developed/frontier labels. In the F model frontier
// vertices must have out-degree 0 in the pattern; in FB they may not.
class Configuration {
 public:
  Configuration() = default;
  Configuration(PatternGraph h, std::vector<Label> labels);

  const PatternGraph& h() const { return h_; }
  const Digraph& graph() const { return h_.graph(); }
  const std::vector<Label>& labels() const { return labels_; }
  int size() const { return h_.size(); }
  bool developed(Vertex v) const { return labels_[v] == Label::kDeveloped; }
  int num_developed() const;

  // Throws UsageError if the configuration is not valid for the model.
  void Validate(Model model) const;
  bool ValidFor(Model model) const;

  // Canonical form under label-preserving isomorphism.
  std::vector<std::uint64_t> Canonical() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  PatternGraph h_;
  std::vector<Label> labels_;
};

struct ConfigurationFamily {
  std::vector<Configuration> configs;
  int r() const;
  // Membership up to label-preserving isomorphism.
  bool ContainsIsomorphic(const Configuration& c) const;
};

// Matching problem whose embeddings are exactly the C-appearances of c in g.
// F: for developed v, pattern arcs out of v match host arcs out of phi(v)
// both ways and every host out-arc of phi(v) stays in the image. FB and
// undirected: the same for in-arcs too, i.e. for every pair with a developed
// endpoint both directions must agree.
MatchProblem CAppearanceProblem(const Digraph& g, const Configuration& c,
                                Model model);

std::optional<Embedding> CAppearance(const Digraph& g, const Configuration& c,
                                     Model model);

// Direct check of the definition for a concrete map.
bool IsCAppearance(const Digraph& g, const Configuration& c, Model model,
                   const Embedding& phi);

// True iff g has no appearance of any member.
bool InPC(const Digraph& g, const ConfigurationFamily& fam, Model model);

// Evidence for the two structural facts linking configurations to subgraphs
// in the F model.
struct FactCheck {
  bool has_appearance = false;
  bool appearance_implies_subgraph = true;
  bool has_induced = false;
  bool induced_gives_appearance = true;
  bool ok() const {
    return appearance_implies_subgraph && induced_gives_appearance;
  }
};
// (1) a C-appearance implies h is a subgraph of g; (2) for every induced
// copy of h on V', deleting the arcs leaving V' yields a graph in which the
// same map is a C-appearance.
FactCheck CheckAppearanceFacts(const Digraph& g, const Configuration& c);

// All graphs on V(H) obtained by adding a set of frontier-tailed arcs, with
// frontier out-degree at most d. Labelled (not up to isomorphism); H first.
std::vector<PatternGraph> Closure(const Configuration& c, int d);

// All single-arc extensions used by the upwards-closure test: an arc from a
// developed vertex with out-degree < d to an existing non-neighbour (labels
// kept) or to one fresh frontier vertex.
std::vector<Configuration> UpwardSteps(const Configuration& c, int d);

bool IsUpwardsClosed(const ConfigurationFamily& fam, int d);

// Smallest upwards-closed family containing the seeds.
ConfigurationFamily UpwardClosure(const ConfigurationFamily& seeds, int d);

// Every F-model configuration on 1..max_size vertices with developed
// out-degrees <= d, one per label-preserving isomorphism class, ordered by
// size and then canonical form.
std::vector<Configuration> AllConfigurations(int max_size, int d);

// Text format: a graph block followed by "labels: D F ...". A family file
// starts with "configs" and separates members by "---".
Configuration ParseConfiguration(std::string_view text);
std::string SerializeConfiguration(const Configuration& c);
ConfigurationFamily ParseConfigurationFamily(std::string_view text);
std::string SerializeConfigurationFamily(const ConfigurationFamily& fam);
ConfigurationFamily ReadConfigurationFamilyFile(
    const std::filesystem::path& path);

}  // namespace bdt
