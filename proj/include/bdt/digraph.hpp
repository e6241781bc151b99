#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bdt {

// Access model. Also decides which degree bounds a Digraph must satisfy:
//   kF          out-degree <= d, in-degree unbounded
//   kFB         out-degree <= d and in-degree <= d
//   kUndirected symmetric arc set (each edge stored as an anti-parallel pair),
//               degree <= d
enum class Model { kF, kFB, kUndirected };

std::string_view ModelName(Model model);
Model ParseModel(std::string_view name);

using Vertex = int;

struct Edge {
  Vertex from = 0;
  Vertex to = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Immutable adjacency-list digraph on vertices 0..n-1 with a declared degree
// bound. Out- and in-lists are sorted and always stored; restricting what a
// tester may see is the oracle's job.
class Digraph {
 public:
  Digraph() = default;

  // Validates: endpoints in range, no self-loops, no duplicate arcs, the
  // model's degree bounds and (for kUndirected) symmetry. Throws ConfigError.
  Digraph(int n, int d, Model model, std::vector<Edge> edges);

  // Each pair {u, v} becomes the arcs (u,v) and (v,u).
  static Digraph FromUndirected(int n, int d,
                                std::span<const std::pair<Vertex, Vertex>> edges);

  // Structural graph with no degree bound (patterns, discovered views, search
  // states). Still rejects self-loops, duplicates and bad endpoints.
  static Digraph Unbounded(int n, std::vector<Edge> edges);

  int n() const { return n_; }
  int d() const { return d_; }
  Model model() const { return model_; }

  std::span<const Vertex> out_neighbours(Vertex v) const;
  std::span<const Vertex> in_neighbours(Vertex v) const;
  int out_degree(Vertex v) const;
  int in_degree(Vertex v) const;
  bool has_edge(Vertex from, Vertex to) const;

  // Number of stored arcs. An undirected edge counts twice.
  int num_arcs() const { return static_cast<int>(out_targets_.size()); }
  std::vector<Edge> edges() const;

  int max_out_degree() const;
  int max_in_degree() const;

  // Same arcs, new bound/model; validated like the main constructor.
  Digraph WithModel(int d, Model model) const;

  // Vertex v of this graph becomes perm[v].
  Digraph Relabelled(std::span<const Vertex> perm) const;

  // Induced subgraph on `vertices` (kept in the given order: vertices[i]
  // becomes i). Result is unbounded.
  Digraph Induced(std::span<const Vertex> vertices) const;

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.out_targets_ == b.out_targets_ &&
           a.out_offsets_ == b.out_offsets_;
  }

 private:
  struct UncheckedTag {};
  Digraph(UncheckedTag, int n, int d, Model model, std::vector<Edge> edges);
  void CheckVertex(Vertex v) const;
  void ValidateBounds() const;

  int n_ = 0;
  int d_ = 0;
  Model model_ = Model::kF;
  std::vector<int> out_offsets_{0};
  std::vector<Vertex> out_targets_;
  std::vector<int> in_offsets_{0};
  std::vector<Vertex> in_sources_;
};

// A small forbidden pattern H. Patterns are model independent; they carry no
// degree bound of their own.
class PatternGraph {
 public:
  PatternGraph() = default;
  PatternGraph(int n, std::vector<Edge> edges);
  explicit PatternGraph(const Digraph& g);

  const Digraph& graph() const { return graph_; }
  int size() const { return graph_.n(); }
  bool edgeless() const { return graph_.num_arcs() == 0; }

  friend bool operator==(const PatternGraph&, const PatternGraph&) = default;

 private:
  Digraph graph_;
};

// Text format:
//   n d model          (model in {F, FB, U})
//   v: u1 u2 ...       (out-neighbours, one line per vertex)
// Blank lines and '#' comments are ignored; missing vertex lines mean no
// out-neighbours.
std::string SerializeGraph(const Digraph& g);
Digraph ParseGraph(std::string_view text);

Digraph ReadGraphFile(const std::filesystem::path& path);
void WriteGraphFile(const std::filesystem::path& path, const Digraph& g);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

// Splits text into lines with comments stripped and whitespace trimmed, keeping
// the 1-based source line number. Blank lines are dropped.
struct SourceLine {
  int number;
  std::string text;
};
std::vector<SourceLine> SplitLines(std::string_view text);

// Parses a graph from already-split lines [begin, end).
Digraph ParseGraphLines(std::span<const SourceLine> lines);

}  // namespace bdt
