#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bdt/digraph.hpp"

namespace bdt {

// Answer to a neighbourhood query. F: out only. FB: out and in.
// Undirected: out holds the neighbours and in stays empty.
struct NeighbourAnswer {
  std::vector<Vertex> out;
  std::vector<Vertex> in;
};

// An r-disc as revealed by the oracle. Vertex lists are ascending original
// ids; developed[i] says whether vertices[i] was expanded. `edges` are the
// arcs the model reveals: out-arcs of developed vertices, plus in-arcs of
// developed vertices in FB and undirected.
struct Disc {
  Vertex center = 0;
  int radius = 0;
  std::vector<Vertex> vertices;
  std::vector<bool> developed;
  std::vector<Edge> edges;

  bool Contains(Vertex v) const;
  // True iff every vertex was expanded, i.e. the reachable set is closed.
  bool Closed() const;
};

struct TranscriptEntry {
  std::string op;  // "vertex" or "disc"
  Vertex vertex = 0;
  std::optional<int> radius;
  int answer_size = 0;
};

std::string TranscriptJson(const TranscriptEntry& entry);

// Query-counting gateway to a hidden graph. Single-threaded; each trial owns
// its own Oracle over a shared immutable Digraph.
class Oracle {
 public:
  // The oracle model defaults to the graph's model. An F oracle may wrap any
  // graph; FB needs an FB or undirected graph; undirected needs undirected.
  explicit Oracle(const Digraph& g, bool record_transcript = false);
  Oracle(const Digraph& g, Model model, bool record_transcript = false);

  int n() const { return g_->n(); }
  int d() const { return g_->d(); }
  Model model() const { return model_; }

  NeighbourAnswer VertexQuery(Vertex v);

  // F: forward BFS; FB and undirected: BFS ignoring direction. Vertices at
  // distance < r are expanded, each costing one charged query. Layers are
  // expanded in ascending id order.
  Disc DiscQuery(Vertex v, int r);

  long long vertex_queries() const { return vertex_queries_; }
  long long disc_queries() const { return disc_queries_; }
  long long charged_queries() const { return charged_queries_; }
  const std::vector<TranscriptEntry>& transcript() const { return transcript_; }

 private:
  void CheckVertex(Vertex v) const;

  const Digraph* g_;
  Model model_;
  bool record_;
  long long vertex_queries_ = 0;
  long long disc_queries_ = 0;
  long long charged_queries_ = 0;
  std::vector<TranscriptEntry> transcript_;
  std::vector<unsigned> mark_;
  unsigned stamp_ = 0;
};

// Everything a tester has seen: a compact relabelling of the discovered
// vertices (local i is original[i], ascending) with developed flags.
struct DiscoveredGraph {
  Digraph graph;
  std::vector<Vertex> original;
  std::vector<bool> developed;
  Model model = Model::kF;

  // Local id of an original vertex, or -1.
  int Local(Vertex v) const;
  // Whether the presence or absence of the arc (x, y) (local ids) is known.
  bool Known(Vertex x, Vertex y) const;
  std::vector<Vertex> ToOriginal(const std::vector<Vertex>& local) const;
};

DiscoveredGraph UnionView(const std::vector<Disc>& discs, Model model);

}  // namespace bdt
