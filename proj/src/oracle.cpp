#include "bdt/oracle.hpp"

#include <algorithm>

#include "bdt/errors.hpp"

namespace bdt {

bool Disc::Contains(Vertex v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

bool Disc::Closed() const {
  return std::all_of(developed.begin(), developed.end(),
                     [](bool b) { return b; });
}

std::string TranscriptJson(const TranscriptEntry& e) {
  std::string s = "{\"op\":\"" + e.op + "\",\"vertex\":" +
                  std::to_string(e.vertex);
  if (e.radius) s += ",\"radius\":" + std::to_string(*e.radius);
  s += ",\"answer_size\":" + std::to_string(e.answer_size) + "}";
  return s;
}

Oracle::Oracle(const Digraph& g, bool record_transcript)
    : Oracle(g, g.model(), record_transcript) {}

Oracle::Oracle(const Digraph& g, Model model, bool record_transcript)
    : g_(&g), model_(model), record_(record_transcript) {
  if (model == Model::kFB && g.model() == Model::kF) {
    throw ConfigError("FB oracle needs a graph with bounded in-degree");
  }
  if (model == Model::kUndirected && g.model() != Model::kUndirected) {
    throw ConfigError("undirected oracle needs an undirected graph");
  }
}

void Oracle::CheckVertex(Vertex v) const {
  if (v < 0 || v >= g_->n()) {
    throw UsageError("query vertex " + std::to_string(v) + " out of range");
  }
}

NeighbourAnswer Oracle::VertexQuery(Vertex v) {
  CheckVertex(v);
  ++vertex_queries_;
  ++charged_queries_;
  NeighbourAnswer a;
  auto out = g_->out_neighbours(v);
  a.out.assign(out.begin(), out.end());
  if (model_ == Model::kFB) {
    auto in = g_->in_neighbours(v);
    a.in.assign(in.begin(), in.end());
  }
  if (record_) {
    transcript_.push_back({"vertex", v, std::nullopt,
                           static_cast<int>(a.out.size() + a.in.size())});
  }
  return a;
}

Disc Oracle::DiscQuery(Vertex v, int r) {
  CheckVertex(v);
  if (r < 0) throw UsageError("negative disc radius");
  ++disc_queries_;
  Disc disc;
  disc.center = v;
  disc.radius = r;
  if (mark_.size() != static_cast<std::size_t>(g_->n())) mark_.assign(g_->n(), 0);
  ++stamp_;
  mark_[v] = stamp_;
  std::vector<Vertex> seen{v};
  std::vector<Vertex> expanded;
  std::vector<Vertex> layer{v};
  for (int depth = 0; depth < r && !layer.empty(); ++depth) {
    std::sort(layer.begin(), layer.end());
    std::vector<Vertex> next;
    for (Vertex x : layer) {
      ++charged_queries_;
      expanded.push_back(x);
      auto visit = [&](Vertex y) {
        if (mark_[y] != stamp_) {
          mark_[y] = stamp_;
          seen.push_back(y);
          next.push_back(y);
        }
      };
      for (Vertex y : g_->out_neighbours(x)) {
        visit(y);
        disc.edges.push_back({x, y});
      }
      if (model_ != Model::kF) {
        for (Vertex y : g_->in_neighbours(x)) {
          visit(y);
          disc.edges.push_back({y, x});
        }
      }
    }
    layer = std::move(next);
  }
  std::sort(seen.begin(), seen.end());
  std::sort(expanded.begin(), expanded.end());
  disc.vertices = seen;
  disc.developed.resize(seen.size());
  for (std::size_t i = 0; i < seen.size(); ++i) {
    disc.developed[i] =
        std::binary_search(expanded.begin(), expanded.end(), seen[i]);
  }
  std::sort(disc.edges.begin(), disc.edges.end());
  disc.edges.erase(std::unique(disc.edges.begin(), disc.edges.end()),
                   disc.edges.end());
  if (record_) {
    transcript_.push_back(
        {"disc", v, r, static_cast<int>(disc.vertices.size())});
  }
  return disc;
}

int DiscoveredGraph::Local(Vertex v) const {
  auto it = std::lower_bound(original.begin(), original.end(), v);
  if (it == original.end() || *it != v) return -1;
  return static_cast<int>(it - original.begin());
}

bool DiscoveredGraph::Known(Vertex x, Vertex y) const {
  if (model == Model::kF) return developed[x];
  return developed[x] || developed[y];
}

std::vector<Vertex> DiscoveredGraph::ToOriginal(
    const std::vector<Vertex>& local) const {
  std::vector<Vertex> out;
  out.reserve(local.size());
  for (Vertex x : local) out.push_back(original[x]);
  return out;
}

DiscoveredGraph UnionView(const std::vector<Disc>& discs, Model model) {
  DiscoveredGraph view;
  view.model = model;
  for (const Disc& d : discs) {
    view.original.insert(view.original.end(), d.vertices.begin(),
                         d.vertices.end());
  }
  std::sort(view.original.begin(), view.original.end());
  view.original.erase(std::unique(view.original.begin(), view.original.end()),
                      view.original.end());
  view.developed.assign(view.original.size(), false);
  std::vector<Edge> edges;
  for (const Disc& d : discs) {
    for (std::size_t i = 0; i < d.vertices.size(); ++i) {
      if (d.developed[i]) view.developed[view.Local(d.vertices[i])] = true;
    }
    for (const Edge& e : d.edges) {
      edges.push_back({view.Local(e.from), view.Local(e.to)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  view.graph =
      Digraph::Unbounded(static_cast<int>(view.original.size()), std::move(edges));
  return view;
}

}  // namespace bdt
