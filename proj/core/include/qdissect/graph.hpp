// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_GRAPH_HPP
#define QDISSECT_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qdissect {

using VertexId = std::int32_t;
using VertexWeight = std::int64_t;
using EdgeWeight = double;

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  EdgeWeight weight = 1.0;
};

/// How `WeightedGraph::from_edges` treats an edge listed more than once
/// (in either orientation).
enum class DuplicateEdges { Reject, KeepMax, Sum };

/// Undirected graph with positive integer vertex weights and positive real
/// edge weights, stored as a symmetric CSR adjacency with neighbor lists
/// sorted by vertex index. Immutable once built.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Builds a graph from an edge list. Self-loops are rejected, as are
  /// non-positive weights. An empty `vertex_weights` means unit weights.
  static WeightedGraph from_edges(std::size_t n, std::span<const Edge> edges,
                                  std::vector<VertexWeight> vertex_weights = {},
                                  DuplicateEdges duplicates = DuplicateEdges::Reject);

  std::size_t num_vertices() const { return vertex_weights_.size(); }
  std::size_t num_edges() const { return adjacency_.size() / 2; }

  VertexWeight vertex_weight(VertexId v) const { return vertex_weights_[static_cast<std::size_t>(v)]; }
  std::span<const VertexWeight> vertex_weights() const { return vertex_weights_; }
  VertexWeight total_vertex_weight() const { return total_vertex_weight_; }
  EdgeWeight total_edge_weight() const { return total_edge_weight_; }

  std::size_t degree(VertexId v) const {
    const auto i = static_cast<std::size_t>(v);
    return offsets_[i + 1] - offsets_[i];
  }
  std::span<const VertexId> neighbors(VertexId v) const;
  std::span<const EdgeWeight> neighbor_weights(VertexId v) const;

  /// Weight of edge {u, v}, or 0 when absent.
  EdgeWeight edge_weight(VertexId u, VertexId v) const;
  bool has_edge(VertexId u, VertexId v) const { return edge_weight(u, v) > 0.0; }

  /// Every edge once with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  EdgeWeight max_edge_weight() const;
  VertexWeight min_vertex_weight() const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
  std::vector<EdgeWeight> weights_;
  std::vector<VertexWeight> vertex_weights_;
  VertexWeight total_vertex_weight_ = 0;
  EdgeWeight total_edge_weight_ = 0.0;
};

bool operator==(const WeightedGraph& lhs, const WeightedGraph& rhs);

/// Subgraph induced on `vertices`; `to_parent[i]` is the parent id of local vertex i.
struct InducedSubgraph {
  WeightedGraph graph;
  std::vector<VertexId> to_parent;
};

InducedSubgraph induced_subgraph(const WeightedGraph& g, std::span<const VertexId> vertices);

/// Hop distances from `source`, -1 for unreachable vertices. Stops expanding
/// past `max_depth` when it is non-negative.
std::vector<int> bfs_distances(const WeightedGraph& g, VertexId source, int max_depth = -1);

/// Connected component label per vertex, labels numbered from 0 in order of
/// the smallest vertex they contain.
std::vector<int> connected_components(const WeightedGraph& g);

// ---------------------------------------------------------------------------
// File formats

enum class GraphFormat { Metis, EdgeList, MatrixMarket };

GraphFormat parse_graph_format(const std::string& name);
std::string to_string(GraphFormat format);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

WeightedGraph load_graph(std::istream& in, GraphFormat format);
WeightedGraph load_graph(const std::string& path, GraphFormat format);

/// Canonical METIS serialization: header "n m" plus fmt "11" when any vertex
/// or edge weight differs from 1. Non-integral edge weights are written in
/// shortest round-trip form.
void write_metis(const WeightedGraph& g, std::ostream& out);

// ---------------------------------------------------------------------------
// Ego-graph ranking

struct EgoRanking {
  int radius = 0;
  std::vector<VertexId> order;       // decreasing ego weight, ties by index
  std::vector<EdgeWeight> weights;   // ego weight per vertex id
};

/// Ranks vertices by the total edge weight of their radius-k ego graph
/// (the subgraph induced on all vertices within k hops). Requires k >= 1.
EgoRanking ego_ranking(const WeightedGraph& g, int radius);

// ---------------------------------------------------------------------------
// Multilevel coarsening

/// Graphs from finest (`graphs.front()`) to coarsest (`graphs.back()`);
/// `maps[k]` sends vertices of graphs[k] to vertices of graphs[k + 1].
struct CoarseningMap {
  std::vector<WeightedGraph> graphs;
  std::vector<std::vector<VertexId>> maps;
  bool target_reached = true;

  std::size_t levels() const { return maps.size(); }
  const WeightedGraph& fine() const { return graphs.front(); }
  const WeightedGraph& coarsest() const { return graphs.back(); }
  /// Composite map from the finest level to the coarsest.
  std::vector<VertexId> fine_to_coarse() const;
};

/// Heavy-edge matching contraction until at most `target_vertices` remain or
/// no edge is left to contract (then `target_reached` is false).
CoarseningMap coarsen(const WeightedGraph& g, std::size_t target_vertices, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Separators

/// Greedy vertex cover of the cut edges of `bits`: repeatedly takes the
/// endpoint covering the most uncovered cut edges (ties: lighter vertex, then
/// smaller index). Returned ids are sorted.
std::vector<VertexId> edge_cut_to_vertex_separator(const WeightedGraph& g,
                                                   std::span<const std::uint8_t> bits);

}  // namespace qdissect

#endif  // QDISSECT_GRAPH_HPP
