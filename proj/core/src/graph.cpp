// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

#include "qdissect/random.hpp"

namespace qdissect {

namespace {

void check_vertex(std::size_t n, VertexId v) {
  if (v < 0 || static_cast<std::size_t>(v) >= n)
    throw std::out_of_range("vertex id " + std::to_string(v) + " out of range for " +
                            std::to_string(n) + " vertices");
}

}  // namespace

WeightedGraph WeightedGraph::from_edges(std::size_t n, std::span<const Edge> edges,
                                        std::vector<VertexWeight> vertex_weights,
                                        DuplicateEdges duplicates) {
  if (vertex_weights.empty()) vertex_weights.assign(n, 1);
  if (vertex_weights.size() != n)
    throw std::invalid_argument("vertex weight count does not match vertex count");
  for (const auto w : vertex_weights)
    if (w <= 0) throw std::invalid_argument("vertex weights must be positive");

  // Orient every edge as (min, max), then sort so duplicates are adjacent.
  std::vector<Edge> canon;
  canon.reserve(edges.size());
  for (const auto& e : edges) {
    check_vertex(n, e.u);
    check_vertex(n, e.v);
    if (e.u == e.v) throw std::invalid_argument("self-loop on vertex " + std::to_string(e.u));
    if (!(e.weight > 0.0)) throw std::invalid_argument("edge weights must be positive");
    canon.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.weight});
  }
  std::stable_sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  std::vector<Edge> merged;
  merged.reserve(canon.size());
  for (const auto& e : canon) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v) {
      switch (duplicates) {
        case DuplicateEdges::Reject:
          throw std::invalid_argument("duplicate edge {" + std::to_string(e.u) + ", " +
                                      std::to_string(e.v) + "}");
        case DuplicateEdges::KeepMax:
          merged.back().weight = std::max(merged.back().weight, e.weight);
          break;
        case DuplicateEdges::Sum:
          merged.back().weight += e.weight;
          break;
      }
      continue;
    }
    merged.push_back(e);
  }

  WeightedGraph g;
  g.vertex_weights_ = std::move(vertex_weights);
  g.total_vertex_weight_ =
      std::accumulate(g.vertex_weights_.begin(), g.vertex_weights_.end(), VertexWeight{0});

  std::vector<std::size_t> deg(n, 0);
  for (const auto& e : merged) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adjacency_.resize(g.offsets_[n]);
  g.weights_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  std::vector<std::vector<std::pair<VertexId, EdgeWeight>>> rows(n);
  for (const auto& e : merged) {
    rows[static_cast<std::size_t>(e.u)].emplace_back(e.v, e.weight);
    rows[static_cast<std::size_t>(e.v)].emplace_back(e.u, e.weight);
    g.total_edge_weight_ += e.weight;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = rows[i];
    std::sort(row.begin(), row.end());
    for (const auto& [v, w] : row) {
      g.adjacency_[fill[i]] = v;
      g.weights_[fill[i]] = w;
      ++fill[i];
    }
  }
  return g;
}

std::span<const VertexId> WeightedGraph::neighbors(VertexId v) const {
  const auto i = static_cast<std::size_t>(v);
  return std::span<const VertexId>(adjacency_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

std::span<const EdgeWeight> WeightedGraph::neighbor_weights(VertexId v) const {
  const auto i = static_cast<std::size_t>(v);
  return std::span<const EdgeWeight>(weights_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

EdgeWeight WeightedGraph::edge_weight(VertexId u, VertexId v) const {
  const auto nbrs = neighbors(u);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return neighbor_weights(u)[static_cast<std::size_t>(it - nbrs.begin())];
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (VertexId u = 0; u < static_cast<VertexId>(num_vertices()); ++u) {
    const auto nbrs = neighbors(u);
    const auto ws = neighbor_weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k)
      if (nbrs[k] > u) out.push_back({u, nbrs[k], ws[k]});
  }
  return out;
}

EdgeWeight WeightedGraph::max_edge_weight() const {
  return weights_.empty() ? 0.0 : *std::max_element(weights_.begin(), weights_.end());
}

VertexWeight WeightedGraph::min_vertex_weight() const {
  return vertex_weights_.empty()
             ? 0
             : *std::min_element(vertex_weights_.begin(), vertex_weights_.end());
}

bool operator==(const WeightedGraph& lhs, const WeightedGraph& rhs) {
  if (lhs.num_vertices() != rhs.num_vertices() || lhs.num_edges() != rhs.num_edges()) return false;
  if (!std::ranges::equal(lhs.vertex_weights(), rhs.vertex_weights())) return false;
  for (VertexId v = 0; v < static_cast<VertexId>(lhs.num_vertices()); ++v) {
    if (!std::ranges::equal(lhs.neighbors(v), rhs.neighbors(v))) return false;
    if (!std::ranges::equal(lhs.neighbor_weights(v), rhs.neighbor_weights(v))) return false;
  }
  return true;
}

InducedSubgraph induced_subgraph(const WeightedGraph& g, std::span<const VertexId> vertices) {
  std::vector<VertexId> local(g.num_vertices(), -1);
  InducedSubgraph sub;
  sub.to_parent.assign(vertices.begin(), vertices.end());
  std::vector<VertexWeight> vw;
  vw.reserve(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    check_vertex(g.num_vertices(), vertices[i]);
    if (local[static_cast<std::size_t>(vertices[i])] != -1)
      throw std::invalid_argument("induced_subgraph: repeated vertex");
    local[static_cast<std::size_t>(vertices[i])] = static_cast<VertexId>(i);
    vw.push_back(g.vertex_weight(vertices[i]));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto nbrs = g.neighbors(vertices[i]);
    const auto ws = g.neighbor_weights(vertices[i]);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const VertexId j = local[static_cast<std::size_t>(nbrs[k])];
      if (j > static_cast<VertexId>(i)) edges.push_back({static_cast<VertexId>(i), j, ws[k]});
    }
  }
  sub.graph = WeightedGraph::from_edges(vertices.size(), edges, std::move(vw));
  return sub;
}

std::vector<int> bfs_distances(const WeightedGraph& g, VertexId source, int max_depth) {
  check_vertex(g.num_vertices(), source);
  std::vector<int> dist(g.num_vertices(), -1);
  std::queue<VertexId> frontier;
  dist[static_cast<std::size_t>(source)] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const VertexId u = frontier.front();
    frontier.pop();
    const int du = dist[static_cast<std::size_t>(u)];
    if (max_depth >= 0 && du >= max_depth) continue;
    for (const VertexId w : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(w)] == -1) {
        dist[static_cast<std::size_t>(w)] = du + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

std::vector<int> connected_components(const WeightedGraph& g) {
  std::vector<int> label(g.num_vertices(), -1);
  int next = 0;
  for (VertexId s = 0; s < static_cast<VertexId>(g.num_vertices()); ++s) {
    if (label[static_cast<std::size_t>(s)] != -1) continue;
    std::vector<VertexId> stack{s};
    label[static_cast<std::size_t>(s)] = next;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      for (const VertexId w : g.neighbors(u)) {
        if (label[static_cast<std::size_t>(w)] == -1) {
          label[static_cast<std::size_t>(w)] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return label;
}

EgoRanking ego_ranking(const WeightedGraph& g, int radius) {
  if (radius < 1) throw std::invalid_argument("ego_ranking requires radius >= 1");
  const std::size_t n = g.num_vertices();
  EgoRanking ranking;
  ranking.radius = radius;
  ranking.weights.assign(n, 0.0);

  std::vector<int> dist(n, -1);
  std::vector<VertexId> ball;
  for (VertexId center = 0; center < static_cast<VertexId>(n); ++center) {
    ball.clear();
    ball.push_back(center);
    dist[static_cast<std::size_t>(center)] = 0;
    for (std::size_t head = 0; head < ball.size(); ++head) {
      const VertexId u = ball[head];
      if (dist[static_cast<std::size_t>(u)] == radius) continue;
      for (const VertexId w : g.neighbors(u)) {
        if (dist[static_cast<std::size_t>(w)] == -1) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          ball.push_back(w);
        }
      }
    }
    // Sum in ascending vertex order so equal vertex sets give bit-equal sums.
    std::sort(ball.begin(), ball.end());
    EdgeWeight total = 0.0;
    for (const VertexId u : ball) {
      const auto nbrs = g.neighbors(u);
      const auto ws = g.neighbor_weights(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k)
        if (nbrs[k] > u && dist[static_cast<std::size_t>(nbrs[k])] != -1) total += ws[k];
    }
    ranking.weights[static_cast<std::size_t>(center)] = total;
    for (const VertexId u : ball) dist[static_cast<std::size_t>(u)] = -1;
  }

  ranking.order.resize(n);
  std::iota(ranking.order.begin(), ranking.order.end(), 0);
  std::stable_sort(ranking.order.begin(), ranking.order.end(), [&](VertexId a, VertexId b) {
    return ranking.weights[static_cast<std::size_t>(a)] > ranking.weights[static_cast<std::size_t>(b)];
  });
  return ranking;
}

std::vector<VertexId> CoarseningMap::fine_to_coarse() const {
  std::vector<VertexId> composite(fine().num_vertices());
  std::iota(composite.begin(), composite.end(), 0);
  for (const auto& map : maps)
    for (auto& c : composite) c = map[static_cast<std::size_t>(c)];
  return composite;
}

namespace {

// One round of heavy-edge matching. Returns the fine->coarse map and the
// number of coarse vertices; stops contracting once `target` is hit.
std::pair<std::vector<VertexId>, std::size_t> match_round(const WeightedGraph& g,
                                                          std::size_t target, Rng& rng) {
  const std::size_t n = g.num_vertices();
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);

  std::vector<VertexId> mate(n, -1);
  std::size_t count = n;
  for (const VertexId u : order) {
    if (count <= target) break;
    if (mate[static_cast<std::size_t>(u)] != -1) continue;
    const auto nbrs = g.neighbors(u);
    const auto ws = g.neighbor_weights(u);
    VertexId best = -1;
    EdgeWeight best_w = 0.0;
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      // Neighbors are sorted, so strict > keeps the smallest index on ties.
      if (mate[static_cast<std::size_t>(nbrs[k])] == -1 && ws[k] > best_w) {
        best = nbrs[k];
        best_w = ws[k];
      }
    }
    if (best == -1) continue;
    mate[static_cast<std::size_t>(u)] = best;
    mate[static_cast<std::size_t>(best)] = u;
    --count;
  }

  std::vector<VertexId> to_coarse(n, -1);
  VertexId next = 0;
  for (VertexId u = 0; u < static_cast<VertexId>(n); ++u) {
    if (to_coarse[static_cast<std::size_t>(u)] != -1) continue;
    to_coarse[static_cast<std::size_t>(u)] = next;
    if (const VertexId m = mate[static_cast<std::size_t>(u)]; m != -1)
      to_coarse[static_cast<std::size_t>(m)] = next;
    ++next;
  }
  return {std::move(to_coarse), static_cast<std::size_t>(next)};
}

WeightedGraph contract(const WeightedGraph& g, std::span<const VertexId> to_coarse,
                       std::size_t coarse_n) {
  std::vector<VertexWeight> vw(coarse_n, 0);
  for (VertexId u = 0; u < static_cast<VertexId>(g.num_vertices()); ++u)
    vw[static_cast<std::size_t>(to_coarse[static_cast<std::size_t>(u)])] += g.vertex_weight(u);
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    const VertexId a = to_coarse[static_cast<std::size_t>(e.u)];
    const VertexId b = to_coarse[static_cast<std::size_t>(e.v)];
    if (a != b) edges.push_back({a, b, e.weight});
  }
  return WeightedGraph::from_edges(coarse_n, edges, std::move(vw), DuplicateEdges::Sum);
}

}  // namespace

CoarseningMap coarsen(const WeightedGraph& g, std::size_t target_vertices, std::uint64_t seed) {
  if (target_vertices < 2 || target_vertices > g.num_vertices())
    throw std::invalid_argument("coarsen: target must satisfy 2 <= target <= n");
  CoarseningMap map;
  map.graphs.push_back(g);
  Rng rng(seed);
  while (map.coarsest().num_vertices() > target_vertices) {
    const auto& current = map.coarsest();
    auto [to_coarse, coarse_n] = match_round(current, target_vertices, rng);
    if (coarse_n == current.num_vertices()) {
      map.target_reached = false;
      break;
    }
    auto coarse = contract(current, to_coarse, coarse_n);
    map.maps.push_back(std::move(to_coarse));
    map.graphs.push_back(std::move(coarse));
  }
  return map;
}

std::vector<VertexId> edge_cut_to_vertex_separator(const WeightedGraph& g,
                                                   std::span<const std::uint8_t> bits) {
  const std::size_t n = g.num_vertices();
  if (bits.size() != n) throw std::invalid_argument("partition size does not match graph");

  std::vector<std::size_t> uncovered(n, 0);
  std::vector<char> covered_vertex(n, 0);
  for (const auto& e : g.edges()) {
    if (bits[static_cast<std::size_t>(e.u)] != bits[static_cast<std::size_t>(e.v)]) {
      ++uncovered[static_cast<std::size_t>(e.u)];
      ++uncovered[static_cast<std::size_t>(e.v)];
    }
  }
  // Ordered by (most uncovered edges, lighter, smaller id).
  using Key = std::tuple<std::int64_t, VertexWeight, VertexId>;
  std::set<Key> queue;
  auto key = [&](VertexId v) {
    return Key{-static_cast<std::int64_t>(uncovered[static_cast<std::size_t>(v)]), g.vertex_weight(v), v};
  };
  for (VertexId v = 0; v < static_cast<VertexId>(n); ++v)
    if (uncovered[static_cast<std::size_t>(v)] > 0) queue.insert(key(v));

  std::vector<VertexId> separator;
  while (!queue.empty()) {
    const VertexId v = std::get<2>(*queue.begin());
    queue.erase(queue.begin());
    separator.push_back(v);
    covered_vertex[static_cast<std::size_t>(v)] = 1;
    uncovered[static_cast<std::size_t>(v)] = 0;
    for (const VertexId u : g.neighbors(v)) {
      const auto ui = static_cast<std::size_t>(u);
      if (covered_vertex[ui] || bits[ui] == bits[static_cast<std::size_t>(v)]) continue;
      queue.erase(key(u));
      if (--uncovered[ui] > 0) queue.insert(key(u));
    }
  }
  std::sort(separator.begin(), separator.end());
  return separator;
}

}  // namespace qdissect
