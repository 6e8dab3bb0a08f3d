// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/dissect.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "qdissect/random.hpp"
#include "qdissect/refine.hpp"

namespace qdissect {

SparsePattern SparsePattern::from_entries(std::size_t n, std::span<const std::pair<VertexId, VertexId>> entries) {
  std::vector<std::vector<VertexId>> rows(n);
  for (const auto& [i, j] : entries) {
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n)
      throw std::out_of_range("pattern entry out of range");
    rows[static_cast<std::size_t>(i)].push_back(j);
    rows[static_cast<std::size_t>(j)].push_back(i);
  }
  SparsePattern p;
  p.offsets_.assign(1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    if (!std::binary_search(r.begin(), r.end(), static_cast<VertexId>(i))) {
      r.insert(std::lower_bound(r.begin(), r.end(), static_cast<VertexId>(i)), static_cast<VertexId>(i));
      ++p.inserted_diagonals_;
    }
    p.indices_.insert(p.indices_.end(), r.begin(), r.end());
    p.offsets_.push_back(p.indices_.size());
  }
  return p;
}

SparsePattern SparsePattern::from_graph(const WeightedGraph& g) {
  std::vector<std::pair<VertexId, VertexId>> entries;
  entries.reserve(g.num_edges() + g.num_vertices());
  for (const auto& e : g.edges()) entries.emplace_back(e.u, e.v);
  for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) entries.emplace_back(v, v);
  return from_entries(g.num_vertices(), entries);
}

std::span<const VertexId> SparsePattern::row(VertexId i) const {
  const auto k = static_cast<std::size_t>(i);
  return std::span<const VertexId>(indices_).subspan(offsets_[k], offsets_[k + 1] - offsets_[k]);
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  return from_order(std::move(order));
}

Permutation Permutation::from_order(std::vector<VertexId> order) {
  Permutation p;
  p.new_of_old_.assign(order.size(), -1);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const VertexId old = order[k];
    if (old < 0 || static_cast<std::size_t>(old) >= order.size() || p.new_of_old_[static_cast<std::size_t>(old)] != -1)
      throw std::invalid_argument("order is not a permutation");
    p.new_of_old_[static_cast<std::size_t>(old)] = static_cast<VertexId>(k);
  }
  p.old_of_new_ = std::move(order);
  return p;
}

Permutation Permutation::from_images(std::vector<VertexId> images) {
  std::vector<VertexId> order(images.size(), -1);
  for (std::size_t old = 0; old < images.size(); ++old) {
    const VertexId k = images[old];
    if (k < 0 || static_cast<std::size_t>(k) >= images.size() || order[static_cast<std::size_t>(k)] != -1)
      throw std::invalid_argument("images do not form a permutation");
    order[static_cast<std::size_t>(k)] = static_cast<VertexId>(old);
  }
  return from_order(std::move(order));
}

Permutation Permutation::inverse() const { return from_order(new_of_old_); }

namespace {

void check_sizes(const SparsePattern& pattern, const Permutation& perm) {
  if (pattern.size() != perm.size()) throw std::invalid_argument("pattern and permutation sizes differ");
}

}  // namespace

std::vector<VertexId> elimination_tree(const SparsePattern& pattern, const Permutation& perm) {
  check_sizes(pattern, perm);
  const std::size_t n = pattern.size();
  std::vector<VertexId> parent(n, -1);
  std::vector<VertexId> ancestor(n, -1);
  for (VertexId k = 0; k < static_cast<VertexId>(n); ++k) {
    for (const VertexId old : pattern.row(perm.old_index(k))) {
      VertexId i = perm.new_index(old);
      while (i != -1 && i < k) {
        const VertexId next = ancestor[static_cast<std::size_t>(i)];
        ancestor[static_cast<std::size_t>(i)] = k;
        if (next == -1) parent[static_cast<std::size_t>(i)] = k;
        i = next;
      }
    }
  }
  return parent;
}

std::vector<std::uint64_t> factor_column_counts(const SparsePattern& pattern, const Permutation& perm) {
  const auto parent = elimination_tree(pattern, perm);
  const std::size_t n = pattern.size();
  std::vector<std::uint64_t> counts(n, 1);
  std::vector<VertexId> mark(n, -1);
  // Row k of L is the union of etree paths from each A(k, i), i < k, up to k.
  for (VertexId k = 0; k < static_cast<VertexId>(n); ++k) {
    mark[static_cast<std::size_t>(k)] = k;
    for (const VertexId old : pattern.row(perm.old_index(k))) {
      VertexId j = perm.new_index(old);
      if (j >= k) continue;
      while (mark[static_cast<std::size_t>(j)] != k) {
        ++counts[static_cast<std::size_t>(j)];
        mark[static_cast<std::size_t>(j)] = k;
        j = parent[static_cast<std::size_t>(j)];
      }
    }
  }
  return counts;
}

MeritFactors symbolic_factorize(const SparsePattern& pattern, const Permutation& perm) {
  MeritFactors m;
  for (const auto c : factor_column_counts(pattern, perm)) {
    m.nnz_factor += c;
    m.ops += c * c;
  }
  return m;
}

std::vector<VertexId> minimum_degree_order(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::set<VertexId>> adj(n);
  for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
    const auto nbrs = g.neighbors(v);
    adj[static_cast<std::size_t>(v)].insert(nbrs.begin(), nbrs.end());
  }
  std::set<std::pair<std::size_t, VertexId>> queue;
  for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) queue.insert({adj[static_cast<std::size_t>(v)].size(), v});

  std::vector<VertexId> order;
  order.reserve(n);
  while (!queue.empty()) {
    const VertexId v = queue.begin()->second;
    queue.erase(queue.begin());
    order.push_back(v);
    auto nbrs = std::move(adj[static_cast<std::size_t>(v)]);
    adj[static_cast<std::size_t>(v)].clear();
    for (const VertexId u : nbrs) {
      auto& au = adj[static_cast<std::size_t>(u)];
      queue.erase({au.size(), u});
      au.erase(v);
      for (const VertexId w : nbrs)
        if (w != u) au.insert(w);
      queue.insert({au.size(), u});
    }
  }
  return order;
}

namespace {

// Moves separator vertices that touch only one part into that part (the
// lighter part when they touch neither), repeating until no vertex moves.
void trim_separator(const WeightedGraph& g, Partition& split, std::vector<char>& in_sep) {
  std::array<VertexWeight, 2> weight{0, 0};
  for (std::size_t v = 0; v < in_sep.size(); ++v)
    if (!in_sep[v]) weight[split.bits[v]] += g.vertex_weight(static_cast<VertexId>(v));
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t v = 0; v < in_sep.size(); ++v) {
      if (!in_sep[v]) continue;
      std::array<bool, 2> touches{false, false};
      for (const VertexId u : g.neighbors(static_cast<VertexId>(v)))
        if (!in_sep[static_cast<std::size_t>(u)]) touches[split.bits[static_cast<std::size_t>(u)]] = true;
      if (touches[0] && touches[1]) continue;
      const int side = touches[0] ? 0 : touches[1] ? 1 : (weight[1] < weight[0] ? 1 : 0);
      split.bits[v] = static_cast<std::uint8_t>(side);
      weight[static_cast<std::size_t>(side)] += g.vertex_weight(static_cast<VertexId>(v));
      in_sep[v] = 0;
      moved = true;
    }
  }
}

class Dissector {
 public:
  Dissector(const WeightedGraph& g, const Bipartitioner& partitioner, const DissectionConfig& cfg)
      : graph_(g), partitioner_(partitioner), cfg_(cfg) {}

  DissectionTree run() {
    std::vector<VertexId> all(graph_.num_vertices());
    std::iota(all.begin(), all.end(), 0);
    tree_.levels = cfg_.levels;
    build(std::move(all), 0);
    return std::move(tree_);
  }

 private:
  int build(std::vector<VertexId> vertices, std::size_t depth) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    tree_.nodes.back().vertices = vertices;
    tree_.nodes.back().depth = depth;

    const bool root_fixed = index == 0 && cfg_.root_split.has_value();
    if (depth >= cfg_.levels || vertices.size() < 2) return index;
    const auto sub = induced_subgraph(graph_, vertices);
    if (sub.graph.num_edges() == 0 && !root_fixed) return index;

    const std::uint64_t seed = derive_seed(cfg_.seed, {static_cast<std::uint64_t>(index)});
    Partition split;
    if (root_fixed) {
      if (cfg_.root_split->size() != graph_.num_vertices())
        throw std::invalid_argument("root split length does not match the graph");
      split = make_partition(sub.graph, *cfg_.root_split);
    } else {
      const std::size_t target = std::clamp<std::size_t>(cfg_.coarse_target, 2, vertices.size());
      const auto levels = coarsen(sub.graph, target, seed);
      const auto coarse = partitioner_.bipartition(levels.coarsest(), seed);
      split = project_partition(levels, coarse);
      if (cfg_.refine_projection && levels.levels() > 0) {
        FmConfig fm;
        fm.epsilon = 2.0 * cfg_.nu;
        fm.seed = seed;
        split = fm_refine(sub.graph, split, fm);
      }
    }

    const auto separator = edge_cut_to_vertex_separator(sub.graph, split.bits);
    std::vector<char> in_sep(vertices.size(), 0);
    for (const auto s : separator) in_sep[static_cast<std::size_t>(s)] = 1;
    trim_separator(sub.graph, split, in_sep);
    std::vector<VertexId> sep_ids, part0, part1;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const VertexId id = sub.to_parent[i];
      if (in_sep[i])
        sep_ids.push_back(id);
      else
        (split.bits[i] ? part1 : part0).push_back(id);
    }
    {
      auto& node = tree_.nodes[static_cast<std::size_t>(index)];
      node.separator = sep_ids;
      node.part0 = part0;
      node.part1 = part1;
      node.cut_weight = split.cut_weight;
      node.imbalance = split.imbalance;
    }
    const int c0 = part0.empty() ? -1 : build(std::move(part0), depth + 1);
    const int c1 = part1.empty() ? -1 : build(std::move(part1), depth + 1);
    tree_.nodes[static_cast<std::size_t>(index)].child0 = c0;
    tree_.nodes[static_cast<std::size_t>(index)].child1 = c1;
    return index;
  }

  const WeightedGraph& graph_;
  const Bipartitioner& partitioner_;
  const DissectionConfig& cfg_;
  DissectionTree tree_;
};

void append_order(const WeightedGraph& g, const DissectionTree& tree, int index, std::vector<VertexId>& out) {
  const auto& node = tree.nodes[static_cast<std::size_t>(index)];
  if (node.is_leaf()) {
    const auto sub = induced_subgraph(g, node.vertices);
    for (const VertexId local : minimum_degree_order(sub.graph)) out.push_back(sub.to_parent[static_cast<std::size_t>(local)]);
    return;
  }
  if (node.child0 >= 0) append_order(g, tree, node.child0, out);
  if (node.child1 >= 0) append_order(g, tree, node.child1, out);
  out.insert(out.end(), node.separator.begin(), node.separator.end());
}

}  // namespace

DissectionResult nested_dissection(const WeightedGraph& g, const Bipartitioner& partitioner,
                                   const DissectionConfig& cfg) {
  if (cfg.levels < 1) throw std::invalid_argument("nested dissection needs at least one level");
  if (g.num_vertices() == 0) throw std::invalid_argument("nested dissection of an empty graph");
  DissectionResult result;
  result.tree = Dissector(g, partitioner, cfg).run();
  std::vector<VertexId> order;
  order.reserve(g.num_vertices());
  append_order(g, result.tree, 0, order);
  result.permutation = Permutation::from_order(std::move(order));
  return result;
}

namespace {

VertexId farthest(const WeightedGraph& g, VertexId start, int& eccentricity) {
  const auto dist = bfs_distances(g, start);
  VertexId best = start;
  eccentricity = 0;
  for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
    if (dist[static_cast<std::size_t>(v)] > eccentricity) {
      eccentricity = dist[static_cast<std::size_t>(v)];
      best = v;
    }
  }
  return best;
}

VertexId pseudo_peripheral(const WeightedGraph& g, VertexId start) {
  int ecc = 0;
  VertexId current = start;
  VertexId next = farthest(g, current, ecc);
  for (int round = 0; round < 8; ++round) {
    int next_ecc = 0;
    const VertexId candidate = farthest(g, next, next_ecc);
    current = next;
    if (next_ecc <= ecc) break;
    ecc = next_ecc;
    next = candidate;
  }
  return current;
}

}  // namespace

namespace {

Partition grow_and_refine(const WeightedGraph& g, VertexId start, double nu, std::uint64_t seed) {
  const std::size_t n = g.num_vertices();
  const double half = 0.5 * static_cast<double>(g.total_vertex_weight());
  Bits bits(n, 0);
  std::vector<char> seen(n, 0);
  double grown = 0.0;
  std::vector<VertexId> queue{start};
  seen[static_cast<std::size_t>(start)] = 1;
  std::size_t head = 0;
  VertexId next_seed = 0;
  while (true) {
    if (head == queue.size()) {
      // Component exhausted: continue from the smallest unvisited vertex.
      while (next_seed < static_cast<VertexId>(n) && seen[static_cast<std::size_t>(next_seed)]) ++next_seed;
      if (next_seed == static_cast<VertexId>(n)) break;
      seen[static_cast<std::size_t>(next_seed)] = 1;
      queue.push_back(next_seed);
    }
    const VertexId v = queue[head++];
    const auto w = static_cast<double>(g.vertex_weight(v));
    if (std::abs(grown + w - half) >= std::abs(grown - half)) break;
    bits[static_cast<std::size_t>(v)] = 1;
    grown += w;
    for (const VertexId u : g.neighbors(v)) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        queue.push_back(u);
      }
    }
  }
  FmConfig fm;
  fm.epsilon = 2.0 * nu;
  fm.seed = seed;
  return fm_refine(g, make_partition(g, std::move(bits)), fm);
}

}  // namespace

Partition baseline_partition(const WeightedGraph& g, double nu, std::uint64_t seed, std::size_t starts) {
  const std::size_t n = g.num_vertices();
  if (n == 0) throw std::invalid_argument("baseline_partition of an empty graph");
  if (starts == 0) throw std::invalid_argument("baseline_partition needs at least one start");
  Rng rng(seed);
  std::optional<Partition> best;
  for (std::size_t t = 0; t < starts; ++t) {
    const auto start = pseudo_peripheral(g, static_cast<VertexId>(uniform_below(rng, n)));
    auto p = grow_and_refine(g, start, nu, seed);
    const auto key = [nu](const Partition& q) { return std::make_tuple(!q.balanced(nu), q.cut_weight, q.imbalance); };
    if (!best || key(p) < key(*best)) best = std::move(p);
  }
  return std::move(*best);
}

MeritRanking evaluate_partition_merit(const WeightedGraph& g, const SparsePattern& pattern,
                                      std::span<const Partition> candidates, double nu,
                                      const DissectionConfig& cfg, const Bipartitioner& completion) {
  if (candidates.empty()) throw std::invalid_argument("evaluate_partition_merit: no candidates");
  MeritRanking out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& cand = candidates[i];
    if (cand.bits.size() != g.num_vertices()) throw std::invalid_argument("candidate length does not match graph");
    if (!cand.balanced(nu)) {
      out.unbalanced.push_back(i);
      continue;
    }
    DissectionConfig local = cfg;
    local.root_split = cand.bits;
    const auto result = nested_dissection(g, completion, local);
    out.ranked.push_back({i, cand, symbolic_factorize(pattern, result.permutation)});
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    return std::tie(a.merit.ops, a.merit.nnz_factor, a.partition.cut_weight) <
           std::tie(b.merit.ops, b.merit.nnz_factor, b.partition.cut_weight);
  });
  return out;
}

}  // namespace qdissect
