// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_DISSECT_HPP
#define QDISSECT_DISSECT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdissect/graph.hpp"
#include "qdissect/partition.hpp"

namespace qdissect {

/// Symmetric sparsity pattern in CSR form, each row sorted and holding its
/// diagonal entry.
class SparsePattern {
 public:
  SparsePattern() = default;

  /// Symmetrizes the given (row, col) entries and inserts any missing
  /// diagonal entries, counting them in `inserted_diagonals()`.
  static SparsePattern from_entries(std::size_t n, std::span<const std::pair<VertexId, VertexId>> entries);
  /// Graph adjacency plus a full diagonal.
  static SparsePattern from_graph(const WeightedGraph& g);

  std::size_t size() const { return offsets_.size() - 1; }
  std::size_t nnz() const { return indices_.size(); }
  std::size_t nnz_lower() const { return (nnz() + size()) / 2; }
  std::span<const VertexId> row(VertexId i) const;
  std::size_t inserted_diagonals() const { return inserted_diagonals_; }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> indices_;
  std::size_t inserted_diagonals_ = 0;
};

/// Bijection old index -> new index, with its inverse.
class Permutation {
 public:
  Permutation() = default;
  static Permutation identity(std::size_t n);
  /// From an elimination order: order[k] is the old index placed at position k.
  static Permutation from_order(std::vector<VertexId> order);
  /// From old -> new images.
  static Permutation from_images(std::vector<VertexId> images);

  std::size_t size() const { return new_of_old_.size(); }
  VertexId new_index(VertexId old_index) const { return new_of_old_[static_cast<std::size_t>(old_index)]; }
  VertexId old_index(VertexId new_index) const { return old_of_new_[static_cast<std::size_t>(new_index)]; }
  std::span<const VertexId> images() const { return new_of_old_; }
  std::span<const VertexId> order() const { return old_of_new_; }
  Permutation inverse() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<VertexId> new_of_old_;
  std::vector<VertexId> old_of_new_;
};

struct MeritFactors {
  std::uint64_t nnz_factor = 0;  // sum_j c_j, c_j = nonzeros in column j of L incl. diagonal
  std::uint64_t ops = 0;         // sum_j c_j^2

  friend bool operator==(const MeritFactors&, const MeritFactors&) = default;
};

/// Elimination tree of the permuted pattern; parent[j] == -1 for roots.
/// Indices are in the permuted numbering.
std::vector<VertexId> elimination_tree(const SparsePattern& pattern, const Permutation& perm);

/// Column counts of the Cholesky / LDL^T factor of P A P^T, in the permuted numbering.
std::vector<std::uint64_t> factor_column_counts(const SparsePattern& pattern, const Permutation& perm);

MeritFactors symbolic_factorize(const SparsePattern& pattern, const Permutation& perm);

/// Minimum-degree elimination order (ties: smaller id) on the graph structure.
std::vector<VertexId> minimum_degree_order(const WeightedGraph& g);

/// Strategy used to split each (coarsened) subgraph.
class Bipartitioner {
 public:
  virtual ~Bipartitioner() = default;
  virtual std::string name() const = 0;
  virtual Partition bipartition(const WeightedGraph& g, std::uint64_t seed) const = 0;
};

struct DissectionNode {
  std::vector<VertexId> vertices;   // ids in the input graph
  std::vector<VertexId> separator;
  std::vector<VertexId> part0;
  std::vector<VertexId> part1;
  int child0 = -1;
  int child1 = -1;
  std::size_t depth = 0;
  double cut_weight = 0.0;
  double imbalance = 0.0;

  bool is_leaf() const { return separator.empty() && part0.empty() && part1.empty(); }
};

struct DissectionTree {
  std::vector<DissectionNode> nodes;  // nodes[0] is the root
  std::size_t levels = 0;
};

struct DissectionConfig {
  std::size_t levels = 1;
  std::size_t coarse_target = 32;
  std::uint64_t seed = 0;
  /// Balance tolerance for refining projected partitions.
  double nu = 0.05;
  /// Run fm_refine on each projected partition before extracting the separator.
  bool refine_projection = true;
  /// Fixed split of the whole graph used in place of the partitioner at the root.
  std::optional<Bits> root_split;
};

struct DissectionResult {
  DissectionTree tree;
  Permutation permutation;
};

/// Recursive nested dissection: at each node coarsen to `coarse_target`,
/// bipartition the coarse graph, project back (refining the projection with
/// fm_refine unless disabled), turn the edge cut into a vertex separator,
/// drop separator vertices adjacent to only one part, and recurse on both
/// sides (separator excluded) until `levels` splits deep. Leaves are ordered
/// by minimum degree; each node's separator is numbered after both children.
DissectionResult nested_dissection(const WeightedGraph& g, const Bipartitioner& partitioner,
                                   const DissectionConfig& cfg);

/// Classical stand-in partitioner: BFS region growing from a
/// pseudo-peripheral vertex to half the weight, then fm_refine with
/// epsilon = 2 nu (the |w0 - w1| / total bound equivalent to balanced(nu)).
/// With several `starts` (random initial vertices, each walked to a
/// pseudo-peripheral one) the best result is kept: balanced first, then
/// lowest cut, then lowest imbalance.
Partition baseline_partition(const WeightedGraph& g, double nu, std::uint64_t seed, std::size_t starts = 1);

struct RankedCandidate {
  std::size_t index = 0;  // position in the input list
  Partition partition;
  MeritFactors merit;
};

struct MeritRanking {
  std::vector<RankedCandidate> ranked;      // ascending (ops, nnz_factor, cut)
  std::vector<std::size_t> unbalanced;      // indices filtered out
};

/// Uses each nu-balanced candidate as the root split, completes the remaining
/// levels with `completion`, and ranks the resulting merit factors.
MeritRanking evaluate_partition_merit(const WeightedGraph& g, const SparsePattern& pattern,
                                      std::span<const Partition> candidates, double nu,
                                      const DissectionConfig& cfg, const Bipartitioner& completion);

}  // namespace qdissect

#endif  // QDISSECT_DISSECT_HPP
