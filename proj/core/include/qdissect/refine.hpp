// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_REFINE_HPP
#define QDISSECT_REFINE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "qdissect/circuit.hpp"
#include "qdissect/graph.hpp"
#include "qdissect/partition.hpp"
#include "qdissect/random.hpp"

namespace qdissect {

struct FmConfig {
  std::size_t max_iterations = 50;  // M
  double epsilon = 0.05;            // allowed |w0 - w1| / total
  std::uint64_t seed = 0;           // random-start mode only

  void validate() const;
};

/// D[v] = sum_{u in N(v)} w(v,u) * (-1)^{same_side(u,v)}: moving v changes
/// the cut by exactly -D[v].
double gain(const WeightedGraph& g, std::span<const std::uint8_t> bits, VertexId v);

/// Side to move vertices out of: 0 when w0 - w1 >= 0, else 1.
int heavier_side(const std::array<VertexWeight, 2>& part_weights);
inline int heavier_side(const Partition& p) { return heavier_side(p.part_weights); }

/// Per-vertex gains with max-gain lookup restricted to one side. Only
/// untouched vertices are eligible; ties go to the smaller vertex id.
class GainTable {
 public:
  GainTable(const WeightedGraph& g, std::span<const std::uint8_t> bits);

  double gain(VertexId v) const { return gains_[static_cast<std::size_t>(v)]; }
  bool touched(VertexId v) const { return touched_[static_cast<std::size_t>(v)] != 0; }
  std::optional<VertexId> best(int side) const;

  /// Moves v to the other side, marks it touched and updates neighbor gains.
  void move(VertexId v);

  std::span<const std::uint8_t> bits() const { return bits_; }

 private:
  using Key = std::pair<double, VertexId>;  // (-gain, v)

  const WeightedGraph& graph_;
  std::vector<std::uint8_t> bits_;
  std::vector<double> gains_;
  std::vector<std::uint8_t> touched_;
  std::array<std::set<Key>, 2> eligible_;
};

/// Modified Fiduccia-Mattheyses with heavier-side move selection. Each pass
/// moves untouched max-gain vertices out of the heavier side, then rolls back
/// to the best prefix whose imbalance is within epsilon. Stops when no
/// balanced prefix improves the cut or after M passes. An unbalanced start is
/// first driven to the best balanced (or least unbalanced) prefix.
Partition fm_refine(const WeightedGraph& g, const Partition& init, const FmConfig& cfg);

/// Uniformly random bitstring with floor(n/2) ones.
Bits random_equal_cardinality(std::size_t n, Rng& rng);

/// Refines every distinct sampled bitstring, keeping its multiplicity.
SampleSet fm_plus_varqite(const WeightedGraph& g, const SampleSet& samples, const FmConfig& cfg);

/// FM from `count` random equal-cardinality starts (streams derived from cfg.seed).
SampleSet fm_from_random(const WeightedGraph& g, std::size_t count, const FmConfig& cfg);

/// Drops samples whose max side exceeds (1/2 + nu) of the total weight.
SampleSet filter_balanced(const WeightedGraph& g, const SampleSet& samples, double nu);

}  // namespace qdissect

#endif  // QDISSECT_REFINE_HPP
