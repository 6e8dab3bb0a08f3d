// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_PARTITION_HPP
#define QDISSECT_PARTITION_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qdissect/graph.hpp"

namespace qdissect {

/// One entry per vertex / qubit, each 0 or 1. Printed with vertex 0 as the
/// leftmost character.
using Bits = std::vector<std::uint8_t>;

std::string to_string(std::span<const std::uint8_t> bits);
Bits bits_from_string(std::string_view text);
Bits complement(std::span<const std::uint8_t> bits);

/// Basis-state index with bit q holding qubit q.
std::uint64_t bits_to_index(std::span<const std::uint8_t> bits);
Bits index_to_bits(std::uint64_t index, std::size_t n);

/// A bipartition together with its cut and balance metrics.
/// `part_weights[s]` is the total weight of the vertices on side s.
struct Partition {
  Bits bits;
  EdgeWeight cut_weight = 0.0;
  std::array<VertexWeight, 2> part_weights{0, 0};
  double imbalance = 0.0;  // |w0 - w1| / total

  VertexWeight total_weight() const { return part_weights[0] + part_weights[1]; }
  /// max(w0, w1) <= (1/2 + nu) * total.
  bool balanced(double nu) const;
};

Partition make_partition(const WeightedGraph& g, Bits bits);
EdgeWeight cut_weight(const WeightedGraph& g, std::span<const std::uint8_t> bits);

/// Lifts a partition of the coarsest level back to the finest graph.
Partition project_partition(const CoarseningMap& map, const Partition& coarse);

}  // namespace qdissect

#endif  // QDISSECT_PARTITION_HPP
