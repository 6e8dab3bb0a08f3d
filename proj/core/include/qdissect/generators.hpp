// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_GENERATORS_HPP
#define QDISSECT_GENERATORS_HPP

#include <cstddef>
#include <cstdint>
#include <string>

#include "qdissect/graph.hpp"

namespace qdissect {

// Small synthetic instance families with unit vertex weights.

WeightedGraph path_graph(std::size_t n);
WeightedGraph ring_graph(std::size_t n);
WeightedGraph complete_graph(std::size_t n);
WeightedGraph star_graph(std::size_t n);  // vertex 0 is the hub
/// rows x cols lattice, vertex r * cols + c.
WeightedGraph grid_graph(std::size_t rows, std::size_t cols);
/// Two K_k cliques {0..k-1} and {k..2k-1} joined by the edge {k-1, k}.
WeightedGraph barbell_graph(std::size_t k);
/// n uniform points in the unit square, edges between points closer than
/// `radius`; components are then chained by their closest point pairs so the
/// result is connected.
WeightedGraph random_geometric_graph(std::size_t n, double radius, std::uint64_t seed);
/// Erdos-Renyi G(n, p) with edge weights uniform in [w_lo, w_hi] and integer
/// vertex weights uniform in [1, v_max].
WeightedGraph random_weighted_graph(std::size_t n, double p, double w_lo, double w_hi,
                                    VertexWeight v_max, std::uint64_t seed);

/// Parses "ring:8", "path:7", "complete:6", "star:5", "grid:9x9",
/// "barbell:4", "geometric:40:0.25:<seed>".
WeightedGraph generate_graph(const std::string& spec);

}  // namespace qdissect

#endif  // QDISSECT_GENERATORS_HPP
