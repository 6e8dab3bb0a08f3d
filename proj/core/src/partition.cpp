// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/partition.hpp"

#include <cmath>
#include <stdexcept>

namespace qdissect {

std::string to_string(std::span<const std::uint8_t> bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

Bits bits_from_string(std::string_view text) {
  Bits bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1')
      throw std::invalid_argument("bitstring may only contain '0' and '1'");
    bits[i] = text[i] == '1';
  }
  return bits;
}

Bits complement(std::span<const std::uint8_t> bits) {
  Bits out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[i] ? 0 : 1;
  return out;
}

std::uint64_t bits_to_index(std::span<const std::uint8_t> bits) {
  if (bits.size() > 64) throw std::invalid_argument("bitstring longer than 64 bits");
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i]) index |= std::uint64_t{1} << i;
  return index;
}

Bits index_to_bits(std::uint64_t index, std::size_t n) {
  Bits bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (index >> i) & 1U;
  return bits;
}

bool Partition::balanced(double nu) const {
  const auto heavy = static_cast<double>(std::max(part_weights[0], part_weights[1]));
  const auto total = static_cast<double>(total_weight());
  return heavy <= (0.5 + nu) * total + 1e-9 * total;
}

EdgeWeight cut_weight(const WeightedGraph& g, std::span<const std::uint8_t> bits) {
  if (bits.size() != g.num_vertices()) throw std::invalid_argument("partition size does not match graph");
  EdgeWeight cut = 0.0;
  for (const auto& e : g.edges())
    if (bits[static_cast<std::size_t>(e.u)] != bits[static_cast<std::size_t>(e.v)]) cut += e.weight;
  return cut;
}

Partition make_partition(const WeightedGraph& g, Bits bits) {
  Partition p;
  p.cut_weight = cut_weight(g, bits);
  for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v)
    p.part_weights[bits[static_cast<std::size_t>(v)] ? 1 : 0] += g.vertex_weight(v);
  const auto total = p.total_weight();
  p.imbalance = total == 0 ? 0.0
                           : static_cast<double>(std::llabs(p.part_weights[0] - p.part_weights[1])) /
                                 static_cast<double>(total);
  p.bits = std::move(bits);
  return p;
}

Partition project_partition(const CoarseningMap& map, const Partition& coarse) {
  if (coarse.bits.size() != map.coarsest().num_vertices())
    throw std::invalid_argument("coarse partition size does not match the coarsest level");
  const auto to_coarse = map.fine_to_coarse();
  Bits fine(to_coarse.size());
  for (std::size_t v = 0; v < fine.size(); ++v) fine[v] = coarse.bits[static_cast<std::size_t>(to_coarse[v])];
  return make_partition(map.fine(), std::move(fine));
}

}  // namespace qdissect
