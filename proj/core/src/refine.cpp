// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/refine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qdissect {

void FmConfig::validate() const {
  if (max_iterations == 0) throw std::invalid_argument("FM needs at least one iteration");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("FM epsilon must be >= 0");
}

double gain(const WeightedGraph& g, std::span<const std::uint8_t> bits, VertexId v) {
  const auto nbrs = g.neighbors(v);
  const auto ws = g.neighbor_weights(v);
  const auto side = bits[static_cast<std::size_t>(v)];
  double d = 0.0;
  for (std::size_t k = 0; k < nbrs.size(); ++k) d += bits[static_cast<std::size_t>(nbrs[k])] == side ? -ws[k] : ws[k];
  return d;
}

int heavier_side(const std::array<VertexWeight, 2>& part_weights) {
  return part_weights[0] - part_weights[1] >= 0 ? 0 : 1;
}

GainTable::GainTable(const WeightedGraph& g, std::span<const std::uint8_t> bits)
    : graph_(g), bits_(bits.begin(), bits.end()), gains_(g.num_vertices()), touched_(g.num_vertices(), 0) {
  if (bits.size() != g.num_vertices()) throw std::invalid_argument("partition size does not match graph");
  for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
    gains_[static_cast<std::size_t>(v)] = qdissect::gain(g, bits_, v);
    eligible_[bits_[static_cast<std::size_t>(v)]].insert({-gains_[static_cast<std::size_t>(v)], v});
  }
}

std::optional<VertexId> GainTable::best(int side) const {
  const auto& set = eligible_[static_cast<std::size_t>(side)];
  if (set.empty()) return std::nullopt;
  return set.begin()->second;
}

void GainTable::move(VertexId v) {
  const auto vi = static_cast<std::size_t>(v);
  if (touched_[vi]) throw std::logic_error("vertex moved twice in one pass");
  const auto from = bits_[vi];
  eligible_[from].erase({-gains_[vi], v});
  touched_[vi] = 1;
  bits_[vi] = static_cast<std::uint8_t>(1 - from);
  gains_[vi] = -gains_[vi];

  const auto nbrs = graph_.neighbors(v);
  const auto ws = graph_.neighbor_weights(v);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    const auto ui = static_cast<std::size_t>(nbrs[k]);
    // u was on v's old side: the edge becomes cut, so moving u back gains 2w.
    const double delta = bits_[ui] == from ? 2.0 * ws[k] : -2.0 * ws[k];
    if (!touched_[ui]) eligible_[bits_[ui]].erase({-gains_[ui], nbrs[k]});
    gains_[ui] += delta;
    if (!touched_[ui]) eligible_[bits_[ui]].insert({-gains_[ui], nbrs[k]});
  }
}

Partition fm_refine(const WeightedGraph& g, const Partition& init, const FmConfig& cfg) {
  cfg.validate();
  const std::size_t n = g.num_vertices();
  if (init.bits.size() != n) throw std::invalid_argument("partition size does not match graph");
  const auto total = static_cast<double>(g.total_vertex_weight());
  auto imbalance = [&](VertexWeight b) { return total == 0.0 ? 0.0 : static_cast<double>(std::llabs(b)) / total; };
  auto balanced = [&](VertexWeight b) { return imbalance(b) <= cfg.epsilon + 1e-12; };
  const double gain_tol = 1e-12 * std::max(1.0, g.total_edge_weight());

  Bits bits = init.bits;
  std::array<VertexWeight, 2> weights{0, 0};
  for (std::size_t v = 0; v < n; ++v) weights[bits[v]] += g.vertex_weight(static_cast<VertexId>(v));
  VertexWeight b = weights[0] - weights[1];

  for (std::size_t iteration = 0; iteration < cfg.max_iterations; ++iteration) {
    GainTable table(g, bits);
    struct Prefix {
      double gain;
      VertexWeight balance;
    };
    std::vector<Prefix> prefixes{{0.0, b}};
    std::vector<VertexId> moved;
    double running = 0.0;
    VertexWeight running_b = b;
    for (std::size_t step = 0; step < n; ++step) {
      const int side = running_b >= 0 ? 0 : 1;
      const auto v = table.best(side);
      if (!v) break;
      running += table.gain(*v);
      const VertexWeight w = g.vertex_weight(*v);
      running_b += side == 0 ? -2 * w : 2 * w;
      table.move(*v);
      moved.push_back(*v);
      prefixes.push_back({running, running_b});
    }

    // Best balanced prefix: largest gain, then smaller imbalance, then fewer moves.
    std::optional<std::size_t> chosen;
    for (std::size_t k = 0; k < prefixes.size(); ++k) {
      if (!balanced(prefixes[k].balance)) continue;
      if (!chosen || prefixes[k].gain > prefixes[*chosen].gain ||
          (prefixes[k].gain == prefixes[*chosen].gain &&
           std::llabs(prefixes[k].balance) < std::llabs(prefixes[*chosen].balance)))
        chosen = k;
    }
    const bool start_balanced = balanced(b);
    if (start_balanced) {
      if (prefixes[*chosen].gain <= gain_tol) break;
    } else if (!chosen) {
      // Nothing reaches the tolerance: take the least unbalanced prefix.
      std::size_t k_best = 0;
      for (std::size_t k = 1; k < prefixes.size(); ++k) {
        const auto bk = std::llabs(prefixes[k].balance);
        const auto bb = std::llabs(prefixes[k_best].balance);
        if (bk < bb || (bk == bb && prefixes[k].gain > prefixes[k_best].gain)) k_best = k;
      }
      if (k_best == 0) break;
      chosen = k_best;
    }
    for (std::size_t k = 0; k < *chosen; ++k) {
      auto& bit = bits[static_cast<std::size_t>(moved[k])];
      bit = static_cast<std::uint8_t>(1 - bit);
    }
    b = prefixes[*chosen].balance;
  }
  return make_partition(g, std::move(bits));
}

Bits random_equal_cardinality(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  Bits bits(n, 0);
  for (std::size_t k = 0; k < n / 2; ++k) bits[order[k]] = 1;
  return bits;
}

SampleSet fm_plus_varqite(const WeightedGraph& g, const SampleSet& samples, const FmConfig& cfg) {
  SampleSet refined;
  for (const auto& [text, count] : samples.counts) {
    auto bits = bits_from_string(text);
    if (bits.size() != g.num_vertices()) throw std::invalid_argument("sample length does not match graph");
    const auto out = fm_refine(g, make_partition(g, std::move(bits)), cfg);
    refined.add(to_string(out.bits), count);
  }
  return refined;
}

SampleSet fm_from_random(const WeightedGraph& g, std::size_t count, const FmConfig& cfg) {
  SampleSet out;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(cfg.seed, {i}));
    const auto init = make_partition(g, random_equal_cardinality(g.num_vertices(), rng));
    out.add(to_string(fm_refine(g, init, cfg).bits));
  }
  return out;
}

SampleSet filter_balanced(const WeightedGraph& g, const SampleSet& samples, double nu) {
  SampleSet out;
  for (const auto& [text, count] : samples.counts)
    if (make_partition(g, bits_from_string(text)).balanced(nu)) out.add(text, count);
  return out;
}

}  // namespace qdissect
