// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_PARTITIONERS_HPP
#define QDISSECT_PARTITIONERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "qdissect/circuit.hpp"
#include "qdissect/dissect.hpp"
#include "qdissect/refine.hpp"
#include "qdissect/varqite.hpp"

namespace qdissect {

/// "full-2layer", or "truncated:<g0,g1,...>" for an explicit gate budget per layer.
struct AnsatzPreset {
  bool full = true;
  std::vector<std::size_t> gates_per_layer;

  static AnsatzPreset parse(const std::string& text);
  std::string to_string() const;
};

Ansatz build_ansatz(const WeightedGraph& g, const AnsatzPreset& preset);

/// lambda when given, default_lambda(g) otherwise.
double resolve_lambda(const WeightedGraph& g, std::optional<double> lambda);

class FmBaselinePartitioner final : public Bipartitioner {
 public:
  explicit FmBaselinePartitioner(double nu = 0.05, std::size_t starts = 1) : nu_(nu), starts_(starts) {}
  std::string name() const override { return "fm-baseline"; }
  Partition bipartition(const WeightedGraph& g, std::uint64_t seed) const override;

 private:
  double nu_;
  std::size_t starts_;
};

/// Exhaustive QUBO minimum; picks the lexicographically first nu-balanced optimum.
class ExactPartitioner final : public Bipartitioner {
 public:
  explicit ExactPartitioner(std::optional<double> lambda = std::nullopt, double nu = 0.05)
      : lambda_(lambda), nu_(nu) {}
  std::string name() const override { return "exact"; }
  Partition bipartition(const WeightedGraph& g, std::uint64_t seed) const override;

 private:
  std::optional<double> lambda_;
  double nu_;
};

struct VarqitePartitionerOptions {
  std::optional<double> lambda;
  double nu = 0.05;
  AnsatzPreset ansatz;
  VarqiteConfig varqite;  // its seed is replaced by the per-call seed
};

/// Runs VarQITE on the (coarse) graph and returns its best balanced sample.
class VarqitePartitioner final : public Bipartitioner {
 public:
  explicit VarqitePartitioner(VarqitePartitionerOptions options) : options_(std::move(options)) {}
  std::string name() const override { return "varqite"; }
  Partition bipartition(const WeightedGraph& g, std::uint64_t seed) const override;

 private:
  VarqitePartitionerOptions options_;
};

}  // namespace qdissect

#endif  // QDISSECT_PARTITIONERS_HPP
