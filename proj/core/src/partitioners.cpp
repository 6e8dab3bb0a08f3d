// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/partitioners.hpp"

#include <charconv>
#include <stdexcept>

namespace qdissect {

AnsatzPreset AnsatzPreset::parse(const std::string& text) {
  if (text == "full-2layer" || text == "full") return {};
  std::string list = text;
  if (const std::string prefix = "truncated:"; list.starts_with(prefix)) list = list.substr(prefix.size());
  AnsatzPreset preset;
  preset.full = false;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    const auto token = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || value == 0)
      throw std::invalid_argument("invalid ansatz preset '" + text + "'");
    preset.gates_per_layer.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return preset;
}

std::string AnsatzPreset::to_string() const {
  if (full) return "full-2layer";
  std::string out = "truncated:";
  for (std::size_t i = 0; i < gates_per_layer.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(gates_per_layer[i]);
  }
  return out;
}

Ansatz build_ansatz(const WeightedGraph& g, const AnsatzPreset& preset) {
  return preset.full ? build_full_ansatz(g) : build_heavy_neighbors_ansatz(g, preset.gates_per_layer);
}

double resolve_lambda(const WeightedGraph& g, std::optional<double> lambda) {
  return lambda ? *lambda : default_lambda(g);
}

Partition FmBaselinePartitioner::bipartition(const WeightedGraph& g, std::uint64_t seed) const {
  return baseline_partition(g, nu_, seed, starts_);
}

Partition ExactPartitioner::bipartition(const WeightedGraph& g, std::uint64_t) const {
  const auto q = build_qubo(g, resolve_lambda(g, lambda_), nu_);
  const auto solution = exact_solve(q);
  for (const auto& bits : solution.optima) {
    auto p = make_partition(g, bits);
    if (p.balanced(nu_)) return p;
  }
  return make_partition(g, solution.optima.front());
}

Partition VarqitePartitioner::bipartition(const WeightedGraph& g, std::uint64_t seed) const {
  if (g.num_edges() == 0) return baseline_partition(g, options_.nu, seed);
  const auto q = build_qubo(g, resolve_lambda(g, options_.lambda), options_.nu);
  const auto ans = build_ansatz(g, options_.ansatz);
  auto cfg = options_.varqite;
  cfg.seed = seed;
  auto result = run_varqite(q, ans, cfg);
  return make_partition(g, std::move(result.best.bits));
}

}  // namespace qdissect
