// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_APP_CONFIG_HPP
#define QDISSECT_APP_CONFIG_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdissect/graph.hpp"
#include "qdissect/partitioners.hpp"

namespace qdissect::app {

/// Invalid configuration or usage; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure inside a pipeline stage; maps to exit code 1.
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& message)
      : std::runtime_error("[" + stage + "] " + message), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Every knob of a run. Built from defaults, then a key=value file, then
/// flags; `to_map` gives the canonical snapshot stored in manifests.
struct ExperimentConfig {
  std::string input;               // path, or "gen:<family spec>" for a synthetic graph
  std::string format = "metis";    // metis | edgelist | mtx
  std::string instance;            // label for CSV rows; derived from input when empty
  std::size_t coarse_target = 32;
  std::optional<double> lambda;    // "auto" when unset
  double nu = 0.05;
  std::size_t layers = 2;
  std::string gates = "full-2layer";  // preset, or comma list of gates per layer
  double dtau = 0.1;
  std::size_t steps = 200;
  std::size_t shots = 2000;        // 0 = exact expectations
  std::size_t sample_shots = 2000;
  double ridge = 1e-2;
  double energy_tol = 0.0;
  std::size_t patience = 5;
  std::size_t exact_reference = 20;  // compute C* for traces when the coarse graph is this small
  bool fm = true;                    // refine VarQITE samples with modified FM
  std::size_t fm_iterations = 50;
  double fm_epsilon = 0.05;
  std::size_t levels = 1;
  std::string partitioner = "varqite";  // varqite | fm-baseline | external-bitstring
  std::string bitstring;                // file with the external root split
  std::vector<std::size_t> sweep = {10, 12, 14, 16};
  std::size_t seeds = 1;
  std::size_t candidates = 4;
  std::uint64_t seed = 0;
  std::string out = "qdissect-out";
  std::size_t jobs = 1;

  static ExperimentConfig from_map(const std::map<std::string, std::string>& values);
  std::map<std::string, std::string> to_map() const;
  /// Applies one key=value setting; throws ConfigError for unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  void validate() const;

  GraphFormat graph_format() const;
  AnsatzPreset ansatz_preset() const;
  VarqiteConfig varqite_config(std::uint64_t seed_value) const;
  FmConfig fm_config(std::uint64_t seed_value) const;
};

/// Reads "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Loads the graph named by cfg.input ("gen:" specs go to generate_graph).
WeightedGraph load_input(const ExperimentConfig& cfg);

}  // namespace qdissect::app

#endif  // QDISSECT_APP_CONFIG_HPP
