// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_APP_COMMANDS_HPP
#define QDISSECT_APP_COMMANDS_HPP

#include <filesystem>
#include <string>

#include "qdissect/app/config.hpp"
#include "qdissect/app/manifest.hpp"

namespace qdissect::app {

inline constexpr const char* kPartitionRunSchema = "qdissect.partition-run/1";
inline constexpr const char* kTreeSchema = "qdissect.tree/1";
inline constexpr const char* kMeritCsvSchema = "qdissect.merit-csv/1";
inline constexpr const char* kPermutationTextSchema = "qdissect.permutation-text/1";
inline constexpr const char* kPermutationMtxSchema = "qdissect.permutation-mtx/1";
inline constexpr const char* kCompareCsvSchema = "qdissect.compare-csv/1";
inline constexpr const char* kCompareSummarySchema = "qdissect.compare-summary/1";
inline constexpr const char* kExactRunSchema = "qdissect.exact-run/1";

/// Code version recorded in manifests.
std::string version();

// Each command validates `cfg`, writes its outputs plus manifest.json into
// cfg.out and returns the manifest. Errors surface as ConfigError (usage) or
// StageError (runtime).

/// load, coarsen, qubo, ansatz, varqite, project, optional FM refinement.
/// Writes partition.json, trace.jsonl, histogram.json, histogram_refined.json
/// (when FM is on), hamiltonian.json, ansatz.json and exact.json (when the
/// coarse graph has at most exact_reference vertices).
RunManifest cmd_partition(const ExperimentConfig& cfg);

/// Nested dissection with the configured partitioner. Writes
/// permutation.txt, permutation.mtx, merit.csv (with a natural-order row)
/// and tree.json.
RunManifest cmd_dissect(const ExperimentConfig& cfg);

/// Sweeps coarse_target over cfg.sweep and cfg.seeds seeds. Each point
/// emits `candidates` VarQITE rows (best balanced merits first; unbalanced
/// fill-ins flagged) and one fm-baseline row into compare.csv; per-point
/// statistics go to compare.json.
RunManifest cmd_compare(const ExperimentConfig& cfg);

/// Brute-force C* and all optima of the coarse graph into exact.json.
/// Coarse graphs above 30 vertices are refused with ConfigError.
RunManifest cmd_exact(const ExperimentConfig& cfg);

/// Dispatches on the command name.
RunManifest run_command(const std::string& command, const ExperimentConfig& cfg);

struct ReplayReport {
  RunManifest original;
  RunManifest replayed;
  std::vector<std::string> mismatches;  // output paths whose hashes differ or are missing
  bool identical() const { return mismatches.empty(); }
};

/// Re-runs the command recorded in `manifest_path` into `out_dir` and
/// compares every output hash.
ReplayReport replay(const std::filesystem::path& manifest_path, const std::filesystem::path& out_dir);

}  // namespace qdissect::app

#endif  // QDISSECT_APP_COMMANDS_HPP
