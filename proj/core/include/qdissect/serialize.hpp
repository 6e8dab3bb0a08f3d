// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_SERIALIZE_HPP
#define QDISSECT_SERIALIZE_HPP

#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "qdissect/circuit.hpp"
#include "qdissect/dissect.hpp"
#include "qdissect/partition.hpp"
#include "qdissect/qubo.hpp"
#include "qdissect/varqite.hpp"

namespace qdissect {

// Every top-level document carries a "schema" field naming its layout and version.
inline constexpr const char* kHamiltonianSchema = "qdissect.hamiltonian/1";
inline constexpr const char* kAnsatzSchema = "qdissect.ansatz/1";
inline constexpr const char* kHistogramSchema = "qdissect.histogram/1";
inline constexpr const char* kTraceSchema = "qdissect.trace/1";
inline constexpr const char* kPartitionSchema = "qdissect.partition/1";
inline constexpr const char* kExactSchema = "qdissect.exact/1";

/// {schema, n, constant, terms: [{coeff, qubits}]}
nlohmann::json hamiltonian_to_json(const ZHamiltonian& h);
ZHamiltonian hamiltonian_from_json(const nlohmann::json& j);

/// {schema, n, layers, gates: [{a, b, param, layer}]}
nlohmann::json ansatz_to_json(const Ansatz& ans);
Ansatz ansatz_from_json(const nlohmann::json& j);

/// {schema, shots, counts: {"0101": 12, ...}}
nlohmann::json histogram_to_json(const SampleSet& samples);
SampleSet histogram_from_json(const nlohmann::json& j);

nlohmann::json partition_to_json(const Partition& p);
nlohmann::json exact_to_json(const ExactSolution& s);

/// One JSON object per line, each tagged with the trace schema.
nlohmann::json trace_record_to_json(const TraceRecord& r);
void write_trace_jsonl(const ConvergenceTrace& trace, std::ostream& out);
ConvergenceTrace read_trace_jsonl(std::istream& in);

/// 0-indexed, one new position per line: line i holds the new index of old row i.
void write_permutation_text(const Permutation& perm, std::ostream& out);
Permutation read_permutation_text(std::istream& in);
/// n x n coordinate pattern matrix with P(new, old) = 1.
void write_permutation_matrix_market(const Permutation& perm, std::ostream& out);

inline constexpr const char* kMeritCsvHeader = "instance,nodes,levels,partitioner,nnz,ops,cut,imbalance";
struct MeritRow {
  std::string instance;
  std::size_t nodes = 0;
  std::size_t levels = 0;
  std::string partitioner;
  MeritFactors merit;
  double cut = 0.0;
  double imbalance = 0.0;
};
void write_merit_csv_row(const MeritRow& row, std::ostream& out);

/// Shortest text that parses back to the same double.
std::string format_double(double value);

}  // namespace qdissect

#endif  // QDISSECT_SERIALIZE_HPP
