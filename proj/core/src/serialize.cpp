// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/serialize.hpp"

#include <charconv>
#include <stdexcept>

namespace qdissect {

using nlohmann::json;

namespace {

void expect_schema(const json& j, const char* schema) {
  if (!j.contains("schema") || j.at("schema") != schema)
    throw std::invalid_argument(std::string("expected a document with schema ") + schema);
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

json hamiltonian_to_json(const ZHamiltonian& h) {
  json terms = json::array();
  for (const auto& t : h.terms) terms.push_back({{"coeff", t.coeff}, {"qubits", t.qubits}});
  return {{"schema", kHamiltonianSchema}, {"n", h.n_qubits}, {"constant", h.constant}, {"terms", terms}};
}

ZHamiltonian hamiltonian_from_json(const json& j) {
  expect_schema(j, kHamiltonianSchema);
  ZHamiltonian h;
  h.n_qubits = j.at("n").get<std::size_t>();
  h.constant = j.at("constant").get<double>();
  for (const auto& t : j.at("terms")) {
    ZTerm term{t.at("coeff").get<double>(), t.at("qubits").get<std::vector<int>>()};
    if (term.qubits.empty() || term.qubits.size() > 2) throw std::invalid_argument("terms act on one or two qubits");
    for (const int q : term.qubits)
      if (q < 0 || static_cast<std::size_t>(q) >= h.n_qubits) throw std::invalid_argument("term qubit out of range");
    h.terms.push_back(std::move(term));
  }
  return h;
}

json ansatz_to_json(const Ansatz& ans) {
  json gates = json::array();
  for (const auto& g : ans.gates) gates.push_back({{"a", g.a}, {"b", g.b}, {"param", g.param}, {"layer", g.layer}});
  return {{"schema", kAnsatzSchema}, {"n", ans.n_qubits}, {"layers", ans.layer_sizes}, {"gates", gates}};
}

Ansatz ansatz_from_json(const json& j) {
  expect_schema(j, kAnsatzSchema);
  Ansatz ans;
  ans.n_qubits = j.at("n").get<std::size_t>();
  ans.layer_sizes = j.at("layers").get<std::vector<std::size_t>>();
  for (const auto& g : j.at("gates")) {
    Gate gate{g.at("a").get<int>(), g.at("b").get<int>(), g.at("param").get<std::size_t>(),
              g.at("layer").get<std::size_t>()};
    if (gate.a == gate.b) throw std::invalid_argument("gate acts twice on one qubit");
    if (gate.param != ans.gates.size()) throw std::invalid_argument("gate parameters must be numbered in order");
    ans.gates.push_back(gate);
  }
  return ans;
}

json histogram_to_json(const SampleSet& samples) {
  json counts = json::object();
  for (const auto& [bits, c] : samples.counts) counts[bits] = c;
  return {{"schema", kHistogramSchema}, {"shots", samples.shots}, {"counts", counts}};
}

SampleSet histogram_from_json(const json& j) {
  expect_schema(j, kHistogramSchema);
  SampleSet s;
  for (const auto& [bits, c] : j.at("counts").items()) {
    bits_from_string(bits);
    s.add(bits, c.get<std::uint64_t>());
  }
  if (s.shots != j.at("shots").get<std::uint64_t>()) throw std::invalid_argument("histogram counts do not sum to shots");
  return s;
}

json partition_to_json(const Partition& p) {
  return {{"schema", kPartitionSchema},
          {"bits", to_string(p.bits)},
          {"cut", p.cut_weight},
          {"part_weights", {p.part_weights[0], p.part_weights[1]}},
          {"imbalance", p.imbalance}};
}

json exact_to_json(const ExactSolution& s) {
  json optima = json::array();
  for (const auto& bits : s.optima) optima.push_back(to_string(bits));
  return {{"schema", kExactSchema}, {"energy", s.energy}, {"optima", optima}, {"truncated", s.truncated}};
}

json trace_record_to_json(const TraceRecord& r) {
  return {{"schema", kTraceSchema},
          {"step", r.step},
          {"energy", r.energy},
          {"best_sampled", r.best_sampled},
          {"mean_sampled", r.mean_sampled},
          {"p10", r.p10},
          {"p90", r.p90},
          {"best_so_far", r.best_so_far},
          {"best_so_far_energy", r.best_so_far_energy},
          {"best_balanced_energy", optional_number(r.best_balanced_energy)},
          {"relative_error", optional_number(r.relative_error)},
          {"best_relative_error", optional_number(r.best_relative_error)}};
}

void write_trace_jsonl(const ConvergenceTrace& trace, std::ostream& out) {
  for (const auto& r : trace.records) out << trace_record_to_json(r).dump() << '\n';
}

ConvergenceTrace read_trace_jsonl(std::istream& in) {
  ConvergenceTrace trace;
  std::string line;
  auto opt = [](const json& v) { return v.is_null() ? std::optional<double>{} : std::optional<double>{v.get<double>()}; };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    expect_schema(j, kTraceSchema);
    TraceRecord r;
    r.step = j.at("step").get<std::size_t>();
    r.energy = j.at("energy").get<double>();
    r.best_sampled = j.at("best_sampled").get<double>();
    r.mean_sampled = j.at("mean_sampled").get<double>();
    r.p10 = j.at("p10").get<double>();
    r.p90 = j.at("p90").get<double>();
    r.best_so_far = j.at("best_so_far").get<std::string>();
    r.best_so_far_energy = j.at("best_so_far_energy").get<double>();
    r.best_balanced_energy = opt(j.at("best_balanced_energy"));
    r.relative_error = opt(j.at("relative_error"));
    r.best_relative_error = opt(j.at("best_relative_error"));
    trace.records.push_back(std::move(r));
  }
  return trace;
}

void write_permutation_text(const Permutation& perm, std::ostream& out) {
  for (const auto k : perm.images()) out << k << '\n';
}

Permutation read_permutation_text(std::istream& in) {
  std::vector<VertexId> images;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    VertexId v = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
    if (ec != std::errc{} || ptr != line.data() + line.size())
      throw std::invalid_argument("invalid permutation entry '" + line + "'");
    images.push_back(v);
  }
  return Permutation::from_images(std::move(images));
}

void write_permutation_matrix_market(const Permutation& perm, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate pattern general\n";
  out << perm.size() << ' ' << perm.size() << ' ' << perm.size() << '\n';
  for (std::size_t old = 0; old < perm.size(); ++old)
    out << perm.new_index(static_cast<VertexId>(old)) + 1 << ' ' << old + 1 << '\n';
}

void write_merit_csv_row(const MeritRow& row, std::ostream& out) {
  out << row.instance << ',' << row.nodes << ',' << row.levels << ',' << row.partitioner << ','
      << row.merit.nnz_factor << ',' << row.merit.ops << ',' << format_double(row.cut) << ','
      << format_double(row.imbalance) << '\n';
}

}  // namespace qdissect
