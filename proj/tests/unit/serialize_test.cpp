// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include <numeric>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "qdissect/generators.hpp"
#include "qdissect/serialize.hpp"

namespace qdissect {
namespace {

TEST(Serialize, HamiltonianRoundTrip) {
  const auto h = to_hamiltonian(build_qubo(grid_graph(2, 3), 1.25));
  const auto j = hamiltonian_to_json(h);
  EXPECT_EQ(j.at("schema"), kHamiltonianSchema);
  const auto back = hamiltonian_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.n_qubits, h.n_qubits);
  EXPECT_DOUBLE_EQ(back.constant, h.constant);
  ASSERT_EQ(back.terms.size(), h.terms.size());
  for (std::size_t a = 0; a < h.terms.size(); ++a) {
    EXPECT_DOUBLE_EQ(back.terms[a].coeff, h.terms[a].coeff);
    EXPECT_EQ(back.terms[a].qubits, h.terms[a].qubits);
  }
  auto wrong = j;
  wrong["schema"] = "other/1";
  EXPECT_THROW(hamiltonian_from_json(wrong), std::invalid_argument);
}

TEST(Serialize, AnsatzRoundTrip) {
  const auto ans = build_full_ansatz(ring_graph(5));
  const auto back = ansatz_from_json(ansatz_to_json(ans));
  EXPECT_EQ(back.n_qubits, ans.n_qubits);
  EXPECT_EQ(back.layer_sizes, ans.layer_sizes);
  ASSERT_EQ(back.gates.size(), ans.gates.size());
  for (std::size_t i = 0; i < ans.gates.size(); ++i) {
    EXPECT_EQ(back.gates[i].a, ans.gates[i].a);
    EXPECT_EQ(back.gates[i].b, ans.gates[i].b);
    EXPECT_EQ(back.gates[i].layer, ans.gates[i].layer);
  }
}

TEST(Serialize, HistogramRoundTripAndValidation) {
  SampleSet s;
  s.add("0101", 7);
  s.add("1100", 3);
  const auto back = histogram_from_json(histogram_to_json(s));
  EXPECT_EQ(back.counts, s.counts);
  EXPECT_EQ(back.shots, 10u);
  auto bad = histogram_to_json(s);
  bad["shots"] = 11;
  EXPECT_THROW(histogram_from_json(bad), std::invalid_argument);
}

TEST(Serialize, TraceRoundTrip) {
  ConvergenceTrace t;
  for (std::size_t k = 0; k < 3; ++k) {
    TraceRecord r;
    r.step = k;
    r.energy = 1.0 / (k + 3.0);
    r.best_so_far = "0110";
    if (k) r.relative_error = 0.1 * k;
    t.records.push_back(r);
  }
  std::stringstream io;
  write_trace_jsonl(t, io);
  const auto back = read_trace_jsonl(io);
  ASSERT_EQ(back.records.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(back.records[k].energy, t.records[k].energy);
    EXPECT_EQ(back.records[k].relative_error, t.records[k].relative_error);
  }
}

TEST(Serialize, PermutationTextAndMatrixMarket) {
  std::vector<VertexId> order = {2, 0, 3, 1};
  const auto p = Permutation::from_order(order);
  std::stringstream text;
  write_permutation_text(p, text);
  EXPECT_EQ(text.str(), "1\n3\n0\n2\n");
  EXPECT_EQ(read_permutation_text(text), p);
  std::ostringstream mm;
  write_permutation_matrix_market(p, mm);
  EXPECT_EQ(mm.str(), "%%MatrixMarket matrix coordinate pattern general\n4 4 4\n2 1\n4 2\n1 3\n3 4\n");
  std::istringstream bad("0\nx\n");
  EXPECT_THROW(read_permutation_text(bad), std::invalid_argument);
}

TEST(Serialize, MeritCsvAndDoubles) {
  std::ostringstream out;
  write_merit_csv_row({"grid9", 81, 2, "fm-baseline", {100, 2000}, 9.0, 0.0123}, out);
  EXPECT_EQ(out.str(), "grid9,81,2,fm-baseline,100,2000,9,0.0123\n");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

}  // namespace
}  // namespace qdissect
