// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdissect/circuit.hpp"
#include "qdissect/generators.hpp"

namespace qdissect {
namespace {

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

Eigen::VectorXcd as_eigen(const Statevector& sv) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(sv.dimension()));
  for (std::size_t i = 0; i < sv.dimension(); ++i) v(static_cast<Eigen::Index>(i)) = sv[i];
  return v;
}

Statevector random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<C> amps(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : amps) {
    a = {normal(rng), normal(rng)};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return Statevector::from_amplitudes(std::move(amps));
}

TEST(InitialState, UniformAmplitudes) {
  const auto one = initial_state(1);
  EXPECT_NEAR(one[0].real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(one[1].real(), 1.0 / std::sqrt(2.0), 1e-15);
  const auto three = initial_state(3);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(three[i].real(), 1.0 / (2.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_THROW(initial_state(30, 26), std::length_error);
}

TEST(InitialState, SamplingIsChiSquareUniform) {
  const auto samples = sample(initial_state(4), 10000, 9);
  ASSERT_EQ(samples.counts.size(), 16u);
  double chi2 = 0.0;
  for (const auto& [bits, c] : samples.counts) chi2 += std::pow(static_cast<double>(c) - 625.0, 2) / 625.0;
  // 15 degrees of freedom: the 0.999 quantile is 37.7.
  EXPECT_LT(chi2, 37.7);
}

TEST(ApplyRzy, ZeroAngleIsIdentity) {
  std::mt19937_64 rng(1);
  auto sv = random_state(3, rng);
  const auto before = as_eigen(sv);
  apply_rzy(sv, 0, 2, 0.0);
  EXPECT_LT((as_eigen(sv) - before).norm(), 1e-15);
}

TEST(ApplyRzy, FullTurnIsGlobalSignFlip) {
  Statevector sv(2);
  apply_rzy(sv, 0, 1, 2.0 * kPi);
  EXPECT_NEAR(sv[0].real(), -1.0, 1e-12);
  EXPECT_NEAR(sv.probabilities()[0], 1.0, 1e-12);
}

TEST(ApplyRzy, QuarterTurnOnZeroState) {
  Statevector sv(2);
  apply_rzy(sv, 0, 1, kPi / 2.0);
  // Qubit 1 (the Y target) flips: basis index 2 is "01" with qubit 0 leftmost.
  EXPECT_NEAR(sv[0].real(), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(sv[2].real(), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(sv[1]) + std::abs(sv[3]), 0.0, 1e-12);
  const Eigen::VectorXcd oracle_state = oracle::rzy_matrix(2, 0, 1, kPi / 2.0) * as_eigen(Statevector(2));
  EXPECT_LT((as_eigen(sv) - oracle_state).norm(), 1e-12);
}

TEST(ApplyRzy, MatchesMatrixExponentialOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> angle(-2.0 * kPi, 2.0 * kPi);
  for (std::size_t n = 2; n <= 5; ++n)
    for (int a = 0; a < static_cast<int>(n); ++a)
      for (int b = 0; b < static_cast<int>(n); ++b) {
        if (a == b) continue;
        const double theta = angle(rng);
        auto sv = random_state(n, rng);
        const Eigen::VectorXcd expected = oracle::rzy_matrix(n, a, b, theta) * as_eigen(sv);
        apply_rzy(sv, a, b, theta);
        EXPECT_LT((as_eigen(sv) - expected).norm(), 1e-12) << n << " " << a << " " << b;

        // The real-amplitude kernel agrees on real states.
        std::vector<double> real(std::size_t{1} << n);
        std::normal_distribution<double> normal;
        for (auto& r : real) r = normal(rng);
        Eigen::VectorXcd complex_in(static_cast<Eigen::Index>(real.size()));
        for (std::size_t i = 0; i < real.size(); ++i) complex_in(static_cast<Eigen::Index>(i)) = real[i];
        const Eigen::VectorXcd out = oracle::rzy_matrix(n, a, b, theta) * complex_in;
        apply_rzy(std::span<double>(real), a, b, theta);
        for (std::size_t i = 0; i < real.size(); ++i) {
          EXPECT_NEAR(real[i], out(static_cast<Eigen::Index>(i)).real(), 1e-12);
          EXPECT_NEAR(out(static_cast<Eigen::Index>(i)).imag(), 0.0, 1e-12);
        }
      }
}

TEST(ApplyRzy, InverseAndComposition) {
  std::mt19937_64 rng(3);
  auto sv = random_state(6, rng);
  const auto before = as_eigen(sv);
  apply_rzy(sv, 1, 4, 0.7);
  apply_rzy(sv, 1, 4, 0.4);
  auto direct = Statevector::from_amplitudes({before.data(), before.data() + before.size()});
  apply_rzy(direct, 1, 4, 1.1);
  EXPECT_LT((as_eigen(sv) - as_eigen(direct)).norm(), 1e-12);
  apply_rzy(sv, 1, 4, -1.1);
  EXPECT_LT((as_eigen(sv) - before).norm(), 1e-12);
}

TEST(Ansatz, HeavyNeighborsFiveNodeShape) {
  // Five nodes with distinct edge weights: 4 gates per layer over 2 layers.
  const std::vector<Edge> edges = {{0, 1, 5.0}, {0, 2, 4.0}, {1, 2, 3.0}, {2, 3, 2.0}, {3, 4, 1.0}, {1, 3, 0.5}};
  const auto g = WeightedGraph::from_edges(5, edges);
  const std::vector<std::size_t> gates = {4, 4};
  const auto ans = build_heavy_neighbors_ansatz(g, gates);
  ASSERT_EQ(ans.num_params(), 8u);
  std::set<std::pair<int, int>> layer0;
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(ans.gates[i].layer, 0u);
    layer0.insert({ans.gates[i].a, ans.gates[i].b});
  }
  EXPECT_EQ(layer0, (std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}, {2, 3}}));
  const auto top = ego_ranking(g, 1).order.front();
  std::set<std::pair<int, int>> seen;
  for (const auto& gate : ans.gates) {
    EXPECT_TRUE(seen.insert({std::min(gate.a, gate.b), std::max(gate.a, gate.b)}).second);
    EXPECT_EQ(gate.param, static_cast<std::size_t>(&gate - ans.gates.data()));
  }
  // The first layer-1 gate is rooted at the top ego-ranked vertex.
  EXPECT_TRUE(ans.gates[4].a == top || ans.gates[4].b == top);
}

TEST(Ansatz, PathUsesBothEdges) {
  const std::vector<std::size_t> gates = {2};
  const auto ans = build_heavy_neighbors_ansatz(path_graph(3), gates);
  ASSERT_EQ(ans.num_params(), 2u);
  EXPECT_EQ(std::make_pair(ans.gates[0].a, ans.gates[0].b), std::make_pair(0, 1));
  EXPECT_EQ(std::make_pair(ans.gates[1].a, ans.gates[1].b), std::make_pair(1, 2));
}

TEST(Ansatz, FullAnsatzCoversEveryPair) {
  const auto ans = build_full_ansatz(ring_graph(7));
  EXPECT_EQ(ans.num_params(), 21u);
  std::set<std::pair<int, int>> pairs;
  for (const auto& g : ans.gates) pairs.insert({std::min(g.a, g.b), std::max(g.a, g.b)});
  EXPECT_EQ(pairs.size(), 21u);
}

TEST(Prepare, ZeroParametersGiveUniformState) {
  const auto ans = build_full_ansatz(ring_graph(5));
  const std::vector<double> theta(ans.num_params(), 0.0);
  const auto sv = prepare(ans, theta);
  for (std::size_t i = 0; i < sv.dimension(); ++i) EXPECT_NEAR(sv[i].real(), 1.0 / std::sqrt(32.0), 1e-15);
}

TEST(Prepare, MatchesDenseOracleAndIsNormalized) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::random_graph(6, 0.5, rng, 1, false);
    const std::vector<std::size_t> gates = {4, 3, 3};
    const auto ans = build_heavy_neighbors_ansatz(g, gates);
    std::vector<double> theta(ans.num_params());
    for (auto& t : theta) t = angle(rng);
    const auto sv = prepare(ans, theta);
    EXPECT_NEAR(sv.norm_squared(), 1.0, 1e-9);
    EXPECT_LT((as_eigen(sv) - oracle::dense_prepare(ans, theta)).norm(), 1e-10);
    const auto real = prepare_real(ans, theta);
    for (std::size_t i = 0; i < real.size(); ++i) EXPECT_NEAR(real[i], sv[i].real(), 1e-14);
  }
}

TEST(Prepare, SingleGateMatchesApplyRzy) {
  Ansatz ans{3, {{2, 0, 0, 0}}, {1}};
  const std::vector<double> theta = {0.9};
  auto expected = initial_state(3);
  apply_rzy(expected, 2, 0, 0.9);
  EXPECT_LT((as_eigen(prepare(ans, theta)) - as_eigen(expected)).norm(), 1e-15);
}

TEST(Expectations, UniformStateHasZeroCorrelations) {
  const auto h = to_hamiltonian(build_qubo(ring_graph(6), 2.0));
  const auto e = expect_z_terms(initial_state(6), h);
  for (const auto t : e.terms) EXPECT_NEAR(t, 0.0, 1e-14);
  EXPECT_NEAR(e.energy, h.constant, 1e-12);
}

TEST(Expectations, BasisStateEnergyIsDiagonalEntry) {
  const auto h = to_hamiltonian(build_qubo(grid_graph(2, 3), 1.5));
  for (std::uint64_t x = 0; x < 64; ++x) {
    std::vector<C> amps(64, 0.0);
    amps[x] = 1.0;
    EXPECT_NEAR(expect_z_terms(Statevector::from_amplitudes(amps), h).energy, ham_energy(h, x), 1e-12);
  }
}

TEST(Expectations, MatchDenseOracleOnRandomStates) {
  std::mt19937_64 rng(5);
  for (std::size_t n = 2; n <= 10; ++n) {
    const auto g = oracle::random_graph(n, 0.5, rng, 3, false);
    const auto h = to_hamiltonian(build_qubo(g, 1.3));
    const auto sv = random_state(n, rng);
    const auto e = expect_z_terms(sv, h);
    const auto ref = oracle::dense_term_expectations(as_eigen(sv), h);
    double energy = h.constant;
    for (std::size_t a = 0; a < ref.size(); ++a) {
      EXPECT_NEAR(e.terms[a], ref[a], 1e-9);
      energy += h.terms[a].coeff * ref[a];
    }
    EXPECT_NEAR(e.energy, energy, 1e-9);
  }
}

TEST(Sampling, BasisStateAndDeterminism) {
  std::vector<C> amps(8, 0.0);
  amps[5] = 1.0;
  const auto s = sample(Statevector::from_amplitudes(amps), 100, 1);
  ASSERT_EQ(s.counts.size(), 1u);
  EXPECT_EQ(s.counts.at("101"), 100u);

  std::mt19937_64 rng(6);
  const auto sv = random_state(5, rng);
  const auto a = sample(sv, 5000, 42);
  const auto b = sample(sv, 5000, 42);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_NE(a.counts, sample(sv, 5000, 43).counts);
}

TEST(Sampling, UniformTwoQubitsWithinBinomialBounds) {
  const auto s = sample(initial_state(2), 100000, 7);
  EXPECT_EQ(s.shots, 100000u);
  for (const auto& [bits, c] : s.counts) EXPECT_NEAR(static_cast<double>(c), 25000.0, 500.0) << bits;
}

TEST(Sampling, IndicesAgreeWithProbabilities) {
  const std::vector<double> p = {0.5, 0.0, 0.3, 0.2};
  const auto hist = sample_indices(p, 20000, 3);
  std::uint64_t total = 0;
  for (const auto& [idx, c] : hist) {
    EXPECT_NE(idx, 1u);
    EXPECT_NEAR(static_cast<double>(c) / 20000.0, p[idx], 0.02);
    total += c;
  }
  EXPECT_EQ(total, 20000u);
}

}  // namespace
}  // namespace qdissect
