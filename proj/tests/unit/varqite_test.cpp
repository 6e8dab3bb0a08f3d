// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qdissect/generators.hpp"
#include "qdissect/varqite.hpp"

namespace qdissect {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_angles(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::vector<double> theta(m);
  for (auto& t : theta) t = angle(rng);
  return theta;
}

Ansatz random_heavy_ansatz(std::size_t n, std::mt19937_64& rng) {
  const auto g = oracle::random_graph(n, 0.5, rng, 1, false);
  const std::vector<std::size_t> gates = {n, n - 1, n - 2};
  return build_heavy_neighbors_ansatz(g, gates);
}

// Exact D from its definition via dense expectations of P_a and P_a H.
Eigen::VectorXd dense_d(const Statevector& sv, const ZHamiltonian& h) {
  std::vector<double> p = sv.probabilities();
  double e = 0.0;
  for (std::uint64_t x = 0; x < p.size(); ++x) e += p[x] * ham_energy(h, x);
  Eigen::VectorXd d(static_cast<Eigen::Index>(h.terms.size()));
  for (std::size_t a = 0; a < h.terms.size(); ++a) {
    double pa = 0.0, pah = 0.0;
    for (std::uint64_t x = 0; x < p.size(); ++x) {
      const double sign = std::popcount(x & h.terms[a].mask()) % 2 ? -1.0 : 1.0;
      pa += p[x] * sign;
      pah += p[x] * sign * ham_energy(h, x);
    }
    d(static_cast<Eigen::Index>(a)) = -(pah - e * pa);
  }
  return d;
}

TEST(AssembleD, EigenstateIsFixedPoint) {
  const auto h = to_hamiltonian(build_qubo(ring_graph(5), 2.0));
  std::vector<std::complex<double>> amps(32, 0.0);
  amps[11] = 1.0;
  const auto d = assemble_D(Statevector::from_amplitudes(amps), h);
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AssembleD, UniformStateSingleTerm) {
  const ZHamiltonian h{2, 0.0, {{3.5, {0, 1}}}};
  const auto d = assemble_D(initial_state(2), h);
  ASSERT_EQ(d.size(), 1);
  EXPECT_NEAR(d(0), -3.5, 1e-12);
}

TEST(AssembleD, MatchesDefinitionOnPreparedStates) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ans = random_heavy_ansatz(6, rng);
    const auto g = oracle::random_graph(6, 0.6, rng, 3, false);
    const auto h = to_hamiltonian(build_qubo(g, 1.1));
    const auto sv = prepare(ans, random_angles(ans.num_params(), rng));
    EXPECT_LT((assemble_D(sv, h) - dense_d(sv, h)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(AssembleD, SampledAgreesWithExactWithinFiveSigma) {
  std::mt19937_64 rng(2);
  const auto ans = random_heavy_ansatz(8, rng);
  const auto h = to_hamiltonian(build_qubo(oracle::random_graph(8, 0.5, rng, 2), 1.0));
  const auto sv = prepare(ans, random_angles(ans.num_params(), rng));
  const auto p = sv.probabilities();
  const std::size_t shots = 100000;
  const auto hist = sample_indices(p, shots, 77);
  const auto sampled = assemble_D(hist, h);
  const auto exact = assemble_D(sv, h);
  double e = 0.0;
  for (std::uint64_t x = 0; x < p.size(); ++x) e += p[x] * ham_energy(h, x);
  for (std::size_t a = 0; a < h.terms.size(); ++a) {
    // Standard error of the mean of P_a(x) (C(x) - E).
    double var = 0.0;
    for (std::uint64_t x = 0; x < p.size(); ++x) {
      const double sign = std::popcount(x & h.terms[a].mask()) % 2 ? -1.0 : 1.0;
      const double f = sign * (ham_energy(h, x) - e);
      var += p[x] * f * f;
    }
    const double sigma = std::sqrt(var / static_cast<double>(shots)) + 1e-12;
    const auto i = static_cast<Eigen::Index>(a);
    EXPECT_LE(std::abs(sampled(i) - exact(i)), 5.0 * sigma) << "term " << a;
  }
}

TEST(AssembleG, MatchesCentralFiniteDifferences) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ans = random_heavy_ansatz(6, rng);
    const auto h = to_hamiltonian(build_qubo(oracle::random_graph(6, 0.5, rng, 2), 1.3));
    const auto theta = random_angles(ans.num_params(), rng);
    const auto g = assemble_G(ans, theta, h, 0, 0);
    const auto ref = oracle::finite_difference_G(ans, theta, h, 1e-5);
    EXPECT_LT((g - ref).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(AssembleG, SingleGateAnalyticDerivative) {
  // From |+>|+>, exp(-i t/2 Z_0 Y_1) gives <Z_1> = 0 and <Z_0 Z_1> = -sin(t).
  Ansatz ans{2, {{0, 1, 0, 0}}, {1}};
  const ZHamiltonian h{2, 0.0, {{1.0, {1}}, {1.0, {0, 1}}}};
  for (const double t : {0.0, 0.3, 1.7}) {
    const std::vector<double> theta = {t};
    const auto g = assemble_G(ans, theta, h, 0, 0);
    const auto ref = oracle::finite_difference_G(ans, theta, h, 1e-5);
    EXPECT_LT((g - ref).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(g(0, 0), 0.0, 1e-12);
    EXPECT_NEAR(g(1, 0), -0.5 * std::cos(t), 1e-9);
  }
}

TEST(AssembleG, DisjointTermRowIsZero) {
  Ansatz ans{4, {{0, 1, 0, 0}}, {1}};
  const ZHamiltonian h{4, 0.0, {{1.0, {2, 3}}, {1.0, {0, 1}}}};
  const std::vector<double> theta = {0.8};
  const auto g = assemble_G(ans, theta, h, 0, 0);
  EXPECT_EQ(g(0, 0), 0.0);
}

TEST(AssembleG, SampledAgreesWithExact) {
  std::mt19937_64 rng(4);
  const auto ans = random_heavy_ansatz(6, rng);
  const auto h = to_hamiltonian(build_qubo(oracle::random_graph(6, 0.5, rng, 2), 1.0));
  const auto theta = random_angles(ans.num_params(), rng);
  const std::size_t shots = 100000;
  std::size_t preps = 0;
  const auto sampled = assemble_G(ans, theta, h, shots, 9, &preps);
  const auto exact = assemble_G(ans, theta, h, 0, 0);
  EXPECT_EQ(preps, 2 * ans.num_params());
  // Each entry is a difference of two +-1 means over `shots` draws, divided by 4.
  const double sigma = std::sqrt(2.0 / static_cast<double>(shots)) / 4.0;
  EXPECT_LT((sampled - exact).cwiseAbs().maxCoeff(), 5.0 * sigma);
}

TEST(SolveStep, Examples) {
  const Eigen::VectorXd d = Eigen::VectorXd::LinSpaced(4, -1.0, 2.0);
  EXPECT_LT((solve_step(Eigen::MatrixXd::Identity(4, 4), d, 0.0) - d).norm(), 1e-14);
  EXPECT_EQ(solve_step(Eigen::MatrixXd::Zero(4, 3), d, 0.1), Eigen::VectorXd::Zero(3));
  EXPECT_THROW(solve_step(Eigen::MatrixXd::Zero(4, 3), d, 0.0), SingularSystemError);
  EXPECT_THROW(solve_step(Eigen::MatrixXd::Zero(4, 3), d, -1.0), std::invalid_argument);
}

TEST(SolveStep, MatchesSvdOracle) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd g(20, 12);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
    Eigen::VectorXd d(20);
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = normal(rng);
    for (const double ridge : {1e-6, 1e-2}) {
      const auto x = solve_step(g, d, ridge);
      const auto ref = oracle::ridge_solve_svd(g, d, ridge);
      EXPECT_LT((x - ref).norm() / ref.norm(), 1e-6);
    }
  }
}

TEST(Varqite, TwoVertexInstanceFindsOptimum) {
  const auto q = build_qubo(path_graph(2), 1.0);
  Ansatz ans{2, {{0, 1, 0, 0}}, {1}};
  VarqiteConfig cfg;
  cfg.max_steps = 50;
  cfg.c_star = exact_solve(q).energy;
  const auto r = run_varqite(q, ans, cfg);
  EXPECT_TRUE(to_string(r.best.bits) == "01" || to_string(r.best.bits) == "10");
  EXPECT_DOUBLE_EQ(r.best_energy, 1.0);
  EXPECT_LT(*r.trace.records.back().relative_error, 1e-3);
  EXPECT_EQ(r.status, VarqiteStatus::Completed);
}

TEST(Varqite, RingEightWithShotsFindsAntipodalCut) {
  const auto g = ring_graph(8);
  const auto q = build_qubo(g, default_lambda(g));
  const auto ans = build_full_ansatz(g);
  VarqiteConfig cfg;
  cfg.shots = 2000;
  cfg.max_steps = 60;
  cfg.seed = 3;
  const auto r = run_varqite(q, ans, cfg);
  EXPECT_TRUE(r.best_balanced);
  EXPECT_DOUBLE_EQ(r.best.cut_weight, 2.0);
  for (std::size_t i = 1; i < r.trace.records.size(); ++i)
    EXPECT_LE(r.trace.records[i].best_so_far_energy, r.trace.records[i - 1].best_so_far_energy);
}

TEST(Varqite, ZeroStepSizeKeepsParameters) {
  const auto g = ring_graph(6);
  const auto q = build_qubo(g, default_lambda(g));
  const auto ans = build_full_ansatz(g);
  VarqiteConfig cfg;
  cfg.d_tau = 0.0;
  cfg.max_steps = 10;
  const auto r = run_varqite(q, ans, cfg);
  EXPECT_EQ(r.theta, std::vector<double>(ans.num_params(), 0.0));
  for (const auto& rec : r.trace.records) EXPECT_DOUBLE_EQ(rec.energy, r.trace.records.front().energy);
}

TEST(Varqite, StepPreparesTwoMPlusOneStates) {
  std::mt19937_64 rng(6);
  const auto g = oracle::random_graph(7, 0.5, rng, 2);
  const auto q = build_qubo(g, default_lambda(g));
  const std::vector<std::size_t> gates = {5, 4};
  const auto ans = build_heavy_neighbors_ansatz(g, gates);
  for (const std::size_t shots : {std::size_t{0}, std::size_t{128}}) {
    VarqiteConfig cfg;
    cfg.shots = shots;
    VarqiteEngine engine(q, ans, cfg);
    for (std::size_t k = 1; k <= 3; ++k) {
      ASSERT_TRUE(engine.step());
      EXPECT_EQ(engine.preparations(), k * (2 * ans.num_params() + 1));
    }
  }
}

TEST(Varqite, DeterministicPerSeed) {
  const auto g = grid_graph(2, 4);
  const auto q = build_qubo(g, default_lambda(g));
  const auto ans = build_full_ansatz(g);
  VarqiteConfig cfg;
  cfg.shots = 256;
  cfg.max_steps = 15;
  cfg.seed = 99;
  const auto a = run_varqite(q, ans, cfg);
  const auto b = run_varqite(q, ans, cfg);
  EXPECT_EQ(a.theta, b.theta);
  EXPECT_EQ(a.final_samples.counts, b.final_samples.counts);
  cfg.seed = 100;
  EXPECT_NE(run_varqite(q, ans, cfg).theta, a.theta);
}

TEST(Varqite, SmallStepsDecreaseExactEnergy) {
  const auto g = ring_graph(8);
  const auto q = build_qubo(g, default_lambda(g));
  const auto ans = build_full_ansatz(g);
  VarqiteConfig cfg;
  cfg.d_tau = 0.01;
  cfg.max_steps = 40;
  const auto r = run_varqite(q, ans, cfg);
  for (std::size_t i = 1; i < r.trace.records.size(); ++i)
    EXPECT_LE(r.trace.records[i].energy, r.trace.records[i - 1].energy + 1e-9);
  EXPECT_LT(r.trace.records.back().energy, r.trace.records.front().energy);
}

TEST(Varqite, StopsAtOptimumAndOnStall) {
  const auto g = ring_graph(6);
  const auto q = build_qubo(g, default_lambda(g));
  const auto ans = build_full_ansatz(g);
  VarqiteConfig cfg;
  cfg.c_star = exact_solve(q).energy;
  cfg.stop_at_optimum = true;
  EXPECT_EQ(run_varqite(q, ans, cfg).status, VarqiteStatus::StoppedAtOptimum);

  VarqiteConfig stall;
  stall.d_tau = 0.0;
  stall.energy_tol = 1e-12;
  stall.patience = 3;
  const auto r = run_varqite(q, ans, stall);
  EXPECT_EQ(r.status, VarqiteStatus::Converged);
  EXPECT_EQ(r.steps, 4u);
}

TEST(Varqite, RejectsInvalidConfig) {
  VarqiteConfig cfg;
  cfg.d_tau = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.ridge = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.record_every = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  const auto q = build_qubo(ring_graph(4), 1.0);
  const auto ans = build_full_ansatz(ring_graph(5));
  EXPECT_THROW(VarqiteEngine(q, ans, VarqiteConfig{}), std::invalid_argument);
}

}  // namespace
}  // namespace qdissect
