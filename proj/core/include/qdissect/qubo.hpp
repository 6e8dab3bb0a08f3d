// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_QUBO_HPP
#define QDISSECT_QUBO_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "qdissect/graph.hpp"
#include "qdissect/partition.hpp"

namespace qdissect {

/// Balanced-bipartition objective
///
///   C(x) = sum_{(i,j) in E} w_ij (x_i + x_j - 2 x_i x_j) + lambda (sum_i v_i x_i - Omega/2)^2
///
/// over bitstrings x. Holds its own copy of the graph data it needs.
class QuboProblem {
 public:
  QuboProblem(const WeightedGraph& g, double lambda, double nu = 0.05);

  std::size_t num_variables() const { return vertex_weights_.size(); }
  double lambda() const { return lambda_; }
  double nu() const { return nu_; }
  VertexWeight omega() const { return omega_; }
  std::span<const VertexWeight> vertex_weights() const { return vertex_weights_; }
  std::span<const Edge> edges() const { return edges_; }

  double cut_term(std::span<const std::uint8_t> x) const;
  double penalty_term(std::span<const std::uint8_t> x) const;

 private:
  std::vector<VertexWeight> vertex_weights_;
  std::vector<Edge> edges_;
  double lambda_;
  double nu_;
  VertexWeight omega_;
};

/// (w_max + 1) / max(1, v_min^2): one unit of balance violation costs at
/// least as much as cutting the heaviest edge again.
double default_lambda(const WeightedGraph& g);

QuboProblem build_qubo(const WeightedGraph& g, double lambda, double nu = 0.05);

double qubo_energy(const QuboProblem& q, std::span<const std::uint8_t> x);

/// Product of Pauli Z operators on `qubits` (one or two of them).
struct ZTerm {
  double coeff = 0.0;
  std::vector<int> qubits;

  std::uint64_t mask() const;
};

/// Diagonal Hamiltonian  constant + sum_a coeff_a prod_{i in support_a} Z_i.
struct ZHamiltonian {
  std::size_t n_qubits = 0;
  double constant = 0.0;
  std::vector<ZTerm> terms;
};

/// Substitutes x_i -> (1 - Z_i)/2 into C(x). Pair terms are emitted for every
/// edge, and for every vertex pair when lambda > 0, in lexicographic order.
ZHamiltonian to_hamiltonian(const QuboProblem& q);

double ham_energy(const ZHamiltonian& h, std::span<const std::uint8_t> x);
/// Same, with the bitstring given as a basis index (bit q = qubit q).
double ham_energy(const ZHamiltonian& h, std::uint64_t index);

/// In-place unnormalized Walsh-Hadamard transform:
/// f[S] <- sum_x f[x] (-1)^{|x & S|}. The size must be a power of two.
void walsh_hadamard(std::span<double> f);

/// ham_energy for every basis index, in O(n 2^n).
std::vector<double> ham_diagonal(const ZHamiltonian& h);

inline constexpr std::size_t kMaxExactVariables = 30;

struct ExactSolution {
  double energy = 0.0;
  std::vector<Bits> optima;  // sorted, complements included
  bool truncated = false;    // more than `max_optima` ties were found
};

/// Exhaustive minimum of C(x) by Gray-code enumeration over half of the
/// hypercube (C is invariant under complement). n <= 30.
ExactSolution exact_solve(const QuboProblem& q, std::size_t max_optima = std::size_t{1} << 20);

/// Relative excess energy (C(x) - C*) / C*, or C(x) - C* when C* <= 0.
double approximation_error(double energy, double c_star);
double approximation_error(const QuboProblem& q, std::span<const std::uint8_t> x, double c_star);

}  // namespace qdissect

#endif  // QDISSECT_QUBO_HPP
