// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_CIRCUIT_HPP
#define QDISSECT_CIRCUIT_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qdissect/graph.hpp"
#include "qdissect/qubo.hpp"

namespace qdissect {

/// R_ZY(theta) = exp(-i theta/2 Z_a Y_b) on qubits (a, b).
struct Gate {
  int a = 0;
  int b = 1;
  std::size_t param = 0;
  std::size_t layer = 0;
};

struct Ansatz {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;                 // one parameter per gate, in gate order
  std::vector<std::size_t> layer_sizes;    // requested gates per layer

  std::size_t num_params() const { return gates.size(); }
};

/// HeavyNeighborsAnsatz. Layer 0 entangles the endpoints of the heaviest
/// edges (ties: lexicographic pair). Layer k > 0 ranks vertices by radius-k
/// ego weight, s_1, s_2, ..., and walks the pairs (s_1,s_2), (s_1,s_3), ...,
/// (s_1,s_n), (s_2,s_3), ... skipping pairs already used by any earlier gate,
/// until `gates_per_layer[k]` gates are placed or the pairs run out.
Ansatz build_heavy_neighbors_ansatz(const WeightedGraph& g, std::span<const std::size_t> gates_per_layer);

/// Two layers: every edge, then every remaining vertex pair, n(n-1)/2 gates.
Ansatz build_full_ansatz(const WeightedGraph& g);

inline constexpr std::size_t kDefaultMaxQubits = 26;

/// Dense 2^n amplitude vector. Basis index bit q holds qubit q.
class Statevector {
 public:
  using Amplitude = std::complex<double>;

  Statevector() = default;
  /// |0...0> on n qubits.
  explicit Statevector(std::size_t n_qubits, std::size_t max_qubits = kDefaultMaxQubits);
  static Statevector from_amplitudes(std::vector<Amplitude> amplitudes);

  std::size_t num_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  std::span<Amplitude> amplitudes() { return amplitudes_; }
  const Amplitude& operator[](std::size_t i) const { return amplitudes_[i]; }

  double norm_squared() const;
  std::vector<double> probabilities() const;

 private:
  std::size_t n_qubits_ = 0;
  std::vector<Amplitude> amplitudes_;
};

/// |+>^n: uniform amplitudes 2^{-n/2}.
Statevector initial_state(std::size_t n_qubits, std::size_t max_qubits = kDefaultMaxQubits);

void apply_rzy(Statevector& sv, int a, int b, double theta);

// R_ZY is a real matrix and |+>^n is real, so ansatz states have real
// amplitudes; the overloads below work on such states stored as doubles.

void apply_rzy(std::span<double> amps, int a, int b, double theta);
void apply_gates(std::span<double> amps, const Ansatz& ans, std::span<const double> theta, std::size_t first,
                 std::size_t last);
/// Real amplitudes of prepare(ans, theta).
std::vector<double> prepare_real(const Ansatz& ans, std::span<const double> theta,
                                 std::size_t max_qubits = kDefaultMaxQubits);

/// Applies gates [first, last) of `ans` to `sv`.
void apply_gates(Statevector& sv, const Ansatz& ans, std::span<const double> theta, std::size_t first,
                 std::size_t last);

/// initial_state followed by every gate of the ansatz.
Statevector prepare(const Ansatz& ans, std::span<const double> theta,
                    std::size_t max_qubits = kDefaultMaxQubits);

struct TermExpectations {
  std::vector<double> terms;  // <P_a> per Hamiltonian term
  double energy = 0.0;        // constant + sum coeff_a <P_a>
};

TermExpectations expect_z_terms(const Statevector& sv, const ZHamiltonian& h);

/// Histogram of measured bitstrings (qubit 0 is the leftmost character).
struct SampleSet {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;

  void add(const std::string& bits, std::uint64_t count = 1) {
    counts[bits] += count;
    shots += count;
  }
};

/// Multinomial draw of `shots` outcomes from |amplitude|^2, deterministic in `seed`.
SampleSet sample(const Statevector& sv, std::size_t shots, std::uint64_t seed);

/// Same draw, returned as basis indices with multiplicities (sorted by index).
std::vector<std::pair<std::uint64_t, std::uint64_t>> sample_indices(std::span<const double> probabilities,
                                                                    std::size_t shots, std::uint64_t seed);

}  // namespace qdissect

#endif  // QDISSECT_CIRCUIT_HPP
