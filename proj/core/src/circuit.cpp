// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/circuit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qdissect/partition.hpp"
#include "qdissect/random.hpp"

namespace qdissect {

namespace {

std::pair<int, int> unordered(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

}  // namespace

Ansatz build_heavy_neighbors_ansatz(const WeightedGraph& g, std::span<const std::size_t> gates_per_layer) {
  if (gates_per_layer.empty()) throw std::invalid_argument("ansatz needs at least one layer");
  for (const auto count : gates_per_layer)
    if (count == 0) throw std::invalid_argument("every layer needs at least one gate");
  if (g.num_edges() == 0) throw std::invalid_argument("ansatz graph has no edges");

  Ansatz ans;
  ans.n_qubits = g.num_vertices();
  ans.layer_sizes.assign(gates_per_layer.begin(), gates_per_layer.end());
  std::set<std::pair<int, int>> used;
  auto place = [&](int a, int b, std::size_t layer) {
    ans.gates.push_back({a, b, ans.gates.size(), layer});
    used.insert(unordered(a, b));
  };

  auto edges = g.edges();
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& x, const Edge& y) { return x.weight > y.weight; });
  for (std::size_t k = 0; k < edges.size() && k < gates_per_layer[0]; ++k) place(edges[k].u, edges[k].v, 0);

  const std::size_t n = g.num_vertices();
  for (std::size_t layer = 1; layer < gates_per_layer.size(); ++layer) {
    const auto ranking = ego_ranking(g, static_cast<int>(layer));
    const auto& s = ranking.order;
    std::size_t placed = 0;
    for (std::size_t i = 0; i < n && placed < gates_per_layer[layer]; ++i) {
      for (std::size_t j = i + 1; j < n && placed < gates_per_layer[layer]; ++j) {
        if (used.contains(unordered(s[i], s[j]))) continue;
        place(s[i], s[j], layer);
        ++placed;
      }
    }
  }
  return ans;
}

Ansatz build_full_ansatz(const WeightedGraph& g) {
  const std::size_t n = g.num_vertices();
  const std::size_t layers[] = {std::max<std::size_t>(g.num_edges(), 1), std::max<std::size_t>(n * (n - 1) / 2, 1)};
  return build_heavy_neighbors_ansatz(g, layers);
}

Statevector::Statevector(std::size_t n_qubits, std::size_t max_qubits) : n_qubits_(n_qubits) {
  if (n_qubits > max_qubits)
    throw std::length_error(std::to_string(n_qubits) + " qubits exceeds the simulator limit of " +
                            std::to_string(max_qubits));
  amplitudes_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  if (amplitudes.empty() || !std::has_single_bit(amplitudes.size()))
    throw std::invalid_argument("amplitude count must be a power of two");
  Statevector sv;
  sv.n_qubits_ = static_cast<std::size_t>(std::countr_zero(amplitudes.size()));
  sv.amplitudes_ = std::move(amplitudes);
  return sv;
}

double Statevector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  return total;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amplitudes_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amplitudes_[i]);
  return p;
}

Statevector initial_state(std::size_t n_qubits, std::size_t max_qubits) {
  if (n_qubits == 0) throw std::invalid_argument("initial_state needs at least one qubit");
  Statevector sv(n_qubits, max_qubits);
  const double amp = std::pow(2.0, -0.5 * static_cast<double>(n_qubits));
  for (auto& a : sv.amplitudes()) a = amp;
  return sv;
}

namespace {

// exp(-i t/2 Z_a Y_b) = cos(t/2) - i sin(t/2) Z_a Y_b is a real rotation of
// each (b=0, b=1) amplitude pair, with its sense set by the Z_a eigenvalue.
// Indices are visited in groups of four sharing all bits except a and b.
template <typename T>
inline void rotate_group(T* p0, T* p1, T* q0, T* q1, double c, double s) {
  const T u0 = *p0, u1 = *p1, v0 = *q0, v1 = *q1;
  *p0 = c * u0 - s * u1;
  *p1 = c * u1 + s * u0;
  *q0 = c * v0 + s * v1;
  *q1 = c * v1 - s * v0;
}

// Lower of the two strides fixed at compile time, so short inner runs unroll.
// Hi == 0 leaves the upper stride to run time.
template <std::size_t Lo, std::size_t Hi, typename T>
void rzy_small_stride(T* amps, std::size_t dim, std::size_t abit, std::size_t bbit, std::size_t hibit, double c,
                      double s) {
  if constexpr (Hi != 0) hibit = Hi;
  for (std::size_t x = 0; x < dim; x += 2 * hibit)
    for (std::size_t y = x; y < x + hibit; y += 2 * Lo)
      for (std::size_t k = 0; k < Lo; ++k) {
        T* p = amps + y + k;
        rotate_group(p, p + bbit, p + abit, p + abit + bbit, c, s);
      }
}

template <typename T>
void rzy_kernel(T* amps, std::size_t dim, int a, int b, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const std::size_t abit = std::size_t{1} << a;
  const std::size_t bbit = std::size_t{1} << b;
  const std::size_t lobit = std::min(abit, bbit);
  const std::size_t hibit = std::max(abit, bbit);
  switch (lobit * 16 + std::min<std::size_t>(hibit, 16)) {
    case 1 * 16 + 2: return rzy_small_stride<1, 2>(amps, dim, abit, bbit, hibit, c, s);
    case 1 * 16 + 4: return rzy_small_stride<1, 4>(amps, dim, abit, bbit, hibit, c, s);
    case 1 * 16 + 8: return rzy_small_stride<1, 8>(amps, dim, abit, bbit, hibit, c, s);
    case 2 * 16 + 4: return rzy_small_stride<2, 4>(amps, dim, abit, bbit, hibit, c, s);
    case 2 * 16 + 8: return rzy_small_stride<2, 8>(amps, dim, abit, bbit, hibit, c, s);
    case 4 * 16 + 8: return rzy_small_stride<4, 8>(amps, dim, abit, bbit, hibit, c, s);
    default: break;
  }
  switch (lobit) {
    case 1: return rzy_small_stride<1, 0>(amps, dim, abit, bbit, hibit, c, s);
    case 2: return rzy_small_stride<2, 0>(amps, dim, abit, bbit, hibit, c, s);
    case 4: return rzy_small_stride<4, 0>(amps, dim, abit, bbit, hibit, c, s);
    default: break;
  }
  for (std::size_t x = 0; x < dim; x += 2 * hibit) {
    for (std::size_t y = x; y < x + hibit; y += 2 * lobit) {
      T* p0 = amps + y;         // a = 0, b = 0
      T* p1 = amps + y + bbit;  // a = 0, b = 1
      T* q0 = amps + y + abit;  // a = 1, b = 0
      T* q1 = q0 + bbit;        // a = 1, b = 1
      for (std::size_t k = 0; k < lobit; ++k) rotate_group(p0 + k, p1 + k, q0 + k, q1 + k, c, s);
    }
  }
}

void check_rzy_qubits(std::size_t n_qubits, int a, int b) {
  const auto n = static_cast<int>(n_qubits);
  if (a < 0 || b < 0 || a >= n || b >= n) throw std::out_of_range("R_ZY qubit index out of range");
  if (a == b) throw std::invalid_argument("R_ZY needs two distinct qubits");
}

}  // namespace

void apply_rzy(Statevector& sv, int a, int b, double theta) {
  check_rzy_qubits(sv.num_qubits(), a, b);
  rzy_kernel(sv.amplitudes().data(), sv.dimension(), a, b, theta);
}

void apply_rzy(std::span<double> amps, int a, int b, double theta) {
  if (amps.empty() || !std::has_single_bit(amps.size())) throw std::invalid_argument("amplitude count must be a power of two");
  check_rzy_qubits(static_cast<std::size_t>(std::countr_zero(amps.size())), a, b);
  rzy_kernel(amps.data(), amps.size(), a, b, theta);
}

void apply_gates(Statevector& sv, const Ansatz& ans, std::span<const double> theta, std::size_t first,
                 std::size_t last) {
  if (theta.size() != ans.num_params())
    throw std::invalid_argument("parameter vector has length " + std::to_string(theta.size()) +
                                ", ansatz expects " + std::to_string(ans.num_params()));
  for (std::size_t k = first; k < last; ++k) {
    const auto& gate = ans.gates[k];
    apply_rzy(sv, gate.a, gate.b, theta[gate.param]);
  }
}

void apply_gates(std::span<double> amps, const Ansatz& ans, std::span<const double> theta, std::size_t first,
                 std::size_t last) {
  if (theta.size() != ans.num_params())
    throw std::invalid_argument("parameter vector has length " + std::to_string(theta.size()) +
                                ", ansatz expects " + std::to_string(ans.num_params()));
  if (amps.size() != (std::size_t{1} << ans.n_qubits)) throw std::invalid_argument("state size does not match the ansatz");
  for (std::size_t k = first; k < last; ++k) {
    const auto& gate = ans.gates[k];
    apply_rzy(amps, gate.a, gate.b, theta[gate.param]);
  }
}

std::vector<double> prepare_real(const Ansatz& ans, std::span<const double> theta, std::size_t max_qubits) {
  if (ans.n_qubits == 0) throw std::invalid_argument("prepare needs at least one qubit");
  if (ans.n_qubits > max_qubits)
    throw std::length_error(std::to_string(ans.n_qubits) + " qubits exceeds the simulator limit of " +
                            std::to_string(max_qubits));
  std::vector<double> amps(std::size_t{1} << ans.n_qubits, std::pow(2.0, -0.5 * static_cast<double>(ans.n_qubits)));
  apply_gates(std::span<double>(amps), ans, theta, 0, ans.gates.size());
  return amps;
}

Statevector prepare(const Ansatz& ans, std::span<const double> theta, std::size_t max_qubits) {
  if (theta.size() != ans.num_params())
    throw std::invalid_argument("parameter vector has length " + std::to_string(theta.size()) +
                                ", ansatz expects " + std::to_string(ans.num_params()));
  auto sv = initial_state(ans.n_qubits, max_qubits);
  apply_gates(sv, ans, theta, 0, ans.gates.size());
  return sv;
}

TermExpectations expect_z_terms(const Statevector& sv, const ZHamiltonian& h) {
  if (sv.num_qubits() != h.n_qubits)
    throw std::invalid_argument("Hamiltonian and state have different qubit counts");
  TermExpectations out;
  out.terms.resize(h.terms.size());
  auto p = sv.probabilities();
  if (h.terms.size() > sv.num_qubits()) {
    walsh_hadamard(p);
    for (std::size_t t = 0; t < h.terms.size(); ++t) out.terms[t] = p[h.terms[t].mask()];
  } else {
    for (std::size_t t = 0; t < h.terms.size(); ++t) {
      const auto mask = h.terms[t].mask();
      double acc = 0.0;
      for (std::size_t x = 0; x < p.size(); ++x) acc += (std::popcount(x & mask) & 1) ? -p[x] : p[x];
      out.terms[t] = acc;
    }
  }
  out.energy = h.constant;
  for (std::size_t t = 0; t < h.terms.size(); ++t) out.energy += h.terms[t].coeff * out.terms[t];
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> sample_indices(std::span<const double> probabilities,
                                                                    std::size_t shots, std::uint64_t seed) {
  if (probabilities.empty()) throw std::invalid_argument("cannot sample from an empty distribution");
  double total = 0.0;
  for (const double p : probabilities) total += p;
  if (!(total > 0.0)) throw std::invalid_argument("cannot sample from a zero state");

  // Inverse-CDF draws, resolved in one pass over the sorted uniforms.
  Rng rng(seed);
  std::vector<double> u(shots);
  for (auto& v : u) v = uniform01(rng) * total;
  std::sort(u.begin(), u.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> hist;
  const std::size_t last = probabilities.size() - 1;
  std::size_t index = 0;
  double cum = probabilities[0];
  for (const double v : u) {
    while (cum <= v && index < last) cum += probabilities[++index];
    if (!hist.empty() && hist.back().first == index)
      ++hist.back().second;
    else
      hist.emplace_back(index, 1);
  }
  return hist;
}

SampleSet sample(const Statevector& sv, std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("sample needs at least one shot");
  const auto p = sv.probabilities();
  SampleSet set;
  for (const auto& [index, count] : sample_indices(p, shots, seed))
    set.add(to_string(index_to_bits(index, sv.num_qubits())), count);
  return set;
}

}  // namespace qdissect
