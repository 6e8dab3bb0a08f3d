// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/varqite.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>

#include "qdissect/random.hpp"

namespace qdissect {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Branch-free parity; std::popcount is a library call unless the target
// enables the popcnt instruction.
inline bool odd_parity(std::uint64_t v) {
  v ^= v >> 32;
  v ^= v >> 16;
  v ^= v >> 8;
  v ^= v >> 4;
  return (0x6996U >> (v & 0xfU)) & 1U;
}

std::vector<std::uint64_t> term_masks(const ZHamiltonian& h) {
  std::vector<std::uint64_t> masks;
  masks.reserve(h.terms.size());
  for (const auto& t : h.terms) masks.push_back(t.mask());
  return masks;
}

// sum_x f[x] (-1)^{|x & mask|} for every mask. Uses a Walsh-Hadamard
// transform when there are more masks than qubits.
std::vector<double> signed_sums(std::vector<double> f, std::span<const std::uint64_t> masks) {
  std::vector<double> out(masks.size());
  const std::size_t dim = f.size();
  if (masks.size() > static_cast<std::size_t>(std::countr_zero(dim))) {
    walsh_hadamard(f);
    for (std::size_t t = 0; t < masks.size(); ++t) out[t] = f[masks[t]];
    return out;
  }
  for (std::size_t t = 0; t < masks.size(); ++t) {
    double acc = 0.0;
    for (std::size_t x = 0; x < dim; ++x) acc += odd_parity(x & masks[t]) ? -f[x] : f[x];
    out[t] = acc;
  }
  return out;
}

std::vector<double> initial_amplitudes(std::size_t n_qubits, std::size_t max_qubits) {
  const auto sv = initial_state(n_qubits, max_qubits);
  std::vector<double> amps(sv.dimension());
  for (std::size_t x = 0; x < amps.size(); ++x) amps[x] = sv[x].real();
  return amps;
}

std::vector<double> squares(const std::vector<double>& amps) {
  std::vector<double> p(amps.size());
  for (std::size_t x = 0; x < amps.size(); ++x) p[x] = amps[x] * amps[x];
  return p;
}

Eigen::VectorXd exact_d(const std::vector<double>& p, const std::vector<double>& diag,
                        std::span<const std::uint64_t> masks) {
  double energy = 0.0;
  std::vector<double> ph(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) {
    ph[x] = p[x] * diag[x];
    energy += ph[x];
  }
  const auto pz = signed_sums(p, masks);
  const auto phz = signed_sums(std::move(ph), masks);
  Eigen::VectorXd d(static_cast<Eigen::Index>(masks.size()));
  for (std::size_t t = 0; t < masks.size(); ++t) d(static_cast<Eigen::Index>(t)) = -(phz[t] - energy * pz[t]);
  return d;
}

// out[t] = sum_r w[r] P_t(x_r) over histogram rows. One- and two-qubit terms
// come from the weighted Gram matrix of the +-1 sign rows.
std::vector<double> weighted_term_sums(std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram,
                                       std::span<const std::uint64_t> masks, std::size_t n_qubits,
                                       const Eigen::VectorXd& w) {
  const auto rows = static_cast<Eigen::Index>(histogram.size());
  const auto n = static_cast<Eigen::Index>(n_qubits);
  Eigen::MatrixXd signs(rows, n);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto x = histogram[static_cast<std::size_t>(r)].first;
    for (Eigen::Index q = 0; q < n; ++q) signs(r, q) = ((x >> q) & 1U) ? -1.0 : 1.0;
  }
  const Eigen::VectorXd linear = signs.transpose() * w;
  const Eigen::MatrixXd pairs = signs.transpose() * (w.asDiagonal() * signs);
  std::vector<double> out(masks.size(), 0.0);
  for (std::size_t t = 0; t < masks.size(); ++t) {
    const auto mask = masks[t];
    if (mask == 0) {
      out[t] = w.sum();
      continue;
    }
    const auto q0 = std::countr_zero(mask);
    const auto rest = mask & (mask - 1);
    if (rest == 0) {
      out[t] = linear(q0);
    } else if ((rest & (rest - 1)) == 0) {
      out[t] = pairs(q0, std::countr_zero(rest));
    } else {
      for (Eigen::Index r = 0; r < rows; ++r)
        out[t] += odd_parity(histogram[static_cast<std::size_t>(r)].first & mask) ? -w(r) : w(r);
    }
  }
  return out;
}

Eigen::VectorXd sampled_d(std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram,
                          std::span<const std::uint64_t> masks, std::size_t n_qubits,
                          const std::function<double(std::uint64_t)>& energy_of) {
  double shots = 0.0;
  double mean = 0.0;
  Eigen::VectorXd energies(static_cast<Eigen::Index>(histogram.size()));
  for (std::size_t r = 0; r < histogram.size(); ++r) {
    const auto [x, c] = histogram[r];
    energies(static_cast<Eigen::Index>(r)) = energy_of(x);
    shots += static_cast<double>(c);
    mean += static_cast<double>(c) * energies(static_cast<Eigen::Index>(r));
  }
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(masks.size()));
  if (shots == 0.0) return d;
  mean /= shots;
  Eigen::VectorXd w(energies.size());
  for (std::size_t r = 0; r < histogram.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    w(i) = static_cast<double>(histogram[r].second) * (energies(i) - mean) / shots;
  }
  const auto sums = weighted_term_sums(histogram, masks, n_qubits, w);
  for (std::size_t t = 0; t < masks.size(); ++t) d(static_cast<Eigen::Index>(t)) = -sums[t];
  return d;
}

std::vector<double> sampled_terms(std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram,
                                  std::span<const std::uint64_t> masks, std::size_t n_qubits) {
  double shots = 0.0;
  for (const auto& [x, c] : histogram) shots += static_cast<double>(c);
  Eigen::VectorXd w(static_cast<Eigen::Index>(histogram.size()));
  for (std::size_t r = 0; r < histogram.size(); ++r)
    w(static_cast<Eigen::Index>(r)) = static_cast<double>(histogram[r].second) / shots;
  return weighted_term_sums(histogram, masks, n_qubits, w);
}

}  // namespace

void VarqiteConfig::validate() const {
  if (!(d_tau >= 0.0) || !std::isfinite(d_tau)) throw std::invalid_argument("d_tau must be finite and >= 0");
  if (!(ridge >= 0.0)) throw std::invalid_argument("ridge must be >= 0");
  if (sample_shots == 0) throw std::invalid_argument("sample_shots must be positive");
  if (record_every == 0) throw std::invalid_argument("record_every must be positive");
  if (!(energy_tol >= 0.0)) throw std::invalid_argument("energy_tol must be >= 0");
  if (patience == 0) throw std::invalid_argument("patience must be positive");
}

std::string to_string(VarqiteStatus status) {
  switch (status) {
    case VarqiteStatus::Completed: return "completed";
    case VarqiteStatus::StoppedAtOptimum: return "stopped-at-optimum";
    case VarqiteStatus::Converged: return "converged";
    case VarqiteStatus::NonFinite: return "non-finite";
  }
  return "unknown";
}

Eigen::VectorXd assemble_D(const Statevector& sv, const ZHamiltonian& h) {
  if (sv.num_qubits() != h.n_qubits) throw std::invalid_argument("Hamiltonian and state have different qubit counts");
  return exact_d(sv.probabilities(), ham_diagonal(h), term_masks(h));
}

Eigen::VectorXd assemble_D(std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram,
                           const ZHamiltonian& h) {
  return sampled_d(histogram, term_masks(h), h.n_qubits, [&](std::uint64_t x) { return ham_energy(h, x); });
}

Eigen::MatrixXd assemble_G(const Ansatz& ans, std::span<const double> theta, const ZHamiltonian& h,
                           std::size_t shots, std::uint64_t seed, std::size_t* preparations,
                           std::size_t max_qubits) {
  if (ans.n_qubits != h.n_qubits) throw std::invalid_argument("ansatz and Hamiltonian have different qubit counts");
  if (theta.size() != ans.num_params()) throw std::invalid_argument("parameter vector length mismatch");
  const auto masks = term_masks(h);
  const std::size_t m = ans.num_params();
  const auto rows = static_cast<Eigen::Index>(masks.size());
  Eigen::MatrixXd g(rows, static_cast<Eigen::Index>(m));

  // With R(t) = exp(-i t/2 K'), K' = Z_a Y_b, the shifted gate is
  // R(theta_j +- pi/2) = (1 -+ K) R(theta_j) / sqrt(2), K = i Z_a Y_b real.
  // So the two shifted circuits give (phi -+ chi) / sqrt(2), where phi is the
  // unshifted state and chi = T_j K psi_j with psi_j the state after gate j
  // and T_j the remaining gates. One tail application serves both shifts.
  const auto phi = prepare_real(ans, theta, max_qubits);
  const std::size_t dim = phi.size();
  auto prefix = initial_amplitudes(ans.n_qubits, max_qubits);
  std::vector<double> chi(dim);
  std::vector<double> work(dim);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& gate = ans.gates[j];
    if (gate.param != j) throw std::invalid_argument("assemble_G expects one parameter per gate in gate order");
    apply_rzy(std::span<double>(prefix), gate.a, gate.b, theta[j]);
    chi = prefix;
    apply_rzy(std::span<double>(chi), gate.a, gate.b, -std::numbers::pi);  // R(-pi) = K
    apply_gates(std::span<double>(chi), ans, theta, j + 1, m);
    if (preparations != nullptr) *preparations += 2;

    if (shots == 0) {
      // (<P>_+ - <P>_-) / 4 = -1/2 sum_x P(x) phi(x) chi(x)
      for (std::size_t x = 0; x < dim; ++x) work[x] = phi[x] * chi[x];
      const auto sums = signed_sums(work, masks);
      for (Eigen::Index t = 0; t < rows; ++t) g(t, static_cast<Eigen::Index>(j)) = -0.5 * sums[static_cast<std::size_t>(t)];
      continue;
    }
    std::vector<double> shifted[2];
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? -1.0 : 1.0;
      for (std::size_t x = 0; x < dim; ++x) {
        const double amp = phi[x] + sign * chi[x];
        work[x] = 0.5 * amp * amp;
      }
      const auto hist = sample_indices(work, shots, derive_seed(seed, {2 * j + static_cast<std::uint64_t>(side)}));
      shifted[side] = sampled_terms(hist, masks, ans.n_qubits);
    }
    for (Eigen::Index t = 0; t < rows; ++t) {
      const auto ut = static_cast<std::size_t>(t);
      g(t, static_cast<Eigen::Index>(j)) = 0.25 * (shifted[0][ut] - shifted[1][ut]);
    }
  }
  return g;
}

Eigen::VectorXd solve_step(const Eigen::MatrixXd& g, const Eigen::VectorXd& d, double ridge) {
  if (g.rows() != d.size()) throw std::invalid_argument("solve_step: G and D have different row counts");
  if (ridge < 0.0) throw std::invalid_argument("solve_step: ridge must be >= 0");
  Eigen::MatrixXd normal = g.transpose() * g;
  normal.diagonal().array() += ridge;
  const Eigen::VectorXd rhs = g.transpose() * d;
  Eigen::LLT<Eigen::MatrixXd> llt(normal);
  if (llt.info() != Eigen::Success) throw SingularSystemError("solve_step: normal equations are singular");
  if (ridge == 0.0 && normal.cols() > 0) {
    const Eigen::VectorXd pivots = llt.matrixL().toDenseMatrix().diagonal();
    const double scale = std::max(1.0, normal.diagonal().maxCoeff());
    if (pivots.minCoeff() <= 1e-10 * std::sqrt(scale))
      throw SingularSystemError("solve_step: G^T G is singular; use a positive ridge");
  }
  return llt.solve(rhs);
}

Partition make_partition(const QuboProblem& q, Bits bits) {
  if (bits.size() != q.num_variables()) throw std::invalid_argument("bitstring length mismatch");
  Partition p;
  p.cut_weight = q.cut_term(bits);
  for (std::size_t i = 0; i < bits.size(); ++i) p.part_weights[bits[i] ? 1 : 0] += q.vertex_weights()[i];
  const auto total = p.total_weight();
  p.imbalance = total == 0 ? 0.0
                           : static_cast<double>(std::llabs(p.part_weights[0] - p.part_weights[1])) /
                                 static_cast<double>(total);
  p.bits = std::move(bits);
  return p;
}

VarqiteEngine::VarqiteEngine(const QuboProblem& q, const Ansatz& ans, VarqiteConfig cfg)
    : qubo_(q), ansatz_(ans), cfg_(std::move(cfg)), hamiltonian_(to_hamiltonian(q)) {
  cfg_.validate();
  if (ans.n_qubits != q.num_variables())
    throw std::invalid_argument("ansatz has " + std::to_string(ans.n_qubits) + " qubits but the problem has " +
                                std::to_string(q.num_variables()) + " variables");
  if (ans.n_qubits > cfg_.max_qubits)
    throw std::length_error(std::to_string(ans.n_qubits) + " qubits exceeds the simulator limit of " +
                            std::to_string(cfg_.max_qubits));
  diagonal_ = ham_diagonal(hamiltonian_);
  if (cfg_.normalize) {
    double largest = 0.0;
    for (const auto& t : hamiltonian_.terms) largest = std::max(largest, std::abs(t.coeff));
    if (largest > 0.0) scale_ = largest;
  }
  theta_.assign(ans.num_params(), 0.0);
}

bool VarqiteEngine::found_optimum() const {
  if (!cfg_.c_star || !best_balanced_) return false;
  const double tol = 1e-9 * std::max(1.0, std::abs(*cfg_.c_star));
  return diagonal_[*best_balanced_] <= *cfg_.c_star + tol;
}

void VarqiteEngine::observe(std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram) {
  const auto weights = qubo_.vertex_weights();
  const double limit = (0.5 + qubo_.nu()) * static_cast<double>(qubo_.omega());
  auto better = [&](std::uint64_t x, const std::optional<std::uint64_t>& cur) {
    if (!cur) return true;
    const double ex = diagonal_[x];
    const double ec = diagonal_[*cur];
    return ex < ec || (ex == ec && x < *cur);
  };
  for (const auto& [x, count] : histogram) {
    if (better(x, best_any_)) best_any_ = x;
    VertexWeight side1 = 0;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if ((x >> i) & 1U) side1 += weights[i];
    const auto heavy = static_cast<double>(std::max(side1, qubo_.omega() - side1));
    const bool balanced = heavy <= limit + 1e-9 * static_cast<double>(qubo_.omega());
    if (balanced && better(x, best_balanced_)) best_balanced_ = x;
  }
}

TraceRecord VarqiteEngine::summarize(std::size_t step, double energy,
                                     std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram) const {
  TraceRecord r;
  r.step = step;
  r.energy = energy;
  std::vector<std::pair<double, std::uint64_t>> energies;
  double shots = 0.0;
  double sum = 0.0;
  for (const auto& [x, c] : histogram) {
    energies.emplace_back(diagonal_[x], c);
    shots += static_cast<double>(c);
    sum += static_cast<double>(c) * diagonal_[x];
  }
  std::sort(energies.begin(), energies.end());
  auto percentile = [&](double q) {
    const double rank = std::max(1.0, std::ceil(q * shots));
    double cum = 0.0;
    for (const auto& [e, c] : energies) {
      cum += static_cast<double>(c);
      if (cum >= rank) return e;
    }
    return energies.back().first;
  };
  r.best_sampled = energies.front().first;
  r.mean_sampled = sum / shots;
  r.p10 = percentile(0.10);
  r.p90 = percentile(0.90);
  r.best_so_far = to_string(index_to_bits(*best_any_, ansatz_.n_qubits));
  r.best_so_far_energy = diagonal_[*best_any_];
  if (best_balanced_) r.best_balanced_energy = diagonal_[*best_balanced_];
  if (cfg_.c_star) {
    r.relative_error = approximation_error(r.mean_sampled, *cfg_.c_star);
    r.best_relative_error = approximation_error(r.best_so_far_energy, *cfg_.c_star);
  }
  return r;
}

bool VarqiteEngine::step() {
  const std::size_t k = steps_;
  const auto p = squares(prepare_real(ansatz_, theta_, cfg_.max_qubits));
  ++preparations_;
  const auto masks = term_masks(hamiltonian_);

  Eigen::VectorXd d;
  double energy = 0.0;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> hist;
  if (cfg_.shots == 0) {
    for (std::size_t x = 0; x < p.size(); ++x) energy += p[x] * diagonal_[x];
    d = exact_d(p, diagonal_, masks);
    hist = sample_indices(p, cfg_.sample_shots, derive_seed(cfg_.seed, {k, 0, 1}));
  } else {
    hist = sample_indices(p, cfg_.shots, derive_seed(cfg_.seed, {k, 0, 0}));
    double shots = 0.0;
    for (const auto& [x, c] : hist) {
      energy += static_cast<double>(c) * diagonal_[x];
      shots += static_cast<double>(c);
    }
    energy /= shots;
    d = sampled_d(hist, masks, ansatz_.n_qubits, [&](std::uint64_t x) { return diagonal_[x]; });
  }
  observe(hist);
  if (last_energy_ && std::abs(energy - *last_energy_) <= cfg_.energy_tol * std::max(1.0, std::abs(energy)))
    ++stalled_;
  else
    stalled_ = 0;
  last_energy_ = energy;
  if (k % cfg_.record_every == 0) trace_.records.push_back(summarize(k, energy, hist));

  const auto g = assemble_G(ansatz_, theta_, hamiltonian_, cfg_.shots, derive_seed(cfg_.seed, {k, 1}),
                            &preparations_, cfg_.max_qubits);
  const Eigen::VectorXd rate = solve_step(g, d / scale_, cfg_.ridge);
  if (!rate.allFinite()) return false;
  for (std::size_t j = 0; j < theta_.size(); ++j) theta_[j] += cfg_.d_tau * rate(static_cast<Eigen::Index>(j));
  ++steps_;
  return true;
}

VarqiteResult VarqiteEngine::finish(VarqiteStatus status, std::string message) {
  const auto p = squares(prepare_real(ansatz_, theta_, cfg_.max_qubits));
  ++preparations_;
  const auto hist = sample_indices(p, cfg_.sample_shots, derive_seed(cfg_.seed, {~std::uint64_t{0}}));
  observe(hist);
  double energy = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) energy += p[x] * diagonal_[x];
  trace_.records.push_back(summarize(steps_, energy, hist));

  VarqiteResult result;
  for (const auto& [x, c] : hist) result.final_samples.add(to_string(index_to_bits(x, ansatz_.n_qubits)), c);
  result.trace = trace_;
  result.best_balanced = best_balanced_.has_value();
  const std::uint64_t best = best_balanced_ ? *best_balanced_ : *best_any_;
  result.best = make_partition(qubo_, index_to_bits(best, ansatz_.n_qubits));
  result.best_energy = diagonal_[best];
  result.theta = theta_;
  result.steps = steps_;
  result.preparations = preparations_;
  result.status = status;
  result.message = std::move(message);
  return result;
}

VarqiteResult run_varqite(const QuboProblem& q, const Ansatz& ans, const VarqiteConfig& cfg) {
  VarqiteEngine engine(q, ans, cfg);
  for (std::size_t k = 0; k < cfg.max_steps; ++k) {
    if (cfg.stop_at_optimum && engine.found_optimum())
      return engine.finish(VarqiteStatus::StoppedAtOptimum);
    if (cfg.energy_tol > 0.0 && engine.stalled_steps() >= cfg.patience)
      return engine.finish(VarqiteStatus::Converged);
    if (!engine.step())
      return engine.finish(VarqiteStatus::NonFinite,
                           "non-finite parameter update at step " + std::to_string(engine.steps_taken()));
  }
  return engine.finish(VarqiteStatus::Completed);
}

}  // namespace qdissect
