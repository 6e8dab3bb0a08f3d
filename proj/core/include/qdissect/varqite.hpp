// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_VARQITE_HPP
#define QDISSECT_VARQITE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdissect/circuit.hpp"
#include "qdissect/partition.hpp"
#include "qdissect/qubo.hpp"

namespace qdissect {

struct VarqiteConfig {
  double d_tau = 0.1;
  std::size_t max_steps = 200;
  /// Shots per circuit for the G and D estimators; 0 means exact expectations.
  std::size_t shots = 0;
  /// Samples drawn for diagnostics in exact mode and for the final histogram.
  std::size_t sample_shots = 2000;
  double ridge = 1e-2;
  /// Evolve under H / max_a |c_a|, which measures d_tau in units of the
  /// largest coupling. Traces always report unscaled energies.
  bool normalize = true;
  std::uint64_t seed = 0;
  std::size_t record_every = 1;
  /// Known optimum, enables relative errors in the trace and early stopping.
  std::optional<double> c_star;
  bool stop_at_optimum = false;
  /// Stop once |E_k - E_{k-1}| <= energy_tol * max(1, |E_k|) held for
  /// `patience` consecutive steps; 0 disables.
  double energy_tol = 0.0;
  std::size_t patience = 5;
  std::size_t max_qubits = kDefaultMaxQubits;

  void validate() const;
};

struct TraceRecord {
  std::size_t step = 0;
  double energy = 0.0;  // E_tau (exact, or the sample mean when shots > 0)
  double best_sampled = 0.0;
  double mean_sampled = 0.0;
  double p10 = 0.0;
  double p90 = 0.0;
  std::string best_so_far;         // lowest-energy bitstring seen in any sample so far
  double best_so_far_energy = 0.0;
  std::optional<double> best_balanced_energy;
  std::optional<double> relative_error;       // of mean_sampled against c_star
  std::optional<double> best_relative_error;  // of best_so_far_energy against c_star
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
};

enum class VarqiteStatus { Completed, StoppedAtOptimum, Converged, NonFinite };

std::string to_string(VarqiteStatus status);

struct VarqiteResult {
  SampleSet final_samples;
  ConvergenceTrace trace;
  /// Lowest-energy sampled partition over the whole run, restricted to
  /// nu-balanced ones when any was seen (`best_balanced`).
  Partition best;
  double best_energy = 0.0;
  bool best_balanced = false;
  std::vector<double> theta;
  std::size_t steps = 0;
  std::size_t preparations = 0;
  VarqiteStatus status = VarqiteStatus::Completed;
  std::string message;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// D_a = -(<P_a H> - E <P_a>) from the exact amplitudes.
Eigen::VectorXd assemble_D(const Statevector& sv, const ZHamiltonian& h);

/// D_a = -mean_x P_a(x) (C(x) - mean C) over a histogram of basis indices.
Eigen::VectorXd assemble_D(std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram,
                           const ZHamiltonian& h);

/// G_{a,j} = (<P_a>(theta + pi/2 e_j) - <P_a>(theta - pi/2 e_j)) / 4, one
/// prepared state per shift (2m in total). `shots == 0` uses exact
/// expectations; otherwise each shifted state is sampled with a stream
/// derived from (seed, circuit index). Adds the number of prepared states to
/// `*preparations` when given.
Eigen::MatrixXd assemble_G(const Ansatz& ans, std::span<const double> theta, const ZHamiltonian& h,
                           std::size_t shots, std::uint64_t seed, std::size_t* preparations = nullptr,
                           std::size_t max_qubits = kDefaultMaxQubits);

/// argmin ||G x - D||^2 + ridge ||x||^2 via Cholesky of (G^T G + ridge I).
/// Throws SingularSystemError when ridge == 0 and G^T G is singular.
Eigen::VectorXd solve_step(const Eigen::MatrixXd& g, const Eigen::VectorXd& d, double ridge);

/// Stepwise driver; `run_varqite` loops it. Each `step()` prepares exactly
/// 2m + 1 states.
class VarqiteEngine {
 public:
  VarqiteEngine(const QuboProblem& q, const Ansatz& ans, VarqiteConfig cfg);

  /// One forward-Euler step. Returns false (and leaves theta untouched) when
  /// the update was not finite.
  bool step();

  const std::vector<double>& theta() const { return theta_; }
  std::size_t steps_taken() const { return steps_; }
  std::size_t preparations() const { return preparations_; }
  const ConvergenceTrace& trace() const { return trace_; }
  const ZHamiltonian& hamiltonian() const { return hamiltonian_; }
  bool found_optimum() const;
  /// Consecutive steps whose energy change stayed within `energy_tol`.
  std::size_t stalled_steps() const { return stalled_; }

  /// Samples the current state with `sample_shots` and returns the result.
  VarqiteResult finish(VarqiteStatus status, std::string message = {});

 private:
  void observe(std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram);
  TraceRecord summarize(std::size_t step, double energy,
                        std::span<const std::pair<std::uint64_t, std::uint64_t>> histogram) const;

  const QuboProblem& qubo_;
  const Ansatz& ansatz_;
  VarqiteConfig cfg_;
  ZHamiltonian hamiltonian_;
  std::vector<double> diagonal_;  // C(x) per basis index
  double scale_ = 1.0;            // divides D when cfg_.normalize
  std::vector<double> theta_;
  std::size_t steps_ = 0;
  std::size_t preparations_ = 0;
  std::size_t stalled_ = 0;
  std::optional<double> last_energy_;
  ConvergenceTrace trace_;

  std::optional<std::uint64_t> best_any_;
  std::optional<std::uint64_t> best_balanced_;
};

VarqiteResult run_varqite(const QuboProblem& q, const Ansatz& ans, const VarqiteConfig& cfg);

/// Partition metrics computed from the QUBO's own graph data.
Partition make_partition(const QuboProblem& q, Bits bits);

}  // namespace qdissect

#endif  // QDISSECT_VARQITE_HPP
