// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/qubo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace qdissect {

QuboProblem::QuboProblem(const WeightedGraph& g, double lambda, double nu)
    : vertex_weights_(g.vertex_weights().begin(), g.vertex_weights().end()),
      edges_(g.edges()),
      lambda_(lambda),
      nu_(nu),
      omega_(g.total_vertex_weight()) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
  if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("nu must lie in [0, 0.5)");
}

namespace {

void check_length(std::size_t expected, std::size_t got) {
  if (expected != got)
    throw std::invalid_argument("bitstring has length " + std::to_string(got) + ", expected " +
                                std::to_string(expected));
}

}  // namespace

double QuboProblem::cut_term(std::span<const std::uint8_t> x) const {
  check_length(num_variables(), x.size());
  double cut = 0.0;
  for (const auto& e : edges_) {
    const double xi = x[static_cast<std::size_t>(e.u)];
    const double xj = x[static_cast<std::size_t>(e.v)];
    cut += e.weight * (xi + xj - 2.0 * xi * xj);
  }
  return cut;
}

double QuboProblem::penalty_term(std::span<const std::uint8_t> x) const {
  check_length(num_variables(), x.size());
  VertexWeight side1 = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) side1 += vertex_weights_[i];
  const double dev = static_cast<double>(side1) - 0.5 * static_cast<double>(omega_);
  return lambda_ * dev * dev;
}

double default_lambda(const WeightedGraph& g) {
  const double vmin = static_cast<double>(g.min_vertex_weight());
  return (g.max_edge_weight() + 1.0) / std::max(1.0, vmin * vmin);
}

QuboProblem build_qubo(const WeightedGraph& g, double lambda, double nu) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("build_qubo: lambda must be >= 0");
  return QuboProblem(g, lambda, nu);
}

double qubo_energy(const QuboProblem& q, std::span<const std::uint8_t> x) {
  return q.cut_term(x) + q.penalty_term(x);
}

std::uint64_t ZTerm::mask() const {
  std::uint64_t m = 0;
  for (const int qb : qubits) m |= std::uint64_t{1} << qb;
  return m;
}

ZHamiltonian to_hamiltonian(const QuboProblem& q) {
  const std::size_t n = q.num_variables();
  ZHamiltonian h;
  h.n_qubits = n;

  // Cut: w (x_i + x_j - 2 x_i x_j) = (w/2)(1 - Z_i Z_j).
  // Penalty: sum_i v_i x_i - Omega/2 = -(1/2) sum_i v_i Z_i, so
  //   lambda (...)^2 = (lambda/4) (sum_i v_i^2 + 2 sum_{i<j} v_i v_j Z_i Z_j).
  std::vector<double> pair(n * n, 0.0);
  std::vector<char> present(n * n, 0);
  for (const auto& e : q.edges()) {
    const auto i = static_cast<std::size_t>(e.u);
    const auto j = static_cast<std::size_t>(e.v);
    h.constant += 0.5 * e.weight;
    pair[i * n + j] -= 0.5 * e.weight;
    present[i * n + j] = 1;
  }
  const double lambda = q.lambda();
  if (lambda > 0.0) {
    const auto v = q.vertex_weights();
    for (std::size_t i = 0; i < n; ++i) {
      const auto vi = static_cast<double>(v[i]);
      h.constant += 0.25 * lambda * vi * vi;
      for (std::size_t j = i + 1; j < n; ++j) {
        pair[i * n + j] += 0.5 * lambda * vi * static_cast<double>(v[j]);
        present[i * n + j] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (present[i * n + j])
        h.terms.push_back({pair[i * n + j], {static_cast<int>(i), static_cast<int>(j)}});
  return h;
}

double ham_energy(const ZHamiltonian& h, std::uint64_t index) {
  double e = h.constant;
  for (const auto& t : h.terms) e += (std::popcount(index & t.mask()) & 1) ? -t.coeff : t.coeff;
  return e;
}

double ham_energy(const ZHamiltonian& h, std::span<const std::uint8_t> x) {
  check_length(h.n_qubits, x.size());
  double e = h.constant;
  for (const auto& t : h.terms) {
    int parity = 0;
    for (const int qb : t.qubits) parity ^= x[static_cast<std::size_t>(qb)];
    e += parity ? -t.coeff : t.coeff;
  }
  return e;
}

void walsh_hadamard(std::span<double> f) {
  const std::size_t dim = f.size();
  if (!std::has_single_bit(dim)) throw std::invalid_argument("walsh_hadamard: size must be a power of two");
  for (std::size_t h = 1; h < dim; h <<= 1) {
    for (std::size_t i = 0; i < dim; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = f[j];
        const double y = f[j + h];
        f[j] = x + y;
        f[j + h] = x - y;
      }
    }
  }
}

std::vector<double> ham_diagonal(const ZHamiltonian& h) {
  if (h.n_qubits >= 64) throw std::invalid_argument("ham_diagonal: too many qubits");
  std::vector<double> d(std::size_t{1} << h.n_qubits, 0.0);
  d[0] = h.constant;
  for (const auto& t : h.terms) d[t.mask()] += t.coeff;
  walsh_hadamard(d);
  return d;
}

ExactSolution exact_solve(const QuboProblem& q, std::size_t max_optima) {
  const std::size_t n = q.num_variables();
  if (n > kMaxExactVariables)
    throw std::invalid_argument("exact_solve: " + std::to_string(n) + " variables exceeds the limit of " +
                                std::to_string(kMaxExactVariables));
  ExactSolution result;
  if (n == 0) {
    result.energy = 0.0;
    result.optima.emplace_back();
    return result;
  }

  // CSR adjacency for incremental cut updates.
  std::vector<std::size_t> offsets(n + 1, 0);
  for (const auto& e : q.edges()) {
    ++offsets[static_cast<std::size_t>(e.u) + 1];
    ++offsets[static_cast<std::size_t>(e.v) + 1];
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  std::vector<std::pair<std::size_t, double>> adj(offsets[n]);
  {
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& e : q.edges()) {
      adj[fill[static_cast<std::size_t>(e.u)]++] = {static_cast<std::size_t>(e.v), e.weight};
      adj[fill[static_cast<std::size_t>(e.v)]++] = {static_cast<std::size_t>(e.u), e.weight};
    }
  }
  const auto v = q.vertex_weights();
  const double half = 0.5 * static_cast<double>(q.omega());
  const double lambda = q.lambda();

  // Vertex n-1 stays on side 0; complements are added at the end.
  std::uint64_t x = 0;
  double cut = 0.0;
  double side1 = 0.0;
  auto energy = [&] { return cut + lambda * (side1 - half) * (side1 - half); };

  double best = energy();
  std::vector<std::uint64_t> candidates{0};
  auto tolerance = [](double e) { return 1e-9 * std::max(1.0, std::abs(e)); };

  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t i = 1; i < count; ++i) {
    const auto k = static_cast<std::size_t>(std::countr_zero(i));
    const bool bit = (x >> k) & 1U;
    for (std::size_t a = offsets[k]; a < offsets[k + 1]; ++a) {
      const auto [u, w] = adj[a];
      cut += (((x >> u) & 1U) == bit) ? w : -w;
    }
    side1 += bit ? -static_cast<double>(v[k]) : static_cast<double>(v[k]);
    x ^= std::uint64_t{1} << k;

    const double e = energy();
    if (e < best - tolerance(best)) {
      best = e;
      candidates.clear();
      result.truncated = false;
      candidates.push_back(x);
    } else if (e <= best + tolerance(best)) {
      best = std::min(best, e);
      if (candidates.size() < max_optima)
        candidates.push_back(x);
      else
        result.truncated = true;
    }
  }

  // Re-evaluate survivors from scratch to drop accumulated rounding.
  std::vector<std::pair<double, std::uint64_t>> exact;
  exact.reserve(candidates.size());
  for (const auto c : candidates) exact.emplace_back(qubo_energy(q, index_to_bits(c, n)), c);
  double emin = exact.front().first;
  for (const auto& [e, c] : exact) emin = std::min(emin, e);
  result.energy = emin;
  const double keep = 1e-12 * std::max(1.0, std::abs(emin));
  for (const auto& [e, c] : exact) {
    if (e > emin + keep) continue;
    result.optima.push_back(index_to_bits(c, n));
    result.optima.push_back(complement(result.optima.back()));
  }
  std::sort(result.optima.begin(), result.optima.end());
  result.optima.erase(std::unique(result.optima.begin(), result.optima.end()), result.optima.end());
  return result;
}

double approximation_error(double energy, double c_star) {
  return c_star > 0.0 ? (energy - c_star) / c_star : energy - c_star;
}

double approximation_error(const QuboProblem& q, std::span<const std::uint8_t> x, double c_star) {
  return approximation_error(qubo_energy(q, x), c_star);
}

}  // namespace qdissect
