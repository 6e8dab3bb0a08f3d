// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/generators.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qdissect/random.hpp"

namespace qdissect {

namespace {

VertexId id(std::size_t v) { return static_cast<VertexId>(v); }

}  // namespace

WeightedGraph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({id(i), id(i + 1), 1.0});
  return WeightedGraph::from_edges(n, edges);
}

WeightedGraph ring_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("a ring needs at least 3 vertices");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) edges.push_back({id(i), id((i + 1) % n), 1.0});
  return WeightedGraph::from_edges(n, edges);
}

WeightedGraph complete_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({id(i), id(j), 1.0});
  return WeightedGraph::from_edges(n, edges);
}

WeightedGraph star_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.push_back({0, id(i), 1.0});
  return WeightedGraph::from_edges(n, edges);
}

WeightedGraph grid_graph(std::size_t rows, std::size_t cols) {
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = r * cols + c;
      if (c + 1 < cols) edges.push_back({id(v), id(v + 1), 1.0});
      if (r + 1 < rows) edges.push_back({id(v), id(v + cols), 1.0});
    }
  return WeightedGraph::from_edges(rows * cols, edges);
}

WeightedGraph barbell_graph(std::size_t k) {
  if (k < 2) throw std::invalid_argument("barbell cliques need at least 2 vertices");
  std::vector<Edge> edges;
  for (std::size_t base : {std::size_t{0}, k})
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) edges.push_back({id(base + i), id(base + j), 1.0});
  edges.push_back({id(k - 1), id(k), 1.0});
  return WeightedGraph::from_edges(2 * k, edges);
}

WeightedGraph random_geometric_graph(std::size_t n, double radius, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = uniform01(rng);
    y[i] = uniform01(rng);
  }
  auto dist = [&](std::size_t i, std::size_t j) { return std::hypot(x[i] - x[j], y[i] - y[j]); };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist(i, j) < radius) edges.push_back({id(i), id(j), 1.0});

  // Join the component holding vertex 0 to its nearest outside point until connected.
  while (true) {
    const auto g = WeightedGraph::from_edges(n, edges);
    const auto comp = connected_components(g);
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (comp[i] != 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (comp[j] != 0 && dist(i, j) < best) {
          best = dist(i, j);
          bi = i;
          bj = j;
        }
    }
    if (!std::isfinite(best)) return g;
    edges.push_back({id(bi), id(bj), 1.0});
  }
}

WeightedGraph random_weighted_graph(std::size_t n, double p, double w_lo, double w_hi, VertexWeight v_max,
                                    std::uint64_t seed) {
  if (!(w_lo > 0.0) || w_hi < w_lo || v_max < 1) throw std::invalid_argument("invalid random graph weights");
  Rng rng(seed);
  std::vector<VertexWeight> vw(n);
  for (auto& w : vw) w = 1 + static_cast<VertexWeight>(uniform_below(rng, static_cast<std::uint64_t>(v_max)));
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (uniform01(rng) < p) edges.push_back({id(i), id(j), w_lo + (w_hi - w_lo) * uniform01(rng)});
  return WeightedGraph::from_edges(n, edges, std::move(vw));
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    out.push_back(text.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) return out;
    pos = next + 1;
  }
}

template <typename T>
T parse_number(const std::string& token, const std::string& spec) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
    throw std::invalid_argument("invalid graph generator spec '" + spec + "'");
  return value;
}

}  // namespace

WeightedGraph generate_graph(const std::string& spec) {
  const auto parts = split(spec, ':');
  const auto& kind = parts[0];
  auto size_arg = [&](std::size_t i) { return parse_number<std::size_t>(parts.at(i), spec); };
  auto expect = [&](std::size_t count) {
    if (parts.size() != count) throw std::invalid_argument("invalid graph generator spec '" + spec + "'");
  };
  if (kind == "ring") return expect(2), ring_graph(size_arg(1));
  if (kind == "path") return expect(2), path_graph(size_arg(1));
  if (kind == "complete") return expect(2), complete_graph(size_arg(1));
  if (kind == "star") return expect(2), star_graph(size_arg(1));
  if (kind == "barbell") return expect(2), barbell_graph(size_arg(1));
  if (kind == "grid") {
    expect(2);
    const auto dims = split(parts[1], 'x');
    if (dims.size() != 2) throw std::invalid_argument("invalid graph generator spec '" + spec + "'");
    return grid_graph(parse_number<std::size_t>(dims[0], spec), parse_number<std::size_t>(dims[1], spec));
  }
  if (kind == "geometric") {
    expect(4);
    return random_geometric_graph(size_arg(1), parse_number<double>(parts[2], spec),
                                  parse_number<std::uint64_t>(parts[3], spec));
  }
  throw std::invalid_argument("unknown graph generator '" + kind + "'");
}

}  // namespace qdissect
