// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>
#include <tuple>

#include "qdissect/graph.hpp"

namespace qdissect {

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

GraphFormat parse_graph_format(const std::string& name) {
  if (name == "metis") return GraphFormat::Metis;
  if (name == "edge-list" || name == "edgelist") return GraphFormat::EdgeList;
  if (name == "matrix-market" || name == "mtx") return GraphFormat::MatrixMarket;
  throw std::invalid_argument("unknown graph format '" + name + "'");
}

std::string to_string(GraphFormat format) {
  switch (format) {
    case GraphFormat::Metis: return "metis";
    case GraphFormat::EdgeList: return "edge-list";
    case GraphFormat::MatrixMarket: return "matrix-market";
  }
  return "unknown";
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  return value;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

WeightedGraph read_metis(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line.front() == '%') continue;
      return true;
    }
    return false;
  };

  // The header is the first non-comment, non-blank line.
  std::vector<std::string_view> header;
  while (header.empty()) {
    if (!next_line()) throw ParseError(lineno, "missing METIS header");
    header = tokenize(line);
  }
  const std::string header_line = line;
  header = tokenize(header_line);
  if (header.size() < 2 || header.size() > 4)
    throw ParseError(lineno, "METIS header must be 'n m [fmt [ncon]]'");
  const auto n = parse_number<std::size_t>(header[0], lineno, "vertex count");
  const auto m = parse_number<std::size_t>(header[1], lineno, "edge count");
  std::string fmt = header.size() >= 3 ? std::string(header[2]) : "0";
  if (fmt.size() > 3 || fmt.find_first_not_of("01") != std::string::npos)
    throw ParseError(lineno, "invalid METIS fmt '" + fmt + "'");
  fmt.insert(0, 3 - fmt.size(), '0');
  const bool has_sizes = fmt[0] == '1';
  const bool has_vweights = fmt[1] == '1';
  const bool has_eweights = fmt[2] == '1';
  std::size_t ncon = 1;
  if (header.size() == 4) {
    ncon = parse_number<std::size_t>(header[3], lineno, "ncon");
    if (ncon == 0) throw ParseError(lineno, "ncon must be positive");
  }
  if (n == 0) throw ParseError(lineno, "empty graph");

  std::vector<VertexWeight> vweights(n, 1);
  std::vector<Edge> forward;
  std::vector<Edge> backward;
  for (std::size_t v = 0; v < n; ++v) {
    if (!next_line())
      throw ParseError(lineno, "expected " + std::to_string(n) + " vertex lines, found " +
                                   std::to_string(v));
    const auto tokens = tokenize(line);
    std::size_t k = 0;
    if (has_sizes) {
      if (k >= tokens.size()) throw ParseError(lineno, "missing vertex size");
      ++k;
    }
    if (has_vweights) {
      if (k + ncon > tokens.size()) throw ParseError(lineno, "missing vertex weight");
      vweights[v] = parse_number<VertexWeight>(tokens[k], lineno, "vertex weight");
      if (vweights[v] <= 0) throw ParseError(lineno, "vertex weight must be positive");
      k += ncon;
    }
    const std::size_t stride = has_eweights ? 2 : 1;
    if ((tokens.size() - k) % stride != 0)
      throw ParseError(lineno, "neighbor without edge weight");
    for (; k < tokens.size(); k += stride) {
      const auto nbr = parse_number<std::int64_t>(tokens[k], lineno, "neighbor id");
      if (nbr < 1 || static_cast<std::size_t>(nbr) > n)
        throw ParseError(lineno, "neighbor id " + std::to_string(nbr) + " out of range");
      EdgeWeight w = 1.0;
      if (has_eweights) {
        w = parse_number<double>(tokens[k + 1], lineno, "edge weight");
        if (!(w > 0.0)) throw ParseError(lineno, "edge weight must be positive");
      }
      const auto u = static_cast<VertexId>(v);
      const auto t = static_cast<VertexId>(nbr - 1);
      if (u == t) throw ParseError(lineno, "self-loop on vertex " + std::to_string(nbr));
      (u < t ? forward : backward).push_back({std::min(u, t), std::max(u, t), w});
    }
  }
  while (next_line())
    if (!tokenize(line).empty()) throw ParseError(lineno, "trailing data after vertex lines");

  auto by_pair = [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v, a.weight) < std::tie(b.u, b.v, b.weight);
  };
  std::sort(forward.begin(), forward.end(), by_pair);
  std::sort(backward.begin(), backward.end(), by_pair);
  const bool symmetric = std::equal(forward.begin(), forward.end(), backward.begin(), backward.end(),
                                    [](const Edge& a, const Edge& b) {
                                      return a.u == b.u && a.v == b.v && a.weight == b.weight;
                                    });
  if (!symmetric) throw ParseError(lineno, "adjacency is not symmetric");
  if (forward.size() != m)
    throw ParseError(lineno, "header declares " + std::to_string(m) + " edges, found " +
                                 std::to_string(forward.size()));
  try {
    return WeightedGraph::from_edges(n, forward, std::move(vweights));
  } catch (const std::invalid_argument& e) {
    throw ParseError(lineno, e.what());
  }
}

WeightedGraph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<Edge> edges;
  std::int64_t max_id = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = tokenize(line);
    if (tokens.empty() || tokens[0].front() == '#' || tokens[0].front() == '%') continue;
    if (tokens.size() < 2 || tokens.size() > 3) throw ParseError(lineno, "expected 'u v [w]'");
    const auto u = parse_number<std::int64_t>(tokens[0], lineno, "vertex id");
    const auto v = parse_number<std::int64_t>(tokens[1], lineno, "vertex id");
    if (u < 0 || v < 0) throw ParseError(lineno, "negative vertex id");
    if (u > INT32_MAX || v > INT32_MAX) throw ParseError(lineno, "vertex id too large");
    const EdgeWeight w = tokens.size() == 3 ? parse_number<double>(tokens[2], lineno, "edge weight") : 1.0;
    if (!(w > 0.0)) throw ParseError(lineno, "edge weight must be positive");
    max_id = std::max({max_id, u, v});
    if (u == v) continue;
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v), w});
  }
  if (max_id < 0) throw ParseError(lineno, "empty graph");
  return WeightedGraph::from_edges(static_cast<std::size_t>(max_id + 1), edges, {},
                                   DuplicateEdges::KeepMax);
}

WeightedGraph read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing MatrixMarket banner");
  ++lineno;
  const auto banner = tokenize(line);
  if (banner.size() != 5 || lowercase(banner[0]) != "%%matrixmarket" || lowercase(banner[1]) != "matrix")
    throw ParseError(lineno, "invalid MatrixMarket banner");
  if (lowercase(banner[2]) != "coordinate")
    throw ParseError(lineno, "only coordinate MatrixMarket files are supported");
  const std::string field = lowercase(banner[3]);
  if (field != "real" && field != "integer" && field != "pattern")
    throw ParseError(lineno, "unsupported MatrixMarket field '" + field + "'");
  const std::string symmetry = lowercase(banner[4]);
  if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric")
    throw ParseError(lineno, "unsupported MatrixMarket symmetry '" + symmetry + "'");
  const bool pattern = field == "pattern";

  std::vector<std::string_view> size_tokens;
  std::string size_line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.front() == '%') continue;
    size_line = line;
    size_tokens = tokenize(size_line);
    if (!size_tokens.empty()) break;
  }
  if (size_tokens.size() != 3) throw ParseError(lineno, "expected 'rows cols nnz'");
  const auto rows = parse_number<std::size_t>(size_tokens[0], lineno, "row count");
  const auto cols = parse_number<std::size_t>(size_tokens[1], lineno, "column count");
  const auto nnz = parse_number<std::size_t>(size_tokens[2], lineno, "entry count");
  if (rows != cols)
    throw ParseError(lineno, "matrix is not square (" + std::to_string(rows) + " x " +
                                 std::to_string(cols) + ")");
  if (rows == 0) throw ParseError(lineno, "empty graph");

  std::vector<Edge> edges;
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = tokenize(line);
    if (tokens.empty() || tokens[0].front() == '%') continue;
    if (tokens.size() != (pattern ? 2u : 3u)) throw ParseError(lineno, "malformed entry");
    const auto i = parse_number<std::int64_t>(tokens[0], lineno, "row index");
    const auto j = parse_number<std::int64_t>(tokens[1], lineno, "column index");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > cols)
      throw ParseError(lineno, "entry index out of range");
    ++seen;
    if (i == j) continue;
    EdgeWeight w = 1.0;
    if (!pattern) {
      w = std::abs(parse_number<double>(tokens[2], lineno, "value"));
      if (w == 0.0) continue;
    }
    edges.push_back({static_cast<VertexId>(i - 1), static_cast<VertexId>(j - 1), w});
  }
  if (seen != nnz)
    throw ParseError(lineno, "header declares " + std::to_string(nnz) + " entries, found " +
                                 std::to_string(seen));
  return WeightedGraph::from_edges(rows, edges, {}, DuplicateEdges::KeepMax);
}

void write_number(std::ostream& out, double value) {
  if (value == std::floor(value) && std::abs(value) < 9.0e15) {
    out << static_cast<std::int64_t>(value);
    return;
  }
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.write(buf, ptr - buf);
}

}  // namespace

WeightedGraph load_graph(std::istream& in, GraphFormat format) {
  switch (format) {
    case GraphFormat::Metis: return read_metis(in);
    case GraphFormat::EdgeList: return read_edge_list(in);
    case GraphFormat::MatrixMarket: return read_matrix_market(in);
  }
  throw std::invalid_argument("unknown graph format");
}

WeightedGraph load_graph(const std::string& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load_graph(in, format);
}

void write_metis(const WeightedGraph& g, std::ostream& out) {
  bool weighted = false;
  for (const auto w : g.vertex_weights()) weighted = weighted || w != 1;
  for (const auto& e : g.edges()) weighted = weighted || e.weight != 1.0;

  out << g.num_vertices() << ' ' << g.num_edges();
  if (weighted) out << " 11";
  out << '\n';
  for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
    bool first = true;
    auto sep = [&] {
      if (!first) out << ' ';
      first = false;
    };
    if (weighted) {
      sep();
      out << g.vertex_weight(v);
    }
    const auto nbrs = g.neighbors(v);
    const auto ws = g.neighbor_weights(v);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      sep();
      out << nbrs[k] + 1;
      if (weighted) {
        out << ' ';
        write_number(out, ws[k]);
      }
    }
    out << '\n';
  }
}

}  // namespace qdissect
