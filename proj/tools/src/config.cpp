// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/app/config.hpp"

#include <charconv>
#include <fstream>

#include "qdissect/generators.hpp"
#include "qdissect/serialize.hpp"

namespace qdissect::app {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size())
    throw ConfigError("invalid value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("invalid boolean '" + value + "' for " + key);
}

std::vector<std::size_t> parse_list(const std::string& key, const std::string& value) {
  // "a,b,c" or "lo..hi" or "lo..hi:step".
  std::vector<std::size_t> out;
  if (const auto dots = value.find(".."); dots != std::string::npos) {
    const auto colon = value.find(':', dots);
    const auto lo = parse_number<std::size_t>(key, value.substr(0, dots));
    const auto hi = parse_number<std::size_t>(key, value.substr(dots + 2, colon == std::string::npos ? colon : colon - dots - 2));
    const auto step = colon == std::string::npos ? std::size_t{1} : parse_number<std::size_t>(key, value.substr(colon + 1));
    if (step == 0 || lo > hi) throw ConfigError("invalid range '" + value + "' for " + key);
    for (auto v = lo; v <= hi; v += step) out.push_back(v);
    return out;
  }
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    out.push_back(parse_number<std::size_t>(key, trim(value.substr(pos, comma == std::string::npos ? comma : comma - pos))));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::size_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + std::to_string(values[i]);
  return out;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (key == "input") input = value;
  else if (key == "format") format = value;
  else if (key == "instance") instance = value;
  else if (key == "coarse_target") coarse_target = parse_number<std::size_t>(key, value);
  else if (key == "lambda") lambda = value == "auto" ? std::nullopt : std::optional<double>(parse_number<double>(key, value));
  else if (key == "nu") nu = parse_number<double>(key, value);
  else if (key == "layers") layers = parse_number<std::size_t>(key, value);
  else if (key == "gates") gates = value;
  else if (key == "dtau") dtau = parse_number<double>(key, value);
  else if (key == "steps") steps = parse_number<std::size_t>(key, value);
  else if (key == "shots") shots = parse_number<std::size_t>(key, value);
  else if (key == "sample_shots") sample_shots = parse_number<std::size_t>(key, value);
  else if (key == "ridge") ridge = parse_number<double>(key, value);
  else if (key == "energy_tol") energy_tol = parse_number<double>(key, value);
  else if (key == "patience") patience = parse_number<std::size_t>(key, value);
  else if (key == "exact_reference") exact_reference = parse_number<std::size_t>(key, value);
  else if (key == "fm") fm = parse_bool(key, value);
  else if (key == "fm_iterations") fm_iterations = parse_number<std::size_t>(key, value);
  else if (key == "fm_epsilon") fm_epsilon = parse_number<double>(key, value);
  else if (key == "levels") levels = parse_number<std::size_t>(key, value);
  else if (key == "partitioner") partitioner = value;
  else if (key == "bitstring") bitstring = value;
  else if (key == "sweep") sweep = parse_list(key, value);
  else if (key == "seeds") seeds = parse_number<std::size_t>(key, value);
  else if (key == "candidates") candidates = parse_number<std::size_t>(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") out = value;
  else if (key == "jobs") jobs = parse_number<std::size_t>(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

ExperimentConfig ExperimentConfig::from_map(const std::map<std::string, std::string>& values) {
  ExperimentConfig cfg;
  for (const auto& [k, v] : values) cfg.set(k, v);
  return cfg;
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
  return {{"input", input},
          {"format", format},
          {"instance", instance},
          {"coarse_target", std::to_string(coarse_target)},
          {"lambda", lambda ? format_double(*lambda) : "auto"},
          {"nu", format_double(nu)},
          {"layers", std::to_string(layers)},
          {"gates", gates},
          {"dtau", format_double(dtau)},
          {"steps", std::to_string(steps)},
          {"shots", std::to_string(shots)},
          {"sample_shots", std::to_string(sample_shots)},
          {"ridge", format_double(ridge)},
          {"energy_tol", format_double(energy_tol)},
          {"patience", std::to_string(patience)},
          {"exact_reference", std::to_string(exact_reference)},
          {"fm", fm ? "true" : "false"},
          {"fm_iterations", std::to_string(fm_iterations)},
          {"fm_epsilon", format_double(fm_epsilon)},
          {"levels", std::to_string(levels)},
          {"partitioner", partitioner},
          {"bitstring", bitstring},
          {"sweep", join(sweep)},
          {"seeds", std::to_string(seeds)},
          {"candidates", std::to_string(candidates)},
          {"seed", std::to_string(seed)},
          {"out", out},
          {"jobs", std::to_string(jobs)}};
}

void ExperimentConfig::validate() const {
  if (input.empty()) throw ConfigError("no input graph given (--input)");
  graph_format();
  ansatz_preset();
  if (coarse_target < 2) throw ConfigError("coarse_target must be >= 2");
  if (lambda && !(*lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (!(nu >= 0.0 && nu < 0.5)) throw ConfigError("nu must lie in [0, 0.5)");
  if (layers == 0) throw ConfigError("layers must be positive");
  if (levels == 0) throw ConfigError("levels must be positive");
  if (seeds == 0) throw ConfigError("seeds must be positive");
  if (candidates == 0) throw ConfigError("candidates must be positive");
  if (jobs == 0) throw ConfigError("jobs must be positive");
  if (sweep.empty()) throw ConfigError("sweep must list at least one coarse target");
  if (partitioner != "varqite" && partitioner != "fm-baseline" && partitioner != "external-bitstring")
    throw ConfigError("unknown partitioner '" + partitioner + "'");
  if (partitioner == "external-bitstring" && bitstring.empty())
    throw ConfigError("partitioner external-bitstring needs a bitstring file");
  try {
    varqite_config(seed).validate();
    fm_config(seed).validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

GraphFormat ExperimentConfig::graph_format() const {
  try {
    return parse_graph_format(format);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

AnsatzPreset ExperimentConfig::ansatz_preset() const {
  try {
    auto preset = AnsatzPreset::parse(gates);
    // A single gate count applies to every layer.
    if (!preset.full && preset.gates_per_layer.size() == 1)
      preset.gates_per_layer.assign(layers, preset.gates_per_layer.front());
    return preset;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

VarqiteConfig ExperimentConfig::varqite_config(std::uint64_t seed_value) const {
  VarqiteConfig v;
  v.d_tau = dtau;
  v.max_steps = steps;
  v.shots = shots;
  v.sample_shots = sample_shots;
  v.ridge = ridge;
  v.energy_tol = energy_tol;
  v.patience = patience;
  v.seed = seed_value;
  return v;
}

FmConfig ExperimentConfig::fm_config(std::uint64_t seed_value) const {
  FmConfig f;
  f.max_iterations = fm_iterations;
  f.epsilon = fm_epsilon;
  f.seed = seed_value;
  return f;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

WeightedGraph load_input(const ExperimentConfig& cfg) {
  try {
    if (cfg.input.starts_with("gen:")) {
      try {
        return generate_graph(cfg.input.substr(4));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    return load_graph(cfg.input, cfg.graph_format());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("load", e.what());
  }
}

}  // namespace qdissect::app
