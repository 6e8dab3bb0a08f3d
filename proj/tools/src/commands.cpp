// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <memory>
#include <numeric>
#include <sstream>
#include <thread>

#include "qdissect/generators.hpp"
#include "qdissect/random.hpp"
#include "qdissect/refine.hpp"
#include "qdissect/serialize.hpp"

#ifndef QDISSECT_VERSION
#define QDISSECT_VERSION "0.0.0"
#endif

namespace qdissect::app {

namespace fs = std::filesystem;
using nlohmann::json;

std::string version() { return QDISSECT_VERSION; }

namespace {

// Seed derivation keys; every stage draws from its own stream.
constexpr std::uint64_t kCoarsenKey = 1;
constexpr std::uint64_t kVarqiteKey = 2;
constexpr std::uint64_t kFmKey = 3;
constexpr std::uint64_t kDissectKey = 4;
constexpr std::uint64_t kPointKey = 5;

template <typename F>
auto stage(StageTimer& timer, const std::string& name, F&& body) {
  return timer.run(name, [&]() -> decltype(body()) {
    try {
      return body();
    } catch (const ConfigError&) {
      throw;
    } catch (const StageError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(name, e.what());
    }
  });
}

class OutputDir {
 public:
  explicit OutputDir(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw StageError("output", "cannot create '" + root_.string() + "': " + ec.message());
  }

  template <typename F>
  void write(const std::string& name, const std::string& schema, F&& body) {
    std::ostringstream buf;
    body(buf);
    const auto path = root_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    const auto text = buf.str();
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw StageError("output", "cannot write '" + path.string() + "'");
    files_.emplace_back(name, schema);
  }

  void write_json(const std::string& name, const json& doc) {
    write(name, doc.at("schema").get<std::string>(), [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
  }

  std::vector<OutputEntry> inventory() const {
    std::vector<OutputEntry> out;
    for (const auto& [name, schema] : files_) {
      const auto path = root_ / name;
      out.push_back({name, schema, sha256_file(path), fs::file_size(path)});
    }
    return out;
  }

  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  std::vector<std::pair<std::string, std::string>> files_;
};

// Coarsening needs 2 <= target <= n; small graphs are used as they are.
std::size_t clamp_target(const WeightedGraph& g, std::size_t target) {
  return g.num_vertices() >= 2 ? std::min(target, g.num_vertices()) : target;
}

std::string instance_name(const ExperimentConfig& cfg) {
  if (!cfg.instance.empty()) return cfg.instance;
  if (cfg.input.starts_with("gen:")) return cfg.input.substr(4);
  return fs::path(cfg.input).stem().string();
}

RunManifest finish(const std::string& command, const ExperimentConfig& cfg, const StageTimer& timer,
                   const OutputDir& out) {
  RunManifest m;
  m.command = command;
  m.version = version();
  m.config = cfg.to_map();
  m.seed = cfg.seed;
  m.timings = timer.timings();
  m.outputs = out.inventory();
  if (!cfg.input.starts_with("gen:")) {
    m.config["input"] = fs::absolute(cfg.input).lexically_normal().string();
    m.input_sha256 = sha256_file(cfg.input);
  }
  std::ofstream file(out.root() / kManifestFile, std::ios::binary | std::ios::trunc);
  file << m.to_json().dump(2) << '\n';
  if (!file) throw StageError("output", "cannot write manifest");
  return m;
}

json exact_document(const WeightedGraph& fine, const WeightedGraph& coarse, double lambda, const ExactSolution& s) {
  return {{"schema", kExactRunSchema},
          {"vertices", fine.num_vertices()},
          {"coarse_vertices", coarse.num_vertices()},
          {"lambda", lambda},
          {"solution", exact_to_json(s)}};
}

/// Coarsening plus VarQITE on the coarse graph; shared by partition and compare.
struct CoarseRun {
  CoarseningMap levels;
  double lambda = 0.0;
  std::unique_ptr<QuboProblem> qubo;
  Ansatz ansatz;
  std::optional<ExactSolution> exact;
  VarqiteResult result;
};

CoarseRun run_coarse_varqite(const WeightedGraph& g, const ExperimentConfig& cfg, std::size_t target,
                             std::uint64_t seed, StageTimer& timer) {
  CoarseRun run;
  run.levels = stage(timer, "coarsen",
                     [&] { return coarsen(g, clamp_target(g, target), derive_seed(seed, {kCoarsenKey})); });
  const auto& c = run.levels.coarsest();
  if (c.num_vertices() > kDefaultMaxQubits)
    throw StageError("coarsen", "coarse graph has " + std::to_string(c.num_vertices()) +
                                    " vertices; the simulator holds at most " + std::to_string(kDefaultMaxQubits) +
                                    " qubits (lower coarse_target)");
  stage(timer, "qubo", [&] {
    run.lambda = resolve_lambda(c, cfg.lambda);
    run.qubo = std::make_unique<QuboProblem>(build_qubo(c, run.lambda, cfg.nu));
  });
  run.ansatz = stage(timer, "ansatz", [&] { return build_ansatz(c, cfg.ansatz_preset()); });
  auto vcfg = cfg.varqite_config(derive_seed(seed, {kVarqiteKey}));
  if (c.num_vertices() <= std::min(cfg.exact_reference, kMaxExactVariables)) {
    run.exact = stage(timer, "exact", [&] { return exact_solve(*run.qubo); });
    vcfg.c_star = run.exact->energy;
  }
  run.result = stage(timer, "varqite", [&] { return run_varqite(*run.qubo, run.ansatz, vcfg); });
  if (run.result.status == VarqiteStatus::NonFinite) throw StageError("varqite", run.result.message);
  return run;
}

std::string read_bitstring_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open bitstring file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    line.erase(std::remove_if(line.begin(), line.end(), [](unsigned char ch) { return std::isspace(ch); }), line.end());
    if (!line.empty() && line.front() != '#') return line;
  }
  throw ConfigError("bitstring file '" + path + "' is empty");
}

std::unique_ptr<Bipartitioner> make_partitioner(const ExperimentConfig& cfg) {
  if (cfg.partitioner == "varqite") {
    VarqitePartitionerOptions options;
    options.lambda = cfg.lambda;
    options.nu = cfg.nu;
    options.ansatz = cfg.ansatz_preset();
    options.varqite = cfg.varqite_config(0);
    return std::make_unique<VarqitePartitioner>(std::move(options));
  }
  // fm-baseline, and the completion partitioner below a fixed external root split.
  return std::make_unique<FmBaselinePartitioner>(cfg.nu);
}

DissectionConfig dissection_config(const ExperimentConfig& cfg, std::size_t coarse_target, std::uint64_t seed) {
  DissectionConfig d;
  d.levels = cfg.levels;
  d.coarse_target = coarse_target;
  d.seed = derive_seed(seed, {kDissectKey});
  d.nu = cfg.nu;
  return d;
}

json tree_to_json(const DissectionTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    nodes.push_back({{"depth", n.depth},
                     {"size", n.vertices.size()},
                     {"separator", n.separator},
                     {"part0_size", n.part0.size()},
                     {"part1_size", n.part1.size()},
                     {"child0", n.child0},
                     {"child1", n.child1},
                     {"cut", n.cut_weight},
                     {"imbalance", n.imbalance}});
  }
  return {{"schema", kTreeSchema}, {"levels", tree.levels}, {"nodes", nodes}};
}

}  // namespace

RunManifest cmd_partition(const ExperimentConfig& cfg) {
  cfg.validate();
  StageTimer timer;
  const auto g = stage(timer, "load", [&] { return load_input(cfg); });
  auto run = run_coarse_varqite(g, cfg, cfg.coarse_target, cfg.seed, timer);
  const auto& c = run.levels.coarsest();

  const auto coarse = run.result.best;
  const auto projected = stage(timer, "project", [&] { return project_partition(run.levels, coarse); });
  Partition final_partition = projected;
  std::optional<SampleSet> refined;
  if (cfg.fm) {
    stage(timer, "fm", [&] {
      const auto fm = cfg.fm_config(derive_seed(cfg.seed, {kFmKey}));
      final_partition = fm_refine(g, projected, fm);
      refined = fm_plus_varqite(c, run.result.final_samples, fm);
    });
  }

  OutputDir out(cfg.out);
  stage(timer, "output", [&] {
    json doc = {{"schema", kPartitionRunSchema},
                {"instance", instance_name(cfg)},
                {"vertices", g.num_vertices()},
                {"coarse_vertices", c.num_vertices()},
                {"coarsening_levels", run.levels.levels()},
                {"lambda", run.lambda},
                {"c_star", run.exact ? json(run.exact->energy) : json(nullptr)},
                {"varqite",
                 {{"status", to_string(run.result.status)},
                  {"message", run.result.message},
                  {"steps", run.result.steps},
                  {"preparations", run.result.preparations},
                  {"parameters", run.ansatz.num_params()},
                  {"best_energy", run.result.best_energy},
                  {"best_balanced", run.result.best_balanced}}},
                {"coarse", partition_to_json(coarse)},
                {"projected", partition_to_json(projected)},
                {"final", partition_to_json(final_partition)},
                {"fm_applied", cfg.fm},
                {"balanced", final_partition.balanced(cfg.nu)},
                {"coarse_of", run.levels.fine_to_coarse()}};
    out.write_json("partition.json", doc);
    out.write("trace.jsonl", kTraceSchema, [&](std::ostream& o) { write_trace_jsonl(run.result.trace, o); });
    out.write_json("histogram.json", histogram_to_json(run.result.final_samples));
    if (refined) out.write_json("histogram_refined.json", histogram_to_json(*refined));
    out.write_json("hamiltonian.json", hamiltonian_to_json(to_hamiltonian(*run.qubo)));
    out.write_json("ansatz.json", ansatz_to_json(run.ansatz));
    if (run.exact) out.write_json("exact.json", exact_document(g, c, run.lambda, *run.exact));
  });
  return finish("partition", cfg, timer, out);
}

RunManifest cmd_dissect(const ExperimentConfig& cfg) {
  cfg.validate();
  StageTimer timer;
  const auto g = stage(timer, "load", [&] { return load_input(cfg); });
  auto dcfg = dissection_config(cfg, cfg.coarse_target, cfg.seed);
  if (cfg.partitioner == "external-bitstring") {
    const auto text = read_bitstring_file(cfg.bitstring);
    try {
      dcfg.root_split = bits_from_string(text);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (dcfg.root_split->size() != g.num_vertices())
      throw ConfigError("bitstring has " + std::to_string(dcfg.root_split->size()) + " characters, graph has " +
                        std::to_string(g.num_vertices()) + " vertices");
  }
  const auto partitioner = make_partitioner(cfg);
  const auto pattern = SparsePattern::from_graph(g);
  const auto result = stage(timer, "dissect", [&] { return nested_dissection(g, *partitioner, dcfg); });
  const auto [merit, natural] = stage(timer, "symbolic", [&] {
    return std::pair{symbolic_factorize(pattern, result.permutation),
                     symbolic_factorize(pattern, Permutation::identity(g.num_vertices()))};
  });

  OutputDir out(cfg.out);
  stage(timer, "output", [&] {
    out.write("permutation.txt", kPermutationTextSchema,
              [&](std::ostream& o) { write_permutation_text(result.permutation, o); });
    out.write("permutation.mtx", kPermutationMtxSchema,
              [&](std::ostream& o) { write_permutation_matrix_market(result.permutation, o); });
    out.write("merit.csv", kMeritCsvSchema, [&](std::ostream& o) {
      const auto& root = result.tree.nodes.front();
      o << kMeritCsvHeader << '\n';
      write_merit_csv_row({instance_name(cfg), g.num_vertices(), cfg.levels, cfg.partitioner, merit, root.cut_weight,
                           root.imbalance},
                          o);
      write_merit_csv_row({instance_name(cfg), g.num_vertices(), 0, "natural", natural, 0.0, 0.0}, o);
    });
    out.write_json("tree.json", tree_to_json(result.tree));
  });
  return finish("dissect", cfg, timer, out);
}

namespace {

struct CompareRow {
  std::size_t rank = 0;  // 0 for the baseline row
  std::string partitioner;
  std::string status;  // ok | unbalanced | missing
  MeritFactors merit;
  double cut = 0.0;
  double imbalance = 0.0;
};

struct PointResult {
  std::size_t coarse_target = 0;
  std::size_t seed_index = 0;
  std::vector<CompareRow> rows;
};

PointResult run_point(const WeightedGraph& g, const SparsePattern& pattern, const ExperimentConfig& cfg,
                      std::size_t target, std::size_t seed_index) {
  StageTimer timer;  // per-point timings are not reported
  const std::uint64_t seed = derive_seed(cfg.seed, {kPointKey, target, seed_index});
  PointResult point{target, seed_index, {}};

  auto run = run_coarse_varqite(g, cfg, target, seed, timer);
  const auto& c = run.levels.coarsest();
  const auto samples = cfg.fm ? stage(timer, "fm", [&] {
    return fm_plus_varqite(c, run.result.final_samples, cfg.fm_config(derive_seed(seed, {kFmKey})));
  })
                              : run.result.final_samples;

  // Lowest-energy distinct samples form the candidate pool.
  std::vector<std::pair<double, std::string>> pool;
  for (const auto& [bits, count] : samples.counts) pool.emplace_back(qubo_energy(*run.qubo, bits_from_string(bits)), bits);
  std::sort(pool.begin(), pool.end());
  pool.resize(std::min(pool.size(), 4 * cfg.candidates));
  std::vector<Partition> candidates;
  for (const auto& [energy, bits] : pool)
    candidates.push_back(project_partition(run.levels, make_partition(c, bits_from_string(bits))));

  const auto dcfg = dissection_config(cfg, target, seed);
  const FmBaselinePartitioner baseline(cfg.nu);
  stage(timer, "merit", [&] {
    std::size_t rank = 0;
    if (!candidates.empty()) {
      const auto ranking = evaluate_partition_merit(g, pattern, candidates, cfg.nu, dcfg, baseline);
      for (const auto& r : ranking.ranked) {
        if (rank == cfg.candidates) break;
        point.rows.push_back({++rank, "varqite", "ok", r.merit, r.partition.cut_weight, r.partition.imbalance});
      }
      // Too few balanced candidates: report the best unbalanced ones, flagged.
      for (const auto i : ranking.unbalanced) {
        if (rank == cfg.candidates) break;
        auto local = dcfg;
        local.root_split = candidates[i].bits;
        const auto result = nested_dissection(g, baseline, local);
        point.rows.push_back({++rank, "varqite", "unbalanced", symbolic_factorize(pattern, result.permutation),
                              candidates[i].cut_weight, candidates[i].imbalance});
      }
    }
    while (rank < cfg.candidates) point.rows.push_back({++rank, "varqite", "missing", {}, 0.0, 0.0});

    const auto result = nested_dissection(g, baseline, dcfg);
    const auto& root = result.tree.nodes.front();
    point.rows.push_back({0, baseline.name(), "ok", symbolic_factorize(pattern, result.permutation), root.cut_weight,
                          root.imbalance});
  });
  return point;
}

struct Stats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // sample variance; 0 for fewer than two values
};

Stats stats(const std::vector<double>& values) {
  Stats s;
  s.count = values.size();
  if (values.empty()) return s;
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.variance = ss / static_cast<double>(values.size() - 1);
  }
  return s;
}

json stats_json(const Stats& s) { return {{"count", s.count}, {"mean", s.mean}, {"variance", s.variance}}; }

}  // namespace

RunManifest cmd_compare(const ExperimentConfig& cfg) {
  cfg.validate();
  StageTimer timer;
  const auto g = stage(timer, "load", [&] { return load_input(cfg); });
  const auto pattern = SparsePattern::from_graph(g);
  const auto natural = symbolic_factorize(pattern, Permutation::identity(g.num_vertices()));

  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (const auto target : cfg.sweep)
    for (std::size_t s = 0; s < cfg.seeds; ++s) tasks.emplace_back(target, s);
  std::vector<PointResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());

  timer.run("sweep", [&] {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        try {
          results[i] = run_point(g, pattern, cfg, tasks[i].first, tasks[i].second);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::jthread> pool;
    const std::size_t threads = std::min(cfg.jobs, tasks.size());
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  });
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  OutputDir out(cfg.out);
  stage(timer, "output", [&] {
    const auto instance = instance_name(cfg);
    out.write("compare.csv", kCompareCsvSchema, [&](std::ostream& o) {
      o << "instance,nodes,coarse_target,seed,rank,partitioner,status,nnz,ops,cut,imbalance\n";
      for (const auto& p : results)
        for (const auto& r : p.rows)
          o << instance << ',' << g.num_vertices() << ',' << p.coarse_target << ',' << p.seed_index << ',' << r.rank
            << ',' << r.partitioner << ',' << r.status << ',' << r.merit.nnz_factor << ',' << r.merit.ops << ','
            << format_double(r.cut) << ',' << format_double(r.imbalance) << '\n';
    });

    json points = json::array();
    for (const auto target : cfg.sweep) {
      std::vector<double> best;
      std::vector<double> base;
      std::size_t flagged = 0;
      for (const auto& p : results) {
        if (p.coarse_target != target) continue;
        for (const auto& r : p.rows) {
          if (r.rank == 0) base.push_back(static_cast<double>(r.merit.ops));
          else if (r.rank == 1 && r.status == "ok") best.push_back(static_cast<double>(r.merit.ops));
          if (r.status != "ok") ++flagged;
        }
      }
      points.push_back({{"coarse_target", target},
                        {"varqite_best_ops", stats_json(stats(best))},
                        {"baseline_ops", stats_json(stats(base))},
                        {"flagged_rows", flagged}});
    }
    out.write_json("compare.json", {{"schema", kCompareSummarySchema},
                                    {"instance", instance},
                                    {"vertices", g.num_vertices()},
                                    {"seeds", cfg.seeds},
                                    {"candidates", cfg.candidates},
                                    {"natural", {{"nnz", natural.nnz_factor}, {"ops", natural.ops}}},
                                    {"points", points}});
  });
  return finish("compare", cfg, timer, out);
}

RunManifest cmd_exact(const ExperimentConfig& cfg) {
  cfg.validate();
  StageTimer timer;
  const auto g = stage(timer, "load", [&] { return load_input(cfg); });
  const auto levels =
      stage(timer, "coarsen", [&] { return coarsen(g, clamp_target(g, cfg.coarse_target), derive_seed(cfg.seed, {kCoarsenKey})); });
  const auto& c = levels.coarsest();
  if (c.num_vertices() > kMaxExactVariables)
    throw ConfigError("exact enumeration refused: coarse graph has " + std::to_string(c.num_vertices()) +
                      " vertices, the limit is " + std::to_string(kMaxExactVariables));
  const double lambda = resolve_lambda(c, cfg.lambda);
  const auto solution = stage(timer, "exact", [&] { return exact_solve(build_qubo(c, lambda, cfg.nu)); });
  OutputDir out(cfg.out);
  stage(timer, "output", [&] { out.write_json("exact.json", exact_document(g, c, lambda, solution)); });
  return finish("exact", cfg, timer, out);
}

RunManifest run_command(const std::string& command, const ExperimentConfig& cfg) {
  if (command == "partition") return cmd_partition(cfg);
  if (command == "dissect") return cmd_dissect(cfg);
  if (command == "compare") return cmd_compare(cfg);
  if (command == "exact") return cmd_exact(cfg);
  throw ConfigError("unknown command '" + command + "'");
}

ReplayReport replay(const fs::path& manifest_path, const fs::path& out_dir) {
  ReplayReport report;
  try {
    std::ifstream in(manifest_path);
    if (!in) throw ConfigError("cannot open manifest '" + manifest_path.string() + "'");
    report.original = RunManifest::from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError("invalid manifest '" + manifest_path.string() + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid manifest '" + manifest_path.string() + "': " + e.what());
  }
  if (fs::exists(out_dir) && fs::equivalent(out_dir, manifest_path.parent_path()))
    throw ConfigError("replay output directory must differ from the original run");

  auto cfg = ExperimentConfig::from_map(report.original.config);
  cfg.out = out_dir.string();
  if (!report.original.input_sha256.empty()) {
    if (!fs::exists(cfg.input)) throw StageError("replay", "input '" + cfg.input + "' no longer exists");
    if (sha256_file(cfg.input) != report.original.input_sha256) report.mismatches.push_back("<input>");
  }
  report.replayed = run_command(report.original.command, cfg);

  std::map<std::string, std::string> replayed;
  for (const auto& o : report.replayed.outputs) replayed[o.path] = o.sha256;
  for (const auto& o : report.original.outputs) {
    const auto it = replayed.find(o.path);
    if (it == replayed.end() || it->second != o.sha256) report.mismatches.push_back(o.path);
    if (it != replayed.end()) replayed.erase(it);
  }
  for (const auto& [path, hash] : replayed) report.mismatches.push_back(path);
  return report;
}

}  // namespace qdissect::app
