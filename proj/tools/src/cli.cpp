// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/app/cli.hpp"

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdissect/app/commands.hpp"

namespace qdissect::app {

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

// Flags map one-to-one onto config keys.
constexpr FlagSpec kFlags[] = {
    {"--input", "input", "graph file, or gen:<spec> (ring:8, grid:9x9, geometric:40:0.25:<seed>, ...)"},
    {"--format", "format", "metis | edge-list | matrix-market"},
    {"--instance", "instance", "label used in CSV rows"},
    {"--coarse-target", "coarse_target", "vertices after coarsening"},
    {"--lambda", "lambda", "balance penalty weight, or auto"},
    {"--nu", "nu", "balance tolerance"},
    {"--layers", "layers", "ansatz layers for a single truncated gate count"},
    {"--gates", "gates", "full-2layer, or truncated:<g0,g1,...>"},
    {"--dtau", "dtau", "imaginary time step"},
    {"--steps", "steps", "maximum VarQITE steps"},
    {"--shots", "shots", "shots per circuit evaluation (0 = exact expectations)"},
    {"--sample-shots", "sample_shots", "shots for the per-step sample distribution"},
    {"--ridge", "ridge", "Tikhonov regularization of the linear solve"},
    {"--energy-tol", "energy_tol", "stop when energy changes less than this for `patience` steps (0 = off)"},
    {"--patience", "patience", "steps of stalled energy before stopping"},
    {"--exact-reference", "exact_reference", "enumerate C* when the coarse graph has at most this many vertices"},
    {"--fm", "fm", "refine with modified Fiduccia-Mattheyses (true/false)"},
    {"--fm-iterations", "fm_iterations", "FM pass limit M"},
    {"--fm-epsilon", "fm_epsilon", "FM balance tolerance epsilon"},
    {"--levels", "levels", "nested dissection levels L"},
    {"--partitioner", "partitioner", "varqite | fm-baseline | external-bitstring"},
    {"--bitstring", "bitstring", "file holding the root split for external-bitstring"},
    {"--sweep", "sweep", "coarse targets: a,b,c or lo..hi or lo..hi:step"},
    {"--seeds", "seeds", "seeds per sweep point"},
    {"--candidates", "candidates", "VarQITE candidates reported per sweep point"},
    {"--seed", "seed", "master seed (falls back to QDISSECT_SEED)"},
    {"--out", "out", "output directory"},
    {"--jobs", "jobs", "concurrent sweep points"},
};

struct CommandOptions {
  std::string config_file;
  std::map<std::string, std::string> flags;
  std::vector<std::string> sets;
};

void add_config_options(CLI::App* sub, CommandOptions& opts) {
  sub->add_option("--config", opts.config_file, "key = value file; flags override it")->check(CLI::ExistingFile);
  for (const auto& f : kFlags) {
    sub->add_option_function<std::string>(
        f.flag, [&opts, key = std::string(f.key)](const std::string& v) { opts.flags[key] = v; }, f.help);
  }
  sub->add_option("--set", opts.sets, "extra key=value settings");
}

ExperimentConfig resolve_config(const CommandOptions& opts) {
  // Precedence: flags, then config file, then QDISSECT_SEED, then defaults.
  ExperimentConfig cfg;
  std::map<std::string, std::string> file;
  if (!opts.config_file.empty()) file = read_config_file(opts.config_file);
  if (!file.contains("seed") && !opts.flags.contains("seed")) {
    if (const char* env = std::getenv("QDISSECT_SEED"); env && *env) cfg.set("seed", env);
  }
  for (const auto& [k, v] : file) cfg.set(k, v);
  for (const auto& s : opts.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& [k, v] : opts.flags) cfg.set(k, v);
  return cfg;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid VarQITE / classical graph partitioning and nested dissection", "qdissect"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"partition", "bipartition a graph: coarsen, VarQITE, project, FM refine"},
      {"dissect", "nested dissection ordering with merit factors"},
      {"compare", "coarse-target sweep of VarQITE candidates against the FM baseline"},
      {"exact", "brute-force optimum of the coarse QUBO"},
  };
  std::map<std::string, CommandOptions> options;
  for (const auto& [name, help] : commands) add_config_options(app.add_subcommand(name, help), options[name]);

  std::string manifest;
  std::string replay_out;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a manifest and compare output hashes");
  replay_cmd->add_option("manifest", manifest, "manifest.json of the original run")->required();
  replay_cmd->add_option("--out", replay_out, "output directory for the re-run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (replay_cmd->parsed()) {
      const auto report = replay(manifest, replay_out);
      if (report.identical()) {
        out << "replay: " << report.original.outputs.size() << " outputs identical\n";
        return 0;
      }
      for (const auto& m : report.mismatches) err << "replay: mismatch in " << m << '\n';
      return 1;
    }
    for (const auto& [name, help] : commands) {
      if (!app.got_subcommand(name)) continue;
      const auto cfg = resolve_config(options[name]);
      const auto m = run_command(name, cfg);
      out << name << ": wrote " << m.outputs.size() << " files to " << cfg.out << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return 2;
  } catch (const StageError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace qdissect::app
