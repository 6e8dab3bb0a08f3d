// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "qdissect/app/cli.hpp"
#include "qdissect/app/manifest.hpp"
#include "qdissect/generators.hpp"
#include "qdissect/partition.hpp"
#include "qdissect/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("qdissect_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "qdissect");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = qdissect::app::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    out_ = out.str();
    err_ = err.str();
    return code;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  static std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  }

  fs::path dir_;
  std::string out_;
  std::string err_;
};

// Fast VarQITE settings for shape and plumbing checks.
const std::vector<std::string> kQuick = {"--steps", "10", "--sample-shots", "200"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

TEST_F(CliTest, PartitionRingTraceBestSoFarNonIncreasing) {
  ASSERT_EQ(cli({"partition", "--input", "gen:ring:8", "--seed", "7", "--steps", "60", "--out", path("p")}), 0)
      << err_;
  std::ifstream in(dir_ / "p" / "trace.jsonl");
  std::string line;
  std::vector<double> best;
  while (std::getline(in, line)) {
    const auto j = json::parse(line);
    EXPECT_EQ(j.at("schema"), qdissect::kTraceSchema);
    best.push_back(j.at("best_so_far_energy").get<double>());
  }
  ASSERT_GT(best.size(), 1u);
  for (std::size_t i = 1; i < best.size(); ++i) EXPECT_LE(best[i], best[i - 1]);

  const auto doc = json::parse(slurp(dir_ / "p" / "partition.json"));
  EXPECT_EQ(doc.at("schema"), "qdissect.partition-run/1");
  EXPECT_EQ(doc.at("c_star").get<double>(), 2.0);
  EXPECT_EQ(doc.at("final").at("bits").get<std::string>().size(), 8u);
  for (const auto* name : {"histogram.json", "histogram_refined.json", "hamiltonian.json", "ansatz.json",
                           "exact.json", "manifest.json"})
    EXPECT_TRUE(fs::exists(dir_ / "p" / name)) << name;
}

TEST_F(CliTest, InvalidFormatIsUsageError) {
  EXPECT_EQ(cli({"partition", "--input", "gen:ring:8", "--format", "bogus", "--out", path("p")}), 2);
  EXPECT_NE(err_.find("unknown graph format"), std::string::npos);
  EXPECT_NE(err_.find("--help"), std::string::npos);
}

TEST_F(CliTest, BinaryReportsExitCodes) {
  const std::string exe = QDISSECT_CLI_PATH;
  const auto run = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run("partition --input gen:ring:8 --format bogus --out " + path("a")), 2);
  EXPECT_EQ(run("partition --no-such-flag"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("exact --input gen:ring:8 --out " + path("b")), 0);
}

TEST_F(CliTest, RuntimeFailureIsStageTagged) {
  EXPECT_EQ(cli({"dissect", "--input", path("missing.graph"), "--out", path("d")}), 1);
  EXPECT_NE(err_.find("[load]"), std::string::npos);
}

TEST_F(CliTest, BadValuesAreUsageErrors) {
  EXPECT_EQ(cli({"partition", "--input", "gen:ring:8", "--nu", "0.7"}), 2);
  EXPECT_EQ(cli({"partition", "--input", "gen:ring:8", "--steps", "ten"}), 2);
  EXPECT_EQ(cli({"partition", "--input", "gen:ring:8", "--set", "colour=blue"}), 2);
  EXPECT_EQ(cli({"partition", "--input", "gen:hexagon:3"}), 2);
  EXPECT_EQ(cli({"dissect", "--input", "gen:ring:8", "--partitioner", "magic"}), 2);
  EXPECT_EQ(cli({"dissect", "--input", "gen:ring:8", "--partitioner", "external-bitstring"}), 2);
}

TEST_F(CliTest, SameSeedGivesByteIdenticalPartition) {
  const auto args = concat({"partition", "--input", "gen:grid:4x4", "--seed", "3"}, kQuick);
  ASSERT_EQ(cli(concat(args, {"--out", path("a")})), 0) << err_;
  ASSERT_EQ(cli(concat(args, {"--out", path("b")})), 0) << err_;
  for (const auto* name : {"partition.json", "trace.jsonl", "histogram.json", "histogram_refined.json"})
    EXPECT_EQ(slurp(dir_ / "a" / name), slurp(dir_ / "b" / name)) << name;
}

TEST_F(CliTest, ReplayReproducesEveryCommand) {
  ASSERT_EQ(cli(concat({"partition", "--input", "gen:ring:10", "--coarse-target", "6", "--out", path("p")}, kQuick)),
            0)
      << err_;
  ASSERT_EQ(cli({"dissect", "--input", "gen:grid:7x7", "--levels", "2", "--partitioner", "fm-baseline", "--out",
                 path("d")}),
            0)
      << err_;
  ASSERT_EQ(cli({"exact", "--input", "gen:ring:8", "--out", path("e")}), 0) << err_;
  ASSERT_EQ(cli(concat({"compare", "--input", "gen:grid:5x5", "--sweep", "8,10", "--seeds", "2", "--jobs", "3",
                        "--out", path("c")},
                       kQuick)),
            0)
      << err_;
  for (const auto* run : {"p", "d", "e", "c"}) {
    EXPECT_EQ(cli({"replay", path(std::string(run) + "/manifest.json"), "--out", path(std::string(run) + "_r")}), 0)
        << run << ": " << err_;
    const auto original = qdissect::app::RunManifest::from_json(json::parse(slurp(dir_ / run / "manifest.json")));
    ASSERT_FALSE(original.outputs.empty());
    for (const auto& o : original.outputs) {
      EXPECT_EQ(slurp(dir_ / run / o.path), slurp(dir_ / (std::string(run) + "_r") / o.path)) << o.path;
      EXPECT_FALSE(o.schema.empty()) << o.path;
    }
  }
}

TEST_F(CliTest, ReplayDetectsTamperedManifest) {
  ASSERT_EQ(cli({"exact", "--input", "gen:ring:8", "--out", path("e")}), 0) << err_;
  auto doc = json::parse(slurp(dir_ / "e" / "manifest.json"));
  doc["outputs"][0]["sha256"] = std::string(64, '0');
  std::ofstream(dir_ / "e" / "manifest.json") << doc.dump(2);
  EXPECT_EQ(cli({"replay", path("e/manifest.json"), "--out", path("r")}), 1);
  EXPECT_NE(err_.find("exact.json"), std::string::npos);
}

TEST_F(CliTest, CommandsDoNotMutateInputs) {
  {
    std::ofstream g(path("grid.graph"));
    qdissect::write_metis(qdissect::grid_graph(6, 6), g);
  }
  const auto before = qdissect::app::sha256_file(path("grid.graph"));
  const auto mtime = fs::last_write_time(path("grid.graph"));
  ASSERT_EQ(cli({"dissect", "--input", path("grid.graph"), "--partitioner", "fm-baseline", "--out", path("d")}), 0)
      << err_;
  ASSERT_EQ(cli(concat({"partition", "--input", path("grid.graph"), "--coarse-target", "8", "--out", path("p")},
                       kQuick)),
            0)
      << err_;
  EXPECT_EQ(qdissect::app::sha256_file(path("grid.graph")), before);
  EXPECT_EQ(fs::last_write_time(path("grid.graph")), mtime);
  const auto manifest = json::parse(slurp(dir_ / "d" / "manifest.json"));
  EXPECT_EQ(manifest.at("input_sha256"), before);
  EXPECT_EQ(manifest.at("schema"), qdissect::app::kManifestSchema);
}

TEST_F(CliTest, ExactListsOptimaAndRefusesLargeGraphs) {
  ASSERT_EQ(cli({"exact", "--input", "gen:ring:8", "--out", path("e")}), 0) << err_;
  const auto doc = json::parse(slurp(dir_ / "e" / "exact.json"));
  // Default lambda for unit weights is 2; a balanced two-edge cut costs 2.
  EXPECT_EQ(doc.at("lambda").get<double>(), 2.0);
  EXPECT_EQ(doc.at("solution").at("energy").get<double>(), 2.0);
  EXPECT_EQ(doc.at("solution").at("optima").size(), 8u);

  EXPECT_EQ(cli({"exact", "--input", "gen:path:31", "--out", path("big")}), 2);
  EXPECT_NE(err_.find("refused"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "big" / "exact.json"));

  {
    std::ofstream g(path("two.graph"));
    g << "4 2\n2\n1\n4\n3\n";  // two disjoint edges
  }
  ASSERT_EQ(cli({"exact", "--input", path("two.graph"), "--lambda", "0", "--out", path("z")}), 0) << err_;
  EXPECT_EQ(json::parse(slurp(dir_ / "z" / "exact.json")).at("solution").at("energy").get<double>(), 0.0);
}

TEST_F(CliTest, DissectBeatsNaturalOrderOnGrid) {
  ASSERT_EQ(cli({"dissect", "--input", "gen:grid:9x9", "--levels", "2", "--partitioner", "fm-baseline", "--out",
                 path("d")}),
            0)
      << err_;
  const auto rows = csv(dir_ / "d" / "merit.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0][5], "ops");
  EXPECT_EQ(rows[1][3], "fm-baseline");
  EXPECT_EQ(rows[2][3], "natural");
  EXPECT_LT(std::stoull(rows[1][5]), std::stoull(rows[2][5]));

  std::vector<std::uint64_t> perm;
  std::ifstream in(dir_ / "d" / "permutation.txt");
  for (std::uint64_t v; in >> v;) perm.push_back(v);
  ASSERT_EQ(perm.size(), 81u);
  std::sort(perm.begin(), perm.end());
  for (std::uint64_t i = 0; i < perm.size(); ++i) EXPECT_EQ(perm[i], i);
}

TEST_F(CliTest, ExternalBitstringIsUsedAsRootSplit) {
  const auto g = qdissect::grid_graph(6, 6);
  std::string bits;
  for (int i = 0; i < 36; ++i) bits += (i % 6) < 3 ? '1' : '0';
  std::ofstream(path("split.txt")) << "# columns 0-2\n" << bits << '\n';
  ASSERT_EQ(cli({"dissect", "--input", "gen:grid:6x6", "--partitioner", "external-bitstring", "--bitstring",
                 path("split.txt"), "--out", path("d")}),
            0)
      << err_;
  const auto rows = csv(dir_ / "d" / "merit.csv");
  const auto expected = qdissect::make_partition(g, qdissect::bits_from_string(bits));
  EXPECT_EQ(rows[1][3], "external-bitstring");
  EXPECT_EQ(std::stod(rows[1][6]), expected.cut_weight);

  std::ofstream(path("short.txt")) << "0101\n";
  EXPECT_EQ(cli({"dissect", "--input", "gen:grid:6x6", "--partitioner", "external-bitstring", "--bitstring",
                 path("short.txt"), "--out", path("s")}),
            2);
}

TEST_F(CliTest, CompareEmitsCandidatesPlusBaselinePerPoint) {
  ASSERT_EQ(cli({"compare", "--input", "gen:grid:6x6", "--sweep", "16,24", "--gates", "truncated:2", "--layers", "1",
                 "--steps", "1", "--shots", "0", "--sample-shots", "200", "--jobs", "2", "--out", path("c")}),
            0)
      << err_;
  const auto rows = csv(dir_ / "c" / "compare.csv");
  ASSERT_EQ(rows.size(), 1u + 2u * (4u + 1u));
  std::size_t baseline = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) baseline += rows[r][5] == "fm-baseline";
  EXPECT_EQ(baseline, 2u);
  EXPECT_EQ(rows[1][2], "16");
  EXPECT_EQ(rows[6][2], "24");
}

TEST_F(CliTest, CompareFlagsUnbalancedCandidates) {
  // Without the balance penalty the ground state puts every vertex on one side.
  ASSERT_EQ(cli({"compare", "--input", "gen:grid:4x4", "--sweep", "8", "--lambda", "0", "--fm", "false", "--steps",
                 "40", "--sample-shots", "200", "--out", path("c")}),
            0)
      << err_;
  const auto rows = csv(dir_ / "c" / "compare.csv");
  ASSERT_EQ(rows.size(), 1u + 5u);
  std::size_t flagged = 0;
  for (std::size_t r = 1; r < rows.size(); ++r)
    if (rows[r][5] == "varqite") flagged += rows[r][6] != "ok";
  EXPECT_GT(flagged, 0u);
  const auto summary = json::parse(slurp(dir_ / "c" / "compare.json"));
  EXPECT_EQ(summary.at("points")[0].at("flagged_rows").get<std::size_t>(), flagged);
}

TEST_F(CliTest, CompareSeedSweepReportsVariance) {
  ASSERT_EQ(cli(concat({"compare", "--input", "gen:grid:5x5", "--sweep", "10", "--seeds", "5", "--jobs", "4", "--out",
                        path("c")},
                       kQuick)),
            0)
      << err_;
  const auto summary = json::parse(slurp(dir_ / "c" / "compare.json"));
  EXPECT_EQ(summary.at("schema"), "qdissect.compare-summary/1");
  const auto& base = summary.at("points")[0].at("baseline_ops");
  EXPECT_EQ(base.at("count").get<std::size_t>(), 5u);
  EXPECT_GE(base.at("variance").get<double>(), 0.0);

  // Concurrency does not change results.
  ASSERT_EQ(cli(concat({"compare", "--input", "gen:grid:5x5", "--sweep", "10", "--seeds", "5", "--jobs", "1", "--out",
                        path("serial")},
                       kQuick)),
            0)
      << err_;
  EXPECT_EQ(slurp(dir_ / "c" / "compare.csv"), slurp(dir_ / "serial" / "compare.csv"));
}

TEST_F(CliTest, FlagsOverrideConfigFileAndEnvironmentSeed) {
  std::ofstream(path("run.cfg")) << "# quick run\ninput = gen:ring:8\nsteps = 3\nseed = 4\nsample_shots = 100\n";
  ASSERT_EQ(cli({"partition", "--config", path("run.cfg"), "--seed", "9", "--out", path("a")}), 0) << err_;
  auto m = json::parse(slurp(dir_ / "a" / "manifest.json"));
  EXPECT_EQ(m.at("config").at("steps"), "3");
  EXPECT_EQ(m.at("seed").get<std::uint64_t>(), 9u);

  ASSERT_EQ(cli({"partition", "--config", path("run.cfg"), "--out", path("b")}), 0) << err_;
  EXPECT_EQ(json::parse(slurp(dir_ / "b" / "manifest.json")).at("seed").get<std::uint64_t>(), 4u);

  ::setenv("QDISSECT_SEED", "11", 1);
  ASSERT_EQ(cli({"partition", "--input", "gen:ring:8", "--steps", "3", "--out", path("c")}), 0) << err_;
  ASSERT_EQ(cli({"partition", "--input", "gen:ring:8", "--steps", "3", "--seed", "2", "--out", path("d")}), 0) << err_;
  ::unsetenv("QDISSECT_SEED");
  EXPECT_EQ(json::parse(slurp(dir_ / "c" / "manifest.json")).at("seed").get<std::uint64_t>(), 11u);
  EXPECT_EQ(json::parse(slurp(dir_ / "d" / "manifest.json")).at("seed").get<std::uint64_t>(), 2u);

  std::ofstream(path("bad.cfg")) << "input = gen:ring:8\nwidth = 3\n";
  EXPECT_EQ(cli({"partition", "--config", path("bad.cfg")}), 2);
}

}  // namespace
