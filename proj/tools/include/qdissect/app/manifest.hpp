// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_APP_MANIFEST_HPP
#define QDISSECT_APP_MANIFEST_HPP

#include <chrono>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace qdissect::app {

inline constexpr const char* kManifestSchema = "qdissect.manifest/1";
inline constexpr const char* kManifestFile = "manifest.json";

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct OutputEntry {
  std::string path;  // relative to the output directory
  std::string schema;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Everything needed to re-run a command and check its outputs.
struct RunManifest {
  std::string command;
  std::string version;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> timings;  // stage, seconds
  std::vector<OutputEntry> outputs;
  std::string input_sha256;  // empty for generated inputs

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

/// Accumulates stage timings.
class StageTimer {
 public:
  template <typename F>
  auto run(const std::string& stage, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      StageTimer* self;
      std::string stage;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        self->timings_.emplace_back(
            stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      }
    } record{this, stage, start};
    return body();
  }
  const std::vector<std::pair<std::string, double>>& timings() const { return timings_; }

 private:
  std::vector<std::pair<std::string, double>> timings_;
};

}  // namespace qdissect::app

#endif  // QDISSECT_APP_MANIFEST_HPP
