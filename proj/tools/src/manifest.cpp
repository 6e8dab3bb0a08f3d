// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#include "qdissect/app/manifest.hpp"

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

namespace qdissect::app {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 15];
  }
  return out;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outputs) outs.push_back({{"path", o.path}, {"schema", o.schema}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  nlohmann::json times = nlohmann::json::array();
  for (const auto& [stage, seconds] : timings) times.push_back({{"stage", stage}, {"seconds", seconds}});
  return {{"schema", kManifestSchema}, {"command", command},    {"version", version},
          {"config", config},          {"seed", seed},          {"timings", times},
          {"outputs", outs},           {"input_sha256", input_sha256}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  if (!j.contains("schema") || j.at("schema") != kManifestSchema)
    throw std::invalid_argument("not a run manifest (schema mismatch)");
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.config = j.at("config").get<std::map<std::string, std::string>>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& t : j.at("timings")) m.timings.emplace_back(t.at("stage").get<std::string>(), t.at("seconds").get<double>());
  for (const auto& o : j.at("outputs"))
    m.outputs.push_back({o.at("path").get<std::string>(), o.at("schema").get<std::string>(), o.at("sha256").get<std::string>(), o.at("bytes").get<std::uintmax_t>()});
  m.input_sha256 = j.at("input_sha256").get<std::string>();
  return m;
}

}  // namespace qdissect::app
