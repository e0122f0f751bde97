#include "filco/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace filco {
namespace {

struct DigestContext {
  DigestContext() : ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free) {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("sha256 initialisation failed");
  }
  void update(const void* data, std::size_t n) {
    if (EVP_DigestUpdate(ctx.get(), data, n) != 1) throw std::runtime_error("sha256 update failed");
  }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
      throw std::runtime_error("sha256 finalisation failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += kHex[md[i] >> 4];
      out += kHex[md[i] & 0xF];
    }
    return out;
  }
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx;
};

}  // namespace

std::string sha256_hex(std::string_view data) {
  DigestContext d;
  d.update(data.data(), data.size());
  return d.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  DigestContext d;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) d.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw std::runtime_error("read error on " + path.string());
  return d.hex();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json to_json(const RunManifest& m) {
  Json outputs = Json::object();
  for (const auto& [name, fp] : m.outputs) outputs[name] = fp;
  Json doc;
  doc["tool"] = "filco";
  doc["version"] = kToolVersion;
  doc["command"] = m.command;
  doc["config"] = m.config;
  doc["input"] = Json{{"path", m.input_path}, {"fingerprint", m.input_fingerprint}};
  doc["outputs"] = std::move(outputs);
  doc["started_at"] = m.started_at;
  doc["finished_at"] = m.finished_at;
  return doc;
}

void write_manifest(const std::filesystem::path& dir, RunManifest manifest,
                    const std::vector<std::string>& output_files) {
  manifest.outputs.clear();
  for (const auto& name : output_files)
    manifest.outputs.emplace_back(name, "sha256:" + sha256_file(dir / name));
  if (manifest.finished_at.empty()) manifest.finished_at = utc_timestamp();
  std::ofstream out(dir / kManifestName, std::ios::binary | std::ios::trunc);
  out << to_json(manifest).dump(2) << '\n';
  if (!out) throw std::ios_base::failure("cannot write " + (dir / kManifestName).string());
}

}  // namespace filco
