#include "cascade/runner/manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>
#include <json.hpp>
#include <stdexcept>

namespace cascade::runner {

std::string sha256_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot read " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount())) != 1)
      throw std::runtime_error("sha256 update failed");
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
    throw std::runtime_error("sha256 final failed");

  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

void write_manifest(const std::filesystem::path& dir, RunManifest& manifest, std::vector<std::string> relative_paths)
{
  std::sort(relative_paths.begin(), relative_paths.end());
  manifest.files.clear();
  for (const auto& rel : relative_paths) {
    const auto full = dir / rel;
    manifest.files.push_back({rel, sha256_file(full), std::filesystem::file_size(full)});
  }

  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest.inputs)
    j["inputs"][k] = v;
  j["seed"] = manifest.seed;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : manifest.files)
    j["files"].push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});

  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write manifest in " + dir.string());
  out << j.dump(2) << '\n';
}

}  // namespace cascade::runner
