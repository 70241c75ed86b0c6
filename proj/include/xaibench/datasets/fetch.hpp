#pragma once

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "xaibench/datasets/manifest.hpp"
#include "xaibench/hash.hpp"

namespace xaibench::datasets {

// <cache-dir>/<name>/<sha256-prefix>.csv
inline std::filesystem::path cache_path(const DatasetManifestEntry& entry, const std::filesystem::path& cache_dir) {
  return cache_dir / entry.name / (entry.sha256.substr(0, 16) + ".csv");
}

namespace detail {

inline std::string http_get(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("fetch: malformed url '" + url + "'");
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(10);
  client.set_read_timeout(60);
  auto res = client.Get(path);
  if (!res) throw IoError("fetch: request to '" + url + "' failed: " + httplib::to_string(res.error()));
  if (res->status != 200) throw IoError("fetch: '" + url + "' returned HTTP " + std::to_string(res->status));
  return std::move(res->body);
}

inline std::string read_local(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("fetch: cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace detail

// Returns the cached file for `entry`, downloading it first when missing or
// stale. The file only lands in the cache after its sha256 matches.
inline std::filesystem::path fetch_dataset(const DatasetManifestEntry& entry, const std::filesystem::path& cache_dir) {
  namespace fs = std::filesystem;
  const fs::path dest = cache_path(entry, cache_dir);
  if (fs::exists(dest) && sha256_file(dest.string()) == entry.sha256) return dest;

  std::string body;
  if (entry.url.rfind("file://", 0) == 0) {
    body = detail::read_local(entry.url.substr(7));
  } else if (entry.url.rfind("http://", 0) == 0 || entry.url.rfind("https://", 0) == 0) {
    body = detail::http_get(entry.url);
  } else {
    throw ConfigError("fetch: unsupported url scheme in '" + entry.url + "'");
  }
  const std::string actual = sha256_hex(body);
  if (actual != entry.sha256) {
    throw IoError("fetch: checksum mismatch for '" + entry.name + "': expected " + entry.sha256 + ", got " + actual);
  }
  fs::create_directories(dest.parent_path());
  const fs::path tmp = dest.string() + ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("fetch: cannot write '" + tmp.string() + "'");
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!out) throw IoError("fetch: short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, dest);
  return dest;
}

}  // namespace xaibench::datasets
