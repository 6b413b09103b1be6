#pragma once

#include "acl/cli/table.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace acl::cli {

inline constexpr int kCacheSchema = 1;

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace detail

/// Tables keyed by command fingerprint, one JSON file per entry.
/// Writes go to a temporary file that is renamed into place; unreadable entries are
/// moved aside with a ".corrupt" suffix and reported as misses.
class ResultCache {
 public:
  ResultCache(std::filesystem::path dir, std::ostream& warn, int schema = kCacheSchema)
      : dir_(std::move(dir)), warn_(warn), schema_(schema) {}

  const std::filesystem::path& dir() const { return dir_; }

  std::filesystem::path path_for(const std::string& fingerprint) const {
    return dir_ / (detail::fnv1a_hex(fingerprint) + ".json");
  }

  std::optional<Table> load(const std::string& fingerprint) const {
    const auto path = path_for(fingerprint);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) return std::nullopt;
    try {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw std::runtime_error("unreadable");
      const nlohmann::json j = nlohmann::json::parse(in);
      if (j.at("schema").get<int>() != schema_) return std::nullopt;
      if (j.at("fingerprint").get<std::string>() != fingerprint) return std::nullopt;
      const nlohmann::json& payload = j.at("payload");
      if (j.at("checksum").get<std::string>() != detail::fnv1a_hex(payload.dump()))
        throw std::runtime_error("checksum mismatch");
      return table_from_json(payload);
    } catch (const std::exception& e) {
      quarantine(path, e.what());
      return std::nullopt;
    }
  }

  void store(const std::string& fingerprint, const Table& table) {
    std::lock_guard lock(write_mutex_);
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw CacheError("cannot create cache directory " + dir_.string() + ": " + ec.message());
    const nlohmann::json payload = to_json(table);
    const auto created = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count();
    const nlohmann::json entry = {{"schema", schema_},
                                  {"fingerprint", fingerprint},
                                  {"created", created},
                                  {"checksum", detail::fnv1a_hex(payload.dump())},
                                  {"payload", payload}};
    const auto path = path_for(fingerprint);
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw CacheError("cannot write cache file " + tmp.string());
      out << entry.dump() << '\n';
      out.flush();
      if (!out) throw CacheError("short write to cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw CacheError("cannot rename cache file into place: " + ec.message());
  }

 private:
  void quarantine(const std::filesystem::path& path, const std::string& why) const {
    auto target = path;
    target += ".corrupt";
    std::error_code ec;
    std::filesystem::rename(path, target, ec);
    warn_ << "warning: cache entry " << path.filename().string() << " is corrupted (" << why << "); moved to "
          << target.filename().string() << '\n';
  }

  std::filesystem::path dir_;
  std::ostream& warn_;
  int schema_;
  std::mutex write_mutex_;
};

}  // namespace acl::cli
