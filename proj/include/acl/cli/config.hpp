#pragma once

#include "acl/errors.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace acl::cli {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class UnstableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every knob a command can read. Fields that do not affect results (jobs, cache_dir,
/// format, plot) are left out of the fingerprint.
struct RunConfig {
  std::uint64_t q = 3;
  unsigned n = 2;
  unsigned m = 2;
  unsigned M = 1;
  std::optional<unsigned> M_max;
  unsigned m_max = 6;
  std::string mu;  // rational text; empty means table lookup
  unsigned deg_cut = 12;
  unsigned digits = 20;
  unsigned jobs = 1;
  std::string cache_dir;
  std::string format = "csv";
  std::string plot;
  bool allow_unstable = false;

  unsigned last_M() const { return M_max.value_or(M); }

  /// Canonical serialization of the result-relevant fields, prefixed by the command path.
  std::string fingerprint(const std::string& command) const {
    std::ostringstream os;
    os << command << "|q=" << q << "|n=" << n << "|m=" << m << "|M=" << M << "|M-max=" << last_M()
       << "|m-max=" << m_max << "|mu=" << mu << "|deg-cut=" << deg_cut << "|digits=" << digits;
    return os.str();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream is(value);
  T out{};
  if (!(is >> out) || !is.eof()) throw UsageError("config: bad value for " + key + ": " + value);
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw UsageError("config: bad boolean for " + key + ": " + value);
}

}  // namespace detail

/// Applies flat key=value lines ('#' starts a comment) onto cfg. Keys match the long flag names.
inline void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    using detail::parse_number;
    if (key == "q") cfg.q = parse_number<std::uint64_t>(key, value);
    else if (key == "n") cfg.n = parse_number<unsigned>(key, value);
    else if (key == "m") cfg.m = parse_number<unsigned>(key, value);
    else if (key == "M") cfg.M = parse_number<unsigned>(key, value);
    else if (key == "M-max") cfg.M_max = parse_number<unsigned>(key, value);
    else if (key == "m-max") cfg.m_max = parse_number<unsigned>(key, value);
    else if (key == "mu") cfg.mu = value;
    else if (key == "deg-cut") cfg.deg_cut = parse_number<unsigned>(key, value);
    else if (key == "digits") cfg.digits = parse_number<unsigned>(key, value);
    else if (key == "jobs") cfg.jobs = parse_number<unsigned>(key, value);
    else if (key == "cache-dir") cfg.cache_dir = value;
    else if (key == "format") cfg.format = value;
    else if (key == "plot") cfg.plot = value;
    else if (key == "allow-unstable") cfg.allow_unstable = detail::parse_bool(key, value);
    else throw UsageError("config line " + std::to_string(lineno) + ": unknown key " + key);
  }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

}  // namespace acl::cli
