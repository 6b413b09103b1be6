#pragma once

#include "acl/cli/cache.hpp"
#include "acl/cli/commands.hpp"
#include "acl/cli/config.hpp"
#include "acl/cli/plot.hpp"
#include "acl/cli/table.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <ostream>
#include <string>
#include <vector>

namespace acl::cli {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitGuard = 3, kExitUnstable = 4 };

namespace detail {

/// Value of --config from the raw arguments, so the file can be applied before flags.
inline std::string find_config_path(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  return path;
}

struct Leaf {
  std::string path;
  CLI::App* app;
};

inline void add_flags(CLI::App* sub, RunConfig& cfg, unsigned& M_max, std::string& config_path) {
  sub->add_option("--q", cfg.q, "field size (prime power)");
  sub->add_option("--n", cfg.n, "projective dimension");
  sub->add_option("--m", cfg.m, "number of points / cycle degree");
  sub->add_option("--M", cfg.M, "height exponent (first of the range)");
  sub->add_option("--M-max", M_max, "last height exponent of the range");
  sub->add_option("--m-max", cfg.m_max, "largest cycle degree");
  sub->add_option("--mu", cfg.mu, "effective-cone slope (rational)");
  sub->add_option("--deg-cut", cfg.deg_cut, "Euler product truncation degree");
  sub->add_option("--digits", cfg.digits, "significant digits for reals");
  sub->add_option("--jobs", cfg.jobs, "worker threads for enumerations");
  sub->add_option("--cache-dir", cfg.cache_dir, "result cache directory (default $ACL_CACHE_DIR)");
  sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--plot", cfg.plot, "write PREFIX.dat and PREFIX.gp");
  sub->add_flag("--allow-unstable", cfg.allow_unstable, "emit unstable quadratic counts");
  sub->add_option("--config", config_path, "key=value file applied before the flags");
}

inline Table compute_or_load(const std::string& command, const RunConfig& cfg, std::ostream& err) {
  const auto& builders = command_table();
  const auto it = builders.find(command);
  if (it == builders.end()) throw UsageError("unknown command " + command);
  std::string dir = cfg.cache_dir;
  if (dir.empty())
    if (const char* env = std::getenv("ACL_CACHE_DIR")) dir = env;
  const std::string fp = cfg.fingerprint(command);
  if (dir.empty()) return it->second(cfg);
  ResultCache cache(dir, err);
  if (auto hit = cache.load(fp)) return *hit;
  Table t = it->second(cfg);
  try {
    cache.store(fp, t);
  } catch (const CacheError& e) {
    err << "warning: " << e.what() << '\n';
  }
  return t;
}

}  // namespace detail

/// Parses args (without the program name), runs one command and writes its table to out.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    if (const std::string path = detail::find_config_path(args); !path.empty()) apply_config_file(cfg, path);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"Counting rational points and 0-cycles over F_q(t)", "acl"};
  app.require_subcommand(1);
  unsigned M_max = 0;
  std::string config_path;
  std::vector<detail::Leaf> leaves;
  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, const std::string& path) {
    CLI::App* sub = parent->add_subcommand(name, help);
    detail::add_flags(sub, cfg, M_max, config_path);
    leaves.push_back({path, sub});
  };
  CLI::App* count = app.add_subcommand("count", "exact counts against closed forms")->require_subcommand(1);
  leaf(count, "rational", "points of P^n of exact height q^M", "count rational");
  leaf(count, "pairs", "reducible pairs in Sym^2 P^2", "count pairs");
  leaf(count, "quadratic", "degree-2 points of P^2 of exact height", "count quadratic");
  leaf(&app, "cycles", "effective and prime 0-cycles on P^2", "cycles");
  CLI::App* peyre_cmd = app.add_subcommand("peyre", "leading constants")->require_subcommand(1);
  leaf(peyre_cmd, "pn", "P^n", "peyre pn");
  leaf(peyre_cmd, "hilb2", "Hilb^2 P^2", "peyre hilb2");
  leaf(peyre_cmd, "hilbm", "Hilb^m P^2", "peyre hilbm");
  leaf(peyre_cmd, "cm", "prime 0-cycle proportion constant", "peyre cm");
  CLI::App* verify = app.add_subcommand("verify", "numeric lemma checks")->require_subcommand(1);
  leaf(verify, "lemmas", "technical and bookkeeping lemmas", "verify lemmas");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  std::string command;
  for (const auto& l : leaves) {
    if (!l.app->parsed()) continue;
    command = l.path;
    if (l.app->count("--M-max") > 0) cfg.M_max = M_max;
  }

  try {
    validate(cfg);
    const PrecisionGuard precision(cfg.digits + 10);
    const Table table = detail::compute_or_load(command, cfg, err);
    if (cfg.format == "json") write_json(out, table);
    else write_csv(out, table);
    if (!cfg.plot.empty() && !write_plot(cfg.plot, table, command))
      err << "warning: nothing to plot for " << command << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SizeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitGuard;
  } catch (const UnstableError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnstable;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace acl::cli
