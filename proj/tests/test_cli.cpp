#include "acl/cli/app.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace acl;
using namespace acl::cli;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("acl_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

// Points of P^2 over F_{q^d}.
std::uint64_t n_pts(std::uint64_t q, unsigned d) {
  std::uint64_t Q = 1;
  for (unsigned i = 0; i < d; ++i) Q *= q;
  return Q * Q + Q + 1;
}

}  // namespace

TEST(Cli, CountRationalGolden) {
  const auto r = run_cli({"count", "rational", "--q", "2", "--n", "2", "--M", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  // (q^3 - 1)/(q - 1) q^3 ... for q = 2: 7 points of P^2(F_2) times q^{3} minus the 14 of height below
  EXPECT_EQ(r.out, "label,params,observed,predicted,match,tolerance\nrational,q=2;n=2;M=1,42,42,true,0\n");
}

TEST(Cli, CyclesGolden) {
  const auto r = run_cli({"cycles", "--q", "2", "--m-max", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::uint64_t q = 2, N1 = n_pts(q, 1), N2 = n_pts(q, 2), N3 = n_pts(q, 3);
  const std::uint64_t p2 = (N2 - N1) / 2, p3 = (N3 - N1) / 3;
  const std::uint64_t sym2 = N1 * (N1 + 1) / 2 + p2;
  const std::uint64_t sym3 = N1 * (N1 + 1) * (N1 + 2) / 6 + p2 * N1 + p3;
  const std::uint64_t hilb2 = sym2 - N1 + N1 * (q + 1);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 3u);
  EXPECT_EQ(ls[0], "m,sym,hilb,primes,chen7,chen8,chen8_valid,ratio_error");
  EXPECT_EQ(ls[1].substr(0, ls[1].find(",true")),
            "2," + std::to_string(sym2) + "," + std::to_string(hilb2) + "," + std::to_string(p2) + "," +
                std::to_string(sym2) + "," + std::to_string(p2));
  EXPECT_EQ(sym2, 35u);
  EXPECT_EQ(hilb2, 49u);
  EXPECT_EQ(p2, 7u);
  EXPECT_EQ(ls[2].rfind("3," + std::to_string(sym3) + ",", 0), 0u);
  EXPECT_NE(ls[2].find("," + std::to_string(p3) + "," + std::to_string(sym3) + "," + std::to_string(p3) + ",true"),
            std::string::npos);
  EXPECT_EQ(p3, 22u);
}

TEST(Cli, CountPairsAllMatch) {
  const auto r = run_cli({"count", "pairs", "--q", "2", "--M", "1", "--M-max", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_NE(ls[i].find(",true,0"), std::string::npos) << ls[i];
  EXPECT_EQ(ls[3], "reducible_pairs,q=2;M=2,3234,3234,true,0");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"count", "rational", "--q", "97", "--n", "5", "--M", "9"}).code, kExitGuard);
  EXPECT_EQ(run_cli({"count", "rational", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run_cli({}).code, kExitUsage);
  EXPECT_EQ(run_cli({"count", "rational", "--q", "6"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"count", "rational", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"count", "rational", "--M", "3", "--M-max", "2"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"count", "quadratic", "--q", "4", "--M", "1"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"count", "quadratic", "--q", "5", "--M", "4"}).code, kExitGuard);
  EXPECT_EQ(run_cli({"cycles", "--q", "2", "--m-max", "65"}).code, kExitGuard);
  EXPECT_EQ(run_cli({"peyre", "hilbm", "--q", "3", "--m", "4"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"count", "rational", "--help"}).code, kExitOk);
}

TEST(Cli, ConfigFileAndFlagOverride) {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# defaults for a sweep\nq = 3\nn=1\nM=2  # exponent\n";
  const auto r = run_cli({"count", "rational", "--config", cfg.string(), "--q", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).at(1), "rational,q=2;n=1;M=2,24,24,true,0");
  const auto from_file = run_cli({"count", "rational", "--config=" + cfg.string()});
  EXPECT_EQ(lines(from_file.out).at(1).rfind("rational,q=3;n=1;M=2,", 0), 0u);

  std::ofstream(dir / "bad.cfg") << "colour=blue\n";
  EXPECT_EQ(run_cli({"count", "rational", "--config", (dir / "bad.cfg").string()}).code, kExitUsage);
  EXPECT_EQ(run_cli({"count", "rational", "--config", (dir / "missing.cfg").string()}).code, kExitUsage);
}

TEST(Cli, ConfigTextParsing) {
  RunConfig cfg;
  apply_config_text(cfg, "M-max=4\nallow-unstable=true\nmu=3/2\n\n");
  EXPECT_EQ(cfg.last_M(), 4u);
  EXPECT_TRUE(cfg.allow_unstable);
  EXPECT_EQ(cfg.mu, "3/2");
  EXPECT_THROW(apply_config_text(cfg, "q=abc"), UsageError);
  EXPECT_THROW(apply_config_text(cfg, "no equals sign"), UsageError);
}

TEST(Cli, FingerprintIgnoresPresentationFields) {
  RunConfig a, b;
  b.jobs = 4;
  b.format = "json";
  b.plot = "x";
  b.cache_dir = "/tmp/elsewhere";
  EXPECT_EQ(a.fingerprint("cycles"), b.fingerprint("cycles"));
  b.q = 5;
  EXPECT_NE(a.fingerprint("cycles"), b.fingerprint("cycles"));
  EXPECT_NE(a.fingerprint("cycles"), a.fingerprint("count rational"));
}

TEST(Cache, RoundTripAndIdenticalRerun) {
  const fs::path dir = fresh_dir("roundtrip");
  const std::vector<std::string> args{"count", "quadratic", "--q", "3", "--M", "1", "--cache-dir", dir.string()};
  const auto cold = run_cli(args);
  ASSERT_EQ(cold.code, 0) << cold.err;
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
  const auto warm = run_cli(args);
  EXPECT_EQ(warm.out, cold.out);
  EXPECT_TRUE(warm.err.empty());

  std::ostringstream sink;
  ResultCache cache(dir, sink);
  RunConfig cfg;
  cfg.q = 3;
  cfg.M = 1;
  const auto loaded = cache.load(cfg.fingerprint("count quadratic"));
  ASSERT_TRUE(loaded.has_value());
  std::ostringstream csv;
  write_csv(csv, *loaded);
  EXPECT_EQ(csv.str(), cold.out);
}

TEST(Cache, WarmCacheDoesNotRecompute) {
  const fs::path dir = fresh_dir("warm");
  RunConfig cfg;
  cfg.q = 2;
  cfg.n = 2;
  cfg.M = 1;
  // a planted entry that no producer could emit
  Table planted{CountRecord::header(), {}};
  planted.add(CountRecord{"rational", "planted", Rational(1), Rational(2), Rational(0)}.row());
  std::ostringstream sink;
  ResultCache(dir, sink).store(cfg.fingerprint("count rational"), planted);
  const auto r = run_cli({"count", "rational", "--q", "2", "--n", "2", "--M", "1", "--cache-dir", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).at(1), "rational,planted,1,2,false,0");
  // jobs and format are not part of the key
  const auto j = run_cli({"count", "rational", "--q", "2", "--n", "2", "--M", "1", "--jobs", "2", "--cache-dir",
                          dir.string()});
  EXPECT_EQ(j.out, r.out);
}

TEST(Cache, EnvironmentVariableIsDefault) {
  const fs::path dir = fresh_dir("env");
  ::setenv("ACL_CACHE_DIR", dir.c_str(), 1);
  const auto r = run_cli({"cycles", "--q", "3", "--m-max", "4"});
  ::unsetenv("ACL_CACHE_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}), 1);
}

TEST(Cache, TruncatedFileIsQuarantinedAndRecomputed) {
  const fs::path dir = fresh_dir("truncated");
  const std::vector<std::string> args{"cycles", "--q", "2", "--m-max", "5", "--cache-dir", dir.string()};
  const auto cold = run_cli(args);
  ASSERT_EQ(cold.code, 0);
  const fs::path entry = fs::directory_iterator(dir)->path();
  const std::string text = slurp(entry);
  std::ofstream(entry, std::ios::binary | std::ios::trunc) << text.substr(0, text.size() / 2);
  const auto again = run_cli(args);
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.out, cold.out);
  EXPECT_NE(again.err.find("corrupted"), std::string::npos);
  fs::path quarantined = entry;
  quarantined += ".corrupt";
  EXPECT_TRUE(fs::exists(quarantined));
  EXPECT_TRUE(fs::exists(entry));  // rewritten by the recomputation
}

TEST(Cache, TamperedPayloadFailsChecksum) {
  const fs::path dir = fresh_dir("tampered");
  std::ostringstream warn;
  ResultCache cache(dir, warn);
  Table t{{"a"}, {}};
  t.add({Cell::integer(7)});
  cache.store("fp", t);
  std::string text = slurp(cache.path_for("fp"));
  const auto pos = text.find("\"7\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 3, "\"8\"");
  std::ofstream(cache.path_for("fp"), std::ios::binary | std::ios::trunc) << text;
  EXPECT_FALSE(cache.load("fp").has_value());
  EXPECT_NE(warn.str().find("checksum"), std::string::npos);
}

TEST(Cache, SchemaChangeIsAMiss) {
  const fs::path dir = fresh_dir("schema");
  std::ostringstream warn;
  Table t{{"a"}, {}};
  t.add({Cell::str("x")});
  ResultCache(dir, warn, kCacheSchema).store("fp", t);
  ResultCache newer(dir, warn, kCacheSchema + 1);
  EXPECT_FALSE(newer.load("fp").has_value());
  EXPECT_TRUE(warn.str().empty());
  EXPECT_TRUE(ResultCache(dir, warn, kCacheSchema).load("fp").has_value());
  EXPECT_FALSE(ResultCache(dir, warn).load("other").has_value());
}

TEST(Output, JsonIsFlatArrayOfRecords) {
  const auto r = run_cli({"count", "rational", "--q", "2", "--n", "1", "--M", "1", "--M-max", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["observed"], 6);
  EXPECT_EQ(j[0]["predicted"], 6);
  EXPECT_EQ(j[0]["match"], true);
  EXPECT_EQ(j[1]["params"], "q=2;n=1;M=2");
  const auto p = nlohmann::json::parse(run_cli({"peyre", "hilb2", "--q", "3", "--format", "json"}).out);
  EXPECT_EQ(p[0]["exact_prefactor"], "10816/729");
  EXPECT_TRUE(p[0]["value"].is_string());
}

TEST(Output, ByteIdenticalReruns) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"count", "pairs", "--q", "3", "--M", "1"},
           {"cycles", "--q", "4", "--m-max", "8", "--format", "json"},
           {"peyre", "hilbm", "--q", "5", "--m", "3", "--deg-cut", "10"},
           {"verify", "lemmas"}}) {
    const auto a = run_cli(args), b = run_cli(args);
    EXPECT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Output, PlotWritesDataAndScript) {
  const fs::path dir = fresh_dir("plot");
  const std::string prefix = (dir / "quad").string();
  const auto r = run_cli({"count", "quadratic", "--q", "3", "--M", "1", "--plot", prefix});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string dat = slurp(prefix + ".dat"), gp = slurp(prefix + ".gp");
  EXPECT_NE(dat.find("1 0.389"), std::string::npos) << dat;
  EXPECT_NE(gp.find("'quad.dat'"), std::string::npos);
  EXPECT_NE(gp.find("set logscale x"), std::string::npos);

  const std::string cprefix = (dir / "counts").string();
  ASSERT_EQ(run_cli({"count", "rational", "--q", "2", "--n", "1", "--M", "1", "--M-max", "3", "--plot", cprefix}).code, 0);
  EXPECT_EQ(lines(slurp(cprefix + ".dat")).size(), 4u);
}

TEST(Output, PeyreRowsCarryExactPrefactor) {
  const auto pn = lines(run_cli({"peyre", "pn", "--q", "3", "--n", "2"}).out);
  EXPECT_EQ(pn.at(0), "value,residual_bound,exact_prefactor");
  EXPECT_EQ(pn.at(1).substr(pn[1].rfind(',') + 1), "104/27");
  const auto cm = lines(run_cli({"peyre", "cm", "--q", "3", "--m", "2"}).out);
  EXPECT_EQ(cm.at(1).substr(cm[1].rfind(',') + 1), "2/3");
}

TEST(Output, VerifyLemmasRows) {
  const auto ls = lines(run_cli({"verify", "lemmas"}).out);
  ASSERT_EQ(ls.size(), 1u + 4 + 3 + 1 + 3 + 8);
  EXPECT_EQ(ls[5], "technical2,k=1,10,99/100,true");
  EXPECT_EQ(ls.back(), "binomial,k=8,,0,true");
}

#ifdef ACL_CLI_BINARY
TEST(Binary, ExitStatusPropagates) {
  auto status = [](const std::string& args) {
    const int raw = std::system((std::string(ACL_CLI_BINARY) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("count rational --q 2 --n 2 --M 1"), 0);
  EXPECT_EQ(status("count rational --unknown-flag"), 2);
  EXPECT_EQ(status("count rational --q 97 --n 5 --M 9"), 3);
}
#endif
