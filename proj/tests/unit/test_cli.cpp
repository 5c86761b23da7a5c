#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mmsched_tools/cli.hpp"

using namespace mmsched;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mmsched_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "mmsched");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream log;
  return cli::main_entry(static_cast<int>(argv.size()), argv.data(), log);
}

const char* kSmallConfig = R"({
  "snr_db": 10,
  "sweep": {"n_grid": [10, 100, 1000], "k_max": 40},
  "moments": {"n_samples": 20000}
})";

}  // namespace

TEST_CASE("sweep outputs are reproducible and regenerate from the manifest") {
  const fs::path dir = scratch("repro");
  write_file(dir / "config.json", kSmallConfig);
  const std::string cfg = (dir / "config.json").string();
  CHECK(run({"--config", cfg, "--out", (dir / "a").string(), "--seed", "99"}) == cli::kExitOk);
  CHECK(run({"--config", cfg, "--out", (dir / "b").string(), "--seed", "99"}) == cli::kExitOk);
  CHECK(run({"--config", (dir / "a" / "manifest.json").string(), "--out", (dir / "c").string()}) ==
        cli::kExitOk);
  for (const char* f : {"sweep.csv", "optima.csv", "moments_avg.json", "moments_worst.json"}) {
    CHECK(fs::exists(dir / "a" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    CHECK(slurp(dir / "a" / f) == slurp(dir / "c" / f));
  }
  const auto manifest = cli::load_manifest(dir / "a" / "manifest.json");
  CHECK(manifest.seed == 99);
  CHECK(manifest.sweep.k_max == 40);
  CHECK(manifest.config.snr_linear == doctest::Approx(10.0));

  CHECK(run({"--config", cfg, "--out", (dir / "d").string(), "--seed", "100"}) == cli::kExitOk);
  CHECK(slurp(dir / "a" / "moments_avg.json") != slurp(dir / "d" / "moments_avg.json"));
  fs::remove_all(dir);
}

TEST_CASE("mode and scheme selection") {
  const fs::path dir = scratch("select");
  write_file(dir / "config.json", kSmallConfig);
  CHECK(run({"--config", (dir / "config.json").string(), "--out", (dir / "o").string(), "--modes",
             "worst", "--schemes", "pzfc"}) == cli::kExitOk);
  CHECK_FALSE(fs::exists(dir / "o" / "moments_avg.json"));
  const std::string optima = slurp(dir / "o" / "optima.csv");
  CHECK(optima.find(",pzfc,worst,") != std::string::npos);
  CHECK(optima.find(",mrc,") == std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("asymptotic table") {
  const fs::path dir = scratch("asym");
  write_file(dir / "config.json", kSmallConfig);
  write_file(dir / "double.json", R"({"coherence_block": 2000, "moments": {"n_samples": 20000}})");
  CHECK(run({"--config", (dir / "config.json").string(), "--out", (dir / "t1").string(),
             "--asymptotic"}) == cli::kExitOk);
  CHECK(run({"--config", (dir / "double.json").string(), "--out", (dir / "t2").string(),
             "--asymptotic"}) == cli::kExitOk);
  CHECK_FALSE(fs::exists(dir / "t1" / "sweep.csv"));
  const std::string a = slurp(dir / "t1" / "asymptotic.csv");
  CHECK(a.find("avg,1,500,250,") != std::string::npos);
  CHECK(a.find("avg,3,167,83.3333333333,") != std::string::npos);

  auto se_column = [](const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) out.push_back(std::stod(line.substr(line.rfind(',') + 1)));
    return out;
  };
  const auto one = se_column(a), two = se_column(slurp(dir / "t2" / "asymptotic.csv"));
  REQUIRE(one.size() == 8);
  REQUIRE(two.size() == 8);
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(two[i] == doctest::Approx(2 * one[i]).epsilon(1e-11));
  }
  fs::remove_all(dir);
}

TEST_CASE("moment cache") {
  const fs::path dir = scratch("cache");
  write_file(dir / "config.json", kSmallConfig);
  const std::string cfg = (dir / "config.json").string();
  const std::string cache = (dir / "cache").string();
  CHECK(run({"--config", cfg, "--out", (dir / "a").string(), "--moment-cache", cache}) == 0);
  CHECK(fs::exists(dir / "cache" / "moments_avg.json"));
  CHECK(run({"--config", cfg, "--out", (dir / "b").string(), "--moment-cache", cache}) == 0);
  CHECK(slurp(dir / "a" / "sweep.csv") == slurp(dir / "b" / "sweep.csv"));
  const auto m = cli::load_manifest(dir / "b" / "manifest.json");
  CHECK(m.cached_moments.size() == 2);
  fs::remove_all(dir);
}

TEST_CASE("configuration errors exit with code 2") {
  const fs::path dir = scratch("errors");
  write_file(dir / "broken.json", "{ not json");
  write_file(dir / "overflow.json", R"({"n_users": 400, "reuse_factor": 3})");
  write_file(dir / "beta.json", R"({"sweep": {"betas": [1, 2]}})");
  write_file(dir / "both.json", R"({"snr_db": 10, "snr_linear": 10})");
  for (const char* f : {"broken.json", "overflow.json", "beta.json", "both.json"}) {
    CHECK(run({"--config", (dir / f).string(), "--out", (dir / "o").string()}) ==
          cli::kExitConfigError);
  }
  CHECK(run({"--config", (dir / "missing.json").string()}) == cli::kExitConfigError);
  CHECK(run({"--modes", "sometimes", "--out", (dir / "o").string()}) == cli::kExitConfigError);
  CHECK(run({"--seed", "-3"}) == cli::kExitConfigError);
  CHECK_FALSE(fs::exists(dir / "o"));
  fs::remove_all(dir);
}

TEST_CASE("partial outputs are removed on failure") {
  const fs::path dir = scratch("partial");
  write_file(dir / "config.json", kSmallConfig);
  fs::create_directories(dir / "o" / "sweep.csv");  // blocks the sweep file
  CHECK(run({"--config", (dir / "config.json").string(), "--out", (dir / "o").string()}) ==
        cli::kExitRuntimeError);
  CHECK_FALSE(fs::exists(dir / "o" / "moments_avg.json"));
  CHECK_FALSE(fs::exists(dir / "o" / "manifest.json"));
  fs::remove_all(dir);
}

TEST_CASE("validation report") {
  const fs::path dir = scratch("validate");
  write_file(dir / "config.json", R"({
    "sweep": {"n_grid": [100], "k_max": 5},
    "moments": {"n_samples": 20000},
    "oracle": {"n_realizations": 400, "moment_samples": 20000}
  })");
  const int code = run({"--config", (dir / "config.json").string(), "--out", (dir / "o").string(),
                        "--validate", "--modes", "avg"});
  REQUIRE(fs::exists(dir / "o" / "validation.json"));
  const auto report = nlohmann::json::parse(slurp(dir / "o" / "validation.json"));
  CHECK(report["fixtures"].size() == 6);
  CHECK(code == (report["pass"].get<bool>() ? cli::kExitOk : cli::kExitValidationFailed));
  for (const auto& f : report["fixtures"]) {
    CHECK(f.contains("terms_measured"));
    CHECK(f.contains("terms_analytic"));
    CHECK(f["n_realizations"] == 400);
  }
  fs::remove_all(dir);
}
