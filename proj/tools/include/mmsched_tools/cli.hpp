#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmsched/moments.hpp"
#include "mmsched/netmodel.hpp"

namespace mmsched::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

struct SweepOptions {
  int n_min = 10;
  int n_max = 10000;
  int n_points = 30;
  std::vector<int> n_grid;  // explicit grid; overrides the log-spaced one when set
  int k_max = 0;
  std::vector<int> betas{1, 3, 4, 7};

  std::vector<int> grid() const;
};

struct MomentOptions {
  std::int64_t n_samples = 500000;
  double rel_tol = 1e-3;
  int max_tiers = 12;
};

struct OracleOptions {
  std::int64_t n_realizations = 0;  // 0 keeps each fixture's own count
  std::int64_t moment_samples = 0;
};

struct RunManifest {
  std::string config_path;
  NetworkConfig config;
  std::vector<InterferenceMode> modes{InterferenceMode::Average, InterferenceMode::WorstCase};
  std::vector<Scheme> schemes{Scheme::Mrc, Scheme::Pzfc};
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;
  std::filesystem::path moment_cache;  // empty: no cache directory
  std::map<InterferenceMode, std::filesystem::path> cached_moments;  // tables actually loaded
  SweepOptions sweep;
  MomentOptions moments;
  OracleOptions oracle;
  bool validate = false;
  bool asymptotic = false;
};

nlohmann::json to_json(const RunManifest& manifest);
/// Reads a configuration or a previously written manifest.json; keys absent
/// from `j` keep the values in `base`. Throws Error(ParseError) on bad input.
RunManifest manifest_from_json(const nlohmann::json& j, RunManifest base = {});
RunManifest load_manifest(const std::filesystem::path& path);
/// ConfigError-class checks on the whole manifest (network, grids, options).
void validate_manifest(const RunManifest& manifest);

/// Moment table for one mode, taken from the cache directory when a matching
/// table is there, otherwise computed (and stored in the cache).
MomentTable obtain_moments(RunManifest& manifest, InterferenceMode mode, std::ostream& log);

/// Files are only created at the end of a successful run; any error removes
/// what was already written. Both return an exit code.
int run_sweep(RunManifest& manifest, std::ostream& log);
int run_asymptotic(RunManifest& manifest, std::ostream& log);

/// Parses argv, loads and checks the manifest, then dispatches.
int main_entry(int argc, char** argv, std::ostream& log);

}  // namespace mmsched::cli
