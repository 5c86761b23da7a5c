#include "mmsched_tools/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "mmsched/errors.hpp"
#include "mmsched/hexgeo.hpp"
#include "mmsched/optimizer.hpp"
#include "mmsched/oracle.hpp"
#include "mmsched/rng.hpp"

namespace mmsched::cli {

namespace {

constexpr std::string_view kManifestFormat = "mmsched.manifest";
constexpr int kManifestVersion = 1;

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<InterferenceMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<InterferenceMode> out;
  for (const auto& n : names) {
    const InterferenceMode m = parse_mode(n);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  return out;
}

std::vector<Scheme> parse_schemes(const std::vector<std::string>& names) {
  std::vector<Scheme> out;
  for (const auto& n : names) {
    const Scheme s = parse_scheme(n);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  return out;
}

std::string moments_file(InterferenceMode mode) {
  return "moments_" + std::string(to_string(mode)) + ".json";
}

// Collects whole files in memory and writes them in one pass at the end.
class Outputs {
 public:
  explicit Outputs(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(std::string name, std::string content) {
    files_.emplace_back(std::move(name), std::move(content));
  }

  void commit() {
    std::vector<std::filesystem::path> written;
    try {
      std::filesystem::create_directories(dir_);
      for (const auto& [name, content] : files_) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        written.push_back(path);
        out << content;
        out.flush();
        if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
      }
    } catch (...) {
      std::error_code ec;
      for (const auto& p : written) std::filesystem::remove(p, ec);
      throw;
    }
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

MomentTables build_moments(RunManifest& manifest, Outputs& outputs, std::ostream& log) {
  MomentTables tables;
  for (InterferenceMode mode : manifest.modes) {
    MomentTable t = obtain_moments(manifest, mode, log);
    outputs.add(moments_file(mode), dump(to_json(t)));
    tables.emplace(mode, std::move(t));
  }
  return tables;
}

bool table_matches(const MomentTable& t, const RunManifest& m, InterferenceMode mode) {
  if (t.mode != mode || t.kappa != m.config.pathloss_exponent) return false;
  if (mode == InterferenceMode::WorstCase) return true;  // deterministic, no sampling inputs
  return t.min_ue_distance_frac == m.config.min_ue_distance_frac && t.seed == m.seed &&
         t.n_samples == m.moments.n_samples;
}

// Adds validation.json; returns false if any fixture misses its tolerance.
bool run_validation(const RunManifest& manifest, Outputs& outputs, std::ostream& log) {
  nlohmann::json reports = nlohmann::json::array();
  bool all_pass = true;
  std::uint64_t index = 0;
  for (OracleFixture f : default_fixtures(manifest.config.snr_linear)) {
    if (manifest.oracle.n_realizations > 0) f.n_realizations = manifest.oracle.n_realizations;
    if (manifest.oracle.moment_samples > 0) f.moment_samples = manifest.oracle.moment_samples;
    f.config.pathloss_exponent = manifest.config.pathloss_exponent;
    f.config.min_ue_distance_frac = manifest.config.min_ue_distance_frac;
    const FixtureReport r = run_fixture(f, splitmix64(manifest.seed + 0x5eed + index++));
    log << "oracle " << f.name << ": measured " << r.measured.sinr << " +- "
        << r.measured.standard_error << ", analytic " << r.analytic_sinr << " -> "
        << (r.pass ? "pass" : "FAIL") << "\n";
    all_pass = all_pass && r.pass;
    reports.push_back(to_json(r));
  }
  outputs.add("validation.json",
              dump({{"seed", manifest.seed}, {"pass", all_pass}, {"fixtures", reports}}));
  return all_pass;
}

int finish(RunManifest& manifest, Outputs& outputs, std::ostream& log) {
  bool ok = true;
  if (manifest.validate) ok = run_validation(manifest, outputs, log);
  outputs.add("manifest.json", dump(to_json(manifest)));
  outputs.commit();
  log << "wrote outputs to " << manifest.out_dir.string() << "\n";
  return ok ? kExitOk : kExitValidationFailed;
}

}  // namespace

std::vector<int> SweepOptions::grid() const {
  if (!n_grid.empty()) return n_grid;
  return log_spaced_grid(n_min, n_max, n_points);
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j = to_json(m.config);
  j["format"] = kManifestFormat;
  j["version"] = kManifestVersion;
  j["config_path"] = m.config_path;
  j["out"] = m.out_dir.string();
  j["seed"] = m.seed;
  auto& modes = j["modes"] = nlohmann::json::array();
  for (auto mode : m.modes) modes.push_back(std::string(to_string(mode)));
  auto& schemes = j["schemes"] = nlohmann::json::array();
  for (auto s : m.schemes) schemes.push_back(std::string(to_string(s)));
  j["validate"] = m.validate;
  j["asymptotic"] = m.asymptotic;
  j["moment_cache"] = m.moment_cache.string();
  nlohmann::json cached = nlohmann::json::object();
  for (const auto& [mode, path] : m.cached_moments) {
    cached[std::string(to_string(mode))] = path.string();
  }
  j["cached_moments"] = cached;
  j["sweep"] = {{"n_min", m.sweep.n_min},       {"n_max", m.sweep.n_max},
                {"n_points", m.sweep.n_points}, {"n_grid", m.sweep.n_grid},
                {"k_max", m.sweep.k_max},       {"betas", m.sweep.betas}};
  j["moments"] = {{"n_samples", m.moments.n_samples},
                  {"rel_tol", m.moments.rel_tol},
                  {"max_tiers", m.moments.max_tiers}};
  j["oracle"] = {{"n_realizations", m.oracle.n_realizations},
                 {"moment_samples", m.oracle.moment_samples}};
  return j;
}

RunManifest manifest_from_json(const nlohmann::json& j, RunManifest base) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "configuration must be a JSON object");
  if (j.contains("format") && j.at("format") != kManifestFormat) {
    throw Error(ErrorCode::ParseError, "unknown configuration format");
  }
  RunManifest m = std::move(base);
  nlohmann::json net = to_json(m.config);
  for (const auto& [key, value] : j.items()) {
    if (net.contains(key) || key == "snr_db") net[key] = value;
  }
  if (j.contains("snr_db") && !j.contains("snr_linear")) net.erase("snr_linear");
  m.config = config_from_json(net);

  read_key(j, "seed", m.seed);
  read_key(j, "validate", m.validate);
  read_key(j, "asymptotic", m.asymptotic);
  if (j.contains("modes")) {
    std::vector<std::string> names;
    read_key(j, "modes", names);
    m.modes = parse_modes(names);
  }
  if (j.contains("schemes")) {
    std::vector<std::string> names;
    read_key(j, "schemes", names);
    m.schemes = parse_schemes(names);
  }
  if (j.contains("moment_cache")) {
    std::string dir;
    read_key(j, "moment_cache", dir);
    m.moment_cache = dir;
  }
  if (j.contains("cached_moments")) {
    std::map<std::string, std::string> cached;
    read_key(j, "cached_moments", cached);
    m.cached_moments.clear();
    for (const auto& [mode, path] : cached) m.cached_moments[parse_mode(mode)] = path;
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    read_key(s, "n_min", m.sweep.n_min);
    read_key(s, "n_max", m.sweep.n_max);
    read_key(s, "n_points", m.sweep.n_points);
    read_key(s, "n_grid", m.sweep.n_grid);
    read_key(s, "k_max", m.sweep.k_max);
    read_key(s, "betas", m.sweep.betas);
  }
  if (j.contains("moments")) {
    const auto& s = j.at("moments");
    read_key(s, "n_samples", m.moments.n_samples);
    read_key(s, "rel_tol", m.moments.rel_tol);
    read_key(s, "max_tiers", m.moments.max_tiers);
  }
  if (j.contains("oracle")) {
    const auto& s = j.at("oracle");
    read_key(s, "n_realizations", m.oracle.n_realizations);
    read_key(s, "moment_samples", m.oracle.moment_samples);
  }
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open configuration " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  RunManifest m = manifest_from_json(j);
  m.config_path = path.string();
  return m;
}

void validate_manifest(const RunManifest& m) {
  validate(m.config);
  if (m.modes.empty()) throw Error(ErrorCode::DomainError, "no interference mode selected");
  if (m.schemes.empty()) throw Error(ErrorCode::DomainError, "no scheme selected");
  if (m.sweep.betas.empty()) throw Error(ErrorCode::DomainError, "no reuse factor selected");
  for (int beta : m.sweep.betas) {
    if (!is_supported_reuse(beta)) {
      throw Error(ErrorCode::UnsupportedReuse,
                  "reuse factor " + std::to_string(beta) + " is not a hexagonal reuse pattern");
    }
  }
  if (m.sweep.n_grid.empty()) {
    if (m.sweep.n_min < 1 || m.sweep.n_max < m.sweep.n_min || m.sweep.n_points < 1) {
      throw Error(ErrorCode::DomainError, "antenna grid needs 1 <= n_min <= n_max, n_points >= 1");
    }
  } else if (*std::min_element(m.sweep.n_grid.begin(), m.sweep.n_grid.end()) < 1) {
    throw Error(ErrorCode::DomainError, "antenna counts must be positive");
  }
  if (m.sweep.k_max < 0) throw Error(ErrorCode::DomainError, "k_max must be >= 0");
  if (m.moments.n_samples < 1 || !(m.moments.rel_tol > 0.0) || m.moments.max_tiers < 1) {
    throw Error(ErrorCode::DomainError, "moment options out of range");
  }
  if (m.oracle.n_realizations < 0 || m.oracle.moment_samples < 0) {
    throw Error(ErrorCode::DomainError, "oracle options must be non-negative");
  }
}

MomentTable obtain_moments(RunManifest& m, InterferenceMode mode, std::ostream& log) {
  std::filesystem::path cached;
  if (!m.moment_cache.empty()) {
    cached = m.moment_cache / moments_file(mode);
    if (std::filesystem::exists(cached)) {
      MomentTable t = load_moment_table(cached);
      if (table_matches(t, m, mode)) {
        log << "moments[" << to_string(mode) << "]: loaded " << cached.string() << "\n";
        m.cached_moments[mode] = cached;
        return t;
      }
      log << "moments[" << to_string(mode) << "]: cached table does not match, recomputing\n";
    }
  }
  TierPolicy policy;
  policy.rel_tol = m.moments.rel_tol;
  policy.max_tiers = m.moments.max_tiers;
  MomentTable t = build_table(m.config.pathloss_exponent, mode, policy, m.moments.n_samples,
                              m.seed, m.config.min_ue_distance_frac);
  log << "moments[" << to_string(mode) << "]: " << t.entries.size() << " cells, " << t.tiers
      << " tiers\n";
  if (!cached.empty()) {
    std::filesystem::create_directories(m.moment_cache);
    save_moment_table(t, cached);
  }
  return t;
}

int run_sweep(RunManifest& m, std::ostream& log) {
  Outputs outputs(m.out_dir);
  const MomentTables tables = build_moments(m, outputs, log);

  SweepSpec spec;
  spec.n_grid = m.sweep.grid();
  spec.betas = m.sweep.betas;
  spec.k_max = m.sweep.k_max;
  spec.schemes = m.schemes;
  spec.modes = m.modes;
  const SweepResult result = sweep(m.config, spec, tables);
  log << "sweep: " << result.rows.size() << " points, " << result.skipped.size()
      << " infeasible\n";

  std::ostringstream rows, optima;
  write_sweep_csv(rows, result);
  write_optima_csv(optima, result);
  outputs.add("sweep.csv", rows.str());
  outputs.add("optima.csv", optima.str());
  return finish(m, outputs, log);
}

int run_asymptotic(RunManifest& m, std::ostream& log) {
  Outputs outputs(m.out_dir);
  const MomentTables tables = build_moments(m, outputs, log);
  std::ostringstream csv;
  write_asymptotic_csv(csv, asymptotic_table(m.config.coherence_block, m.sweep.betas, tables));
  outputs.add("asymptotic.csv", csv.str());
  return finish(m, outputs, log);
}

int main_entry(int argc, char** argv, std::ostream& log) {
  CLI::App app{"Pilot-reuse and scheduling sweeps for multi-cell massive MIMO"};
  std::string config_path, out_dir, moment_cache;
  std::uint64_t seed = 0;
  std::vector<std::string> modes, schemes;
  bool validate_flag = false, asymptotic_flag = false;

  auto* config_opt = app.add_option("--config", config_path, "JSON configuration or manifest.json")
                         ->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--out", out_dir, "Output directory (default: out)");
  auto* seed_opt = app.add_option("--seed", seed, "Global 64-bit seed");
  auto* modes_opt =
      app.add_option("--modes", modes, "Interference modes: avg,worst")->delimiter(',');
  auto* schemes_opt =
      app.add_option("--schemes", schemes, "Combining schemes: mrc,pzfc,asymptotic")
          ->delimiter(',');
  auto* validate_opt =
      app.add_flag("--validate", validate_flag, "Run the link-level oracle fixtures");
  auto* asym_opt =
      app.add_flag("--asymptotic", asymptotic_flag, "Write asymptotic.csv instead of the sweep");
  auto* cache_opt =
      app.add_option("--moment-cache", moment_cache, "Directory to load/store moment tables");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  RunManifest m;
  try {
    if (config_opt->count() > 0) m = load_manifest(config_path);
    if (out_opt->count() > 0) m.out_dir = out_dir;
    if (seed_opt->count() > 0) m.seed = seed;
    if (modes_opt->count() > 0) m.modes = parse_modes(modes);
    if (schemes_opt->count() > 0) m.schemes = parse_schemes(schemes);
    if (validate_opt->count() > 0) m.validate = true;
    if (asym_opt->count() > 0) m.asymptotic = true;
    if (cache_opt->count() > 0) m.moment_cache = moment_cache;
    m.cached_moments.clear();
    validate_manifest(m);
  } catch (const Error& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }

  try {
    return m.asymptotic ? run_asymptotic(m, log) : run_sweep(m, log);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
  }
  return kExitRuntimeError;
}

}  // namespace mmsched::cli
