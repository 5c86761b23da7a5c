#include "mmsched/netmodel.hpp"

#include <cmath>

#include "mmsched/errors.hpp"
#include "mmsched/hexgeo.hpp"

namespace mmsched {

std::string_view to_string(InterferenceMode mode) {
  return mode == InterferenceMode::Average ? "avg" : "worst";
}

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Mrc: return "mrc";
    case Scheme::Pzfc: return "pzfc";
    case Scheme::Asymptotic: return "asymptotic";
  }
  return "?";
}

InterferenceMode parse_mode(std::string_view text) {
  if (text == "avg" || text == "average") return InterferenceMode::Average;
  if (text == "worst" || text == "worst-case") return InterferenceMode::WorstCase;
  throw Error(ErrorCode::ParseError, "unknown interference mode '" + std::string(text) + "'");
}

Scheme parse_scheme(std::string_view text) {
  if (text == "mrc") return Scheme::Mrc;
  if (text == "pzfc" || text == "p-zfc") return Scheme::Pzfc;
  if (text == "asymptotic") return Scheme::Asymptotic;
  throw Error(ErrorCode::ParseError, "unknown combining scheme '" + std::string(text) + "'");
}

NetworkConfig validate(const NetworkConfig& config, ValidationOptions options) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::DomainError, what);
  };
  require(config.n_antennas >= 1, "n_antennas must be positive");
  require(config.n_users >= 1, "n_users must be positive");
  require(config.coherence_block >= 1, "coherence_block must be positive");
  require(config.reuse_factor >= 1, "reuse_factor must be positive");
  require(std::isfinite(config.snr_linear) && config.snr_linear > 0.0,
          "snr_linear must be positive");
  require(std::isfinite(config.pathloss_exponent) && config.pathloss_exponent >= 2.0,
          "pathloss_exponent must be >= 2");
  require(std::isfinite(config.cell_radius) && config.cell_radius > 0.0,
          "cell_radius must be positive");
  require(std::isfinite(config.pathloss_ref) && config.pathloss_ref > 0.0,
          "pathloss_ref must be positive");
  require(config.min_ue_distance_frac >= 0.0 && config.min_ue_distance_frac < 1.0,
          "min_ue_distance_frac must lie in [0, 1)");

  if (options.hex_grid && !is_supported_reuse(config.reuse_factor)) {
    throw Error(ErrorCode::UnsupportedReuse,
                "reuse_factor " + std::to_string(config.reuse_factor) +
                    " is not in {1, 3, 4, 7}");
  }

  const long long pilot_len =
      static_cast<long long>(config.reuse_factor) * config.n_users;
  if (pilot_len > config.coherence_block) {
    throw Error(ErrorCode::PilotOverflow,
                "pilot length B = " + std::to_string(pilot_len) +
                    " exceeds coherence block T = " +
                    std::to_string(config.coherence_block));
  }
  if (options.pzfc && config.n_antennas <= pilot_len) {
    throw Error(ErrorCode::InsufficientAntennas,
                "P-ZFC needs N > B, got N = " + std::to_string(config.n_antennas) +
                    ", B = " + std::to_string(pilot_len));
  }
  return config;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

namespace {

template <typename T>
void read_if_present(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) {
      throw Error(ErrorCode::ParseError, std::string("'") + key + "' must be an integer");
    }
  } else {
    if (!v.is_number()) {
      throw Error(ErrorCode::ParseError, std::string("'") + key + "' must be a number");
    }
  }
  out = v.get<T>();
}

}  // namespace

NetworkConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "configuration must be a JSON object");
  if (j.contains("snr_db") && j.contains("snr_linear")) {
    throw Error(ErrorCode::ParseError, "give either 'snr_db' or 'snr_linear', not both");
  }
  NetworkConfig c;
  read_if_present(j, "n_antennas", c.n_antennas);
  read_if_present(j, "n_users", c.n_users);
  read_if_present(j, "coherence_block", c.coherence_block);
  read_if_present(j, "reuse_factor", c.reuse_factor);
  read_if_present(j, "snr_linear", c.snr_linear);
  if (j.contains("snr_db")) {
    double db = 0.0;
    read_if_present(j, "snr_db", db);
    c.snr_linear = db_to_linear(db);
  }
  read_if_present(j, "pathloss_exponent", c.pathloss_exponent);
  read_if_present(j, "cell_radius", c.cell_radius);
  read_if_present(j, "pathloss_ref", c.pathloss_ref);
  read_if_present(j, "min_ue_distance_frac", c.min_ue_distance_frac);
  return c;
}

nlohmann::json to_json(const NetworkConfig& c) {
  return nlohmann::json{
      {"n_antennas", c.n_antennas},
      {"n_users", c.n_users},
      {"coherence_block", c.coherence_block},
      {"reuse_factor", c.reuse_factor},
      {"snr_linear", c.snr_linear},
      {"pathloss_exponent", c.pathloss_exponent},
      {"cell_radius", c.cell_radius},
      {"pathloss_ref", c.pathloss_ref},
      {"min_ue_distance_frac", c.min_ue_distance_frac},
  };
}

}  // namespace mmsched
