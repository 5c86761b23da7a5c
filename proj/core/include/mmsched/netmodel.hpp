#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace mmsched {

/// Scalars of the uplink multi-cell model. Noise power is normalized to one,
/// so `snr_linear` is the transmit-side SNR rho/sigma^2 of a cell-center UE
/// after statistical power control.
struct NetworkConfig {
  int n_antennas = 100;          // N
  int n_users = 10;              // K
  int coherence_block = 1000;    // T
  int reuse_factor = 1;          // beta
  double snr_linear = 10.0;      // rho / sigma^2
  double pathloss_exponent = 3.5;
  double cell_radius = 1.0;      // center-to-corner, meters
  double pathloss_ref = 1.0;     // C in d(z) = C / |z - b|^kappa
  double min_ue_distance_frac = 0.14;

  int pilot_length() const { return reuse_factor * n_users; }
  double noise_over_snr() const { return 1.0 / snr_linear; }
  double prelog() const {
    return 1.0 - static_cast<double>(pilot_length()) / coherence_block;
  }

  bool operator==(const NetworkConfig&) const = default;
};

enum class InterferenceMode { Average, WorstCase };

enum class Scheme { Mrc, Pzfc, Asymptotic };

std::string_view to_string(InterferenceMode mode);
std::string_view to_string(Scheme scheme);
InterferenceMode parse_mode(std::string_view text);
Scheme parse_scheme(std::string_view text);

struct ValidationOptions {
  bool pzfc = false;      // additionally require N > B
  bool hex_grid = true;   // restrict beta to {1, 3, 4, 7}
};

/// Returns `config` unchanged when every invariant holds, throws mmsched::Error
/// otherwise (DomainError, PilotOverflow, InsufficientAntennas, UnsupportedReuse).
NetworkConfig validate(const NetworkConfig& config, ValidationOptions options = {});

double db_to_linear(double db);
double linear_to_db(double linear);

/// Reads field names as keys; `snr_db` is accepted in place of `snr_linear`.
/// Missing keys keep their defaults. Throws ParseError on malformed input.
NetworkConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NetworkConfig& config);

}  // namespace mmsched
