#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "mmsched/hexgeo.hpp"
#include "mmsched/netmodel.hpp"
#include "mmsched/pilotplan.hpp"
#include "mmsched/rng.hpp"
#include "mmsched/se_analytic.hpp"

namespace mmsched {

/// Link-level scenario: absolute cells that host K UEs each, and the BS whose
/// uplink is measured. Noise power is 1, transmit-side SNR rho = snr_linear.
struct OracleSetup {
  NetworkConfig config;
  std::vector<CellIndex> cells;
  CellIndex victim{0, 0};
  InterferenceMode mode = InterferenceMode::Average;

  PilotPlan plan() const { return {config.n_users, config.reuse_factor}; }
};

/// Victim cell plus every cell within `tiers` steps of it.
OracleSetup make_cluster(const NetworkConfig& config, int tiers, InterferenceMode mode);

struct UserEquipment {
  CellIndex cell;
  int k = 1;        // 1-based user index within the cell
  int pilot = 1;    // 1-based pilot index
  Point2D position;
  double victim_gain = 0.0;  // d_j(z)
  double own_gain = 0.0;     // d_l(z)
  double power = 0.0;        // rho / d_l(z)

  double gain_ratio() const { return victim_gain / own_gain; }
};

struct Realization {
  std::vector<UserEquipment> ues;
  std::vector<Eigen::VectorXcd> channels;  // h_jlk toward the victim, variance d_j(z)
  Eigen::MatrixXcd pilots;                 // B x B, column i-1 is pilot i
  Eigen::MatrixXcd noise;                  // N x B pilot-phase noise
  Eigen::MatrixXcd received;               // N x B received pilot block

  Eigen::VectorXcd effective_channel(std::size_t ue) const {
    return std::sqrt(ues[ue].power) * channels[ue];
  }
};

/// Unit-modulus DFT columns; v_a^H v_b = B when a == b, else 0.
Eigen::MatrixXcd dft_pilot_book(int pilot_len);

/// UE positions per mode (WorstCase moves every UE outside the victim cell to
/// the nearest edge point of its own hexagon) with gains and powers.
std::vector<UserEquipment> sample_users(const OracleSetup& setup, Rng& rng);
/// Channels, pilot-phase noise, and received pilots for fixed UEs.
Realization draw_realization(const OracleSetup& setup, std::vector<UserEquipment> ues, Rng& rng);
Realization generate(const OracleSetup& setup, Rng& rng);

struct EstimationOutput {
  Eigen::MatrixXcd psi;                   // B x B
  Eigen::VectorXd pilot_denominators;     // B * (contamination on pilot b) + sigma^2/rho
  std::vector<Eigen::VectorXcd> h_hat;    // per UE, effective channel estimate
  std::vector<double> error_scale;        // C_jlk = error_scale * I_N
  Eigen::MatrixXcd h_hat_book;            // N x B, one estimate per pilot
};

/// LMMSE estimates of every effective channel at the victim BS, using the
/// scalar per-pilot form that the orthogonal book allows.
EstimationOutput estimate_channels(const OracleSetup& setup, const Realization& realization);
Eigen::VectorXcd lmmse_estimate(const OracleSetup& setup, const Realization& realization,
                                std::size_t ue);
/// Reference estimator from the full NB x NB covariance of vec(received).
/// Only for small N and B.
Eigen::VectorXcd lmmse_estimate_kronecker(const OracleSetup& setup, const Realization& realization,
                                          std::size_t ue);

/// MRC: column `pilot` of the estimate book. P-ZFC: book * (book^H book)^-1 e_pilot;
/// RankDeficient when the Gram condition number exceeds 1e12.
Eigen::VectorXcd combine(const EstimationOutput& estimates, Scheme scheme, int pilot);

struct MeasuredSinr {
  double sinr = 0.0;
  double standard_error = 0.0;
  SinrTerms terms;            // normalized by the measured coherent signal power
  double literal_mrc_sinr = 0.0;  // MRC without the unit-gain rescaling (MRC only)
  std::int64_t realizations = 0;
};

/// Monte Carlo estimate of |E{g^H h}|^2 / (sum E|g^H h_lm|^2 - |E{g^H h}|^2 + E||g||^2)
/// for the victim cell's UEs, over positions, channels and noise. The MRC
/// combiner is scaled by its pilot's LMMSE denominator so that its coherent
/// gain does not depend on UE positions; P-ZFC already has unit gain.
MeasuredSinr measure_sinr(const OracleSetup& setup, Scheme scheme, std::int64_t n_realizations,
                          std::uint64_t seed);

struct EstimationMseCheck {
  double empirical_mse = 0.0;
  double standard_error = 0.0;
  double predicted_mse = 0.0;  // tr(C_jlk)
  std::size_t ue = 0;
};

/// Freezes one set of UE positions, then averages ||h_eff - h_hat||^2 over
/// channel and noise draws.
EstimationMseCheck check_estimation_mse(const OracleSetup& setup, std::size_t ue,
                                        std::int64_t n_realizations, std::uint64_t seed);

struct OracleFixture {
  std::string name;
  NetworkConfig config;
  int tiers = 1;
  InterferenceMode mode = InterferenceMode::Average;
  Scheme scheme = Scheme::Mrc;
  std::int64_t n_realizations = 100000;
  std::int64_t moment_samples = 1000000;
  double rel_tolerance = 0.05;  // pass if |measured/analytic - 1| <= this
  double max_sigmas = 0.0;      // or, when > 0, if within this many standard errors
};

struct FixtureReport {
  OracleFixture fixture;
  MeasuredSinr measured;
  double analytic_sinr = 0.0;
  double asymptotic_sinr = 0.0;
  SinrTerms analytic_terms;
  double rel_gap = 0.0;  // measured / analytic - 1
  bool pass = false;
};

FixtureReport run_fixture(const OracleFixture& fixture, std::uint64_t seed);
std::vector<OracleFixture> default_fixtures(double snr_linear = 10.0);

nlohmann::json to_json(const SinrTerms& terms);
nlohmann::json to_json(const FixtureReport& report);

}  // namespace mmsched
