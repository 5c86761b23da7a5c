#pragma once

#include <limits>
#include <span>
#include <vector>

#include "mmsched/hexgeo.hpp"
#include "mmsched/moments.hpp"
#include "mmsched/netmodel.hpp"
#include "mmsched/pilotplan.hpp"

namespace mmsched {

/// Returned whenever an SINR denominator vanishes (no pilot contamination in
/// the N -> infinity limit).
inline constexpr double kInfiniteSinr = std::numeric_limits<double>::infinity();

/// Everything needed to evaluate the closed-form SINR of UE 1 in the victim
/// cell at the origin. `tier_set` holds cell offsets relative to the victim
/// and must include (0,0); the moment table must cover all of them.
struct SinrInputs {
  NetworkConfig config;
  const MomentTable* moments = nullptr;
  PilotPlan plan{1, 1};
  std::vector<CellIndex> tier_set;
  Scheme scheme = Scheme::Mrc;
};

/// Builds inputs whose plan and tier set follow `config` and the full table.
SinrInputs make_inputs(const NetworkConfig& config, const MomentTable& moments, Scheme scheme);

struct SeResult {
  double sinr = 0.0;
  double se_per_cell = 0.0;  // bit/s/Hz/cell
  double prelog = 0.0;       // 1 - B/T
};

/// Interference terms normalized by the coherent signal power, so that
/// sinr() == 1 / (estimation_error + intra_cell + inter_cell + noise).
struct SinrTerms {
  double estimation_error = 0.0;  // own UE beyond its coherent part
  double intra_cell = 0.0;
  double inter_cell = 0.0;
  double noise = 0.0;

  double total() const { return estimation_error + intra_cell + inter_cell + noise; }
  double sinr() const { return total() > 0.0 ? 1.0 / total() : kInfiniteSinr; }
};

/// Aggregates of a moment table for one reuse factor, with the pilot-book sums
/// pre-collapsed onto the copilot set of the victim cell. Cheap to query; the
/// optimizer builds one per (mode, beta).
class InterferenceProfile {
 public:
  InterferenceProfile(const MomentTable& moments, std::span<const CellIndex> tier_set, int beta);

  int reuse_factor() const { return beta_; }
  double sum_mu1() const { return sum_mu1_; }
  /// Sum of mu1 over copilot cells, victim included.
  double copilot_mu1() const { return copilot_mu1_; }
  /// Sum of mu2 over copilot cells, victim excluded.
  double copilot_mu2_excess() const { return copilot_mu2_excess_; }
  /// Sum of mu2 - mu1^2 over copilot cells.
  double copilot_variance() const { return copilot_variance_; }
  /// Sum over cells of mu1 * (1 - B mu1 / (B * group_mu1 + noise)).
  double zf_residual(int pilot_len, double noise_over_snr) const;

 private:
  struct Cell {
    double mu1;
    int group;
  };
  int beta_;
  double sum_mu1_ = 0.0;
  double copilot_mu1_ = 0.0;
  double copilot_mu2_excess_ = 0.0;
  double copilot_variance_ = 0.0;
  std::vector<double> group_mu1_;
  std::vector<Cell> cells_;
};

// Collapsed evaluations (fast path used by the optimizer).
double sinr_mrc(const InterferenceProfile& profile, int n_antennas, int n_users,
                double noise_over_snr);
double sinr_pzfc(const InterferenceProfile& profile, int n_antennas, int n_users,
                 double noise_over_snr);
double asymptotic_sinr(const InterferenceProfile& profile);
SinrTerms sinr_terms_mrc(const InterferenceProfile& profile, int n_antennas, int n_users,
                         double noise_over_snr);
SinrTerms sinr_terms_pzfc(const InterferenceProfile& profile, int n_antennas, int n_users,
                          double noise_over_snr);

// Input-validated entry points.
double sinr_mrc(const SinrInputs& inputs);
double sinr_pzfc(const SinrInputs& inputs);
double sinr(const SinrInputs& inputs);
SinrTerms sinr_terms(const SinrInputs& inputs);
SeResult se_per_cell(const SinrInputs& inputs);
double asymptotic_sinr(const MomentTable& moments, const PilotPlan& plan,
                       std::span<const CellIndex> tier_set);

/// Literal pilot-book sums over every UE pair, consuming inner products from
/// the pilot plan; O((cells*K)^2) for P-ZFC. Reference path for tests.
double sinr_mrc_generic(const SinrInputs& inputs);
double sinr_pzfc_generic(const SinrInputs& inputs);
double asymptotic_sinr_generic(const SinrInputs& inputs);

/// K(1 - B/T) log2(1 + sinr); zero when B = T.
double se_from_sinr(int n_users, int pilot_len, int coherence_block, double sinr);

/// Integer maximizers of K(1 - K beta / T) among floor/ceil of T/(2 beta).
std::vector<int> kstar_asymptotic(int coherence_block, int beta);

/// (T / (4 beta)) log2(1 + sinr): the large-N SE at K = T/(2 beta).
double optimized_asymptotic_se(int coherence_block, int beta, double sinr);

}  // namespace mmsched
