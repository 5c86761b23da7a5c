#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmsched/hexgeo.hpp"
#include "mmsched/netmodel.hpp"
#include "mmsched/rng.hpp"

namespace mmsched {

/// mu^(gamma) = E{ (|z - b_l| / |z - b_j|)^(kappa*gamma) } for a UE z of the
/// interfering cell l seen from victim BS j, with Monte Carlo standard errors.
struct MomentEntry {
  double mu1 = 1.0;
  double mu2 = 1.0;
  double se1 = 0.0;
  double se2 = 0.0;

  bool operator==(const MomentEntry&) const = default;
};

struct MomentEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};

/// Moments keyed by the offset l - j of the interfering cell from the victim.
/// All victim cells share one table on the symmetric infinite grid.
struct MomentTable {
  static constexpr int kFormatVersion = 1;

  InterferenceMode mode = InterferenceMode::Average;
  double kappa = 3.5;
  double min_ue_distance_frac = 0.14;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
  int tiers = 0;
  std::map<CellIndex, MomentEntry> entries;

  bool covers(CellIndex offset) const { return entries.contains(offset); }
  const MomentEntry& at(CellIndex offset) const;
  std::vector<CellIndex> offsets() const;
  /// Copy holding only the listed offsets (all must be present).
  MomentTable restricted(std::span<const CellIndex> offsets) const;

  bool operator==(const MomentTable&) const = default;
};

struct TierPolicy {
  double rel_tol = 1e-3;  // stop once a tier adds less than this share of sum(mu1)
  int max_tiers = 12;
};

/// One moment by direct sampling. Average mode draws UE positions in the
/// interfering cell; WorstCase mode evaluates the deterministic cell-edge point.
/// Offset (0,0) yields exactly 1 in Average mode and DomainError in WorstCase.
MomentEstimate compute_moment(CellIndex offset, double kappa, int gamma, InterferenceMode mode,
                              std::int64_t n_samples, Rng& rng, double min_frac = 0.14);

/// Builds the table over tiers added until the last tier's share of sum(mu1)
/// drops below `policy.rel_tol`; ConvergenceError if `policy.max_tiers` is hit
/// first. Average mode reuses one set of n_samples UE draws for every offset.
/// Moments are evaluated in units of the cell radius, so r and C do not enter.
MomentTable build_table(double kappa, InterferenceMode mode, TierPolicy policy,
                        std::int64_t n_samples, std::uint64_t seed, double min_frac = 0.14);

/// Same estimator over an explicit offset set (e.g. a 7-cell cluster).
MomentTable build_table_for(std::span<const CellIndex> offsets, double kappa,
                            InterferenceMode mode, std::int64_t n_samples, std::uint64_t seed,
                            double min_frac = 0.14);

nlohmann::json to_json(const MomentTable& table);
MomentTable moment_table_from_json(const nlohmann::json& j);
void save_moment_table(const MomentTable& table, const std::filesystem::path& path);
MomentTable load_moment_table(const std::filesystem::path& path);

}  // namespace mmsched
