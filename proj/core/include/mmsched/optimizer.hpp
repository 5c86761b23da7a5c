#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "mmsched/errors.hpp"
#include "mmsched/moments.hpp"
#include "mmsched/netmodel.hpp"

namespace mmsched {

struct SweepRow {
  int n_antennas = 0;
  int n_users = 0;
  int reuse_factor = 0;
  Scheme scheme = Scheme::Mrc;
  InterferenceMode mode = InterferenceMode::Average;
  double sinr = 0.0;
  double se = 0.0;

  bool operator==(const SweepRow&) const = default;
};

struct SkippedPoint {
  int n_antennas = 0;
  int n_users = 0;
  int reuse_factor = 0;
  Scheme scheme = Scheme::Mrc;
  InterferenceMode mode = InterferenceMode::Average;
  ErrorCode reason = ErrorCode::InsufficientAntennas;

  bool operator==(const SkippedPoint&) const = default;
};

struct Optimum {
  int n_antennas = 0;
  Scheme scheme = Scheme::Mrc;
  InterferenceMode mode = InterferenceMode::Average;
  int k_star = 0;
  int beta_star = 0;
  double se_star = 0.0;
  double sinr = 0.0;
  std::size_t row = 0;  // index into SweepResult::rows

  bool operator==(const Optimum&) const = default;
};

struct SweepSpec {
  std::vector<int> n_grid;
  std::vector<int> betas{1, 3, 4, 7};
  int k_max = 0;  // 0: no cap beyond floor(T / beta)
  std::vector<Scheme> schemes{Scheme::Mrc, Scheme::Pzfc};
  std::vector<InterferenceMode> modes{InterferenceMode::Average, InterferenceMode::WorstCase};
};

struct SweepResult {
  std::vector<SweepRow> rows;        // ordered by mode, scheme, N, beta, K
  std::vector<Optimum> optima;       // one per (mode, scheme, N), same order
  std::vector<SkippedPoint> skipped;

  bool operator==(const SweepResult&) const = default;
};

using MomentTables = std::map<InterferenceMode, MomentTable>;

/// Exhaustive closed-form evaluation over the (N, K, beta) grid for every
/// requested scheme and mode. Infeasible points (P-ZFC with N <= B) are
/// recorded in `skipped`; EmptyFeasibleSet if some (mode, scheme, N) has no
/// feasible point at all. Scheme::Asymptotic ignores N.
SweepResult sweep(const NetworkConfig& config_template, const SweepSpec& spec,
                  const MomentTables& moments);

/// Argmax row for one slice; ties go to smaller K, then smaller beta.
Optimum optimal_schedule(const SweepResult& result, int n_antennas, Scheme scheme,
                         InterferenceMode mode);

/// Roughly log-spaced integers in [lo, hi], deduplicated, always including both ends.
std::vector<int> log_spaced_grid(int lo, int hi, int points);

struct AsymptoticRow {
  InterferenceMode mode = InterferenceMode::Average;
  int reuse_factor = 0;
  std::vector<int> k_star;
  double prelog = 0.0;  // T / (4 beta)
  double sinr = 0.0;
  double se = 0.0;      // prelog * log2(1 + sinr)
};

std::vector<AsymptoticRow> asymptotic_table(int coherence_block, const std::vector<int>& betas,
                                            const MomentTables& moments);

/// Fixed-precision text form shared by every CSV writer.
std::string format_number(double value);

void write_sweep_csv(std::ostream& out, const SweepResult& result);
void write_optima_csv(std::ostream& out, const SweepResult& result);
void write_asymptotic_csv(std::ostream& out, const std::vector<AsymptoticRow>& rows);

}  // namespace mmsched
