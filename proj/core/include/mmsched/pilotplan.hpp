#pragma once

#include <span>
#include <vector>

#include "mmsched/hexgeo.hpp"

namespace mmsched {

/// Fractional pilot reuse: a book of B = beta*K orthogonal pilots split into
/// beta disjoint blocks of K; every cell of reuse group g uses block g, and
/// UE k of the cell takes slot k of that block. Pilot indices are 1-based.
class PilotPlan {
 public:
  PilotPlan(int n_users, int reuse_factor);

  int n_users() const { return n_users_; }
  int reuse_factor() const { return reuse_factor_; }
  int pilot_len() const { return n_users_ * reuse_factor_; }

  /// group*K + k for group in [0, beta), k in [1, K]; IndexError otherwise.
  int assign(int group, int k) const;
  /// Pilot index of UE k in `cell`, using the hexagonal reuse coloring.
  int pilot_of(CellIndex cell, int k) const;

  bool operator==(const PilotPlan&) const = default;

 private:
  int n_users_;
  int reuse_factor_;
};

/// v_i^H v_j for the orthogonal book: B when i == j, else 0.
double inner_product(int i1, int i2, int pilot_len);

/// Cells of `tier_set` sharing cell j's reuse group (j itself dropped when
/// `exclude_self`).
std::vector<CellIndex> copilot_cells(CellIndex j, int beta, std::span<const CellIndex> tier_set,
                                     bool exclude_self = true);

}  // namespace mmsched
