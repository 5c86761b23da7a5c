#include "mmsched/pilotplan.hpp"

#include <string>

#include "mmsched/errors.hpp"

namespace mmsched {

PilotPlan::PilotPlan(int n_users, int reuse_factor)
    : n_users_(n_users), reuse_factor_(reuse_factor) {
  if (n_users < 1) throw Error(ErrorCode::DomainError, "pilot plan needs K >= 1");
  if (reuse_factor < 1) throw Error(ErrorCode::DomainError, "pilot plan needs beta >= 1");
}

int PilotPlan::assign(int group, int k) const {
  if (group < 0 || group >= reuse_factor_ || k < 1 || k > n_users_) {
    throw Error(ErrorCode::IndexError, "pilot slot (group " + std::to_string(group) + ", user " +
                                           std::to_string(k) + ") out of range");
  }
  return group * n_users_ + k;
}

int PilotPlan::pilot_of(CellIndex cell, int k) const {
  return assign(reuse_group(cell, reuse_factor_), k);
}

double inner_product(int i1, int i2, int pilot_len) {
  return i1 == i2 ? static_cast<double>(pilot_len) : 0.0;
}

std::vector<CellIndex> copilot_cells(CellIndex j, int beta, std::span<const CellIndex> tier_set,
                                     bool exclude_self) {
  std::vector<CellIndex> out;
  for (CellIndex c : tier_set) {
    if (exclude_self && c == j) continue;
    if (reuse_group(c - j, beta) == 0) out.push_back(c);
  }
  return out;
}

}  // namespace mmsched
