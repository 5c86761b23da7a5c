#pragma once

#include <map>

#include "mmsched/hexgeo.hpp"
#include "mmsched/moments.hpp"

namespace mmsched::test {

// Tables shared across cases; built once per process.
inline const MomentTable& default_table(InterferenceMode mode) {
  static std::map<InterferenceMode, MomentTable> cache;
  auto it = cache.find(mode);
  if (it == cache.end()) {
    it = cache.emplace(mode, build_table(3.5, mode, TierPolicy{}, 200000, 11)).first;
  }
  return it->second;
}

inline const MomentTable& cluster_table(InterferenceMode mode, int tiers = 1) {
  static std::map<std::pair<InterferenceMode, int>, MomentTable> cache;
  const auto key = std::make_pair(mode, tiers);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const auto cells = cells_within(tiers);
    it = cache.emplace(key, build_table_for(cells, 3.5, mode, 200000, 5)).first;
  }
  return it->second;
}

}  // namespace mmsched::test
