#include <doctest.h>

#include <map>
#include <set>

#include "mmsched/errors.hpp"
#include "mmsched/hexgeo.hpp"
#include "mmsched/pilotplan.hpp"

using namespace mmsched;

TEST_CASE("pilot assignment") {
  const PilotPlan p(10, 3);
  CHECK(p.pilot_len() == 30);
  CHECK(p.assign(0, 1) == 1);
  CHECK(p.assign(2, 10) == 30);
  CHECK_THROWS_AS(p.assign(3, 1), Error);
  CHECK_THROWS_AS(p.assign(0, 11), Error);
  CHECK_THROWS_AS(p.assign(0, 0), Error);

  const PilotPlan one(7, 1);
  for (CellIndex c : cells_within(2)) {
    for (int k = 1; k <= 7; ++k) CHECK(one.pilot_of(c, k) == k);
  }
}

TEST_CASE("pilot inner products") {
  CHECK(inner_product(5, 5, 30) == 30);
  CHECK(inner_product(5, 6, 30) == 0);
  for (int i1 = 1; i1 <= 30; ++i1) {
    double s = 0;
    for (int i2 = 1; i2 <= 30; ++i2) s += inner_product(i1, i2, 30);
    CHECK(s == 30);
  }
}

TEST_CASE("intra-cell orthogonality and group structure") {
  for (int beta : {1, 3, 4, 7}) {
    const PilotPlan p(6, beta);
    std::map<int, std::set<int>> by_group;
    for (CellIndex c : cells_within(3)) {
      std::set<int> used;
      for (int k = 1; k <= 6; ++k) {
        const int pilot = p.pilot_of(c, k);
        CHECK(pilot >= 1);
        CHECK(pilot <= p.pilot_len());
        used.insert(pilot);
      }
      CHECK(used.size() == 6);
      auto [it, fresh] = by_group.emplace(reuse_group(c, beta), used);
      if (!fresh) CHECK(it->second == used);
    }
    CHECK(by_group.size() == static_cast<std::size_t>(beta));
    for (auto a = by_group.begin(); a != by_group.end(); ++a) {
      for (auto b = std::next(a); b != by_group.end(); ++b) {
        for (int x : a->second) CHECK_FALSE(b->second.contains(x));
      }
    }
  }
}

TEST_CASE("copilot cells") {
  const auto tiers = cells_within(3);
  const auto all = copilot_cells({0, 0}, 1, tiers);
  CHECK(all.size() == tiers.size() - 1);
  CHECK(copilot_cells({0, 0}, 1, tiers, false).size() == tiers.size());

  const auto three = copilot_cells({0, 0}, 3, tiers);
  double nearest = 1e9;
  for (CellIndex c : three) nearest = std::min(nearest, norm(bs_position(c, 1.0)));
  CHECK(nearest == doctest::Approx(3.0));

  for (CellIndex c : copilot_cells({0, 0}, 7, tiers)) CHECK(hex_distance(c) > 1);
  // A non-origin victim sees the same pattern shifted.
  const CellIndex j{1, 1};
  for (CellIndex c : copilot_cells(j, 3, tiers)) CHECK(reuse_group(c - j, 3) == 0);
}
