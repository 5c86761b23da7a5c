#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "mmsched/errors.hpp"
#include "mmsched/hexgeo.hpp"
#include "mmsched/rng.hpp"

using namespace mmsched;

namespace {
const double kSqrt3 = std::sqrt(3.0);

double dist_to_boundary(CellIndex c, Point2D p, double r) {
  return distance(project_to_boundary(c, p, r), p);
}
}  // namespace

TEST_CASE("BS positions") {
  CHECK(bs_position({0, 0}, 1.0) == Point2D{0.0, 0.0});
  const Point2D p = bs_position({1, 0}, 1.0);
  CHECK(p.x == doctest::Approx(1.5));
  CHECK(p.y == doctest::Approx(kSqrt3 / 2));
  const Point2D q = bs_position({1, 1}, 2.0);
  CHECK(q.x == doctest::Approx(3.0));
  CHECK(q.y == doctest::Approx(3 * kSqrt3));

  std::set<std::pair<double, double>> seen;
  for (CellIndex c : cells_within(6)) {
    const Point2D b = bs_position(c, 1.0);
    CHECK(seen.emplace(b.x, b.y).second);
  }
  // Neighbors sit sqrt(3) r apart.
  for (CellIndex c : ring(1)) CHECK(norm(bs_position(c, 1.0)) == doctest::Approx(kSqrt3));
}

TEST_CASE("rings and tiers") {
  CHECK(ring(0).size() == 1);
  for (int t = 1; t <= 8; ++t) {
    const auto cells = ring(t);
    CHECK(cells.size() == static_cast<std::size_t>(6 * t));
    for (CellIndex c : cells) CHECK(hex_distance(c) == t);
  }
  CHECK(cells_within(3).size() == 37);
  CHECK(cells_within(3).front() == CellIndex{0, 0});
}

TEST_CASE("hexagon membership") {
  CHECK(contains({0, 0}, {0.0, 0.0}, 1.0));
  for (int k = 0; k < 6; ++k) {
    const double a = k * std::numbers::pi / 3;
    CHECK_FALSE(contains({0, 0}, {1.01 * std::cos(a), 1.01 * std::sin(a)}, 1.0));
    CHECK(contains({0, 0}, {0.99 * std::cos(a), 0.99 * std::sin(a)}, 1.0));
  }
  const Point2D mid = bs_position({1, 0}, 1.0) * 0.5;
  CHECK(contains({0, 0}, mid, 1.0));
  CHECK(contains({1, 0}, mid, 1.0));
  const CellIndex owner = owner_cell(mid, 1.0);
  CHECK((owner == CellIndex{0, 0} || owner == CellIndex{1, 0}));
  CHECK(owner_cell(mid, 1.0) == owner);

  Rng rng = make_stream(3, 0);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int i = 0; i < 2000; ++i) {
    const Point2D p{u(rng), u(rng)};
    const CellIndex c = owner_cell(p, 1.0);
    CHECK(contains(c, p, 1.0));
  }
}

TEST_CASE("reuse coloring") {
  for (CellIndex c : cells_within(4)) CHECK(reuse_group(c, 1) == 0);
  CHECK(reuse_group({0, 0}, 3) == reuse_group({1, 1}, 3));
  CHECK(reuse_group({0, 0}, 3) != reuse_group({1, 0}, 3));
  for (int beta : {3, 4, 7}) {
    for (CellIndex c : ring(1)) CHECK(reuse_group(c, beta) != 0);
  }
  for (int beta : {1, 3, 4, 7}) {
    CHECK(reuse_group({0, 0}, beta) == 0);
    // Coloring is a lattice partition: translation by any co-group vector preserves groups.
    std::set<int> groups;
    for (CellIndex c : cells_within(5)) {
      const int g = reuse_group(c, beta);
      CHECK(g >= 0);
      CHECK(g < beta);
      groups.insert(g);
      for (CellIndex d : cells_within(3)) {
        if (reuse_group(d, beta) == 0) CHECK(reuse_group(c + d, beta) == g);
      }
    }
    CHECK(groups.size() == static_cast<std::size_t>(beta));
  }
  CHECK_THROWS_AS(shift_pair(2), Error);
  CHECK_FALSE(is_supported_reuse(5));
}

TEST_CASE("nearest copilot cell distance") {
  for (int beta : {1, 3, 4, 7}) {
    double nearest = 1e9;
    for (CellIndex c : cells_within(4)) {
      if (c == CellIndex{0, 0} || reuse_group(c, beta) != 0) continue;
      nearest = std::min(nearest, norm(bs_position(c, 1.0)));
    }
    CHECK(nearest == doctest::Approx(std::sqrt(3.0 * beta)));
  }
}

TEST_CASE("uniform UE sampling") {
  Rng rng = make_stream(17, 0);
  const CellIndex cell{2, -1};
  const Point2D b = bs_position(cell, 2.0);
  const int n = 1000000;
  double sx = 0, sy = 0, sxx = 0, syy = 0;
  int close = 0;
  bool inside = true;
  for (int i = 0; i < n; ++i) {
    const Point2D p = sample_ue_position(cell, 2.0, 0.14, rng);
    inside = inside && contains(cell, p, 2.0);
    if (distance(p, b) < 0.14 * 2.0) ++close;
    const Point2D d = p - b;
    sx += d.x;
    sy += d.y;
    sxx += d.x * d.x;
    syy += d.y * d.y;
  }
  CHECK(inside);
  CHECK(close == 0);
  const double mx = sx / n, my = sy / n;
  const double sex = std::sqrt((sxx / n - mx * mx) / n), sey = std::sqrt((syy / n - my * my) / n);
  CHECK(std::abs(mx) < 3 * sex);
  CHECK(std::abs(my) < 3 * sey);
}

TEST_CASE("worst-case positions") {
  const Point2D w = worst_case_position({1, 0}, {0, 0}, 1.0);
  const Point2D mid = bs_position({1, 0}, 1.0) * 0.5;
  CHECK(w.x == doctest::Approx(mid.x));
  CHECK(w.y == doctest::Approx(mid.y));
  CHECK(norm(w) == doctest::Approx(kSqrt3 / 2));
  CHECK(distance(w, bs_position({1, 0}, 1.0)) == doctest::Approx(kSqrt3 / 2));

  for (CellIndex c : cells_within(5)) {
    if (c == CellIndex{0, 0}) continue;
    for (double r : {1.0, 2.5}) {
      const Point2D p = worst_case_position(c, {0, 0}, r);
      CHECK(contains(c, p, r));
      CHECK(dist_to_boundary(c, p, r) < 1e-9);
      CHECK(norm(p) < norm(bs_position(c, r)));
      // No boundary point of the cell is closer to the victim.
      for (int k = 0; k < 6; ++k) {
        const double a = k * std::numbers::pi / 3;
        const Point2D corner = bs_position(c, r) + Point2D{r * std::cos(a), r * std::sin(a)};
        CHECK(norm(p) <= norm(corner) + 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(worst_case_position({0, 0}, {0, 0}, 1.0), Error);
}
