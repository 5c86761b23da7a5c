#include "mmsched/hexgeo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

#include "mmsched/errors.hpp"

namespace mmsched {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
// Relative slack for closed-boundary membership tests.
constexpr double kBoundaryEps = 1e-9;

int floor_mod(long long a, int m) {
  const long long r = a % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

std::array<Point2D, 6> corners(CellIndex c, double r) {
  const Point2D b = bs_position(c, r);
  std::array<Point2D, 6> out{};
  for (int k = 0; k < 6; ++k) {
    const double angle = k * std::numbers::pi / 3.0;
    out[k] = {b.x + r * std::cos(angle), b.y + r * std::sin(angle)};
  }
  // Exact values for the axis-aligned corners.
  out[0] = {b.x + r, b.y};
  out[3] = {b.x - r, b.y};
  return out;
}

Point2D closest_on_segment(Point2D a, Point2D b, Point2D p) {
  const Point2D d = b - a;
  const double len2 = d.x * d.x + d.y * d.y;
  double t = ((p.x - a.x) * d.x + (p.y - a.y) * d.y) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return a + d * t;
}

struct GroupTable {
  int beta;
  std::map<std::pair<int, int>, int> ids;
};

std::pair<int, int> coset_key(CellIndex c, ShiftPair s, int beta) {
  // adj(M) * alpha with M = [[i, -j], [j, i + j]]
  const long long k1 =
      static_cast<long long>(s.i + s.j) * c.a1 + static_cast<long long>(s.j) * c.a2;
  const long long k2 = -static_cast<long long>(s.j) * c.a1 + static_cast<long long>(s.i) * c.a2;
  return {floor_mod(k1, beta), floor_mod(k2, beta)};
}

GroupTable make_group_table(int beta) {
  GroupTable table{beta, {}};
  const ShiftPair s = shift_pair(beta);
  int next = 0;
  // beta * Z^2 lies inside the sublattice, so [0, beta)^2 covers every coset.
  for (int a1 = 0; a1 < beta; ++a1) {
    for (int a2 = 0; a2 < beta; ++a2) {
      const auto key = coset_key({a1, a2}, s, beta);
      if (table.ids.emplace(key, next).second) ++next;
    }
  }
  return table;
}

const GroupTable& group_table(int beta) {
  static const std::array<GroupTable, 4> tables{make_group_table(1), make_group_table(3),
                                                make_group_table(4), make_group_table(7)};
  switch (beta) {
    case 1: return tables[0];
    case 3: return tables[1];
    case 4: return tables[2];
    default: return tables[3];
  }
}

}  // namespace

std::string to_string(CellIndex c) {
  return "(" + std::to_string(c.a1) + "," + std::to_string(c.a2) + ")";
}

double norm(Point2D p) { return std::hypot(p.x, p.y); }

double distance(Point2D a, Point2D b) { return norm(a - b); }

Point2D bs_position(CellIndex c, double r) {
  return {1.5 * r * c.a1, 0.5 * kSqrt3 * r * c.a1 + kSqrt3 * r * c.a2};
}

int hex_distance(CellIndex c) {
  return (std::abs(c.a1) + std::abs(c.a2) + std::abs(c.a1 + c.a2)) / 2;
}

std::vector<CellIndex> ring(int tier) {
  if (tier < 0) throw Error(ErrorCode::DomainError, "tier must be non-negative");
  std::vector<CellIndex> out;
  for (int a1 = -tier; a1 <= tier; ++a1) {
    for (int a2 = -tier; a2 <= tier; ++a2) {
      if (hex_distance({a1, a2}) == tier) out.push_back({a1, a2});
    }
  }
  return out;
}

std::vector<CellIndex> cells_within(int tiers) {
  std::vector<CellIndex> out;
  for (int t = 0; t <= tiers; ++t) {
    const auto r = ring(t);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

bool contains(CellIndex c, Point2D p, double r) {
  const Point2D q = p - bs_position(c, r);
  const double ax = std::abs(q.x);
  const double ay = std::abs(q.y);
  const double slack = kBoundaryEps * r;
  return ay <= 0.5 * kSqrt3 * r + slack && kSqrt3 * ax + ay <= kSqrt3 * r + slack;
}

CellIndex owner_cell(Point2D p, double r) {
  const double f1 = p.x / (1.5 * r);
  const double f2 = (p.y - 0.5 * kSqrt3 * r * f1) / (kSqrt3 * r);
  const int c1 = static_cast<int>(std::lround(f1));
  const int c2 = static_cast<int>(std::lround(f2));
  // Candidates are scanned in lexicographic order, so the first hit wins ties.
  for (int a1 = c1 - 2; a1 <= c1 + 2; ++a1) {
    for (int a2 = c2 - 2; a2 <= c2 + 2; ++a2) {
      if (contains({a1, a2}, p, r)) return {a1, a2};
    }
  }
  throw Error(ErrorCode::DomainError, "point is not covered by the lattice (non-finite?)");
}

bool is_supported_reuse(int beta) {
  return beta == 1 || beta == 3 || beta == 4 || beta == 7;
}

ShiftPair shift_pair(int beta) {
  switch (beta) {
    case 1: return {1, 0};
    case 3: return {1, 1};
    case 4: return {2, 0};
    case 7: return {2, 1};
    default:
      throw Error(ErrorCode::UnsupportedReuse,
                  "reuse factor " + std::to_string(beta) + " is not in {1, 3, 4, 7}");
  }
}

int reuse_group(CellIndex c, int beta) {
  const ShiftPair s = shift_pair(beta);
  if (beta == 1) return 0;
  return group_table(beta).ids.at(coset_key(c, s, beta));
}

Point2D sample_ue_position(CellIndex c, double r, double min_frac, Rng& rng) {
  if (!(min_frac >= 0.0 && min_frac < 1.0)) {
    throw Error(ErrorCode::DomainError, "min_frac must lie in [0, 1)");
  }
  std::uniform_real_distribution<double> ux(-1.0, 1.0);
  std::uniform_real_distribution<double> uy(-0.5 * kSqrt3, 0.5 * kSqrt3);
  const double min2 = min_frac * min_frac;
  for (;;) {
    const double x = ux(rng);
    const double y = uy(rng);
    const double ax = std::abs(x);
    const double ay = std::abs(y);
    if (kSqrt3 * ax + ay > kSqrt3) continue;
    if (x * x + y * y < min2) continue;
    const Point2D b = bs_position(c, r);
    return {b.x + r * x, b.y + r * y};
  }
}

Point2D project_to_boundary(CellIndex c, Point2D p, double r) {
  const auto pts = corners(c, r);
  Point2D best{};
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 6; ++k) {
    const Point2D q = closest_on_segment(pts[k], pts[(k + 1) % 6], p);
    const double d = distance(q, p);
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

Point2D worst_case_position(CellIndex interferer, CellIndex victim, double r) {
  if (interferer == victim) {
    throw Error(ErrorCode::DomainError, "worst-case position needs distinct cells");
  }
  return project_to_boundary(interferer, bs_position(victim, r), r);
}

}  // namespace mmsched
