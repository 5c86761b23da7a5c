#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "mmsched/rng.hpp"

namespace mmsched {

/// Lattice coordinates of a hexagonal cell. Basis vectors are
/// (3r/2, sqrt(3) r/2) and (0, sqrt(3) r), 60 degrees apart.
struct CellIndex {
  int a1 = 0;
  int a2 = 0;

  auto operator<=>(const CellIndex&) const = default;

  CellIndex operator+(CellIndex o) const { return {a1 + o.a1, a2 + o.a2}; }
  CellIndex operator-(CellIndex o) const { return {a1 - o.a1, a2 - o.a2}; }
};

std::string to_string(CellIndex c);

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  Point2D operator+(Point2D o) const { return {x + o.x, y + o.y}; }
  Point2D operator-(Point2D o) const { return {x - o.x, y - o.y}; }
  Point2D operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Point2D&) const = default;
};

double norm(Point2D p);
double distance(Point2D a, Point2D b);

Point2D bs_position(CellIndex c, double r);

/// Number of cell steps between the origin cell and `c` (tier index).
int hex_distance(CellIndex c);
/// Cells at exactly `tier` steps from the origin, 6*tier of them (1 for tier 0).
std::vector<CellIndex> ring(int tier);
/// Cells within `tiers` steps of the origin, ordered by tier.
std::vector<CellIndex> cells_within(int tiers);

/// Closed-hexagon membership. Corners sit at 0, 60, ..., 300 degrees from the
/// BS so that lattice neighbors share full edges.
bool contains(CellIndex c, Point2D p, double r);
/// The unique owning cell of `p`: points on shared edges or corners go to the
/// lexicographically smallest containing index.
CellIndex owner_cell(Point2D p, double r);

bool is_supported_reuse(int beta);

/// Shift pair (i, j) with beta = i^2 + i*j + j^2 generating the co-channel
/// sublattice {i*(1,0)+j*(0,1), rotated by 60 degrees}.
struct ShiftPair {
  int i;
  int j;
};
ShiftPair shift_pair(int beta);

/// Group id in [0, beta): equal ids iff the index difference lies in the
/// co-channel sublattice. The origin cell is always group 0.
int reuse_group(CellIndex c, int beta);

/// Uniform on the hexagon of `c` minus the disk of radius min_frac*r around
/// its BS, by rejection from the bounding box.
Point2D sample_ue_position(CellIndex c, double r, double min_frac, Rng& rng);

/// Closest point to `p` on the boundary of hexagon(c).
Point2D project_to_boundary(CellIndex c, Point2D p, double r);

/// Point on the boundary of the interferer's hexagon nearest the victim BS.
Point2D worst_case_position(CellIndex interferer, CellIndex victim, double r);

}  // namespace mmsched
