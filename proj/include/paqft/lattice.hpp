#pragma once
// Finite 1+1D spacetime lattice: periodic spatial circle, finite time window,
// discrete causal structure with cone speed exactly one site per step.

#include <stdexcept>
#include <string>
#include <vector>

namespace paqft {

struct Point {
  int t = 0;
  int x = 0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

struct LatticeSpacetime {
  int n_t;
  int n_x;
  double dt;
  double dx;

  LatticeSpacetime(int nt, int nx, double dt_, double dx_);

  int n_sites() const { return n_t * n_x; }
  int site(int t, int x) const { return t * n_x + ((x % n_x) + n_x) % n_x; }
  int site(Point p) const { return site(p.t, p.x); }
  Point point(int s) const { return {s / n_x, s % n_x}; }
  bool in_bounds(Point p) const {
    return p.t >= 0 && p.t < n_t && p.x >= 0 && p.x < n_x;
  }

  // shorter periodic arc between spatial indices
  int pdist(int x1, int x2) const;

  // q in J^+(p): q.t >= p.t and pdist(q.x, p.x) <= q.t - p.t
  bool in_causal_future(Point p, Point q) const;

  // half-circle bound: cones of this radius or more wrap around the circle,
  // after which nothing is spacelike to the cone tip at that depth
  int wrap_radius() const { return n_x / 2; }
};

enum class RegionKind { diamond, slab, arbitrary };

struct Region {
  RegionKind kind = RegionKind::arbitrary;
  std::vector<Point> points;  // sorted, unique
  bool wrapped = false;       // cone guard: some causal cone reached wrap_radius

  bool contains(Point p) const;
  bool contains_all(const Region& other) const;
};

std::vector<Point> causal_future(const LatticeSpacetime& l, Point p);
std::vector<Point> causal_past(const LatticeSpacetime& l, Point p);
bool is_spacelike(const LatticeSpacetime& l, Point p, Point q);

// J^+(base) ∩ J^-(apex); requires apex in J^+(base)
Region diamond(const LatticeSpacetime& l, Point base, Point apex);

// all points with t in [t0, t0+thickness); thickness >= 2 (second-order
// dynamics carries two time rows of data)
Region cauchy_slab(const LatticeSpacetime& l, int t0, int thickness);

Region make_region(const LatticeSpacetime& l, std::vector<Point> pts);

// no point of A lies strictly inside the past cone of a point of B; under this
// order the advanced propagator vanishes between A (left) and B (right)
bool causally_not_earlier(const LatticeSpacetime& l,
                          const std::vector<Point>& a,
                          const std::vector<Point>& b);

bool regions_spacelike(const LatticeSpacetime& l, const Region& a, const Region& b);

}  // namespace paqft
