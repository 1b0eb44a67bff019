#include "paqft/lattice.hpp"

#include <algorithm>

namespace paqft {

LatticeSpacetime::LatticeSpacetime(int nt, int nx, double dt_, double dx_)
    : n_t(nt), n_x(nx), dt(dt_), dx(dx_) {
  if (n_x < 3) throw std::invalid_argument("lattice: n_x >= 3 required");
  if (n_t < 4) throw std::invalid_argument("lattice: n_t >= 4 required");
  if (dt <= 0 || dx <= 0) throw std::invalid_argument("lattice: spacings must be positive");
  if (dt / dx > 1.0) throw std::invalid_argument("lattice: dt/dx <= 1 required");
}

int LatticeSpacetime::pdist(int x1, int x2) const {
  int d = ((x1 - x2) % n_x + n_x) % n_x;
  return std::min(d, n_x - d);
}

bool LatticeSpacetime::in_causal_future(Point p, Point q) const {
  return q.t >= p.t && pdist(q.x, p.x) <= q.t - p.t;
}

bool Region::contains(Point p) const {
  return std::binary_search(points.begin(), points.end(), p);
}

bool Region::contains_all(const Region& other) const {
  return std::all_of(other.points.begin(), other.points.end(),
                     [&](Point p) { return contains(p); });
}

std::vector<Point> causal_future(const LatticeSpacetime& l, Point p) {
  if (!l.in_bounds(p)) throw std::out_of_range("causal_future: point out of bounds");
  std::vector<Point> out;
  for (int t = p.t; t < l.n_t; ++t)
    for (int x = 0; x < l.n_x; ++x)
      if (l.in_causal_future(p, {t, x})) out.push_back({t, x});
  return out;
}

std::vector<Point> causal_past(const LatticeSpacetime& l, Point p) {
  if (!l.in_bounds(p)) throw std::out_of_range("causal_past: point out of bounds");
  std::vector<Point> out;
  for (int t = 0; t <= p.t; ++t)
    for (int x = 0; x < l.n_x; ++x)
      if (l.in_causal_future({t, x}, p)) out.push_back({t, x});
  return out;
}

bool is_spacelike(const LatticeSpacetime& l, Point p, Point q) {
  return !l.in_causal_future(p, q) && !l.in_causal_future(q, p);
}

Region diamond(const LatticeSpacetime& l, Point base, Point apex) {
  if (!l.in_bounds(base) || !l.in_bounds(apex))
    throw std::out_of_range("diamond: point out of bounds");
  if (!l.in_causal_future(base, apex))
    throw std::invalid_argument("diamond: apex not in the causal future of base");
  Region r;
  r.kind = RegionKind::diamond;
  for (int t = base.t; t <= apex.t; ++t)
    for (int x = 0; x < l.n_x; ++x) {
      Point p{t, x};
      if (l.in_causal_future(base, p) && l.in_causal_future(p, apex))
        r.points.push_back(p);
    }
  r.wrapped = (apex.t - base.t) / 2 >= l.wrap_radius();
  return r;
}

Region cauchy_slab(const LatticeSpacetime& l, int t0, int thickness) {
  if (thickness < 2) throw std::invalid_argument("cauchy_slab: thickness >= 2 required");
  if (t0 < 0 || t0 + thickness > l.n_t)
    throw std::out_of_range("cauchy_slab: slab outside the time window");
  Region r;
  r.kind = RegionKind::slab;
  for (int t = t0; t < t0 + thickness; ++t)
    for (int x = 0; x < l.n_x; ++x) r.points.push_back({t, x});
  return r;
}

Region make_region(const LatticeSpacetime& l, std::vector<Point> pts) {
  for (const Point& p : pts)
    if (!l.in_bounds(p)) throw std::out_of_range("make_region: point out of bounds");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return Region{RegionKind::arbitrary, std::move(pts), false};
}

bool causally_not_earlier(const LatticeSpacetime& l,
                          const std::vector<Point>& a,
                          const std::vector<Point>& b) {
  for (const Point& p : a)
    for (const Point& q : b)
      if (p.t < q.t && l.pdist(p.x, q.x) <= q.t - p.t) return false;
  return true;
}

bool regions_spacelike(const LatticeSpacetime& l, const Region& a, const Region& b) {
  for (const Point& p : a.points)
    for (const Point& q : b.points)
      if (!is_spacelike(l, p, q)) return false;
  return true;
}

}  // namespace paqft
