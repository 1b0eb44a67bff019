#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace testsupport {

Eigen::MatrixXd green_by_linear_solve(const KGOperator& kg) {
  const LatticeSpacetime& l = kg.lattice;
  const int n = l.n_sites();
  const int nx = l.n_x;
  const double idt2 = 1.0 / (l.dt * l.dt);
  const double idx2 = 1.0 / (l.dx * l.dx);
  const double m2 = kg.mass * kg.mass;

  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);

  // For a source at (tq, xq) the solution vanishes on rows <= tq; the rows
  // above are fixed by the stencil equations for t = tq .. n_t-2.  The system
  // matrix depends only on tq, so one factorization serves all xq.
  for (int tq = 0; tq + 1 < l.n_t; ++tq) {
    const int m = (l.n_t - 1 - tq) * nx;  // unknowns: rows tq+1 .. n_t-1
    auto unknown = [&](int t, int x) {
      return (t - (tq + 1)) * nx + ((x % nx) + nx) % nx;
    };
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (int t = tq; t + 1 < l.n_t; ++t)
      for (int x = 0; x < nx; ++x) {
        const int row = (t - tq) * nx + x;
        a(row, unknown(t + 1, x)) += idt2;
        if (t >= tq + 1) {
          a(row, unknown(t, x)) += -2.0 * idt2 + 2.0 * idx2 + m2;
          a(row, unknown(t, x + 1)) -= idx2;
          a(row, unknown(t, x - 1)) -= idx2;
        }
        if (t - 1 >= tq + 1) a(row, unknown(t - 1, x)) += idt2;
      }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    for (int xq = 0; xq < nx; ++xq) {
      Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
      b(xq) = 1.0;  // the source equation is the row t = tq, x = xq
      const Eigen::VectorXd u = lu.solve(b);
      const int col = l.site(tq, xq);
      for (int t = tq + 1; t < l.n_t; ++t)
        for (int x = 0; x < nx; ++x) g(l.site(t, x), col) = u(unknown(t, x));
    }
  }
  return g;
}

std::vector<FieldConfiguration> plane_wave_solutions(const LatticeSpacetime& l,
                                                     double mass, int count) {
  std::vector<FieldConfiguration> out;
  for (int j = 0; j < l.n_x && static_cast<int>(out.size()) < count; ++j) {
    const double th = 2.0 * M_PI * j / l.n_x;
    const double om_sq = (2.0 - 2.0 * std::cos(th)) / (l.dx * l.dx) + mass * mass;
    const double w = std::acos(1.0 - 0.5 * om_sq * l.dt * l.dt);
    FieldConfiguration c(l.n_sites()), s(l.n_sites());
    for (int t = 0; t < l.n_t; ++t)
      for (int x = 0; x < l.n_x; ++x) {
        const double ph = th * x - w * t;
        c[l.site(t, x)] = std::cos(ph);
        s[l.site(t, x)] = std::sin(ph);
      }
    out.push_back(std::move(c));
    if (static_cast<int>(out.size()) < count) out.push_back(std::move(s));
  }
  return out;
}

PolyFunctional random_poly(Rng& r, const LatticeSpacetime& l, int nmono,
                           int maxdeg, int row_lo, int row_hi) {
  PolyFunctional f;
  for (int i = 0; i < nmono; ++i) {
    const int d = 1 + r.upto(maxdeg);
    PolyFunctional::Key k;
    for (int j = 0; j < d; ++j)
      k.push_back(l.site(row_lo + r.upto(row_hi - row_lo + 1), r.upto(l.n_x)));
    std::sort(k.begin(), k.end());
    f.add_scaled(PolyFunctional::monomial(k, cplx(r.sym(), r.sym())), 1.0);
  }
  return f;
}

FieldConfiguration random_cutoff(Rng& r, const LatticeSpacetime& l, int row_lo,
                                 int row_hi) {
  FieldConfiguration f(l.n_sites(), 0.0);
  for (int t = row_lo; t <= row_hi; ++t)
    for (int x = 0; x < l.n_x; ++x) f[l.site(t, x)] = r.sym();
  return f;
}

GradedFunctional random_graded(Rng& r, const LatticeSpacetime& l, int nmono,
                               int maxdeg, int row_lo, int row_hi,
                               bool with_antifields) {
  GradedFunctional f;
  for (int i = 0; i < nmono; ++i) {
    const int d = 1 + r.upto(maxdeg);
    GKey k;
    for (int j = 0; j < d; ++j) {
      const GenKind kind = (with_antifields && r.upto(2) == 0)
                               ? GenKind::antifield
                               : GenKind::field;
      k.push_back(
          {kind, l.site(row_lo + r.upto(row_hi - row_lo + 1), r.upto(l.n_x))});
    }
    f.add_scaled(GradedFunctional::monomial(k, cplx(r.sym(), r.sym())), 1.0);
  }
  return f;
}

GradedFunctional random_toy_element(Rng& r, const GaugeToy& toy, int nmono,
                                    int maxdeg) {
  const int nv = toy.grid * toy.grid;
  const std::vector<int> edge_ids = toy.edges();
  const GenKind kinds[4] = {GenKind::gauge, GenKind::ghost,
                            GenKind::gauge_antifield, GenKind::ghost_antifield};
  GradedFunctional f;
  for (int i = 0; i < nmono; ++i) {
    const int d = 1 + r.upto(maxdeg);
    GKey k;
    for (int j = 0; j < d; ++j) {
      const GenKind kind = kinds[r.upto(4)];
      const bool on_edges =
          kind == GenKind::gauge || kind == GenKind::gauge_antifield;
      const int idx = on_edges ? edge_ids[r.upto(static_cast<int>(edge_ids.size()))]
                               : r.upto(nv);
      k.push_back({kind, idx});
    }
    f.add_scaled(GradedFunctional::monomial(k, cplx(r.sym(), r.sym())), 1.0);
  }
  return f;
}

}  // namespace testsupport
