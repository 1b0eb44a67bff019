#include "paqft/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace paqft {

KGOperator::KGOperator(const LatticeSpacetime& l, double m) : lattice(l), mass(m) {
  if (!(m > 0.0)) throw std::invalid_argument("mass must be strictly positive");
  for (int j = 0; j < lattice.n_x; ++j) {
    if (mode_omega_sq(j) * lattice.dt * lattice.dt > 4.0)
      throw std::domain_error("leapfrog stability bound violated for spatial mode " +
                              std::to_string(j));
  }
}

double KGOperator::mode_omega_sq(int j) const {
  double th = 2.0 * std::numbers::pi * j / lattice.n_x;
  return (2.0 - 2.0 * std::cos(th)) / (lattice.dx * lattice.dx) + mass * mass;
}

FieldConfiguration apply_kg(const KGOperator& p, const FieldConfiguration& phi) {
  const LatticeSpacetime& l = p.lattice;
  if (static_cast<int>(phi.size()) != l.n_sites())
    throw std::invalid_argument("apply_kg: configuration size mismatch");
  const double idt2 = 1.0 / (l.dt * l.dt);
  const double idx2 = 1.0 / (l.dx * l.dx);
  const double m2 = p.mass * p.mass;
  FieldConfiguration out(phi.size(), 0.0);
  for (int t = 1; t + 1 < l.n_t; ++t) {
    for (int x = 0; x < l.n_x; ++x) {
      double c = phi[l.site(t, x)];
      double tt = (phi[l.site(t + 1, x)] - 2.0 * c + phi[l.site(t - 1, x)]) * idt2;
      double xx = (phi[l.site(t, x + 1)] - 2.0 * c + phi[l.site(t, x - 1)]) * idx2;
      out[l.site(t, x)] = tt - xx + m2 * c;
    }
  }
  return out;
}

Eigen::MatrixXd retarded_green(const KGOperator& p) {
  const LatticeSpacetime& l = p.lattice;
  const int n = l.n_sites(), nt = l.n_t, nx = l.n_x;
  const double dt2 = l.dt * l.dt;
  const double idx2 = 1.0 / (l.dx * l.dx);
  const double m2 = p.mass * p.mass;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> col(n);
  for (int q = 0; q < n; ++q) {
    std::fill(col.begin(), col.end(), 0.0);
    const int tq = q / nx, xq = q % nx;
    // source row: P u = delta_q forces u(tq+1, xq) = dt^2 with u = 0 at t <= tq;
    // the leapfrog below then reproduces P u = 0 above the source row
    if (tq + 1 < nt) col[l.site(tq + 1, xq)] = dt2;
    for (int t = tq + 1; t + 1 < nt; ++t) {
      for (int x = 0; x < nx; ++x) {
        double c = col[l.site(t, x)];
        double lap = (col[l.site(t, x + 1)] - 2.0 * c + col[l.site(t, x - 1)]) * idx2;
        col[l.site(t + 1, x)] = 2.0 * c - col[l.site(t - 1, x)] + dt2 * (lap - m2 * c);
      }
    }
    for (int r = 0; r < n; ++r) g(r, q) = col[r];
  }
  return g;
}

PropagatorSet hadamard_w(const KGOperator& p) {
  const LatticeSpacetime& l = p.lattice;
  const int n = l.n_sites(), nx = l.n_x;

  std::vector<double> th(nx), wdt(nx), cj(nx);
  for (int j = 0; j < nx; ++j) {
    th[j] = 2.0 * std::numbers::pi * j / nx;
    double arg = 1.0 - 0.5 * l.dt * l.dt * p.mode_omega_sq(j);
    if (arg <= -1.0)
      throw std::domain_error(
          "two-point kernel needs the strict stability bound: spatial mode " +
          std::to_string(j) + " reaches the time-step Nyquist frequency");
    wdt[j] = std::acos(arg);
    cj[j] = l.dt * l.dt / (2.0 * std::sin(wdt[j]));
  }

  PropagatorSet ps{l};
  ps.omega_dt = wdt;
  ps.g_r = retarded_green(p);
  ps.g_a = ps.g_r.transpose();
  ps.delta.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ps.delta(a, b) = ps.g_r(a, b) - ps.g_a(a, b);

  // one cosine evaluation per unordered pair keeps h symmetric to the bit
  ps.h.resize(n, n);
  for (int a = 0; a < n; ++a) {
    const int ta = a / nx, xa = a % nx;
    for (int b = a; b < n; ++b) {
      const int tb = b / nx, xb = b % nx;
      double s = 0.0;
      for (int j = 0; j < nx; ++j)
        s += cj[j] * std::cos(th[j] * (xa - xb) + wdt[j] * (ta - tb));
      s /= nx;
      ps.h(a, b) = s;
      ps.h(b, a) = s;
    }
  }

  ps.w.resize(n, n);
  ps.d_f.resize(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      ps.w(a, b) = cplx(ps.h(a, b), 0.5 * ps.delta(a, b));
      ps.d_f(a, b) = cplx(ps.h(a, b), 0.5 * (ps.g_r(a, b) + ps.g_a(a, b)));
    }
  }
  return ps;
}

namespace {

// {a,b} as a sorted kernel key
PolyFunctional::Key pair_key(int a, int b) {
  return a <= b ? PolyFunctional::Key{a, b} : PolyFunctional::Key{b, a};
}

}  // namespace

GeneralizedLagrangian lagrangian_L0(const LatticeSpacetime& l, double m) {
  const double idt2 = 1.0 / (l.dt * l.dt);
  const double idx2 = 1.0 / (l.dx * l.dx);
  const double m2 = m * m;
  auto build = [l, idt2, idx2, m2](const FieldConfiguration& f) {
    if (static_cast<int>(f.size()) != l.n_sites())
      throw std::invalid_argument("lagrangian cutoff: size mismatch");
    PolyFunctional out;
    for (int t = 0; t < l.n_t; ++t) {
      for (int x = 0; x < l.n_x; ++x) {
        const int s = l.site(t, x);
        const double fv = f[s];
        // Each diagonal coefficient is assembled here in one fixed stencil
        // order; a translated cutoff then reproduces it bit for bit at the
        // translated site, independent of where the lattice scan wraps.
        double diag = 0.0;
        if (t > 0) diag += 0.5 * f[l.site(t - 1, x)] * idt2;
        if (t + 1 < l.n_t) diag += 0.5 * fv * idt2;
        diag -= 0.5 * f[l.site(t, x - 1)] * idx2;
        diag -= 0.5 * fv * idx2;
        diag -= 0.5 * fv * m2;
        out.add_term({s, s}, diag);
        if (fv == 0.0) continue;
        if (t + 1 < l.n_t) out.add_term(pair_key(s, l.site(t + 1, x)), -fv * idt2);
        out.add_term(pair_key(s, l.site(t, x + 1)), fv * idx2);
      }
    }
    return out;
  };
  return GeneralizedLagrangian{l, std::move(build)};
}

PolyFunctional interaction_V(const std::string& kind, const FieldConfiguration& f) {
  if (kind != "phi4") throw std::invalid_argument("unknown interaction kind: " + kind);
  PolyFunctional v;
  for (int s = 0; s < static_cast<int>(f.size()); ++s)
    if (f[s] != 0.0) v.add_term({s, s, s, s}, f[s] / 24.0);
  return v;
}

FieldConfiguration euler_lagrange(const GeneralizedLagrangian& lag,
                                  const FieldConfiguration& phi) {
  const LatticeSpacetime& l = lag.lattice;
  if (static_cast<int>(phi.size()) != l.n_sites())
    throw std::invalid_argument("euler_lagrange: configuration size mismatch");
  PolyFunctional lf = lag(FieldConfiguration(l.n_sites(), 1.0));
  FieldConfiguration out(phi.size(), 0.0);
  for (int t = 1; t + 1 < l.n_t; ++t)
    for (int x = 0; x < l.n_x; ++x) {
      const int s = l.site(t, x);
      out[s] = lf.derivative(s).evaluate(phi).real();
    }
  return out;
}

namespace {

// supp psi plus one site in each lattice direction; the L0 quadratic form
// couples nearest neighbors only, so the cutoff is irrelevant outside this set
std::set<int> stencil_closure(const LatticeSpacetime& l, const FieldConfiguration& psi) {
  std::set<int> req;
  for (int t = 0; t < l.n_t; ++t)
    for (int x = 0; x < l.n_x; ++x) {
      if (psi[l.site(t, x)] == 0.0) continue;
      req.insert(l.site(t, x));
      if (t > 0) req.insert(l.site(t - 1, x));
      if (t + 1 < l.n_t) req.insert(l.site(t + 1, x));
      req.insert(l.site(t, x - 1));
      req.insert(l.site(t, x + 1));
    }
  return req;
}

}  // namespace

double delta_L(const GeneralizedLagrangian& lag, const FieldConfiguration& psi,
               const FieldConfiguration& phi, const FieldConfiguration& cutoff) {
  const LatticeSpacetime& l = lag.lattice;
  const int n = l.n_sites();
  if (static_cast<int>(psi.size()) != n || static_cast<int>(phi.size()) != n ||
      static_cast<int>(cutoff.size()) != n)
    throw std::invalid_argument("delta_L: configuration size mismatch");
  for (int s : stencil_closure(l, psi))
    if (cutoff[s] != 1.0)
      throw std::invalid_argument(
          "delta_L: cutoff must be identically 1 on the stencil closure of the "
          "perturbation support");
  PolyFunctional lf = lag(cutoff);
  FieldConfiguration sum = phi;
  for (int i = 0; i < n; ++i) sum[i] += psi[i];
  return (lf.evaluate(sum) - lf.evaluate(phi)).real();
}

double delta_L(const GeneralizedLagrangian& lag, const FieldConfiguration& psi,
               const FieldConfiguration& phi) {
  return delta_L(lag, psi, phi, FieldConfiguration(lag.lattice.n_sites(), 1.0));
}

PolyFunctional shift_difference(const GeneralizedLagrangian& lag,
                                const FieldConfiguration& cutoff,
                                const FieldConfiguration& psi) {
  PolyFunctional lf = lag(cutoff);
  PolyFunctional d = lf.shifted(psi);
  d.add_scaled(lf, -1.0);
  return d;
}

}  // namespace paqft
