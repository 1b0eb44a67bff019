#include "paqft/perturbation.hpp"

#include <algorithm>
#include <stdexcept>

namespace paqft {

int required_margin(int k_order, int interior_margin) {
  return interior_margin + k_order;
}

void require_margin(const LatticeSpacetime& l, const std::vector<Point>& supp,
                    int k_order, int interior_margin) {
  const int m = required_margin(k_order, interior_margin);
  for (const Point& p : supp) {
    if (p.t < m || p.t > l.n_t - 1 - m)
      throw std::domain_error(
          "perturbative margin: supports must keep interior_margin + order = " +
          std::to_string(m) + " time rows of clearance from the lattice boundary");
  }
}

QSeries s_matrix(const PolyFunctional& v, int k_order, const QContext& ctx) {
  const LatticeSpacetime& l = ctx.props.lattice;
  require_margin(l, v.support_points(l), k_order, ctx.props.interior_margin);
  QSeries e(k_order);
  if (k_order >= 1) {
    QPoly tv = time_order(v, ctx);
    e.coeffs[1] = tv.scaled(cplx(0.0, 1.0), -1);  // (i/hbar) T(V)
  }
  return series_exp(e, tord_mul(ctx));
}

namespace {

PolyFunctional conj_functional(const PolyFunctional& f) {
  PolyFunctional out;
  for (const auto& [k, c] : f.terms) out.terms.emplace(k, std::conj(c));
  return out;
}

}  // namespace

QSeries series_conjugate(const QSeries& s) {
  QSeries out(s.order);
  for (int k = 0; k <= s.order; ++k)
    for (const auto& [e, f] : s.coeffs[k].terms)
      out.coeffs[k].terms.emplace(e, conj_functional(f));
  return out;
}

InteractingObservable bogoliubov(const PolyFunctional& v, const PolyFunctional& f,
                                 int k_order, const QContext& ctx) {
  const LatticeSpacetime& l = ctx.props.lattice;
  require_margin(l, f.support_points(l), k_order, ctx.props.interior_margin);
  QSeries s = s_matrix(v, k_order, ctx);
  QSeries sinv = series_inv(s, star_mul(ctx));
  QSeries fser(k_order);
  fser.coeffs[0] = time_order(f, ctx);
  QSeries r = series_mul(sinv, series_mul(s, fser, tord_mul(ctx)), star_mul(ctx));
  return InteractingObservable{std::move(r)};
}

InteractingPicture::InteractingPicture(const PolyFunctional& v, int k_order,
                                       const QContext& c)
    : s(s_matrix(v, k_order, c)),
      sinv(series_inv(s, star_mul(c))),
      ctx(&c) {}

QSeries InteractingPicture::to_free(const QSeries& x) const {
  return series_mul(sinv, series_mul(s, x, tord_mul(*ctx)), star_mul(*ctx));
}

// the lambda^n slot of to_free(y) is y_n plus terms built from lower slots
// only, so each slot can be solved for in ascending order
QSeries InteractingPicture::from_free(const QSeries& z) const {
  QSeries y(z.order);
  for (int n = 0; n <= z.order; ++n) {
    QSeries r = to_free(y);
    y.coeffs[n] = z.coeffs[n];
    y.coeffs[n].add_scaled(r.coeffs[n], -1.0);
  }
  return y;
}

QSeries InteractingPicture::product(const QSeries& x, const QSeries& y) const {
  return from_free(series_mul(to_free(x), to_free(y), star_mul(*ctx)));
}

QSeries interacting_star(const PolyFunctional& f, const PolyFunctional& g,
                         const PolyFunctional& v, int k_order, const QContext& ctx) {
  const LatticeSpacetime& l = ctx.props.lattice;
  require_margin(l, f.support_points(l), k_order, ctx.props.interior_margin);
  require_margin(l, g.support_points(l), k_order, ctx.props.interior_margin);
  InteractingPicture pic(v, k_order, ctx);
  QSeries fs(k_order), gs(k_order);
  fs.coeffs[0] = lift(f);
  gs.coeffs[0] = lift(g);
  return pic.product(fs, gs);
}

CheckResult check_causal_factorization(const PolyFunctional& f1,
                                       const PolyFunctional& f,
                                       const PolyFunctional& f2, int k_order,
                                       const QContext& ctx, double tol) {
  const LatticeSpacetime& l = ctx.props.lattice;
  if (!causally_not_earlier(l, f1.support_points(l), f2.support_points(l)))
    throw std::domain_error(
        "causal factorization requires supp F1 not earlier than supp F2");

  PolyFunctional s1 = f1;
  s1.add_scaled(f, 1.0);
  PolyFunctional s2 = f;
  s2.add_scaled(f2, 1.0);
  PolyFunctional s012 = s1;
  s012.add_scaled(f2, 1.0);

  QSeries lhs = s_matrix(s012, k_order, ctx);
  QSeries rhs = series_mul(
      series_mul(s_matrix(s1, k_order, ctx),
                 series_inv(s_matrix(f, k_order, ctx), star_mul(ctx)),
                 star_mul(ctx)),
      s_matrix(s2, k_order, ctx), star_mul(ctx));
  rhs.add_scaled(lhs, -1.0);
  const double resid = rhs.norm();
  return CheckResult{resid <= tol, resid, 1,
                     "S(F1+F+F2) against the three-factor star composition"};
}

std::vector<PolyFunctional::Key> LocalNet::generator_keys(const Region& r) const {
  std::vector<int> sites;
  sites.reserve(r.points.size());
  for (const Point& p : r.points) sites.push_back(lattice.site(p));
  std::sort(sites.begin(), sites.end());
  std::vector<PolyFunctional::Key> keys;
  if (max_degree >= 1)
    for (int s : sites) keys.push_back({s});
  if (max_degree >= 2)
    for (std::size_t i = 0; i < sites.size(); ++i)
      for (std::size_t j = i; j < sites.size(); ++j)
        keys.push_back({sites[i], sites[j]});
  return keys;
}

std::vector<PolyFunctional> LocalNet::generators(const Region& r) const {
  std::vector<PolyFunctional> out;
  for (const auto& k : generator_keys(r)) out.push_back(PolyFunctional::monomial(k, 1.0));
  return out;
}

CheckResult check_einstein_causality(const Region& o1, const Region& o2,
                                     const QContext& ctx, int samples,
                                     std::mt19937_64& rng) {
  const LatticeSpacetime& l = ctx.props.lattice;
  if (!regions_spacelike(l, o1, o2))
    throw std::domain_error("einstein causality check requires spacelike regions");
  LocalNet net{l};
  std::vector<PolyFunctional> g1 = net.generators(o1);
  std::vector<PolyFunctional> g2 = net.generators(o2);
  CheckResult res;
  res.samples = samples;
  res.detail = "star commutators of sampled generator pairs";
  for (int s = 0; s < samples; ++s) {
    const auto& a = g1[rng() % g1.size()];
    const auto& b = g2[rng() % g2.size()];
    res.max_residual =
        std::max(res.max_residual, star_commutator(lift(a), lift(b), ctx).norm());
  }
  res.pass = res.max_residual == 0.0;
  return res;
}

SlabReduction reduce_to_slab_with_shift(const FieldConfiguration& f,
                                        const Region& slab,
                                        const PropagatorSet& props) {
  const LatticeSpacetime& l = props.lattice;
  const int n = l.n_sites(), nx = l.n_x, nt = l.n_t;
  if (slab.kind != RegionKind::slab || slab.points.empty())
    throw std::invalid_argument("reduce_to_slab: region is not a slab");
  if (static_cast<int>(f.size()) != n)
    throw std::invalid_argument("reduce_to_slab: source size mismatch");
  const int t0 = slab.points.front().t;
  const int t1 = slab.points.back().t + 1;
  if (t1 - t0 < 2) throw std::invalid_argument("reduce_to_slab: slab too thin");
  for (int x = 0; x < nx; ++x)
    if (f[l.site(0, x)] != 0.0 || f[l.site(nt - 1, x)] != 0.0)
      throw std::invalid_argument("reduce_to_slab: source touches the boundary time rows");

  FieldConfiguration f_past(n, 0.0), f_fut(n, 0.0);
  SlabReduction out{FieldConfiguration(n, 0.0), FieldConfiguration(n, 0.0)};
  for (int s = 0; s < n; ++s) {
    const int t = s / nx;
    if (t < t0)
      f_past[s] = f[s];
    else if (t >= t1)
      f_fut[s] = f[s];
    else
      out.reduced[s] = f[s];
  }

  const double idt2 = 1.0 / (l.dt * l.dt);

  // backward-propagated solution of P u = f_fut, cut at the slab top: the cut
  // kills P u above the slab and leaves two jump rows inside it
  FieldConfiguration u(n, 0.0);
  for (int s = 0; s < n; ++s) {
    double acc = 0.0;
    for (int q = 0; q < n; ++q)
      if (f_fut[q] != 0.0) acc += props.g_a(s, q) * f_fut[q];
    u[s] = acc;
  }
  for (int x = 0; x < nx; ++x) {
    out.reduced[l.site(t1 - 2, x)] -= u[l.site(t1 - 1, x)] * idt2;
    out.reduced[l.site(t1 - 1, x)] += u[l.site(t1 - 2, x)] * idt2;
  }
  for (int s = 0; s < n; ++s)
    if (s / nx >= t1 - 1) out.shift[s] += u[s];

  // mirror construction for the past part with the forward propagator
  FieldConfiguration w(n, 0.0);
  for (int s = 0; s < n; ++s) {
    double acc = 0.0;
    for (int q = 0; q < n; ++q)
      if (f_past[q] != 0.0) acc += props.g_r(s, q) * f_past[q];
    w[s] = acc;
  }
  for (int x = 0; x < nx; ++x) {
    out.reduced[l.site(t0, x)] += w[l.site(t0 + 1, x)] * idt2;
    out.reduced[l.site(t0 + 1, x)] -= w[l.site(t0, x)] * idt2;
  }
  for (int s = 0; s < n; ++s)
    if (s / nx <= t0) out.shift[s] += w[s];

  return out;
}

FieldConfiguration reduce_to_slab(const FieldConfiguration& f, const Region& slab,
                                  const PropagatorSet& props) {
  return reduce_to_slab_with_shift(f, slab, props).reduced;
}

FieldConfiguration reduce_to_slab(const FieldConfiguration& f, const Region& slab,
                                  const QContext& ctx) {
  return reduce_to_slab(f, slab, ctx.props);
}

}  // namespace paqft
