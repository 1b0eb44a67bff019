#pragma once
// Peierls bracket and the deformation products: star product through the
// two-point kernel w, time-ordering operator through the self-contraction with
// d_f, and the time-ordered product.  Results carry exact hbar-polynomial
// coefficients (each contraction raises the hbar power by one and the sums
// terminate on polynomials).

#include "paqft/dynamics.hpp"
#include "paqft/functional.hpp"
#include "paqft/series.hpp"

namespace paqft {

// kappa multiplies every contraction step of the star product, kappa_prime
// every step of T and of the time-ordered product.  Both are calibrated once:
// kappa by the Dirac correspondence [phi(p), phi(q)]_star = i hbar Delta(p,q),
// kappa_prime by F ._T G = F star G under causal ordering.  With the kernel
// normalizations of PropagatorSet both come out to 1.
struct QContext {
  PropagatorSet props;
  double kappa = 1.0;
  double kappa_prime = 1.0;
};

using QPoly = HbarPoly<PolyFunctional>;
using QSeries = FormalSeries<PolyFunctional>;

QPoly lift(const PolyFunctional& f);  // place at hbar^0

PolyFunctional peierls_bracket(const PolyFunctional& f, const PolyFunctional& g,
                               const QContext& ctx);

QPoly star(const QPoly& a, const QPoly& b, const QContext& ctx);
QPoly star(const PolyFunctional& f, const PolyFunctional& g, const QContext& ctx);

// star(a,b) - star(b,a) evaluated with both kernel orientations walked in one
// pass, so spacelike-support commutators cancel to exact floating zeros
QPoly star_commutator(const QPoly& a, const QPoly& b, const QContext& ctx);

QPoly time_order(const QPoly& a, const QContext& ctx);
QPoly time_order(const PolyFunctional& f, const QContext& ctx);
QPoly time_order_inverse(const QPoly& a, const QContext& ctx);

// F ._T G = T(T^-1 F . T^-1 G); computed directly as the contraction product
// through d_f, which is the same operator.  Coincides bitwise with star when
// supp F is not earlier than supp G, because d_f - w = i g_a vanishes there.
QPoly timeordered_mul(const QPoly& a, const QPoly& b, const QContext& ctx);
QPoly timeordered_mul(const PolyFunctional& f, const PolyFunctional& g,
                      const QContext& ctx);

// product functors for the series algebra
inline auto star_mul(const QContext& ctx) {
  return [&ctx](const QPoly& a, const QPoly& b) { return star(a, b, ctx); };
}
inline auto tord_mul(const QContext& ctx) {
  return [&ctx](const QPoly& a, const QPoly& b) { return timeordered_mul(a, b, ctx); };
}

}  // namespace paqft
