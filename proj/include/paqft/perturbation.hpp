#pragma once
// Formal S-matrices, Bogoliubov interacting observables, the interacting star
// product, the causal factorization check, and the Haag-Kastler-style axiom
// machinery (local net generators, Einstein causality sampling, time-slice
// reduction of sources into a Cauchy slab).

#include <random>
#include <string>
#include <vector>

#include "paqft/quantization.hpp"

namespace paqft {

struct CheckResult {
  bool pass = false;
  double max_residual = 0.0;
  int samples = 0;
  std::string detail;
};

// Perturbative identities are asserted away from the time boundary: every
// support point must keep interior_margin + K rows of clearance.
int required_margin(int k_order, int interior_margin);
void require_margin(const LatticeSpacetime& l, const std::vector<Point>& supp,
                    int k_order, int interior_margin);

// series_exp of (i lambda/hbar) T(V) under the time-ordered product
QSeries s_matrix(const PolyFunctional& v, int k_order, const QContext& ctx);

// termwise complex conjugate of every functional coefficient; for
// real interactions with single-site (or mutually spacelike) support this
// reproduces the star inverse of the S-matrix
QSeries series_conjugate(const QSeries& s);

struct InteractingObservable {
  QSeries series;  // lambda^0 coefficient is T(F)
};

// R_V(F) = S(λV)^{star -1} star (S(λV) ._T T(F))
InteractingObservable bogoliubov(const PolyFunctional& v, const PolyFunctional& f,
                                 int k_order, const QContext& ctx);

// conjugation by S(λV): to_free is an isomorphism onto the free star algebra,
// so `product` (its pullback of the star product) is associative whenever the
// free product is.  from_free inverts to_free order by order in lambda, which
// works because to_free is the identity at lambda^0.
struct InteractingPicture {
  QSeries s, sinv;
  const QContext* ctx;
  InteractingPicture(const PolyFunctional& v, int k_order, const QContext& ctx);
  QSeries to_free(const QSeries& x) const;
  QSeries from_free(const QSeries& z) const;
  QSeries product(const QSeries& x, const QSeries& y) const;
};

// F star_int G: conjugation by the S-matrix without the interior T, inverted
// order by order in lambda, so the lambda^0 coefficient is F star G
QSeries interacting_star(const PolyFunctional& f, const PolyFunctional& g,
                         const PolyFunctional& v, int k_order, const QContext& ctx);

// asserts S(F1+F+F2) = S(F1+F) star S(F)^{star -1} star S(F+F2) up to
// lambda^K; requires supp F1 not earlier than supp F2 (the factorization
// order in which the advanced propagator vanishes between the outer factors)
CheckResult check_causal_factorization(const PolyFunctional& f1,
                                       const PolyFunctional& f,
                                       const PolyFunctional& f2, int k_order,
                                       const QContext& ctx, double tol = 1e-9);

// Region -> generating monomials of degree <= max_degree supported there.
// Isotony is key-set inclusion: a smaller region's generators are literally a
// subset of a larger region's.
struct LocalNet {
  LatticeSpacetime lattice;
  int max_degree = 2;

  std::vector<PolyFunctional::Key> generator_keys(const Region& r) const;
  std::vector<PolyFunctional> generators(const Region& r) const;
};

// samples generator pairs from the two regions and requires every star
// commutator to vanish to the exact floating zero
CheckResult check_einstein_causality(const Region& o1, const Region& o2,
                                     const QContext& ctx, int samples,
                                     std::mt19937_64& rng);

// f' = f - P(chi . propagated solution): the future part of f is propagated
// backward with g_a and cut at the slab top (step function equal to 1 on the
// top slab row and above), the past part forward with g_r and cut at the slab
// bottom; supp f' lies in the slab plus the rows of f already inside, and
// the smeared Pauli-Jordan pairing is unchanged: delta f' = delta f.
struct SlabReduction {
  FieldConfiguration reduced;
  FieldConfiguration shift;  // the cut solution; f' = f - P(shift)
};
SlabReduction reduce_to_slab_with_shift(const FieldConfiguration& f,
                                        const Region& slab,
                                        const PropagatorSet& props);
FieldConfiguration reduce_to_slab(const FieldConfiguration& f, const Region& slab,
                                  const PropagatorSet& props);
FieldConfiguration reduce_to_slab(const FieldConfiguration& f, const Region& slab,
                                  const QContext& ctx);

}  // namespace paqft
