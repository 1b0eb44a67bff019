#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "paqft/dynamics.hpp"
#include "paqft/functional.hpp"
#include "paqft/lattice.hpp"
#include "paqft/perturbation.hpp"
#include "paqft/quantization.hpp"
#include "paqft/series.hpp"

namespace paqft {

// Words in the group algebra generated by unitaries S(F) indexed by local
// functionals.  A word carries a symbolic phase exponent Theta, a series in
// the coupling with Laurent-in-hbar coefficients; the element represented is
//
//   exp(Theta) * S(lambda F_1)^{e_1} ... S(lambda F_n)^{e_n},  e_i = +-1.
//
// Rewrites replace a word by another word representing the same element.
// There is no completion procedure: soundness is checked semantically, by
// expanding both sides with the perturbative S-matrix (word_series) and
// comparing coefficients.  The factorization and constant rules hold
// coefficient-exact off shell; the field-shift rule holds on solutions of the
// free field equation, which is where the quotient algebra lives.

struct FunctionalLabel {
  PolyFunctional f;
  Region supp;  // cached f.support_points, as a region
};

FunctionalLabel make_label(const PolyFunctional& f, const LatticeSpacetime& l);

// exact coefficient equality, the identity used by free reduction
bool label_equal(const FunctionalLabel& a, const FunctionalLabel& b);

struct SLetter {
  FunctionalLabel label;
  int exponent = 1;  // +1 or -1
};

struct SWord {
  LatticeSpacetime lattice;  // geometry the letters and causal checks live on
  // slots lambda^1 (constant extraction) and lambda^2 (field shift)
  FormalSeries<cplx> phase_exponent{2};
  std::vector<SLetter> letters;
};

SWord make_word(const LatticeSpacetime& l,
                const std::vector<std::pair<PolyFunctional, int>>& letters);

// Unit letters S(0)^{+-1} are dropped and adjacent inverse pairs cancelled
// until neither rule applies.  One stack scan computes the free-group normal
// form, so the result is independent of cancellation order.
SWord free_reduce(const SWord& w);

// S(F1+F+F2) -> S(F1+F) S(F)^{-1} S(F+F2), sound when no point of supp F1
// lies strictly inside the past cone of a point of supp F2.  Applied to the
// letter at `position`; for an inverse letter the reversed triple with
// flipped exponents is substituted.  The three parts must sum to the letter's
// label coefficient-exactly.
SWord rewrite_factorize(const SWord& w, std::size_t position,
                        const PolyFunctional& f1, const PolyFunctional& fm,
                        const PolyFunctional& f2);

// Inverse direction: letters (A,+1),(B,-1),(C,+1) starting at `position`
// collapse to (A-B+C,+1) when supp(A-B) is nowhere earlier than supp(C-B).
SWord rewrite_factorize_inverse(const SWord& w, std::size_t position);

// Convenience: adjacent (A,+1),(C,+1) with trivial middle merge to (A+C,+1).
SWord rewrite_merge(const SWord& w, std::size_t position);

// Field-shift (Schwinger-Dyson) rule for a linear label F: with the shift
// scaled by the coupling, S(lambda F) = S(lambda(F+l) + lambda^2 c') where
// l is the linear part and c' = F[phi] + (constant part) of the shifted
// Lagrangian difference; the lambda^2 constant moves straight to the phase.
// Requires a linear label, a quadratic Lagrangian, and supp phi at least two
// rows away from the time boundary (so the shifted difference is again a
// functional of exact local support and vanishes on solutions).
SWord rewrite_field_shift(const SWord& w, std::size_t position,
                          const FieldConfiguration& phi,
                          const GeneralizedLagrangian& lag);

// S(lambda(F + c)) = e^{i c lambda / hbar} S(lambda F): strips the label's
// constant term into the phase exponent.
SWord rewrite_extract_constant(const SWord& w, std::size_t position);

// Perturbative evaluation map: fold s_matrix over the letters under the star
// product (inverse letters via the series inverse), then multiply by
// exp(phase_exponent).  Labels must respect the perturbative margin.
QSeries word_series(const SWord& w, int k_order, const QContext& ctx);

// max coefficient difference of the two expansions (off-shell comparison)
double word_residual(const SWord& a, const SWord& b, int k_order,
                     const QContext& ctx);

// same, but each coefficient functional is compared through its values on the
// supplied configurations (used for rules that hold on solutions only)
double word_onshell_residual(const SWord& a, const SWord& b, int k_order,
                             const QContext& ctx,
                             const std::vector<FieldConfiguration>& configs);

struct WeylReport {
  bool derived = false;         // a rewrite chain reached e^Theta S(f+g)
  int depth_used = 0;           // moves consumed by the chain
  cplx theta{0.0, 0.0};         // S(f)S(g) = e^{i theta lambda^2 / hbar} S(f+g)
  cplx closed_form_theta{0.0, 0.0};  // <f, G_A g>, the independent formula
  double oracle_residual = 0.0;      // off-shell series residual of the claim
  double constant_rule_residual = 0.0;  // admission check for the phase rule
  std::string detail;
};

// Establishes the Weyl relation for linear f, g over the free quadratic
// Lagrangian by bounded rewriting: merge directly when supp f is nowhere
// earlier than supp g (phase 0); otherwise shift g into a two-row slab below
// both supports, merge, and shift back, accumulating the phase.  The derived
// theta is cross-checked against <f, G_A g> and against the perturbative
// expansion of both sides at order k_order.
WeylReport verify_weyl(const PolyFunctional& f, const PolyFunctional& g,
                       const GeneralizedLagrangian& l0, int depth, int k_order,
                       const QContext& ctx, double tol = 1e-8);

}  // namespace paqft
