#pragma once
// Discrete Klein-Gordon dynamics: the wave operator, retarded/advanced Green
// functions with exact cone support, the Pauli-Jordan function, a positive
// two-point kernel built from spatial Fourier modes, and generalized
// Lagrangians given by cutoff-to-functional builders.

#include <Eigen/Core>

#include <functional>
#include <string>
#include <vector>

#include "paqft/functional.hpp"
#include "paqft/lattice.hpp"

namespace paqft {

// P = d_t^2 - d_x^2 + m^2 with central differences, periodic in x.  The time
// rows t = 0 and t = n_t-1 carry no equation: apply_kg returns zero there and
// every solution/bisolution contract in this module quantifies over interior
// rows only.
struct KGOperator {
  LatticeSpacetime lattice;
  double mass;

  // rejects m <= 0 and lattices violating the leapfrog stability bound
  // Omega_j^2 dt^2 <= 4 for any spatial mode j
  KGOperator(const LatticeSpacetime& l, double m);

  // Omega_j^2 = (2 - 2cos(2 pi j / n_x))/dx^2 + m^2
  double mode_omega_sq(int j) const;
};

FieldConfiguration apply_kg(const KGOperator& p, const FieldConfiguration& phi);

// Columns solve P u = delta_q (Kronecker source, no volume weight) by forward
// leapfrog; entries are exact floating zeros outside J^+(q), and
// G_R((tq+1,xq),(tq,xq)) = dt^2.
Eigen::MatrixXd retarded_green(const KGOperator& p);

// Site-indexed propagator kernels.  delta = g_r - g_a is antisymmetric to the
// bit; w = h + (i/2) delta with h real symmetric, so the checkable adjoint
// relation is the transpose one, w - w^T = i delta, exact.  d_f - w = i g_a
// holds entrywise to the bit because g_r and g_a never overlap.
struct PropagatorSet {
  explicit PropagatorSet(const LatticeSpacetime& l) : lattice(l) {}

  LatticeSpacetime lattice;
  Eigen::MatrixXd g_r;
  Eigen::MatrixXd g_a;            // g_r transposed
  Eigen::MatrixXd delta;          // g_r - g_a
  Eigen::MatrixXd h;              // symmetric bisolution, the real part of w
  Eigen::MatrixXcd w;             // two-point kernel, positive semidefinite
  Eigen::MatrixXcd d_f;           // time-ordered kernel h + (i/2)(g_r + g_a)
  std::vector<double> omega_dt;   // discrete-time mode frequencies, in (0, pi)
  int interior_margin = 1;        // boundary time rows excluded from claims
};

// Builds w from spatial Fourier modes with discrete-time frequencies solving
//   (2 - 2cos(omega dt))/dt^2 = Omega_j^2,
// normalized per mode by dt^2/(2 sin(omega dt)) — the unique positive choice
// giving Im w = delta/2.  Requires the strict stability bound (every
// omega_j dt < pi); the mass guard in KGOperator keeps omega_j dt > 0.
PropagatorSet hadamard_w(const KGOperator& p);

// A Lagrangian is a rule assigning a functional to every cutoff function f;
// support of the result tracks the support of f.
struct GeneralizedLagrangian {
  LatticeSpacetime lattice;
  std::function<PolyFunctional(const FieldConfiguration&)> build;

  PolyFunctional operator()(const FieldConfiguration& cutoff) const {
    return build(cutoff);
  }
};

// L0(f)[phi] = 1/2 sum_s f(s) [ (D_t phi)^2 - (D_x phi)^2 - m^2 phi^2 ](s)
// with forward differences; D_t is dropped on the last time row.
GeneralizedLagrangian lagrangian_L0(const LatticeSpacetime& l, double m);

// "phi4": (1/4!) sum_s f(s) phi(s)^4; other kinds rejected
PolyFunctional interaction_V(const std::string& kind, const FieldConfiguration& f);

// dS(phi) per site on interior rows (zero on boundary rows), computed from the
// unit-cutoff functional; for L0 this equals -P phi.
FieldConfiguration euler_lagrange(const GeneralizedLagrangian& lag,
                                  const FieldConfiguration& phi);

// L(f)[phi+psi] - L(f)[phi].  The cutoff must be identically 1 on the stencil
// closure of supp psi (one site in every lattice direction); the overload
// without a cutoff uses f = 1 everywhere.  The value is independent of the
// admissible cutoff.
double delta_L(const GeneralizedLagrangian& lag, const FieldConfiguration& psi,
               const FieldConfiguration& phi);
double delta_L(const GeneralizedLagrangian& lag, const FieldConfiguration& psi,
               const FieldConfiguration& phi, const FieldConfiguration& cutoff);

// L(f)^psi - L(f) as a functional of phi (the finite field-shift difference);
// for quadratic L this is a linear functional plus a constant.
PolyFunctional shift_difference(const GeneralizedLagrangian& lag,
                                const FieldConfiguration& cutoff,
                                const FieldConfiguration& psi);

}  // namespace paqft
