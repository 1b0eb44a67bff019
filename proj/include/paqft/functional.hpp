#pragma once
// Polynomial functionals of lattice field configurations, stored as sparse
// symmetric point-multiset kernels: key = sorted vector of site ids (size =
// degree), value = complex coefficient.  Pairings are plain sums over sites;
// no volume weights anywhere.

#include <complex>
#include <map>
#include <vector>

#include "paqft/lattice.hpp"
#include "paqft/series.hpp"

namespace paqft {

// total field assignment, indexed by site id
using FieldConfiguration = std::vector<double>;

class PolyFunctional {
 public:
  using Key = std::vector<int>;  // sorted site ids
  std::map<Key, cplx> terms;     // no zero coefficients stored

  PolyFunctional() = default;

  static PolyFunctional zero() { return {}; }
  static PolyFunctional unit() { return constant(1.0); }
  static PolyFunctional constant(cplx c);
  static PolyFunctional field(int site);                        // phi(site)
  static PolyFunctional monomial(Key sites, cplx c);            // c * prod phi
  static PolyFunctional linear(const std::vector<double>& kernel);
  static PolyFunctional linear(const std::vector<cplx>& kernel);

  bool empty() const { return terms.empty(); }
  int max_degree() const;
  double norm() const;  // max |coefficient|

  cplx evaluate(const FieldConfiguration& phi) const;
  PolyFunctional derivative(int site) const;  // multiplicity rule
  PolyFunctional shifted(const FieldConfiguration& phi) const;  // F^phi = F(phi + .)

  // union of sites occurring in any kernel key
  std::vector<int> support() const;
  std::vector<Point> support_points(const LatticeSpacetime& l) const;

  void add_term(const Key& sorted_sites, cplx c);
  void add_scaled(const PolyFunctional& other, cplx s);
  PolyFunctional scaled(cplx s) const;
};

PolyFunctional pointwise_mul(const PolyFunctional& a, const PolyFunctional& b);

// F(phi+chi+psi) = F(phi+chi) - F(chi) + F(chi+psi) within tol; rejects inputs
// whose variation sets (nonzero sites of phi and psi) overlap
bool check_additivity(const PolyFunctional& f, const FieldConfiguration& phi,
                      const FieldConfiguration& chi, const FieldConfiguration& psi,
                      double tol = 1e-10);

template <>
struct CoeffOps<PolyFunctional> {
  static PolyFunctional zero() { return {}; }
  static PolyFunctional unit() { return PolyFunctional::unit(); }
  static bool is_zero(const PolyFunctional& f) { return f.empty(); }
  static void add_scaled(PolyFunctional& a, const PolyFunctional& b, cplx s) {
    a.add_scaled(b, s);
  }
  static PolyFunctional mul(const PolyFunctional& a, const PolyFunctional& b) {
    return pointwise_mul(a, b);
  }
  static double norm(const PolyFunctional& f) { return f.norm(); }
  static std::optional<cplx> as_scalar(const PolyFunctional& f) {
    if (f.terms.size() != 1 || !f.terms.begin()->first.empty()) return std::nullopt;
    return f.terms.begin()->second;
  }
};

}  // namespace paqft
