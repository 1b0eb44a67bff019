#pragma once
// Formal power series in the coupling, truncated at a fixed order, whose
// coefficients are exact Laurent polynomials in hbar over an arbitrary
// coefficient space C.  hbar is never truncated: per coupling order only
// finitely many contractions occur, so the hbar dependence stays polynomial.

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace paqft {

using cplx = std::complex<double>;

// Per-coefficient-type operations the series algebra needs.  Specialized for
// cplx here and for the functional types in their own headers.
template <class C>
struct CoeffOps;

template <>
struct CoeffOps<cplx> {
  static cplx zero() { return {0.0, 0.0}; }
  static cplx unit() { return {1.0, 0.0}; }
  static bool is_zero(const cplx& c) { return c == cplx{0.0, 0.0}; }
  static void add_scaled(cplx& a, const cplx& b, cplx s) { a += b * s; }
  static cplx mul(const cplx& a, const cplx& b) { return a * b; }
  static double norm(const cplx& c) { return std::abs(c); }
  static std::optional<cplx> as_scalar(const cplx& c) { return c; }
};

// Laurent polynomial in hbar: exponent -> coefficient, zero terms never stored.
template <class C>
struct HbarPoly {
  std::map<int, C> terms;

  bool empty() const { return terms.empty(); }

  void add_scaled(const HbarPoly& other, cplx s, int exp_shift = 0) {
    for (const auto& [e, c] : other.terms) {
      auto it = terms.find(e + exp_shift);
      if (it == terms.end()) it = terms.emplace(e + exp_shift, CoeffOps<C>::zero()).first;
      CoeffOps<C>::add_scaled(it->second, c, s);
      if (CoeffOps<C>::is_zero(it->second)) terms.erase(it);
    }
  }

  void add_term(int e, const C& c, cplx s = {1.0, 0.0}) {
    auto it = terms.find(e);
    if (it == terms.end()) it = terms.emplace(e, CoeffOps<C>::zero()).first;
    CoeffOps<C>::add_scaled(it->second, c, s);
    if (CoeffOps<C>::is_zero(it->second)) terms.erase(it);
  }

  HbarPoly scaled(cplx s, int exp_shift = 0) const {
    HbarPoly r;
    r.add_scaled(*this, s, exp_shift);
    return r;
  }

  double norm() const {
    double m = 0;
    for (const auto& [e, c] : terms) m = std::max(m, CoeffOps<C>::norm(c));
    return m;
  }

  static HbarPoly unit() {
    HbarPoly r;
    r.terms.emplace(0, CoeffOps<C>::unit());
    return r;
  }

  static HbarPoly single(int e, C c) {
    HbarPoly r;
    if (!CoeffOps<C>::is_zero(c)) r.terms.emplace(e, std::move(c));
    return r;
  }
};

// coefficient-wise product lifted to hbar polynomials; exponents add
template <class C>
HbarPoly<C> hbar_mul(const HbarPoly<C>& a, const HbarPoly<C>& b) {
  HbarPoly<C> r;
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms)
      r.add_term(ea + eb, CoeffOps<C>::mul(ca, cb));
  return r;
}

// Truncated series in the coupling; coeffs[k] multiplies lambda^k.
template <class C>
struct FormalSeries {
  int order = 0;
  std::vector<HbarPoly<C>> coeffs;  // size order+1

  FormalSeries() : coeffs(1) {}
  explicit FormalSeries(int k) : order(k), coeffs(k + 1) {
    if (k < 0) throw std::invalid_argument("series: negative order");
  }

  static FormalSeries one(int k) {
    FormalSeries s(k);
    s.coeffs[0] = HbarPoly<C>::unit();
    return s;
  }

  double norm() const {
    double m = 0;
    for (const auto& h : coeffs) m = std::max(m, h.norm());
    return m;
  }

  void add_scaled(const FormalSeries& other, cplx s) {
    if (other.order != order) throw std::invalid_argument("series: order mismatch");
    for (int k = 0; k <= order; ++k) coeffs[k].add_scaled(other.coeffs[k], s);
  }
};

// HMul: callable (const HbarPoly<C>&, const HbarPoly<C>&) -> HbarPoly<C>.
// The product is supplied per call site because deformation products raise
// hbar powers and are not plain coefficient multiplication.
template <class C, class HMul>
FormalSeries<C> series_mul(const FormalSeries<C>& a, const FormalSeries<C>& b, HMul&& mul) {
  if (a.order != b.order) throw std::invalid_argument("series_mul: order mismatch");
  FormalSeries<C> r(a.order);
  for (int i = 0; i <= a.order; ++i) {
    if (a.coeffs[i].empty()) continue;
    for (int j = 0; i + j <= a.order; ++j) {
      if (b.coeffs[j].empty()) continue;
      r.coeffs[i + j].add_scaled(mul(a.coeffs[i], b.coeffs[j]), 1.0);
    }
  }
  return r;
}

// exp of a series with vanishing constant term; terminates at the truncation order
template <class C, class HMul>
FormalSeries<C> series_exp(const FormalSeries<C>& a, HMul&& mul) {
  if (!a.coeffs[0].empty())
    throw std::invalid_argument("series_exp: nonzero constant term");
  FormalSeries<C> r = FormalSeries<C>::one(a.order);
  FormalSeries<C> p = FormalSeries<C>::one(a.order);
  double fact = 1.0;
  for (int n = 1; n <= a.order; ++n) {
    p = series_mul(p, a, mul);
    fact *= n;
    r.add_scaled(p, 1.0 / fact);
  }
  return r;
}

// Inverse of a series whose constant term is (scalar) * hbar^k * unit with the
// scalar invertible; two-sided since such a term is central.
template <class C, class HMul>
FormalSeries<C> series_inv(const FormalSeries<C>& a, HMul&& mul) {
  const auto& c0 = a.coeffs[0];
  if (c0.terms.size() != 1)
    throw std::invalid_argument("series_inv: constant term not scalar*hbar^k*unit");
  const auto& [e0, u0] = *c0.terms.begin();
  std::optional<cplx> z = CoeffOps<C>::as_scalar(u0);
  if (!z || *z == cplx{0.0, 0.0})
    throw std::invalid_argument("series_inv: constant term not invertible");
  HbarPoly<C> inv0 = HbarPoly<C>::single(-e0, CoeffOps<C>::unit()).scaled(1.0 / *z);

  // a = a0 (1 + a0^-1 r), r the positive-order part: invert by Neumann series
  FormalSeries<C> r(a.order);
  for (int k = 1; k <= a.order; ++k)
    r.coeffs[k].add_scaled(mul(inv0, a.coeffs[k]), -1.0);

  FormalSeries<C> acc = FormalSeries<C>::one(a.order);
  FormalSeries<C> pw = FormalSeries<C>::one(a.order);
  for (int n = 1; n <= a.order; ++n) {
    pw = series_mul(pw, r, mul);
    acc.add_scaled(pw, 1.0);
  }
  FormalSeries<C> out(a.order);
  for (int k = 0; k <= a.order; ++k)
    out.coeffs[k].add_scaled(mul(acc.coeffs[k], inv0), 1.0);
  return out;
}

}  // namespace paqft
