#include "paqft/functional.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace paqft {

PolyFunctional PolyFunctional::constant(cplx c) {
  PolyFunctional f;
  if (c != cplx{0.0, 0.0}) f.terms.emplace(Key{}, c);
  return f;
}

PolyFunctional PolyFunctional::field(int site) {
  PolyFunctional f;
  f.terms.emplace(Key{site}, cplx{1.0, 0.0});
  return f;
}

PolyFunctional PolyFunctional::monomial(Key sites, cplx c) {
  std::sort(sites.begin(), sites.end());
  PolyFunctional f;
  f.add_term(sites, c);
  return f;
}

PolyFunctional PolyFunctional::linear(const std::vector<double>& kernel) {
  PolyFunctional f;
  for (int i = 0; i < static_cast<int>(kernel.size()); ++i)
    if (kernel[i] != 0.0) f.terms.emplace(Key{i}, cplx{kernel[i], 0.0});
  return f;
}

PolyFunctional PolyFunctional::linear(const std::vector<cplx>& kernel) {
  PolyFunctional f;
  for (int i = 0; i < static_cast<int>(kernel.size()); ++i)
    if (kernel[i] != cplx{0.0, 0.0}) f.terms.emplace(Key{i}, kernel[i]);
  return f;
}

int PolyFunctional::max_degree() const {
  int d = 0;
  for (const auto& [k, c] : terms) d = std::max(d, static_cast<int>(k.size()));
  return d;
}

double PolyFunctional::norm() const {
  double m = 0;
  for (const auto& [k, c] : terms) m = std::max(m, std::abs(c));
  return m;
}

cplx PolyFunctional::evaluate(const FieldConfiguration& phi) const {
  cplx s{0.0, 0.0};
  for (const auto& [k, c] : terms) {
    cplx p = c;
    for (int site : k) p *= phi[site];
    s += p;
  }
  return s;
}

PolyFunctional PolyFunctional::derivative(int site) const {
  PolyFunctional r;
  for (const auto& [k, c] : terms) {
    auto it = std::lower_bound(k.begin(), k.end(), site);
    if (it == k.end() || *it != site) continue;
    auto mult = static_cast<double>(std::count(it, k.end(), site));
    Key nk;
    nk.reserve(k.size() - 1);
    nk.insert(nk.end(), k.begin(), it);
    nk.insert(nk.end(), it + 1, k.end());
    r.add_term(nk, c * mult);
  }
  return r;
}

PolyFunctional PolyFunctional::shifted(const FieldConfiguration& phi) const {
  // expand prod_i (phi(p_i) + field(p_i)) over subsets of each key
  PolyFunctional r;
  for (const auto& [k, c] : terms) {
    const int n = static_cast<int>(k.size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      cplx coeff = c;
      Key nk;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i))
          coeff *= phi[k[i]];
        else
          nk.push_back(k[i]);
      }
      if (coeff != cplx{0.0, 0.0}) r.add_term(nk, coeff);
    }
  }
  return r;
}

std::vector<int> PolyFunctional::support() const {
  std::set<int> s;
  for (const auto& [k, c] : terms) s.insert(k.begin(), k.end());
  return {s.begin(), s.end()};
}

std::vector<Point> PolyFunctional::support_points(const LatticeSpacetime& l) const {
  std::vector<Point> out;
  for (int s : support()) out.push_back(l.point(s));
  return out;
}

void PolyFunctional::add_term(const Key& sorted_sites, cplx c) {
  if (c == cplx{0.0, 0.0}) return;
  auto it = terms.find(sorted_sites);
  if (it == terms.end()) {
    terms.emplace(sorted_sites, c);
  } else {
    it->second += c;
    if (it->second == cplx{0.0, 0.0}) terms.erase(it);
  }
}

void PolyFunctional::add_scaled(const PolyFunctional& other, cplx s) {
  for (const auto& [k, c] : other.terms) add_term(k, c * s);
}

PolyFunctional PolyFunctional::scaled(cplx s) const {
  PolyFunctional r;
  if (s == cplx{0.0, 0.0}) return r;
  for (const auto& [k, c] : terms) {
    cplx v = c * s;
    if (v != cplx{0.0, 0.0}) r.terms.emplace(k, v);
  }
  return r;
}

PolyFunctional pointwise_mul(const PolyFunctional& a, const PolyFunctional& b) {
  PolyFunctional r;
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      PolyFunctional::Key k;
      k.reserve(ka.size() + kb.size());
      std::merge(ka.begin(), ka.end(), kb.begin(), kb.end(), std::back_inserter(k));
      r.add_term(k, ca * cb);
    }
  return r;
}

bool check_additivity(const PolyFunctional& f, const FieldConfiguration& phi,
                      const FieldConfiguration& chi, const FieldConfiguration& psi,
                      double tol) {
  const size_t n = chi.size();
  if (phi.size() != n || psi.size() != n)
    throw std::invalid_argument("check_additivity: configuration size mismatch");
  for (size_t i = 0; i < n; ++i)
    if (phi[i] != 0.0 && psi[i] != 0.0)
      throw std::invalid_argument("check_additivity: variation sets overlap");
  FieldConfiguration pc(n), cp(n), pcp(n);
  for (size_t i = 0; i < n; ++i) {
    pc[i] = phi[i] + chi[i];
    cp[i] = chi[i] + psi[i];
    pcp[i] = phi[i] + chi[i] + psi[i];
  }
  cplx lhs = f.evaluate(pcp);
  cplx rhs = f.evaluate(pc) - f.evaluate(chi) + f.evaluate(cp);
  return std::abs(lhs - rhs) <= tol;
}

}  // namespace paqft
