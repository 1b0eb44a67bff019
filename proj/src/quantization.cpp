#include "paqft/quantization.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <numeric>
#include <vector>

namespace paqft {

namespace {

using Key = PolyFunctional::Key;

// next size-m index subset of {0..n-1} in lexicographic order
bool next_subset(std::vector<int>& s, int n) {
  const int m = static_cast<int>(s.size());
  for (int i = m - 1; i >= 0; --i) {
    if (s[i] < n - (m - i)) {
      ++s[i];
      for (int j = i + 1; j < m; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

Key remove_positions(const Key& k, const std::vector<int>& pos) {
  Key out;
  out.reserve(k.size() - pos.size());
  std::size_t pi = 0;
  for (int i = 0; i < static_cast<int>(k.size()); ++i) {
    if (pi < pos.size() && pos[pi] == i) {
      ++pi;
      continue;
    }
    out.push_back(k[i]);
  }
  return out;
}

Key merge_keys(const Key& a, const Key& b) {
  Key out(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), out.begin());
  return out;
}

void prune_empty(QPoly& p) {
  for (auto it = p.terms.begin(); it != p.terms.end();)
    it = it->second.empty() ? p.terms.erase(it) : std::next(it);
}

// run-length encoding of a sorted key: strictly increasing sites with
// positive multiplicities
struct Runs {
  std::vector<int> site, mult;
};

Runs rle(const Key& k) {
  Runs r;
  for (std::size_t i = 0; i < k.size();) {
    std::size_t j = i;
    while (j < k.size() && k[j] == k[i]) ++j;
    r.site.push_back(k[i]);
    r.mult.push_back(static_cast<int>(j - i));
    i = j;
  }
  return r;
}

// All cross contractions of one term pair: an m-subset of the left key's
// positions matched bijectively to m distinct positions of the right key,
// each matched pair weighted by factor * ker(left site, right site).  Summing
// matchings (not ordered step sequences) absorbs the exponential's 1/m!.
// Repeated sites are distinct positions, which is exactly the multiplicity
// rule of the functional derivative; matchings that only permute equal sites
// carry equal weights, so they are enumerated once per count pattern
// {c_ij pairs between left site group i and right site group j} and weighted
// by the exact number of matchings realizing the pattern,
//   prod_i a_i!/(a_i-r_i)! * prod_j b_j!/(b_j-s_j)! / prod_ij c_ij!
// (a, b the group multiplicities, r, s the matched row and column totals).
void contract_pair(const Key& ka, cplx ca, const Key& kb, cplx cb,
                   const Eigen::MatrixXcd& ker, double factor, int e_base,
                   QPoly& out) {
  const cplx cab = ca * cb;
  const Runs ra = rle(ka), rb = rle(kb);
  const int ga = static_cast<int>(ra.site.size());
  const int gb = static_cast<int>(rb.site.size());
  if (ga == 0 || gb == 0) {
    out.terms[e_base].add_term(merge_keys(ka, kb), cab);
    return;
  }
  std::vector<int> arem = ra.mult, brem = rb.mult, cmat(ga * gb, 0);
  Key res;
  res.reserve(ka.size() + kb.size());

  auto emit = [&](int m, double count) {
    cplx w = cab;
    for (int i = 0; i < ga; ++i)
      for (int j = 0; j < gb; ++j)
        for (int c = cmat[i * gb + j]; c-- > 0;)
          w *= factor * ker(ra.site[i], rb.site[j]);
    if (count != 1.0) w *= count;
    if (w == cplx{0.0, 0.0}) return;
    res.clear();
    int i = 0, j = 0;
    while (i < ga || j < gb) {
      const bool take_a = j == gb || (i < ga && ra.site[i] <= rb.site[j]);
      if (take_a) {
        res.insert(res.end(), arem[i], ra.site[i]);
        ++i;
      } else {
        res.insert(res.end(), brem[j], rb.site[j]);
        ++j;
      }
    }
    out.terms[e_base + m].add_term(res, w);
  };

  // cell (i,j) of the count matrix holds c_ij; the multiplicity budgets in
  // arem/brem shrink along the path, so at a leaf they are the residual key
  auto rec = [&](auto&& self, int cell, int m, double count) -> void {
    if (cell == ga * gb) {
      emit(m, count);
      return;
    }
    const int i = cell / gb, j = cell % gb;
    const int ar0 = arem[i], br0 = brem[j];
    self(self, cell + 1, m, count);
    const int cmax = std::min(ar0, br0);
    double cc = count;
    for (int c = 1; c <= cmax; ++c) {
      // falling(ar0,c) * falling(br0,c) / c!, an exact integer in double
      cc = cc * static_cast<double>(ar0 - c + 1) *
           static_cast<double>(br0 - c + 1) / static_cast<double>(c);
      cmat[cell] = c;
      arem[i] = ar0 - c;
      brem[j] = br0 - c;
      self(self, cell + 1, m + c, cc);
    }
    cmat[cell] = 0;
    arem[i] = ar0;
    brem[j] = br0;
  };
  rec(rec, 0, 0, 1.0);
}

// as contract_pair, but accumulating ker(a,b) and ker(b,a) weight streams in
// the same multiplication order and adding their difference; equal kernel
// values then cancel to exact zero term by term
void contract_pair_comm(const Key& ka, cplx ca, const Key& kb, cplx cb,
                        const Eigen::MatrixXcd& ker, double factor, int e_base,
                        QPoly& out) {
  const int na = static_cast<int>(ka.size()), nb = static_cast<int>(kb.size());
  const cplx cab = ca * cb;
  const int mmax = std::min(na, nb);
  for (int m = 1; m <= mmax; ++m) {
    auto& slot = out.terms[e_base + m];
    std::vector<int> asel(m), bsel(m);
    std::iota(asel.begin(), asel.end(), 0);
    do {
      std::iota(bsel.begin(), bsel.end(), 0);
      do {
        std::vector<int> perm = bsel;
        do {
          cplx w1 = cab, w2 = cab;
          for (int i = 0; i < m; ++i) {
            w1 *= factor * ker(ka[asel[i]], kb[perm[i]]);
            w2 *= factor * ker(kb[perm[i]], ka[asel[i]]);
          }
          cplx d = w1 - w2;
          if (d != cplx{0.0, 0.0})
            slot.add_term(merge_keys(remove_positions(ka, asel),
                                     remove_positions(kb, bsel)),
                          d);
        } while (std::next_permutation(perm.begin(), perm.end()));
      } while (next_subset(bsel, nb));
    } while (next_subset(asel, na));
  }
}

// all sets of m disjoint unordered position pairs of one key, every pair
// weighted by factor * ker(site_i, site_j); kept positions form the residual
// key (a subsequence of a sorted key stays sorted)
void self_contract_term(const Key& k, cplx c, const Eigen::MatrixXcd& ker,
                        double factor, int e_base, QPoly& out) {
  const int n = static_cast<int>(k.size());
  std::vector<int> rem(n);
  std::iota(rem.begin(), rem.end(), 0);
  Key kept;
  kept.reserve(n);

  auto rec = [&](auto&& self, std::vector<int>& r, cplx w, int m) -> void {
    if (w == cplx{0.0, 0.0}) return;
    if (r.empty()) {
      out.terms[e_base + m].add_term(kept, w);
      return;
    }
    const int i = r.front();
    std::vector<int> rest(r.begin() + 1, r.end());
    kept.push_back(k[i]);
    self(self, rest, w, m);
    kept.pop_back();
    for (std::size_t jx = 0; jx < rest.size(); ++jx) {
      std::vector<int> rest2 = rest;
      rest2.erase(rest2.begin() + jx);
      self(self, rest2, w * factor * ker(k[i], k[rest[jx]]), m + 1);
    }
  };
  rec(rec, rem, c, 0);
}

QPoly contract_product(const QPoly& a, const QPoly& b, const Eigen::MatrixXcd& ker,
                       double factor) {
  QPoly out;
  for (const auto& [ea, fa] : a.terms)
    for (const auto& [eb, fb] : b.terms)
      for (const auto& [ka, ca] : fa.terms)
        for (const auto& [kb, cb] : fb.terms)
          contract_pair(ka, ca, kb, cb, ker, factor, ea + eb, out);
  prune_empty(out);
  return out;
}

QPoly self_exponential(const QPoly& a, const Eigen::MatrixXcd& ker, double factor) {
  QPoly out;
  for (const auto& [e, f] : a.terms)
    for (const auto& [k, c] : f.terms) self_contract_term(k, c, ker, factor, e, out);
  prune_empty(out);
  return out;
}

}  // namespace

QPoly lift(const PolyFunctional& f) {
  QPoly p;
  if (!f.empty()) p.terms.emplace(0, f);
  return p;
}

PolyFunctional peierls_bracket(const PolyFunctional& f, const PolyFunctional& g,
                               const QContext& ctx) {
  std::vector<std::pair<int, PolyFunctional>> df, dg;
  for (int s : f.support()) {
    PolyFunctional d = f.derivative(s);
    if (!d.empty()) df.emplace_back(s, std::move(d));
  }
  for (int s : g.support()) {
    PolyFunctional d = g.derivative(s);
    if (!d.empty()) dg.emplace_back(s, std::move(d));
  }
  PolyFunctional out;
  for (const auto& [a, da] : df)
    for (const auto& [b, db] : dg) {
      const double dl = ctx.props.delta(a, b);
      if (dl == 0.0) continue;
      out.add_scaled(pointwise_mul(da, db), dl);
    }
  return out;
}

QPoly star(const QPoly& a, const QPoly& b, const QContext& ctx) {
  return contract_product(a, b, ctx.props.w, ctx.kappa);
}

QPoly star(const PolyFunctional& f, const PolyFunctional& g, const QContext& ctx) {
  return star(lift(f), lift(g), ctx);
}

QPoly star_commutator(const QPoly& a, const QPoly& b, const QContext& ctx) {
  QPoly out;
  for (const auto& [ea, fa] : a.terms)
    for (const auto& [eb, fb] : b.terms)
      for (const auto& [ka, ca] : fa.terms)
        for (const auto& [kb, cb] : fb.terms)
          contract_pair_comm(ka, ca, kb, cb, ctx.props.w, ctx.kappa, ea + eb, out);
  prune_empty(out);
  return out;
}

QPoly time_order(const QPoly& a, const QContext& ctx) {
  return self_exponential(a, ctx.props.d_f, ctx.kappa_prime);
}

QPoly time_order(const PolyFunctional& f, const QContext& ctx) {
  return time_order(lift(f), ctx);
}

QPoly time_order_inverse(const QPoly& a, const QContext& ctx) {
  return self_exponential(a, ctx.props.d_f, -ctx.kappa_prime);
}

QPoly timeordered_mul(const QPoly& a, const QPoly& b, const QContext& ctx) {
  return contract_product(a, b, ctx.props.d_f, ctx.kappa_prime);
}

QPoly timeordered_mul(const PolyFunctional& f, const PolyFunctional& g,
                      const QContext& ctx) {
  return timeordered_mul(lift(f), lift(g), ctx);
}

}  // namespace paqft
