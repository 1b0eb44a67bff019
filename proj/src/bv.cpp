#include "paqft/bv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace paqft {

int parity(GenKind k) {
  switch (k) {
    case GenKind::field:
    case GenKind::gauge:
    case GenKind::ghost_antifield:
      return 0;
    case GenKind::antifield:
    case GenKind::ghost:
    case GenKind::gauge_antifield:
      return 1;
  }
  return 0;
}

int ghost_number(GenKind k) {
  switch (k) {
    case GenKind::field:
    case GenKind::gauge:
      return 0;
    case GenKind::antifield:
    case GenKind::gauge_antifield:
      return -1;
    case GenKind::ghost:
      return 1;
    case GenKind::ghost_antifield:
      return -2;
  }
  return 0;
}

int ghost_number(const GKey& k) {
  int g = 0;
  for (const GenId& x : k) g += ghost_number(x.kind);
  return g;
}

int key_parity(const GKey& k) {
  int p = 0;
  for (const GenId& x : k) p ^= parity(x.kind);
  return p;
}

int canon_sign(GKey& k) {
  int sign = 1;
  for (std::size_t i = 1; i < k.size(); ++i) {
    GenId e = k[i];
    std::size_t j = i;
    while (j > 0 && e < k[j - 1]) {
      if (parity(e.kind) && parity(k[j - 1].kind)) sign = -sign;
      k[j] = k[j - 1];
      --j;
    }
    k[j] = e;
  }
  for (std::size_t i = 1; i < k.size(); ++i)
    if (k[i] == k[i - 1] && parity(k[i].kind)) return 0;
  return sign;
}

GradedFunctional GradedFunctional::constant(cplx c) {
  GradedFunctional f;
  f.add_term({}, c);
  return f;
}

GradedFunctional GradedFunctional::generator(GenId g) {
  GradedFunctional f;
  f.add_term({g}, 1.0);
  return f;
}

GradedFunctional GradedFunctional::monomial(GKey k, cplx c) {
  GradedFunctional f;
  int s = canon_sign(k);
  if (s != 0) f.add_term(k, static_cast<double>(s) * c);
  return f;
}

double GradedFunctional::norm() const {
  double m = 0.0;
  for (const auto& [k, c] : terms) m = std::max(m, std::abs(c));
  return m;
}

void GradedFunctional::add_term(const GKey& canonical_key, cplx c) {
  if (c == cplx{0.0, 0.0}) return;
  auto it = terms.find(canonical_key);
  if (it == terms.end()) {
    terms.emplace(canonical_key, c);
    return;
  }
  it->second += c;
  if (it->second == cplx{0.0, 0.0}) terms.erase(it);
}

void GradedFunctional::add_scaled(const GradedFunctional& other, cplx s) {
  for (const auto& [k, c] : other.terms) add_term(k, c * s);
}

GradedFunctional GradedFunctional::scaled(cplx s) const {
  GradedFunctional f;
  f.add_scaled(*this, s);
  return f;
}

GradedFunctional gmul(const GradedFunctional& x, const GradedFunctional& y) {
  GradedFunctional out;
  for (const auto& [kx, cx] : x.terms)
    for (const auto& [ky, cy] : y.terms) {
      GKey k;
      k.reserve(kx.size() + ky.size());
      k.insert(k.end(), kx.begin(), kx.end());
      k.insert(k.end(), ky.begin(), ky.end());
      int s = canon_sign(k);
      if (s != 0) out.add_term(k, static_cast<double>(s) * cx * cy);
    }
  return out;
}

GradedFunctional dleft(const GradedFunctional& x, GenId g) {
  GradedFunctional out;
  const bool odd = parity(g.kind) != 0;
  for (const auto& [k, c] : x.terms) {
    int odd_before = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == g) {
        double s = (odd && (odd_before & 1)) ? -1.0 : 1.0;
        GKey rest;
        rest.reserve(k.size() - 1);
        rest.insert(rest.end(), k.begin(), k.begin() + i);
        rest.insert(rest.end(), k.begin() + i + 1, k.end());
        out.add_term(rest, s * c);
      }
      if (parity(k[i].kind)) ++odd_before;
    }
  }
  return out;
}

GradedFunctional dright(const GradedFunctional& x, GenId g) {
  GradedFunctional out;
  const bool odd = parity(g.kind) != 0;
  for (const auto& [k, c] : x.terms) {
    int odd_total = 0;
    for (const GenId& e : k) odd_total += parity(e.kind);
    int odd_before = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (k[i] == g) {
        int odd_after = odd_total - odd_before - parity(k[i].kind);
        double s = (odd && (odd_after & 1)) ? -1.0 : 1.0;
        GKey rest;
        rest.reserve(k.size() - 1);
        rest.insert(rest.end(), k.begin(), k.begin() + i);
        rest.insert(rest.end(), k.begin() + i + 1, k.end());
        out.add_term(rest, s * c);
      }
      if (parity(k[i].kind)) ++odd_before;
    }
  }
  return out;
}

cplx evaluate(const GradedFunctional& x, const FieldConfiguration& phi) {
  cplx acc = 0.0;
  for (const auto& [k, c] : x.terms) {
    cplx t = c;
    for (const GenId& g : k) {
      if (g.kind != GenKind::field)
        throw std::domain_error("evaluate: non-field generator in functional");
      t *= phi[g.index];
    }
    acc += t;
  }
  return acc;
}

GradedGeneratorSet GradedGeneratorSet::standard() {
  return GradedGeneratorSet{{
      {GenKind::field, "phi", 0, 0, std::nullopt},
      {GenKind::antifield, "phi_af", -1, 1, GenKind::field},
      {GenKind::gauge, "A", 0, 0, std::nullopt},
      {GenKind::gauge_antifield, "A_af", -1, 1, GenKind::gauge},
      {GenKind::ghost, "c", 1, 1, std::nullopt},
      {GenKind::ghost_antifield, "c_af", -2, 0, GenKind::ghost},
  }};
}

void GradedGeneratorSet::validate() const {
  for (const GeneratorSpecies& s : species) {
    if (s.gh != ghost_number(s.kind) || s.par != parity(s.kind))
      throw std::logic_error("generator species disagrees with the grading tables");
    if (!s.antifield_of) continue;
    bool found = false;
    for (const GeneratorSpecies& b : species) {
      if (b.kind != *s.antifield_of) continue;
      found = true;
      if (s.gh != -b.gh - 1)
        throw std::logic_error("antifield of ghost number m must carry -m-1");
      if (s.par != 1 - b.par)
        throw std::logic_error("antifield parity must be opposite to its base");
    }
    if (!found) throw std::logic_error("antifield pairing target missing");
  }
}

namespace {

const std::pair<GenKind, GenKind> kConjugatePairs[] = {
    {GenKind::field, GenKind::antifield},
    {GenKind::gauge, GenKind::gauge_antifield},
    {GenKind::ghost, GenKind::ghost_antifield},
};

std::set<int> indices_of_kind(const GradedFunctional& x, GenKind kind) {
  std::set<int> out;
  for (const auto& [k, c] : x.terms)
    for (const GenId& g : k)
      if (g.kind == kind) out.insert(g.index);
  return out;
}

}  // namespace

GradedFunctional koszul_delta(const GradedFunctional& x, const GradedFunctional& action) {
  GradedFunctional out;
  for (const auto& [fk, ak] : kConjugatePairs) {
    for (int s : indices_of_kind(x, ak)) {
      GradedFunctional dx = dright(x, GenId{ak, s});
      if (dx.empty()) continue;
      GradedFunctional ds = dleft(action, GenId{fk, s});
      if (ds.empty()) continue;
      out.add_scaled(gmul(dx, ds), 1.0);
    }
  }
  return out;
}

GradedFunctional antibracket(const GradedFunctional& x, const GradedFunctional& y) {
  GradedFunctional out;
  for (const auto& [fk, ak] : kConjugatePairs) {
    std::set<int> xf = indices_of_kind(x, fk), xa = indices_of_kind(x, ak);
    std::set<int> yf = indices_of_kind(y, fk), ya = indices_of_kind(y, ak);
    for (int s : xf) {
      if (!ya.count(s)) continue;
      out.add_scaled(gmul(dright(x, GenId{fk, s}), dleft(y, GenId{ak, s})), 1.0);
    }
    for (int s : xa) {
      if (!yf.count(s)) continue;
      out.add_scaled(gmul(dright(x, GenId{ak, s}), dleft(y, GenId{fk, s})), -1.0);
    }
  }
  return out;
}

GradedFunctional bv_laplacian(const GradedFunctional& x) {
  // right derivative in the antifield first, then left in the field: the
  // operator ordering under which time ordering exchanges delta with
  // delta - i hbar Laplacian for every monomial parity
  GradedFunctional out;
  for (int s : indices_of_kind(x, GenKind::antifield)) {
    GradedFunctional inner = dright(x, GenId{GenKind::antifield, s});
    if (inner.empty()) continue;
    out.add_scaled(dleft(inner, GenId{GenKind::field, s}), -1.0);
  }
  return out;
}

GradedFunctional scalar_action_S0(const KGOperator& kg) {
  const LatticeSpacetime& l = kg.lattice;
  const double idt2 = 1.0 / (l.dt * l.dt);
  const double idx2 = 1.0 / (l.dx * l.dx);
  const double m2 = kg.mass * kg.mass;
  GradedFunctional s;
  auto add = [&s](int p, int q, double w) {
    GKey k{GenId{GenKind::field, std::min(p, q)}, GenId{GenKind::field, std::max(p, q)}};
    s.add_term(k, -0.5 * w);
  };
  for (int t = 1; t + 1 < l.n_t; ++t) {
    for (int x = 0; x < l.n_x; ++x) {
      const int p = l.site(t, x);
      add(p, p, -2.0 * idt2 + 2.0 * idx2 + m2);
      add(p, l.site(t + 1, x), idt2);
      add(p, l.site(t - 1, x), idt2);
      add(p, l.site(t, x + 1), -idx2);
      add(p, l.site(t, x - 1), -idx2);
    }
  }
  return s;
}

// ---- gauge toys ----------------------------------------------------------

int GaugeToy::vertex(int i, int j) const {
  const int m = grid;
  return ((i % m + m) % m) * m + ((j % m + m) % m);
}

int GaugeToy::edge(int orientation, int i, int j) const {
  return orientation * grid * grid + vertex(i, j);
}

int GaugeToy::tail(int e) const { return e % (grid * grid); }

int GaugeToy::head(int e) const {
  const int v = e % (grid * grid);
  const int i = v / grid, j = v % grid;
  return e / (grid * grid) == 0 ? vertex(i + 1, j) : vertex(i, j + 1);
}

std::vector<int> GaugeToy::edges() const {
  std::vector<int> out(2 * grid * grid);
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<int> GaugeToy::carrier_vertices(GenId g) const {
  switch (g.kind) {
    case GenKind::ghost:
    case GenKind::ghost_antifield:
      return {g.index};
    case GenKind::gauge:
    case GenKind::gauge_antifield:
      return {tail(g.index), head(g.index)};
    default:
      return {};
  }
}

GradedFunctional GaugeToy::plaquette(int i, int j) const {
  GradedFunctional p;
  p.add_term({GenId{GenKind::gauge, edge(0, i, j)}}, 1.0);
  p.add_term({GenId{GenKind::gauge, edge(1, i + 1, j)}}, 1.0);
  p.add_term({GenId{GenKind::gauge, edge(0, i, j + 1)}}, -1.0);
  p.add_term({GenId{GenKind::gauge, edge(1, i, j)}}, -1.0);
  return p;
}

GradedFunctional GaugeToy::gauge_differential(int e) const {
  GradedFunctional d;
  d.add_term({GenId{GenKind::ghost, head(e)}}, 1.0);
  d.add_term({GenId{GenKind::ghost, tail(e)}}, -1.0);
  return d;
}

GradedFunctional GaugeToy::maxwell_eom(int e) const {
  const int v = tail(e);
  const int i = v / grid, j = v % grid;
  GradedFunctional out;
  if (e / (grid * grid) == 0) {
    out.add_scaled(plaquette(i, j), 1.0);
    out.add_scaled(plaquette(i, j - 1), -1.0);
  } else {
    out.add_scaled(plaquette(i, j), -1.0);
    out.add_scaled(plaquette(i - 1, j), 1.0);
  }
  return out;
}

GradedFunctional GaugeToy::divergence_antifield(int v) const {
  GradedFunctional out;
  for (int e : edges()) {
    if (head(e) == v) out.add_term({GenId{GenKind::gauge_antifield, e}}, 1.0);
    if (tail(e) == v) out.add_term({GenId{GenKind::gauge_antifield, e}}, -1.0);
  }
  return out;
}

GradedFunctional GaugeToy::extended_lagrangian(const std::vector<double>& f) const {
  if (static_cast<int>(f.size()) != grid * grid)
    throw std::invalid_argument("extended_lagrangian: cutoff size mismatch");
  GradedFunctional out;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const double fv = f[vertex(i, j)];
      if (fv == 0.0) continue;
      GradedFunctional fp = plaquette(i, j);
      out.add_scaled(gmul(fp, fp), -0.5 * fv);
    }
  for (int e : edges()) {
    const double fv = f[tail(e)];
    if (fv == 0.0) continue;
    out.add_scaled(gmul(gauge_differential(e),
                        GradedFunctional::generator(GenId{GenKind::gauge_antifield, e})),
                   fv);
  }
  return out;
}

GaugeToy make_scalar_toy() { return GaugeToy{ToyVariant::scalar, 0, {}}; }

GaugeToy make_abelian_toy(int m) {
  if (m < 2) throw std::invalid_argument("abelian toy needs a grid of at least 2x2");
  return GaugeToy{ToyVariant::abelian, m, {}};
}

GaugeToy make_lie_toy(std::vector<std::vector<std::vector<double>>> structure) {
  const int d = static_cast<int>(structure.size());
  for (const auto& m : structure)
    if (static_cast<int>(m.size()) != d ||
        std::any_of(m.begin(), m.end(),
                    [d](const auto& r) { return static_cast<int>(r.size()) != d; }))
      throw std::invalid_argument("structure constants must form a cube");
  // antisymmetry and Jacobi, the load-time contract
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        if (structure[a][b][c] != -structure[a][c][b])
          throw std::logic_error("structure constants must be antisymmetric");
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          double j = 0.0;
          for (int x = 0; x < d; ++x)
            j += structure[e][x][a] * structure[x][b][c] +
                 structure[e][x][b] * structure[x][c][a] +
                 structure[e][x][c] * structure[x][a][b];
          if (std::abs(j) > 1e-12)
            throw std::logic_error("structure constants violate the Jacobi identity");
        }
  return GaugeToy{ToyVariant::lie_algebra, 0, std::move(structure)};
}

GaugeToy make_su2_toy() {
  std::vector<std::vector<std::vector<double>>> eps(
      3, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
  eps[0][1][2] = eps[1][2][0] = eps[2][0][1] = 1.0;
  eps[0][2][1] = eps[2][1][0] = eps[1][0][2] = -1.0;
  return make_lie_toy(std::move(eps));
}

GradedFunctional ce_gamma(const GradedFunctional& x, const GaugeToy& toy) {
  GradedFunctional out;
  switch (toy.variant) {
    case ToyVariant::scalar:
      break;
    case ToyVariant::abelian:
      for (int e : indices_of_kind(x, GenKind::gauge)) {
        GradedFunctional dx = dright(x, GenId{GenKind::gauge, e});
        if (!dx.empty()) out.add_scaled(gmul(dx, toy.gauge_differential(e)), 1.0);
      }
      break;
    case ToyVariant::lie_algebra: {
      const int d = static_cast<int>(toy.structure.size());
      for (int a : indices_of_kind(x, GenKind::ghost)) {
        GradedFunctional dx = dright(x, GenId{GenKind::ghost, a});
        if (dx.empty()) continue;
        GradedFunctional rhs;  // -1/2 [c,c]^a
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c) {
            const double w = toy.structure[a][b][c];
            if (w == 0.0) continue;
            rhs.add_scaled(GradedFunctional::monomial(
                               {GenId{GenKind::ghost, b}, GenId{GenKind::ghost, c}}, 1.0),
                           -0.5 * w);
          }
        out.add_scaled(gmul(dx, rhs), 1.0);
      }
      break;
    }
  }
  return out;
}

GradedFunctional toy_koszul(const GradedFunctional& x, const GaugeToy& toy) {
  if (toy.variant != ToyVariant::abelian)
    throw std::invalid_argument("toy_koszul: only the abelian toy carries this sector");
  GradedFunctional out;
  for (int e : indices_of_kind(x, GenKind::gauge_antifield)) {
    GradedFunctional dx = dright(x, GenId{GenKind::gauge_antifield, e});
    if (!dx.empty()) out.add_scaled(gmul(dx, toy.maxwell_eom(e)), 1.0);
  }
  for (int v : indices_of_kind(x, GenKind::ghost_antifield)) {
    GradedFunctional dx = dright(x, GenId{GenKind::ghost_antifield, v});
    if (!dx.empty()) out.add_scaled(gmul(dx, toy.divergence_antifield(v)), 1.0);
  }
  return out;
}

// ---- quantum sector ------------------------------------------------------

namespace {

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

std::vector<int> field_positions(const GKey& k) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(k.size()); ++i)
    if (k[i].kind == GenKind::field) out.push_back(i);
  return out;
}

GKey remove_key_positions(const GKey& k, const std::vector<int>& pos) {
  GKey out;
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

void g_prune(GPoly& p) {
  for (auto it = p.terms.begin(); it != p.terms.end();)
    it = it->second.empty() ? p.terms.erase(it) : std::next(it);
}

// cross contractions over field positions only; the remainder keys are
// concatenated and re-canonicalized (odd generators may interleave)
void g_contract_pair(const GKey& ka, cplx ca, const GKey& kb, cplx cb,
                     const Eigen::MatrixXcd& ker, double factor, int e_base,
                     GPoly& out) {
  const std::vector<int> fpa = field_positions(ka), fpb = field_positions(kb);
  const cplx cab = ca * cb;
  const int mmax = std::min(fpa.size(), fpb.size());
  for (int m = 0; m <= mmax; ++m) {
    auto& slot = out.terms[e_base + m];
    std::vector<int> ai(m), bi(m);
    std::iota(ai.begin(), ai.end(), 0);
    do {
      std::iota(bi.begin(), bi.end(), 0);
      do {
        std::vector<int> perm = bi;
        do {
          cplx w = cab;
          for (int i = 0; i < m && w != cplx{0.0, 0.0}; ++i)
            w *= factor * ker(ka[fpa[ai[i]]].index, kb[fpb[perm[i]]].index);
          if (w == cplx{0.0, 0.0}) continue;
          std::vector<int> apos(m), bpos(m);
          for (int i = 0; i < m; ++i) apos[i] = fpa[ai[i]];
          for (int i = 0; i < m; ++i) bpos[i] = fpb[bi[i]];
          GKey rka = remove_key_positions(ka, apos);
          GKey rkb = remove_key_positions(kb, bpos);
          GKey merged;
          merged.reserve(rka.size() + rkb.size());
          merged.insert(merged.end(), rka.begin(), rka.end());
          merged.insert(merged.end(), rkb.begin(), rkb.end());
          int sg = canon_sign(merged);
          if (sg != 0) slot.add_term(merged, static_cast<double>(sg) * w);
        } while (m > 0 && std::next_permutation(perm.begin(), perm.end()));
      } while (m > 0 && next_subset(bi, static_cast<int>(fpb.size())));
    } while (m > 0 && next_subset(ai, static_cast<int>(fpa.size())));
  }
}

void g_self_contract(const GKey& k, cplx c, const Eigen::MatrixXcd& ker,
                     double factor, int e_base, GPoly& out) {
  const std::vector<int> fp = field_positions(k);
  std::vector<int> removed;

  auto rec = [&](auto&& self, std::size_t start, std::vector<int> rem, cplx w,
                 int m) -> void {
    if (w == cplx{0.0, 0.0}) return;
    (void)start;
    if (rem.empty()) {
      std::vector<int> sorted_removed = removed;
      std::sort(sorted_removed.begin(), sorted_removed.end());
      out.terms[e_base + m].add_term(remove_key_positions(k, sorted_removed), w);
      return;
    }
    const int i = rem.front();
    std::vector<int> rest(rem.begin() + 1, rem.end());
    self(self, start, rest, w, m);  // position i stays
    for (std::size_t jx = 0; jx < rest.size(); ++jx) {
      std::vector<int> rest2 = rest;
      rest2.erase(rest2.begin() + jx);
      removed.push_back(i);
      removed.push_back(rest[jx]);
      self(self, start, rest2, w * factor * ker(k[i].index, k[rest[jx]].index), m + 1);
      removed.pop_back();
      removed.pop_back();
    }
  };
  rec(rec, 0, fp, c, 0);
}

}  // namespace

GPoly graded_lift(const GradedFunctional& f) {
  GPoly p;
  if (!f.empty()) p.terms.emplace(0, f);
  return p;
}

GPoly graded_star(const GPoly& a, const GPoly& b, const QContext& ctx) {
  GPoly out;
  for (const auto& [ea, fa] : a.terms)
    for (const auto& [eb, fb] : b.terms)
      for (const auto& [ka, ca] : fa.terms)
        for (const auto& [kb, cb] : fb.terms)
          g_contract_pair(ka, ca, kb, cb, ctx.props.w, ctx.kappa, ea + eb, out);
  g_prune(out);
  return out;
}

GPoly graded_timeordered_mul(const GPoly& a, const GPoly& b, const QContext& ctx) {
  GPoly out;
  for (const auto& [ea, fa] : a.terms)
    for (const auto& [eb, fb] : b.terms)
      for (const auto& [ka, ca] : fa.terms)
        for (const auto& [kb, cb] : fb.terms)
          g_contract_pair(ka, ca, kb, cb, ctx.props.d_f, ctx.kappa_prime, ea + eb, out);
  g_prune(out);
  return out;
}

GPoly graded_time_order(const GPoly& a, const QContext& ctx) {
  GPoly out;
  for (const auto& [e, f] : a.terms)
    for (const auto& [k, c] : f.terms)
      g_self_contract(k, c, ctx.props.d_f, ctx.kappa_prime, e, out);
  g_prune(out);
  return out;
}

GPoly graded_time_order_inverse(const GPoly& a, const QContext& ctx) {
  GPoly out;
  for (const auto& [e, f] : a.terms)
    for (const auto& [k, c] : f.terms)
      g_self_contract(k, c, ctx.props.d_f, -ctx.kappa_prime, e, out);
  g_prune(out);
  return out;
}

GPoly koszul_delta(const GPoly& x, const GradedFunctional& action) {
  GPoly out;
  for (const auto& [e, f] : x.terms) {
    GradedFunctional d = koszul_delta(f, action);
    if (!d.empty()) out.terms.emplace(e, std::move(d));
  }
  return out;
}

GPoly bv_laplacian(const GPoly& x) {
  GPoly out;
  for (const auto& [e, f] : x.terms) {
    GradedFunctional d = bv_laplacian(f);
    if (!d.empty()) out.terms.emplace(e, std::move(d));
  }
  return out;
}

// ---- master equation checks ----------------------------------------------

CmeReport check_cme(const GradedFunctional& l_ext, const std::vector<double>& f,
                    const GaugeToy& toy) {
  GradedFunctional br = antibracket(l_ext, l_ext);
  CmeReport r;
  const bool fconst =
      std::all_of(f.begin(), f.end(), [&f](double v) { return v == f.front(); });
  if (fconst) {
    r.bracket_zero = br.empty();
    r.residual = br.norm();
    r.pass = br.empty();
    r.detail = "constant cutoff: {L,L} vanishes identically";
    return r;
  }
  std::set<int> jumps;
  for (int e : toy.edges()) {
    if (f[toy.tail(e)] != f[toy.head(e)]) {
      jumps.insert(toy.tail(e));
      jumps.insert(toy.head(e));
    }
  }
  double bad = 0.0;
  for (const auto& [k, c] : br.terms) {
    for (const GenId& g : k) {
      bool touches = false;
      for (int v : toy.carrier_vertices(g))
        if (jumps.count(v)) touches = true;
      if (!touches) bad = std::max(bad, std::abs(c));
    }
  }
  r.bracket_zero = br.empty();
  r.residual = bad;
  r.pass = bad == 0.0;
  r.detail = "cutoff with jumps: every {L,L} term touches the jump ring";
  return r;
}

CmeReport check_qme(const GradedFunctional& action) {
  GradedFunctional br = antibracket(action, action);
  GradedFunctional lap = bv_laplacian(action);
  CmeReport r;
  r.bracket_zero = br.empty();
  r.residual = std::max(0.5 * br.norm(), lap.norm());
  r.pass = br.empty() && lap.empty();
  r.detail = "1/2 {S,S} and the Laplacian term vanish identically";
  return r;
}

}  // namespace paqft
