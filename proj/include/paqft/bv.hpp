#pragma once
// Graded functionals with ghosts and antifields.  One normative sign
// convention, with the nilpotency suite as arbiter:
//   - generator parities: field 0, antifield 1, gauge 0, ghost 1,
//     gauge-antifield 1, ghost-antifield 0;
//   - keys are kept canonically sorted; swapping adjacent odd generators
//     flips the sign, a repeated odd generator kills the term;
//   - left derivative at position p picks up (-1)^(odd generators before p),
//     right derivative (-1)^(odd generators after p), odd generators only;
//   - {phi(p), antifield(q)} = +delta_pq;
//   - the BV Laplacian is -sum_p d_left(field p) d_left(antifield p).

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "paqft/quantization.hpp"

namespace paqft {

enum class GenKind : int {
  field,
  antifield,
  gauge,
  ghost,
  gauge_antifield,
  ghost_antifield,
};

int parity(GenKind k);        // 0 even, 1 odd
int ghost_number(GenKind k);  // field 0, antifield -1, gauge 0, ghost 1,
                              // gauge-antifield -1, ghost-antifield -2

struct GenId {
  GenKind kind;
  int index;  // lattice site, encoded toy edge/vertex, or Lie basis index
  friend bool operator==(const GenId&, const GenId&) = default;
  friend auto operator<=>(const GenId&, const GenId&) = default;
};

using GKey = std::vector<GenId>;

int ghost_number(const GKey& k);
int key_parity(const GKey& k);

// sorts k in place; returns the Koszul sign, or 0 if an odd generator repeats
int canon_sign(GKey& k);

class GradedFunctional {
 public:
  std::map<GKey, cplx> terms;  // canonical keys, no zero coefficients

  GradedFunctional() = default;

  static GradedFunctional zero() { return {}; }
  static GradedFunctional unit() { return constant(1.0); }
  static GradedFunctional constant(cplx c);
  static GradedFunctional generator(GenId g);
  static GradedFunctional monomial(GKey k, cplx c);  // canonicalizes, applies sign

  bool empty() const { return terms.empty(); }
  double norm() const;

  void add_term(const GKey& canonical_key, cplx c);
  void add_scaled(const GradedFunctional& other, cplx s);
  GradedFunctional scaled(cplx s) const;
};

GradedFunctional gmul(const GradedFunctional& x, const GradedFunctional& y);
GradedFunctional dleft(const GradedFunctional& x, GenId g);
GradedFunctional dright(const GradedFunctional& x, GenId g);

// product of field values; rejects keys carrying any non-field generator
cplx evaluate(const GradedFunctional& x, const FieldConfiguration& phi);

template <>
struct CoeffOps<GradedFunctional> {
  static GradedFunctional zero() { return {}; }
  static GradedFunctional unit() { return GradedFunctional::unit(); }
  static bool is_zero(const GradedFunctional& f) { return f.empty(); }
  static void add_scaled(GradedFunctional& a, const GradedFunctional& b, cplx s) {
    a.add_scaled(b, s);
  }
  static GradedFunctional mul(const GradedFunctional& a, const GradedFunctional& b) {
    return gmul(a, b);
  }
  static double norm(const GradedFunctional& f) { return f.norm(); }
  static std::optional<cplx> as_scalar(const GradedFunctional& f) {
    if (f.terms.size() != 1 || !f.terms.begin()->first.empty()) return std::nullopt;
    return f.terms.begin()->second;
  }
};

// generator species table: name, ghost number, parity, antifield pairing;
// the antifield of a ghost-number-m generator has ghost number -m-1 and
// opposite parity (validated)
struct GeneratorSpecies {
  GenKind kind;
  std::string name;
  int gh;
  int par;
  std::optional<GenKind> antifield_of;
};

struct GradedGeneratorSet {
  std::vector<GeneratorSpecies> species;
  static GradedGeneratorSet standard();
  void validate() const;  // throws std::logic_error on a broken pairing
};

// ---- differentials -------------------------------------------------------

// delta_S X = sum over conjugate pairs of (d_right X / d antifield) * (d_left
// S / d field); for the free scalar action this inserts -(P phi)(p) against
// each antifield.  X must stay inside the generator sector of S.
GradedFunctional koszul_delta(const GradedFunctional& x, const GradedFunctional& action);

GradedFunctional antibracket(const GradedFunctional& x, const GradedFunctional& y);

// -sum_p d_left(field p) d_left(antifield p)
GradedFunctional bv_laplacian(const GradedFunctional& x);

// the free scalar action as a graded functional: -1/2 sum phi P phi with the
// stencil rows of the interior (boundary time rows carry no equation)
GradedFunctional scalar_action_S0(const KGOperator& kg);

// ---- gauge toys ----------------------------------------------------------

// scalar: no symmetry (gamma = 0).  abelian: link field A on the edges of an
// M x M periodic grid, ghost c on vertices, sigma(xi)A = d xi; generators are
// indexed edge = orientation*M*M + vertex with orientation 0 horizontal
// (head (i+1,j)) and 1 vertical (head (i,j+1)).  lie_algebra: pure
// Chevalley-Eilenberg ghosts c^a for structure constants verified against the
// Jacobi identity at construction.
enum class ToyVariant { scalar, abelian, lie_algebra };

struct GaugeToy {
  ToyVariant variant = ToyVariant::scalar;
  int grid = 0;  // abelian: M
  // lie_algebra: f[a][b][c] is the a-component of [e_b, e_c]
  std::vector<std::vector<std::vector<double>>> structure;

  int vertex(int i, int j) const;
  int edge(int orientation, int i, int j) const;
  int head(int e) const;
  int tail(int e) const;
  std::vector<int> edges() const;
  std::vector<int> carrier_vertices(GenId g) const;

  GradedFunctional plaquette(int i, int j) const;     // dA around (i,j)
  GradedFunctional gauge_differential(int e) const;   // dc(e) = c(head)-c(tail)
  GradedFunctional maxwell_eom(int e) const;          // -d(S_Maxwell)/dA(e)
  GradedFunctional divergence_antifield(int v) const; // sum_in A‡ - sum_out A‡

  // sum_P -1/2 f(v_P) F_P^2 + sum_e f(tail e) dc(e) A‡(e)
  GradedFunctional extended_lagrangian(const std::vector<double>& f) const;
};

GaugeToy make_scalar_toy();
GaugeToy make_abelian_toy(int m);
GaugeToy make_su2_toy();
GaugeToy make_lie_toy(std::vector<std::vector<std::vector<double>>> structure);

// Chevalley-Eilenberg differential: fields pick up sigma(c), ghosts -1/2 [c,c]
GradedFunctional ce_gamma(const GradedFunctional& x, const GaugeToy& toy);

// Koszul part of the toy's BV differential: inserts the Maxwell-like equation
// of motion against A‡ and the antifield divergence against c‡
GradedFunctional toy_koszul(const GradedFunctional& x, const GaugeToy& toy);

// ---- quantum sector (scalar only) ---------------------------------------

using GPoly = HbarPoly<GradedFunctional>;
using GSeries = FormalSeries<GradedFunctional>;

GPoly graded_lift(const GradedFunctional& f);
GPoly graded_star(const GPoly& a, const GPoly& b, const QContext& ctx);
GPoly graded_timeordered_mul(const GPoly& a, const GPoly& b, const QContext& ctx);
GPoly graded_time_order(const GPoly& a, const QContext& ctx);
GPoly graded_time_order_inverse(const GPoly& a, const QContext& ctx);

GPoly koszul_delta(const GPoly& x, const GradedFunctional& action);
GPoly bv_laplacian(const GPoly& x);

inline auto graded_star_mul(const QContext& ctx) {
  return [&ctx](const GPoly& a, const GPoly& b) { return graded_star(a, b, ctx); };
}
inline auto graded_tord_mul(const QContext& ctx) {
  return [&ctx](const GPoly& a, const GPoly& b) {
    return graded_timeordered_mul(a, b, ctx);
  };
}

// ---- master equation checks ----------------------------------------------

struct CmeReport {
  bool pass = false;
  double residual = 0.0;
  bool bracket_zero = false;  // constant cutoff case
  std::string detail;
};

// constant cutoff: {L,L} must vanish identically.  Non-constant cutoff: every
// generator of every term of {L,L} must touch a vertex where the cutoff jumps
// across an edge (weak master equation: the defect lives on supp df).
CmeReport check_cme(const GradedFunctional& l_ext, const std::vector<double>& f,
                    const GaugeToy& toy);

// scalar quantum master equation: both 1/2 {S,S} and the Laplacian term of an
// antifield-free action vanish identically
CmeReport check_qme(const GradedFunctional& action);

}  // namespace paqft
