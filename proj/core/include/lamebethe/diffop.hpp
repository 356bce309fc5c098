#pragma once

// Fundamental differential operators of critical points.
//
// A LinearDiffOp of order N = r+1 is kept in two forms:
//   factored:  (d - g_N) ... (d - g_2)(d - g_1), factors[0] = g_1 acts first;
//   expanded:  d^N + A_1 d^{N-1} + ... + A_N, coeffs[k-1] = A_k.
//
// The fundamental operator of y = (y_1..y_r) uses
//   g_k = ln'(y_k T_k / y_{k-1}),  T_k = prod_s (x - z_s)^{-m_{s,k}},
// with y_0 = y_{r+1} = 1.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "lamebethe/polytuple.hpp"
#include "lamebethe/poly.hpp"
#include "lamebethe/rootdata.hpp"

namespace lamebethe {

enum class Arithmetic { Auto, Exact, Float };

/// Factors of the shape g_k = sum_s c_{k,s} / (x - z_s) + sum_i e_{k,i} y_i'/y_i.
/// Knowing this lets the expansion keep every coefficient over a power of
/// one fixed polynomial P = prod (x - z_s) prod y_i.
template <class K>
struct LogDerivativeForm {
  std::vector<K> z;
  std::vector<Poly<K>> polys;
  std::vector<std::vector<K>> z_weights;       // [factor][s]
  std::vector<std::vector<int>> poly_weights;  // [factor][i]
};

template <class K>
struct LinearDiffOp {
  int order = 0;
  std::vector<RationalFn<K>> factors;
  std::vector<RationalFn<K>> coeffs;
  /// Singular points the operator was built over.
  std::vector<Complex> z;
  /// Points the operator may be singular at besides z (roots of y_i); used
  /// to size quadrature circles in the float path.
  std::vector<Complex> pole_hints;
  /// Present for operators built from a critical point.
  std::optional<LogDerivativeForm<K>> form;
};

using ExactOp = LinearDiffOp<GaussianRational>;
using FloatOp = LinearDiffOp<Complex>;

template <class K>
std::vector<K> to_field(const std::vector<Complex>& v) {
  std::vector<K> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(Field<K>::from_complex(x));
  return out;
}

/// T_i as a quasi-polynomial (0-based i in [0, r]).
template <class K>
QuasiPoly<K> t_factor(const WeightSystem& ws, int i) {
  QuasiPoly<K> q;
  q.base = to_field<K>(ws.z());
  for (int s = 0; s < ws.n(); ++s) q.exponents.push_back(Field<K>::from_complex(-ws.m()[s][i]));
  return q;
}

/// Coefficients of the composed operator: applies
/// (d - g) o sum_j B_j d^j = sum_j (B_j' + B_{j-1} - g B_j) d^j
/// factor by factor. Returns A_1..A_N.
template <class K>
std::vector<RationalFn<K>> expand_operator(const std::vector<RationalFn<K>>& factors) {
  std::vector<RationalFn<K>> b{RationalFn<K>::constant(Field<K>::from_int(1))};
  for (const auto& g : factors) {
    std::vector<RationalFn<K>> next(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
      RationalFn<K> acc;
      if (j < b.size()) acc = b[j].derivative() - g * b[j];
      if (j > 0) acc = acc + b[j - 1];
      next[j] = std::move(acc);
    }
    b = std::move(next);
  }
  const int n = static_cast<int>(factors.size());
  std::vector<RationalFn<K>> coeffs(n);
  for (int k = 1; k <= n; ++k) coeffs[k - 1] = b[n - k];
  return coeffs;
}

template <class K>
LinearDiffOp<K> make_operator(std::vector<RationalFn<K>> factors, std::vector<Complex> z = {},
                              std::vector<Complex> pole_hints = {}) {
  LinearDiffOp<K> op;
  op.z = std::move(z);
  op.order = static_cast<int>(factors.size());
  op.coeffs = expand_operator(factors);
  op.factors = std::move(factors);
  op.pole_hints = std::move(pole_hints);
  return op;
}

/// P = prod (x - z_s) prod y_i as its list of blocks.
template <class K>
std::vector<Poly<K>> form_blocks(const LogDerivativeForm<K>& form) {
  std::vector<Poly<K>> blocks;
  for (const auto& z : form.z) blocks.push_back(Poly<K>::linear(z));
  for (const auto& p : form.polys) blocks.push_back(p);
  return blocks;
}

/// cofactor[b] = P / block_b, without division.
template <class K>
std::vector<Poly<K>> form_cofactors(const std::vector<Poly<K>>& blocks) {
  std::vector<Poly<K>> cofactor(blocks.size(), Poly<K>::one());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t o = 0; o < blocks.size(); ++o) {
      if (o != b) cofactor[b] = cofactor[b] * blocks[o];
    }
  }
  return cofactor;
}

/// p with g_k = p / P.
template <class K>
Poly<K> form_numerator(const LogDerivativeForm<K>& form, std::size_t k,
                       const std::vector<Poly<K>>& cofactor) {
  using F = Field<K>;
  const std::size_t nz = form.z.size();
  Poly<K> p;
  for (std::size_t s = 0; s < nz; ++s) {
    if (!F::is_zero(form.z_weights[k][s])) p += form.z_weights[k][s] * cofactor[s];
  }
  for (std::size_t i = 0; i < form.polys.size(); ++i) {
    const int e = form.poly_weights[k][i];
    if (e != 0) p += F::from_int(e) * (form.polys[i].derivative() * cofactor[nz + i]);
  }
  return p;
}

template <class K>
RationalFn<K> form_factor(const LogDerivativeForm<K>& form, std::size_t k) {
  const auto blocks = form_blocks(form);
  return RationalFn<K>::from_factored(form_numerator(form, k, form_cofactors(blocks)), blocks);
}

/// Expansion with B_j = b_j / P^{m-j} after m factors, so A_k = b / P^k.
template <class K>
std::vector<RationalFn<K>> expand_form(const LogDerivativeForm<K>& form) {
  using F = Field<K>;
  const auto blocks = form_blocks(form);
  const auto cofactor = form_cofactors(blocks);
  Poly<K> big = Poly<K>::one();
  for (const auto& b : blocks) big = big * b;
  const Poly<K> big_d = big.derivative();
  const std::size_t n = form.z_weights.size();
  std::vector<Poly<K>> b{Poly<K>::one()};
  for (std::size_t k = 0; k < n; ++k) {
    const Poly<K> p = form_numerator(form, k, cofactor);
    const int m = static_cast<int>(k);
    std::vector<Poly<K>> next(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
      Poly<K> acc;
      if (j < b.size()) {
        const long long level = m - static_cast<long long>(j);
        acc = b[j].derivative() * big - F::from_int(level) * (b[j] * big_d) - p * b[j];
      }
      if (j > 0) acc += b[j - 1];
      next[j] = std::move(acc);
    }
    b = std::move(next);
  }
  std::vector<RationalFn<K>> coeffs(n);
  std::vector<Poly<K>> den;
  for (std::size_t k = 1; k <= n; ++k) {
    den.insert(den.end(), blocks.begin(), blocks.end());
    coeffs[k - 1] = RationalFn<K>::from_factored(b[n - k], den);
  }
  return coeffs;
}

template <class K>
LinearDiffOp<K> make_operator(LogDerivativeForm<K> form, std::vector<Complex> z,
                              std::vector<Complex> pole_hints) {
  LinearDiffOp<K> op;
  op.order = static_cast<int>(form.z_weights.size());
  for (std::size_t k = 0; k < form.z_weights.size(); ++k) op.factors.push_back(form_factor(form, k));
  op.coeffs = expand_form(form);
  op.z = std::move(z);
  op.pole_hints = std::move(pole_hints);
  op.form = std::move(form);
  return op;
}

/// Throws InvalidInput on shape/degree/monicity problems and
/// OffDiagonalViolation when y is not off-diagonal.
void require_fundamental_input(const WeightSystem& ws, const PolyTuple& y);

/// Fundamental (shift = false) or T_1-conjugated (shift = true) form.
template <class K>
LogDerivativeForm<K> fundamental_form(const WeightSystem& ws, const PolyTuple& y, bool shift) {
  using F = Field<K>;
  const int r = ws.rank();
  LogDerivativeForm<K> form;
  form.z = to_field<K>(ws.z());
  for (const auto& p : y.polys) form.polys.push_back(convert<K>(p));
  for (int k = 0; k <= r; ++k) {
    std::vector<K> zw;
    for (int s = 0; s < ws.n(); ++s) {
      K c = -F::from_complex(ws.m()[s][k]);
      if (shift) c += F::from_complex(ws.m()[s][0]);
      zw.push_back(c);
    }
    std::vector<int> pw(r, 0);
    if (k < r) pw[k] += 1;
    if (k > 0) pw[k - 1] -= 1;
    form.z_weights.push_back(std::move(zw));
    form.poly_weights.push_back(std::move(pw));
  }
  return form;
}

/// Fundamental operator of the tuple y over field K.
template <class K>
LinearDiffOp<K> build_fundamental(const WeightSystem& ws, const PolyTuple& y) {
  require_fundamental_input(ws, y);
  std::vector<Complex> hints;
  for (const auto& group : roots_of(y)) hints.insert(hints.end(), group.begin(), group.end());
  return make_operator(fundamental_form<K>(ws, y, false), ws.z(), std::move(hints));
}

/// Conjugate T_1^{-1} D T_1 built from the factored form:
/// (d - ln'(T_{r+1}/(y_r T_1))) ... (d - ln'(y_2 T_2/(y_1 T_1))) (d - ln'(y_1)).
template <class K>
LinearDiffOp<K> build_conjugated(const WeightSystem& ws, const PolyTuple& y) {
  require_fundamental_input(ws, y);
  std::vector<Complex> hints;
  for (const auto& group : roots_of(y)) hints.insert(hints.end(), group.begin(), group.end());
  return make_operator(fundamental_form<K>(ws, y, true), ws.z(), std::move(hints));
}

template <class To, class From>
LinearDiffOp<To> convert(const LinearDiffOp<From>& op) {
  LinearDiffOp<To> out;
  out.order = op.order;
  for (const auto& g : op.factors) out.factors.push_back(convert<To>(g));
  for (const auto& a : op.coeffs) out.coeffs.push_back(convert<To>(a));
  out.z = op.z;
  out.pole_hints = op.pole_hints;
  if (op.form) {
    LogDerivativeForm<To> f;
    for (const auto& z : op.form->z) f.z.push_back(Field<To>::from_complex(Field<From>::to_complex(z)));
    for (const auto& p : op.form->polys) f.polys.push_back(convert<To>(p));
    for (const auto& row : op.form->z_weights) {
      std::vector<To> w;
      for (const auto& c : row) w.push_back(Field<To>::from_complex(Field<From>::to_complex(c)));
      f.z_weights.push_back(std::move(w));
    }
    f.poly_weights = op.form->poly_weights;
    out.form = std::move(f);
  }
  return out;
}

/// Where an exponent computation happens.
struct SingularPoint {
  bool at_infinity = false;
  Complex z{};

  static SingularPoint finite(Complex z) { return {false, z}; }
  static SingularPoint infinity() { return {true, {}}; }
  std::string label() const;
};

struct IndicialResult {
  std::vector<Complex> exponents;           // roots, as a multiset
  Poly<Complex> indicial;                   // monic, in rho
  std::vector<GaussianRational> exact_coeffs;  // monic, filled by the exact path
  bool exact = false;
};

/// sum_k a_k [rho]_{N-k} with a_k = lim (x - z)^k A_k (a_0 = 1) at a finite
/// point, or sum_k b_k [-rho]_{N-k} with b_k = lim x^k A_k at infinity.
/// Throws IrregularSingularity when a limit is infinite.
IndicialResult exponents_at(const ExactOp& op, const SingularPoint& point);
IndicialResult exponents_at(const FloatOp& op, const SingularPoint& point,
                            int quadrature_points = 64, double regular_tol = 1e-7);

/// Per-point exponent multisets; finite[s] belongs to z_s.
template <class K>
struct ExponentLists {
  std::vector<std::vector<K>> finite;
  std::vector<K> infinity;
};
using ExponentProfile = ExponentLists<Complex>;

enum class ExponentKind {
  Fundamental,  // {-m_{s,1}, -m_{s,2}+1, ...} at z_s, {m_inf,1, m_inf,2 - 1, ...} at infinity
  Conjugated,   // {0, m_{s,1}-m_{s,2}+1, ...} at z_s, {-l_1, -m_inf,1 + m_inf,2 - 1 - l_1, ...}
};

/// Prescribed exponent lists, computed in K from m and l (m_inf is
/// re-derived in K so the exact path has no rounding).
template <class K>
ExponentLists<K> expected_exponents(const WeightSystem& ws, ExponentKind kind) {
  using F = Field<K>;
  const int r = ws.rank();
  std::vector<std::vector<K>> m;
  for (const auto& row : ws.m()) m.push_back(to_field<K>(row));
  std::vector<K> m_inf(r + 1, F::from_int(0));
  for (const auto& row : m) {
    for (int i = 0; i <= r; ++i) m_inf[i] += row[i];
  }
  const auto& l = ws.l().entries;
  for (int i = 0; i <= r; ++i) {
    const int li = i < r ? l[i] : 0;
    const int prev = i > 0 ? l[i - 1] : 0;
    m_inf[i] += F::from_int(prev - li);
  }
  ExponentLists<K> out;
  for (const auto& row : m) {
    std::vector<K> e;
    for (int i = 0; i <= r; ++i) {
      e.push_back(kind == ExponentKind::Fundamental ? -row[i] + F::from_int(i)
                                                    : row[0] - row[i] + F::from_int(i));
    }
    out.finite.push_back(std::move(e));
  }
  for (int i = 0; i <= r; ++i) {
    out.infinity.push_back(kind == ExponentKind::Fundamental
                               ? m_inf[i] - F::from_int(i)
                               : -m_inf[0] + m_inf[i] - F::from_int(i) - F::from_int(l[0]));
  }
  return out;
}

/// Smallest max-distance over all matchings of two equal-size multisets.
double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Exact comparison: the monic indicial polynomial equals prod (rho - e_j).
bool indicial_matches_exactly(const IndicialResult& res,
                              const std::vector<GaussianRational>& expected);

struct ExponentCheck {
  std::string point;
  std::vector<Complex> expected;
  std::vector<Complex> found;
  double distance = 0.0;
  /// max coefficient gap between the monic indicial polynomial and
  /// prod (rho - e_j); well conditioned even for repeated exponents
  double coefficient_gap = 0.0;
  bool exact = false;
  bool ok = false;
};

struct ExponentComparison {
  std::vector<ExponentCheck> checks;
  bool ok = true;
};

/// Runs exponents_at at every z_s and at infinity and compares with the
/// prescribed lists. Exact ops compare exactly. Float ops pass when the
/// root distance or the relative coefficient gap is within `tol`.
ExponentComparison compare_exponents(const WeightSystem& ws, const ExactOp& op,
                                     ExponentKind kind);
ExponentComparison compare_exponents(const WeightSystem& ws, const FloatOp& op,
                                     ExponentKind kind, double tol = 1e-7);

/// Chooses the exact path for small instances.
bool prefer_exact(const WeightSystem& ws, Arithmetic mode);

struct PoleAudit {
  double worst_relative = 0.0;  // largest principal-part size at a y-root
  bool ok = true;
};

/// Coefficients A_k may only have poles at z: measures principal parts at
/// every pole hint by circle quadrature, relative to |A_k| on the circle.
PoleAudit audit_poles(const WeightSystem& ws, const FloatOp& op, double tol = 1e-6);

struct VanVleck {
  Poly<Complex> F;
  Poly<Complex> G;
  Poly<Complex> H;
  /// max |remainder coefficient| / max(1, max |dividend coefficient|)
  double remainder_norm = 0.0;
  double remainder_absolute = 0.0;
};

/// Classical r = 1 extraction H = (-F u'' - G u') / u with monic
/// F = prod (x - z_s) and G/F = -sum m_s/(x - z_s), m_s = (Lambda_s, alpha_1).
/// Throws NotClassicalCase for r != 1 and NotASolution if the division leaves
/// a relative remainder above `tol` or H has degree > n - 2.
VanVleck van_vleck_extract(const WeightSystem& ws, const Poly<Complex>& u, double tol = 1e-9);

}  // namespace lamebethe
