#include "lamebethe/diffop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "lamebethe/jet.hpp"

namespace lamebethe {

namespace {

using GR = GaussianRational;

// [rho]_j = rho (rho - 1) ... (rho - j + 1); with `negate`, [-rho]_j.
template <class K>
Poly<K> falling_factorial(int j, bool negate) {
  using F = Field<K>;
  Poly<K> out = Poly<K>::one();
  for (int i = 0; i < j; ++i) {
    // rho - i  or  -rho - i
    Poly<K> factor(std::vector<K>{F::from_int(-i), F::from_int(negate ? -1 : 1)});
    out = out * factor;
  }
  return out;
}

template <class K>
Poly<K> indicial_polynomial(const std::vector<K>& limits, bool at_infinity) {
  const int n = static_cast<int>(limits.size());
  Poly<K> out = falling_factorial<K>(n, at_infinity);
  for (int k = 1; k <= n; ++k) {
    if (Field<K>::is_zero(limits[k - 1])) continue;
    out += limits[k - 1] * falling_factorial<K>(n - k, at_infinity);
  }
  return out.monic();
}

double candidate_radius(Complex p, const std::vector<Complex>& candidates) {
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    const double d = std::abs(c - p);
    if (d > 1e-12) nearest = std::min(nearest, d);
  }
  return std::isfinite(nearest) ? 0.4 * nearest : 1.0;
}

std::vector<Complex> candidates_of(const FloatOp& op) {
  std::vector<Complex> out = op.z;
  out.insert(out.end(), op.pole_hints.begin(), op.pole_hints.end());
  if (out.empty()) {
    for (const auto& a : op.coeffs) {
      if (a.den().degree() > 0) {
        auto roots = poly_roots(a.den());
        out.insert(out.end(), roots.begin(), roots.end());
      }
    }
  }
  return out;
}

struct Circle {
  Complex center;
  double radius;
  int points;

  Complex node(int m) const {
    const double theta = 2.0 * std::numbers::pi * m / points;
    return center + std::polar(radius, theta);
  }
};

// Laurent coefficient c_j of f around `center` (finite) from samples on a
// circle: c_j = mean f(x_m) (x_m - center)^{-j}.
Complex laurent(const std::vector<Complex>& samples, const Circle& c, int j) {
  Complex acc{};
  for (int m = 0; m < c.points; ++m) {
    acc += samples[m] * std::pow(c.node(m) - c.center, -j);
  }
  return acc / static_cast<double>(c.points);
}

// Roots of each y_i: the pole hints when they line up, else recomputed.
std::vector<std::vector<Complex>> form_roots(const FloatOp& op) {
  const auto& polys = op.form->polys;
  std::size_t total = 0;
  for (const auto& p : polys) total += static_cast<std::size_t>(std::max(p.degree(), 0));
  std::vector<std::vector<Complex>> out;
  std::size_t at = 0;
  for (const auto& p : polys) {
    const auto d = static_cast<std::size_t>(std::max(p.degree(), 0));
    if (total == op.pole_hints.size()) {
      out.emplace_back(op.pole_hints.begin() + at, op.pole_hints.begin() + at + d);
      at += d;
    } else {
      out.push_back(d > 0 ? poly_roots(p) : std::vector<Complex>{});
    }
  }
  return out;
}

// A_1..A_N at x composed from the log-derivative form with jets. The
// expanded coefficients lose digits near clusters of z and y-roots.
std::vector<Complex> coefficients_from_form(const FloatOp& op, const std::vector<std::vector<Complex>>& roots,
                                            Complex x) {
  const auto& form = *op.form;
  const int n = op.order;
  auto pole = [&](Complex a) {
    std::vector<Complex> c(n + 1);
    const Complex inv = 1.0 / (x - a);
    Complex p = inv;
    for (int j = 0; j <= n; ++j) {
      c[j] = (j % 2 == 0 ? 1.0 : -1.0) * p;
      p *= inv;
    }
    return Jet(std::move(c));
  };
  std::vector<Jet> b{Jet::constant(1.0, n)};
  for (int k = 0; k < n; ++k) {
    Jet g = Jet::constant(0.0, n);
    for (std::size_t s = 0; s < form.z.size(); ++s) {
      if (form.z_weights[k][s] != Complex{}) g = g + form.z_weights[k][s] * pole(form.z[s]);
    }
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const int e = form.poly_weights[k][i];
      if (e == 0) continue;
      for (const auto& root : roots[i]) g = g + Complex(e) * pole(root);
    }
    // (d - g) sum_j b_j d^j
    std::vector<Jet> next(b.size() + 1);
    const int order = b.front().order() - 1;
    for (std::size_t j = 0; j <= b.size(); ++j) {
      Jet acc = Jet::constant(0.0, order);
      if (j < b.size()) acc = acc + b[j].derivative() - g.truncated(order) * b[j].truncated(order);
      if (j > 0) acc = acc + b[j - 1].truncated(order);
      next[j] = std::move(acc);
    }
    b = std::move(next);
  }
  std::vector<Complex> out(n);
  for (int k = 1; k <= n; ++k) out[k - 1] = b[n - k].value();
  return out;
}

// table[k][m] = A_{k+1} at the m-th node of the circle.
std::vector<std::vector<Complex>> coefficient_table(const FloatOp& op, const Circle& circle) {
  std::vector<std::vector<Complex>> table(op.order, std::vector<Complex>(circle.points));
  if (op.form) {
    const auto roots = form_roots(op);
    for (int m = 0; m < circle.points; ++m) {
      const auto a = coefficients_from_form(op, roots, circle.node(m));
      for (int k = 0; k < op.order; ++k) table[k][m] = a[k];
    }
    return table;
  }
  for (int k = 0; k < op.order; ++k) {
    for (int m = 0; m < circle.points; ++m) table[k][m] = op.coeffs[k].eval(circle.node(m));
  }
  return table;
}

}  // namespace

std::string SingularPoint::label() const {
  if (at_infinity) return "inf";
  std::ostringstream os;
  os << "(" << z.real() << "," << z.imag() << ")";
  return os.str();
}

void require_fundamental_input(const WeightSystem& ws, const PolyTuple& y) {
  if (y.rank() != ws.rank()) fail(ErrorCode::InvalidInput, "tuple must have r polynomials");
  for (int i = 0; i < y.rank(); ++i) {
    const auto& p = y.polys[i];
    if (p.degree() != ws.l().entries[i]) {
      fail(ErrorCode::InvalidInput, "deg y_" + std::to_string(i + 1) + " must equal l_" +
                                        std::to_string(i + 1));
    }
    if (std::abs(p.leading() - Complex(1.0)) > 1e-12) {
      fail(ErrorCode::InvalidInput, "y_" + std::to_string(i + 1) + " must be monic");
    }
  }
  const auto report = check_off_diagonal(ws, y);
  if (!report.ok) fail(ErrorCode::OffDiagonalViolation, report.detail);
}

IndicialResult exponents_at(const ExactOp& op, const SingularPoint& point) {
  std::vector<GR> limits;
  const GR zq = point.at_infinity ? GR{} : GR::from_complex(point.z);
  for (int k = 1; k <= op.order; ++k) {
    const auto& a = op.coeffs[k - 1];
    if (a.is_zero()) {
      limits.emplace_back();
      continue;
    }
    if (point.at_infinity) {
      const int excess = a.num().degree() - a.den().degree();
      if (excess > -k) {
        fail(ErrorCode::IrregularSingularity,
             "x^" + std::to_string(k) + " A_" + std::to_string(k) + " is unbounded at infinity");
      }
      limits.push_back(excess == -k ? a.num().leading() / a.den().leading() : GR{});
      continue;
    }
    Poly<GR> den = a.den();
    int order = 0;
    while (den.eval(zq).is_zero()) {
      den = Poly<GR>::divmod(den, Poly<GR>::linear(zq)).first;
      ++order;
    }
    if (order > k) {
      fail(ErrorCode::IrregularSingularity,
           "A_" + std::to_string(k) + " has a pole of order " + std::to_string(order) + " at " +
               point.label());
    }
    limits.push_back(order == k ? a.num().eval(zq) / den.eval(zq) : GR{});
  }
  const Poly<GR> ind = indicial_polynomial(limits, point.at_infinity);
  IndicialResult res;
  res.exact = true;
  res.exact_coeffs = ind.coeffs();
  res.indicial = convert<Complex>(ind);
  res.exponents = poly_roots(res.indicial);
  return res;
}

IndicialResult exponents_at(const FloatOp& op, const SingularPoint& point, int quadrature_points,
                            double regular_tol) {
  const auto candidates = candidates_of(op);
  Circle circle{};
  circle.points = quadrature_points;
  if (point.at_infinity) {
    double far = 0.0;
    for (const auto& c : candidates) far = std::max(far, std::abs(c));
    circle.center = 0.0;
    circle.radius = 2.0 * far + 1.0;
  } else {
    circle.center = point.z;
    circle.radius = candidate_radius(point.z, candidates);
  }
  const int highest = 2 * op.order + 2;
  const auto table = coefficient_table(op, circle);
  std::vector<Complex> limits;
  for (int k = 1; k <= op.order; ++k) {
    const auto& samples = table[k - 1];
    double scale = 0.0;
    for (const auto& v : samples) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) {
      limits.emplace_back();
      continue;
    }
    if (point.at_infinity) {
      // A = sum_j c_j x^j near infinity; bounded x^k A requires c_j = 0, j > -k.
      for (int j = -k + 1; j <= highest; ++j) {
        const Complex cj = laurent(samples, circle, j);
        if (std::abs(cj) * std::pow(circle.radius, j) > regular_tol * scale) {
          fail(ErrorCode::IrregularSingularity,
               "x^" + std::to_string(k) + " A_" + std::to_string(k) + " is unbounded at infinity");
        }
      }
      limits.push_back(laurent(samples, circle, -k));
    } else {
      for (int j = k + 1; j <= highest; ++j) {
        const Complex cj = laurent(samples, circle, -j);
        if (std::abs(cj) * std::pow(circle.radius, -j) > regular_tol * scale) {
          fail(ErrorCode::IrregularSingularity,
               "A_" + std::to_string(k) + " has a pole of order > " + std::to_string(k) + " at " +
                   point.label());
        }
      }
      limits.push_back(laurent(samples, circle, -k));
    }
  }
  IndicialResult res;
  res.indicial = indicial_polynomial(limits, point.at_infinity);
  res.exponents = poly_roots(res.indicial);
  return res;
}

double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<int> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

bool indicial_matches_exactly(const IndicialResult& res, const std::vector<GR>& expected) {
  if (!res.exact) return false;
  const Poly<GR> target = Poly<GR>::from_roots(expected);
  return target.coeffs() == res.exact_coeffs;
}

namespace {

std::vector<Complex> to_complex_list(const std::vector<GR>& v) {
  std::vector<Complex> out;
  for (const auto& x : v) out.push_back(x.to_complex());
  return out;
}

template <class Compare>
ExponentComparison compare_all(const WeightSystem& ws, Compare&& compare) {
  ExponentComparison out;
  for (int s = 0; s <= ws.n(); ++s) {
    const bool inf = s == ws.n();
    const SingularPoint point = inf ? SingularPoint::infinity() : SingularPoint::finite(ws.z()[s]);
    ExponentCheck check = compare(point, s);
    check.point = inf ? "inf" : "z" + std::to_string(s);
    out.ok = out.ok && check.ok;
    out.checks.push_back(std::move(check));
  }
  return out;
}

}  // namespace

ExponentComparison compare_exponents(const WeightSystem& ws, const ExactOp& op,
                                     ExponentKind kind) {
  const auto expected = expected_exponents<GR>(ws, kind);
  return compare_all(ws, [&](const SingularPoint& point, int s) {
    const auto& want = point.at_infinity ? expected.infinity : expected.finite[s];
    const auto res = exponents_at(op, point);
    ExponentCheck check;
    check.expected = to_complex_list(want);
    check.found = res.exponents;
    check.distance = multiset_distance(check.found, check.expected);
    check.exact = true;
    check.ok = indicial_matches_exactly(res, want);
    return check;
  });
}

ExponentComparison compare_exponents(const WeightSystem& ws, const FloatOp& op,
                                     ExponentKind kind, double tol) {
  const auto expected = expected_exponents<Complex>(ws, kind);
  return compare_all(ws, [&](const SingularPoint& point, int s) {
    const auto& want = point.at_infinity ? expected.infinity : expected.finite[s];
    const auto res = exponents_at(op, point);
    ExponentCheck check;
    check.expected = want;
    check.found = res.exponents;
    check.distance = multiset_distance(check.found, check.expected);
    const auto target = Poly<Complex>::from_roots(want);
    double size = 1.0;
    for (int j = 0; j <= target.degree(); ++j) {
      size = std::max(size, std::abs(target[j]));
      check.coefficient_gap = std::max(check.coefficient_gap, std::abs(res.indicial[j] - target[j]));
    }
    check.coefficient_gap /= size;
    check.ok = check.distance <= tol || check.coefficient_gap <= tol;
    return check;
  });
}

bool prefer_exact(const WeightSystem& ws, Arithmetic mode) {
  switch (mode) {
    case Arithmetic::Exact: return true;
    case Arithmetic::Float: return false;
    case Arithmetic::Auto: break;
  }
  return (ws.rank() + 1) * (ws.n() + ws.total_l()) <= 40;
}

PoleAudit audit_poles(const WeightSystem& ws, const FloatOp& op, double tol) {
  PoleAudit audit;
  std::vector<Complex> candidates = ws.z();
  candidates.insert(candidates.end(), op.pole_hints.begin(), op.pole_hints.end());
  for (const auto& hint : op.pole_hints) {
    bool at_z = false;
    for (const auto& z : ws.z()) at_z = at_z || std::abs(z - hint) <= kRootSeparation;
    if (at_z) continue;
    Circle circle{hint, candidate_radius(hint, candidates), 64};
    for (const auto& samples : coefficient_table(op, circle)) {
      double scale = 0.0;
      for (const auto& v : samples) scale = std::max(scale, std::abs(v));
      if (scale == 0.0) continue;
      for (int j = 1; j <= 2 * op.order + 2; ++j) {
        const double size = std::abs(laurent(samples, circle, -j)) * std::pow(circle.radius, -j);
        audit.worst_relative = std::max(audit.worst_relative, size / scale);
      }
    }
  }
  audit.ok = audit.worst_relative <= tol;
  return audit;
}

VanVleck van_vleck_extract(const WeightSystem& ws, const Poly<Complex>& u, double tol) {
  if (ws.rank() != 1) fail(ErrorCode::NotClassicalCase, "Van Vleck extraction needs r = 1");
  if (u.is_zero()) fail(ErrorCode::ZeroInput, "u must be nonzero");
  using P = Poly<Complex>;
  VanVleck out;
  out.F = P::one();
  for (const auto& z : ws.z()) out.F = out.F * P::linear(z);
  for (int s = 0; s < ws.n(); ++s) {
    P others = P::one();
    for (int q = 0; q < ws.n(); ++q) {
      if (q != s) others = others * P::linear(ws.z()[q]);
    }
    out.G -= ws.pairing(s, 0) * others;
  }
  const P numerator = -(out.F * u.derivative().derivative()) - out.G * u.derivative();
  auto [h, rem] = P::divmod(numerator, u);
  out.H = std::move(h);
  for (const auto& c : rem.coeffs()) out.remainder_absolute = std::max(out.remainder_absolute, std::abs(c));
  // relative to the dividend: monomial coefficients of clustered roots are
  // large, and the division only keeps their relative accuracy
  double scale = 1.0;
  for (const auto& c : numerator.coeffs()) scale = std::max(scale, std::abs(c));
  out.remainder_norm = out.remainder_absolute / scale;
  if (out.remainder_norm > tol) {
    std::ostringstream os;
    os << "remainder norm " << out.remainder_norm << " exceeds " << tol;
    fail(ErrorCode::NotASolution, os.str());
  }
  if (out.H.degree() > ws.n() - 2) fail(ErrorCode::NotASolution, "H has degree > n - 2");
  return out;
}

}  // namespace lamebethe
