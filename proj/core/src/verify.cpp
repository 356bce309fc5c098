#include "lamebethe/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "lamebethe/errors.hpp"

namespace lamebethe {

namespace {

using State = std::vector<Complex>;

double relative_error(Complex got, Complex want) {
  const double scale = std::max(std::abs(want), std::abs(got));
  if (scale == 0.0) return 0.0;
  return std::abs(got - want) / scale;
}

const Poly<Complex>& y_or_one(const PolyTuple& y, int k) {
  static const Poly<Complex> one = Poly<Complex>::one();
  return k >= 0 && k < y.rank() ? y.polys[k] : one;
}

std::vector<Complex> exclusion_set(const WeightSystem& ws, const PolyTuple& y) {
  std::vector<Complex> pts = ws.z();
  for (const auto& group : roots_of(y)) pts.insert(pts.end(), group.begin(), group.end());
  return pts;
}

double min_distance(Complex c, const std::vector<Complex>& pts) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) d = std::min(d, std::abs(c - p));
  return d;
}

// Integrates the triangular system of every flag solution u_2..u_{r+1}
// from the disc centre to x1 and returns v_k(x1) per solution.
std::vector<State> integrate_flag(const std::vector<RationalFn<Complex>>& g,
                                  const std::vector<State>& initial, Complex c, Complex x1,
                                  const FlagOptions& options) {
  namespace odeint = boost::numeric::odeint;
  const std::size_t n = g.size();
  const Complex delta = x1 - c;
  State state;
  for (const auto& s : initial) state.insert(state.end(), s.begin(), s.end());
  const std::size_t count = initial.size();
  auto rhs = [&](const State& v, State& dv, double tau) {
    const Complex x = c + tau * delta;
    std::vector<Complex> gx(n);
    for (std::size_t k = 0; k < n; ++k) gx[k] = g[k].eval(x);
    for (std::size_t a = 0; a < count; ++a) {
      const std::size_t off = a * n;
      for (std::size_t k = 0; k < n; ++k) {
        Complex d = gx[k] * v[off + k];
        if (k + 1 < n) d += v[off + k + 1];
        dv[off + k] = delta * d;
      }
    }
  };
  auto stepper = odeint::make_controlled(options.ode_abs, options.ode_rel,
                                         odeint::runge_kutta_fehlberg78<State>());
  odeint::integrate_adaptive(stepper, rhs, state, 0.0, 1.0, 0.05);
  std::vector<State> out(count);
  for (std::size_t a = 0; a < count; ++a) {
    out[a].assign(state.begin() + static_cast<std::ptrdiff_t>(a * n),
                  state.begin() + static_cast<std::ptrdiff_t>((a + 1) * n));
  }
  return out;
}

// Jets of v_r, ..., v_0 from their values, top-down through
// v_k' = g_k v_k + v_{k+1}. Returns the jet of v_0 = u.
Jet solution_jet(const std::vector<Jet>& g_jets, const State& values, int order) {
  const int n = static_cast<int>(values.size());
  std::vector<Complex> above(order + 1, Complex{});
  for (int k = n - 1; k >= 0; --k) {
    std::vector<Complex> c(order + 1, Complex{});
    c[0] = values[k];
    for (int j = 0; j < order; ++j) {
      Complex gv{};
      for (int i = 0; i <= j; ++i) gv += g_jets[k][i] * c[j - i];
      c[j + 1] = (gv + above[j]) / static_cast<double>(j + 1);
    }
    above = std::move(c);
  }
  return Jet(std::move(above));
}

FlagWitness evaluate_flag_float(const WeightSystem& ws, const PolyTuple& y, const FloatOp& op,
                                const FlagOptions& options) {
  const int r = ws.rank();
  const int n = r + 1;
  if (y.rank() != r || op.order != n) fail(ErrorCode::InvalidInput, "operator order must be r+1");
  const int order = n + 2;
  FlagWitness w;
  w.disc = choose_sample_disc(ws, y, options.samples);
  const Complex c = w.disc.center;
  const Branches br(ws.z(), c);

  // phi_a = Y_a T_a / Y_{a-1} at the base point.
  std::vector<State> initial;
  for (int a = 1; a < n; ++a) {
    State s(n, Complex{});
    s[a] = y_or_one(y, a).eval(c) * br.t_value(ws, a, c) / y_or_one(y, a - 1).eval(c);
    initial.push_back(std::move(s));
  }

  w.wronskian_residuals.assign(n, 0.0);
  w.solution_residuals.assign(n, 0.0);
  w.factored_residuals.assign(n, 0.0);
  for (const Complex x : w.disc.points) {
    std::vector<Jet> g_jets;
    for (const auto& g : op.factors) g_jets.push_back(Jet::of_rational(g, x, order));
    std::vector<Jet> t_jets;
    for (int i = 0; i < n; ++i) t_jets.push_back(br.t_jet(ws, i, x, order));

    std::vector<Jet> u;
    u.push_back(Jet::of_poly(y_or_one(y, 0), x, order) * t_jets[0]);
    const auto values = integrate_flag(op.factors, initial, c, x, options);
    for (const auto& v : values) u.push_back(solution_jet(g_jets, v, order));
    w.u_jets.push_back(u);

    Jet t_prod = Jet::constant(1.0, order);
    for (int i = 1; i <= n; ++i) {
      t_prod = t_prod * t_jets[i - 1];
      const Complex want = y_or_one(y, i - 1).eval(x) * t_prod.value();
      const std::vector<Jet> first(u.begin(), u.begin() + i);
      w.wronskian_residuals[i - 1] =
          std::max(w.wronskian_residuals[i - 1], relative_error(wronskian(first).value(), want));

      // Factored identity on x^k.
      for (int k = 0; k <= 3; ++k) {
        std::vector<Complex> mono(k + 1, Complex{});
        mono[k] = 1.0;
        Jet f = Jet::of_poly(Poly<Complex>(mono), x, order);
        Jet lhs = f;
        for (int q = 0; q < i; ++q) lhs = lhs.derivative() - g_jets[q] * lhs;
        std::vector<Jet> cols = first;
        cols.push_back(f);
        const Complex rhs = wronskian(cols).value() / want;
        // Both sides can vanish (x^k may lie in the span of the flag), so
        // the error is measured against sum_j |C_j f^(j)| / |W_i|, C_j the
        // cofactors of the last column.
        std::vector<std::vector<Complex>> vals;
        for (const auto& col : first) {
          std::vector<Complex> d;
          for (int e = 0; e <= i; ++e) d.push_back(col.derivative_value(e));
          vals.push_back(std::move(d));
        }
        double size = 0.0;
        for (int e = 0; e <= i; ++e) {
          auto with_unit = vals;
          std::vector<Complex> unit(i + 1, Complex{});
          unit[e] = 1.0;
          with_unit.push_back(unit);
          size += std::abs(wronskian_values(with_unit) * f.derivative_value(e));
        }
        size /= std::abs(want);
        const double err = std::abs(lhs.value() - rhs);
        const double scale = std::max({size, std::abs(lhs.value()), std::abs(rhs)});
        w.factored_residuals[i - 1] = std::max(w.factored_residuals[i - 1], scale > 0.0 ? err / scale : 0.0);
      }
    }

    std::vector<Complex> a_vals{Complex(1.0)};
    for (const auto& a : op.coeffs) a_vals.push_back(a.eval(x));
    for (int s = 0; s < n; ++s) {
      Complex total{};
      double size = 0.0;
      for (int k = 0; k <= n; ++k) {
        const Complex term = a_vals[k] * u[s].derivative_value(n - k);
        total += term;
        size += std::abs(term);
      }
      const double rel = size > 0.0 ? std::abs(total) / size : 0.0;
      w.solution_residuals[s] = std::max(w.solution_residuals[s], rel);
    }
  }
  for (const auto* list : {&w.wronskian_residuals, &w.solution_residuals, &w.factored_residuals}) {
    for (double v : *list) w.worst = std::max(w.worst, std::isfinite(v) ? v : 1e300);
  }
  w.ok = w.worst <= options.tol;
  return w;
}

}  // namespace

SampleDisc choose_sample_disc(const WeightSystem& ws, const PolyTuple& y, int samples) {
  if (samples < 1) fail(ErrorCode::InvalidInput, "need at least one sample point");
  const auto pts = exclusion_set(ws, y);
  Complex mean{};
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  double spread = 0.0;
  for (const auto& p : pts) spread = std::max(spread, std::abs(p - mean));
  if (spread == 0.0) spread = 1.0;

  SampleDisc disc;
  double best = -1.0;
  for (int ring = 0; ring <= 16; ++ring) {
    const double rho = spread * ring / 16.0;
    const int dirs = ring == 0 ? 1 : 32;
    for (int k = 0; k < dirs; ++k) {
      const double th = 2.0 * std::numbers::pi * (k + 0.5) / dirs;
      const Complex cand = mean + rho * Complex(std::cos(th), std::sin(th));
      const double d = min_distance(cand, pts);
      if (d > best * (1.0 + 1e-12)) {
        best = d;
        disc.center = cand;
      }
    }
  }
  disc.radius = 0.5 * best;
  if (!(disc.radius > 0.0)) fail(ErrorCode::PathThroughSingularity, "no singularity-free disc");
  const int outer = std::max(1, (2 * samples + 2) / 3);
  const int inner = samples - outer;
  disc.probe_count = outer;
  for (int k = 0; k < outer; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.25) / outer;
    disc.points.push_back(disc.center + 0.6 * disc.radius * Complex(std::cos(th), std::sin(th)));
  }
  for (int k = 0; k < inner; ++k) {
    const double th = 2.0 * std::numbers::pi * (k + 0.6) / inner;
    disc.points.push_back(disc.center + 0.3 * disc.radius * Complex(std::cos(th), std::sin(th)));
  }
  return disc;
}

Branches::Branches(std::vector<Complex> z, Complex center) : z_(std::move(z)) {
  for (const auto& p : z_) {
    const Complex d = p - center;
    if (std::abs(d) == 0.0) fail(ErrorCode::PathThroughSingularity, "centre coincides with a z_s");
    dir_.push_back(d / std::abs(d));
  }
}

Complex Branches::log(int s, Complex x) const {
  const Complex w = x - z_[s];
  if (w == Complex{}) fail(ErrorCode::PathThroughSingularity, "evaluation at a singular point");
  return std::log(w / -dir_[s]) + std::log(-dir_[s]);
}

Complex Branches::power(int s, Complex lambda, Complex x) const {
  if (lambda == Complex{}) return 1.0;
  return std::exp(lambda * log(s, x));
}

Jet Branches::power_jet(int s, Complex lambda, Complex x0, int order) const {
  std::vector<Complex> c(order + 1);
  const Complex w = x0 - z_[s];
  c[0] = power(s, lambda, x0);
  Complex binom = 1.0;
  for (int k = 1; k <= order; ++k) {
    binom *= (lambda - static_cast<double>(k - 1)) / static_cast<double>(k);
    c[k] = c[0] * binom / std::pow(w, k);
  }
  return Jet(std::move(c));
}

Jet Branches::t_jet(const WeightSystem& ws, int i, Complex x0, int order) const {
  Jet acc = Jet::constant(1.0, order);
  for (int s = 0; s < ws.n(); ++s) {
    const Complex lambda = -ws.m()[s][i];
    if (lambda != Complex{}) acc = acc * power_jet(s, lambda, x0, order);
  }
  return acc;
}

Complex Branches::t_value(const WeightSystem& ws, int i, Complex x0) const {
  Complex acc = 1.0;
  for (int s = 0; s < ws.n(); ++s) acc *= power(s, -ws.m()[s][i], x0);
  return acc;
}

template <class K>
FlagWitness evaluate_flag(const WeightSystem& ws, const PolyTuple& y, const LinearDiffOp<K>& op,
                          const FlagOptions& options) {
  if constexpr (std::is_same_v<K, Complex>) {
    return evaluate_flag_float(ws, y, op, options);
  } else {
    return evaluate_flag_float(ws, y, convert<Complex>(op), options);
  }
}

template <class K>
FlagWitness check_flag(const WeightSystem& ws, const PolyTuple& y, const LinearDiffOp<K>& op,
                       const FlagOptions& options) {
  FlagWitness w = evaluate_flag(ws, y, op, options);
  if (!w.ok) {
    std::string detail = "worst residual " + std::to_string(w.worst);
    for (std::size_t i = 0; i < w.wronskian_residuals.size(); ++i) {
      if (!(w.wronskian_residuals[i] <= options.tol)) {
        detail += "; Wronskian level " + std::to_string(i + 1);
      }
    }
    fail(ErrorCode::FlagViolation, detail);
  }
  return w;
}

TildeReport evaluate_tilde_identities(const WeightSystem& ws, const PolyTuple& y,
                                      const FlagWitness& flag, double tol) {
  const int r = ws.rank();
  TildeReport rep;
  rep.residuals.assign(r, 0.0);
  rep.probe_max.assign(r, 0.0);
  const Branches br(ws.z(), flag.disc.center);
  for (std::size_t p = 0; p < flag.disc.points.size(); ++p) {
    const Complex x = flag.disc.points[p];
    const auto& u = flag.u_jets[p];
    const int order = u[0].order();
    Jet t_prod = Jet::constant(1.0, order);
    for (int i = 1; i <= r; ++i) {
      t_prod = t_prod * br.t_jet(ws, i - 1, x, order);
      std::vector<Jet> cols(u.begin(), u.begin() + (i - 1));
      cols.push_back(u[i]);
      const Jet tilde = wronskian(cols) / t_prod;
      const Jet yi = Jet::of_poly(y_or_one(y, i - 1), x, order);
      const Jet lhs = yi * tilde.derivative() - yi.derivative() * tilde;
      const Complex want = br.t_value(ws, i, x) / br.t_value(ws, i - 1, x) *
                           y_or_one(y, i - 2).eval(x) * y_or_one(y, i).eval(x);
      rep.residuals[i - 1] = std::max(rep.residuals[i - 1], relative_error(lhs.value(), want));
      if (static_cast<int>(p) < flag.disc.probe_count) {
        const double mag = std::abs(tilde.value());
        rep.probe_max[i - 1] = std::max(rep.probe_max[i - 1], mag);
        rep.bounded = rep.bounded && std::isfinite(mag) && mag < 1e250;
      }
    }
  }
  for (double v : rep.residuals) rep.worst = std::max(rep.worst, std::isfinite(v) ? v : 1e300);
  rep.ok = rep.bounded && rep.worst <= tol;
  return rep;
}

template <class K>
TildeReport check_tilde_identities(const WeightSystem& ws, const PolyTuple& y,
                                   const LinearDiffOp<K>& op, const FlagOptions& options) {
  const FlagWitness flag = evaluate_flag(ws, y, op, options);
  TildeReport rep = evaluate_tilde_identities(ws, y, flag, options.tol);
  if (!rep.ok) {
    for (std::size_t i = 0; i < rep.residuals.size(); ++i) {
      if (!(rep.residuals[i] <= options.tol)) {
        fail(ErrorCode::IdentityViolation,
             "identity " + std::to_string(i + 1) + " residual " + std::to_string(rep.residuals[i]));
      }
    }
    fail(ErrorCode::IdentityViolation, "y~ unbounded on the probe circle");
  }
  return rep;
}

template <class K>
LinearDiffOp<K> conjugate_by_t1(const WeightSystem& ws, const LinearDiffOp<K>& op) {
  if (op.form) {
    LogDerivativeForm<K> form = *op.form;
    for (auto& row : form.z_weights) {
      for (int s = 0; s < ws.n(); ++s) row[s] += Field<K>::from_complex(ws.m()[s][0]);
    }
    return make_operator(std::move(form), op.z, op.pole_hints);
  }
  const RationalFn<K> shift = log_derivative(t_factor<K>(ws, 0));
  std::vector<RationalFn<K>> factors;
  for (const auto& g : op.factors) factors.push_back(g - shift);
  return make_operator(std::move(factors), op.z, op.pole_hints);
}

namespace {

void require_match(const ExponentComparison& cmp) {
  if (cmp.ok) return;
  for (const auto& c : cmp.checks) {
    if (!c.ok) {
      fail(ErrorCode::ExponentMismatch, "conjugated operator exponents differ at " + c.point);
    }
  }
}

}  // namespace

ExponentComparison check_conjugated_exponents(const WeightSystem& ws, const ExactOp& op) {
  auto cmp = compare_exponents(ws, conjugate_by_t1(ws, op), ExponentKind::Conjugated);
  require_match(cmp);
  return cmp;
}

ExponentComparison check_conjugated_exponents(const WeightSystem& ws, const FloatOp& op,
                                              double tol) {
  auto cmp = compare_exponents(ws, conjugate_by_t1(ws, op), ExponentKind::Conjugated, tol);
  require_match(cmp);
  return cmp;
}

CriticalPoint operator_to_critical_point(const WeightSystem& ws, const PolyTuple& y, double tol,
                                         double quantum) {
  if (y.rank() != ws.rank()) fail(ErrorCode::InvalidInput, "tuple must have r polynomials");
  for (int i = 0; i < y.rank(); ++i) {
    if (y.polys[i].degree() != ws.l().entries[i]) {
      fail(ErrorCode::InvalidInput, "deg y_" + std::to_string(i + 1) + " must equal l_i");
    }
  }
  Coords t = roots_of(y);
  const OffDiagonalReport rep = check_off_diagonal(ws, t);
  if (!rep.ok) fail(ErrorCode::OffDiagonalViolation, rep.detail);
  for (auto& group : t) {
    std::sort(group.begin(), group.end(), [](const Complex& a, const Complex& b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
  }
  const auto residual = bae_residual(ws, t);
  const double norm = max_norm(residual);
  if (!(norm <= tol)) {
    std::string detail = "BAE residual " + std::to_string(norm) + " [";
    for (std::size_t k = 0; k < residual.size(); ++k) {
      if (k) detail += ", ";
      detail += std::to_string(std::abs(residual[k]));
    }
    fail(ErrorCode::NotCritical, detail + "]");
  }
  CriticalPoint cp;
  cp.coords = std::move(t);
  cp.residual_norm = norm;
  cp.degenerate = jacobian_conditioning(ws, cp.coords) <= kDegeneracyRatio;
  cp.canonical_key = canonicalize(cp.coords, quantum);
  return cp;
}

template FlagWitness evaluate_flag(const WeightSystem&, const PolyTuple&, const ExactOp&,
                                   const FlagOptions&);
template FlagWitness evaluate_flag(const WeightSystem&, const PolyTuple&, const FloatOp&,
                                   const FlagOptions&);
template FlagWitness check_flag(const WeightSystem&, const PolyTuple&, const ExactOp&,
                                const FlagOptions&);
template FlagWitness check_flag(const WeightSystem&, const PolyTuple&, const FloatOp&,
                                const FlagOptions&);
template TildeReport check_tilde_identities(const WeightSystem&, const PolyTuple&, const ExactOp&,
                                            const FlagOptions&);
template TildeReport check_tilde_identities(const WeightSystem&, const PolyTuple&, const FloatOp&,
                                            const FlagOptions&);
template ExactOp conjugate_by_t1(const WeightSystem&, const ExactOp&);
template FloatOp conjugate_by_t1(const WeightSystem&, const FloatOp&);

}  // namespace lamebethe
