#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <lamebethe/diffop.hpp>
#include <lamebethe/errors.hpp>
#include <lamebethe/solver.hpp>
#include <lamebethe/verify.hpp>

#include "oracles.hpp"

using namespace lamebethe;

namespace {

using GR = GaussianRational;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidInput;
}

WeightSystem jacobi(double alpha, double beta, int l) {
  return WeightSystem::make(1, {1.0, -1.0}, {{0.0, alpha + 1}, {0.0, beta + 1}}, {l});
}

WeightSystem generic_r2() {
  return WeightSystem::make(2, {0.0, 1.0, Complex(-0.5, 0.7)},
                            {{0.3, -0.2, 0.1}, {0.7, 0.25, -0.4}, {-0.15, 0.6, 0.35}}, {2, 1});
}

const OrbitSet& generic_orbits() {
  static const OrbitSet set = solve_multistart(generic_r2(), 0, 7);
  return set;
}

}  // namespace

TEST_CASE("off-diagonal clauses") {
  const auto ws1 = jacobi(0, 0, 2);
  const PolyTuple square{{Poly<Complex>::from_roots(std::vector<Complex>{1.0, 1.0})}};
  CHECK(check_off_diagonal(ws1, square).clause == 1);

  const auto ws2 = WeightSystem::make(2, {2.0, 3.0}, {{0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}}, {1, 1});
  const PolyTuple same{{Poly<Complex>::x(), Poly<Complex>::x()}};
  CHECK(check_off_diagonal(ws2, same).clause == 2);

  const auto ws3 = jacobi(0, 0, 1);
  const PolyTuple at_z{{Poly<Complex>::linear(1.0)}};
  CHECK(check_off_diagonal(ws3, at_z).clause == 3);
  // clause (iii) only applies when the exponents at z_s differ
  const auto flat = WeightSystem::make(1, {1.0, -1.0}, {{0.5, 0.5}, {0.0, 1.0}}, {1});
  CHECK(check_off_diagonal(flat, at_z).ok);
}

TEST_CASE("Wronskian evaluator") {
  const Complex x0(0.3, 0.2);
  const int order = 4;
  const Jet a = Jet::of_poly(Poly<Complex>(std::vector<Complex>{1.0, 2.0, 0.0, 1.0}), x0, order);
  const Jet b = Jet::of_rational(RationalFn<Complex>(Poly<Complex>::one(), Poly<Complex>::linear(2.0)), x0, order);
  CHECK(std::abs(wronskian({a, a}).value()) < 1e-14);
  const Complex w = wronskian({a, b}).value();
  CHECK(std::abs(wronskian({b, a}).value() + w) < 1e-14);
  CHECK(std::abs(wronskian({Complex(3.0, -1.0) * a, b}).value() - Complex(3.0, -1.0) * w) < 1e-13);
  const Complex direct = a[0] * b.derivative_value(1) - a.derivative_value(1) * b[0];
  CHECK(std::abs(w - direct) < 1e-14);
  CHECK(std::abs(wronskian_values({{a[0], a.derivative_value(1)}, {b[0], b.derivative_value(1)}}) - w) < 1e-14);
}

TEST_CASE("jets against sixth-order stencils") {
  const RationalFn<Complex> f(Poly<Complex>(std::vector<Complex>{1.0, Complex(0, 1), 2.0}),
                              Poly<Complex>(std::vector<Complex>{2.0, -1.0, 1.0}));
  const Complex x0(0.4, -0.3);
  const double h = 1e-3;
  const Jet j = Jet::of_rational(f, x0, 3);
  auto fe = [&](Complex x) { return f.eval(x); };
  CHECK(std::abs(j.derivative_value(1) - oracle::stencil_d1(fe, x0, h)) < 1e-9);
  CHECK(std::abs(j.derivative_value(2) - oracle::stencil_d2(fe, x0, h)) < 1e-7);

  const Branches br({1.0, -1.0}, Complex(0.0, 1.0));
  const Complex lambda(0.37, -0.2);
  const Jet pj = br.power_jet(0, lambda, x0, 3);
  auto pe = [&](Complex x) { return br.power(0, lambda, x); };
  CHECK(std::abs(pj.value() - pe(x0)) < 1e-14);
  CHECK(std::abs(pj.derivative_value(1) - oracle::stencil_d1(pe, x0, h)) < 1e-9);
  CHECK(std::abs(pj.derivative_value(2) - oracle::stencil_d2(pe, x0, h)) < 1e-7);
}

TEST_CASE("Legendre l = 1: the second flag solution") {
  const auto ws = jacobi(0, 0, 1);
  const PolyTuple y{{Poly<Complex>::x()}};
  const auto op = build_fundamental<GR>(ws, y);
  const auto flag = check_flag(ws, y, op);
  REQUIRE(flag.disc.points.size() >= 10);
  CHECK(flag.wronskian_residuals[0] < 1e-14);  // u_1 = y_1 T_1 exactly
  CHECK(flag.worst <= 1e-8);
  // Wr(x, -Q_1) = 1/(x^2 - 1) = T_2, so u_2 + Q_1 is a multiple of x
  std::vector<Complex> ratios;
  for (std::size_t p = 0; p < flag.disc.points.size(); ++p) {
    const Complex x = flag.disc.points[p];
    const Complex u2 = flag.u_jets[p][1].value();
    ratios.push_back((u2 + oracle::legendre_q1(x)) / x);
    const Complex dq = 0.5 * std::log((1.0 + x) / (1.0 - x)) + x / (1.0 - x * x);
    CHECK(std::abs(flag.u_jets[p][1].derivative_value(1) + dq - ratios.back()) < 1e-8);
  }
  for (const auto& r : ratios) CHECK(std::abs(r - ratios.front()) < 1e-8);

  const auto tilde = evaluate_tilde_identities(ws, y, flag);
  REQUIRE(tilde.residuals.size() == 1);
  CHECK(tilde.residuals[0] <= 1e-8);
  CHECK(tilde.bounded);
}

TEST_CASE("empty tuple: identities hold trivially") {
  const auto ws = jacobi(0.5, 1.0, 0);
  const PolyTuple y{{Poly<Complex>::one()}};
  const auto op = build_fundamental<Complex>(ws, y);
  const auto flag = check_flag(ws, y, op);
  CHECK(flag.ok);
  const auto tilde = check_tilde_identities(ws, y, op);
  CHECK(tilde.ok);
  CHECK(tilde.worst <= 1e-12);
}

TEST_CASE("r = 2 flags and all identity shapes") {
  const auto ws = generic_r2();
  const auto& set = generic_orbits();
  REQUIRE(set.orbits.size() >= 5);
  for (const auto& cp : set.orbits) {
    const auto y = PolyTuple::from_coords(cp.coords);
    const auto eop = build_fundamental<GR>(ws, y);
    const auto fop = build_fundamental<Complex>(ws, y);
    const auto flag = check_flag(ws, y, eop);
    CHECK(flag.wronskian_residuals.size() == 3);
    CHECK(flag.factored_residuals.size() == 3);
    CHECK(flag.worst <= kIdentityTolerance);
    CHECK(check_flag(ws, y, fop).worst <= kIdentityTolerance);
    const auto tilde = check_tilde_identities(ws, y, fop);
    CHECK(tilde.residuals.size() == 2);
    CHECK(tilde.worst <= kIdentityTolerance);
    CHECK(check_conjugated_exponents(ws, eop).ok);
    CHECK(check_conjugated_exponents(ws, fop).ok);
  }
}

TEST_CASE("a wrong operator fails the flag check") {
  const auto ws = generic_r2();
  const auto& cp = generic_orbits().orbits.front();
  const auto y = PolyTuple::from_coords(cp.coords);
  Coords moved = cp.coords;
  moved[0][0] += Complex(1e-3, 0.0);
  const auto wrong = build_fundamental<Complex>(ws, PolyTuple::from_coords(moved));
  CHECK(code_of([&] { check_flag(ws, y, wrong); }) == ErrorCode::FlagViolation);
  CHECK(code_of([&] { check_tilde_identities(ws, y, wrong); }) == ErrorCode::IdentityViolation);
}

TEST_CASE("conjugation by T_1") {
  // classical encoding: T_1 = 1, conjugation changes nothing
  const auto ws = jacobi(0.5, 1.5, 1);
  const PolyTuple y{{Poly<Complex>::linear(0.25)}};
  const auto op = build_fundamental<GR>(ws, y);
  const auto conj = conjugate_by_t1(ws, op);
  for (std::size_t k = 0; k < op.coeffs.size(); ++k) CHECK(conj.coeffs[k] == op.coeffs[k]);
  const auto cmp = check_conjugated_exponents(ws, op);
  CHECK(cmp.ok);
  // at z_s: {0, m_{s,1} - m_{s,2} + 1}; at infinity the first is -l_1
  REQUIRE(cmp.checks.size() == 3);
  const auto& z0 = cmp.checks[0].expected;
  CHECK(std::abs(z0[0]) == 0.0);
  CHECK(std::abs(z0[1] - Complex(-(0.5 + 1) + 1)) < 1e-15);
  CHECK(std::abs(cmp.checks[2].expected[0] - Complex(-1.0)) < 1e-15);

  // operator of other weights: mismatch
  const auto other = WeightSystem::make(1, {1.0, -1.0}, {{0.0, 2.0}, {0.0, 2.5}}, {1});
  const auto op2 = build_fundamental<GR>(other, y);
  CHECK(code_of([&] { check_conjugated_exponents(ws, op2); }) == ErrorCode::ExponentMismatch);
}

TEST_CASE("operator to critical point") {
  for (double alpha : {0.0, 0.5, 2.5}) {
    for (double beta : {0.0, 1.0}) {
      const double t = (beta - alpha) / (alpha + beta + 2);
      const auto cp = operator_to_critical_point(jacobi(alpha, beta, 1), PolyTuple{{Poly<Complex>::linear(t)}});
      CHECK(cp.residual_norm < 1e-14);
      CHECK(std::abs(cp.coords[0][0] - t) < 1e-15);
    }
  }
  // y vanishing at z_1 would make the BAE singular; the precondition fires first
  CHECK(code_of([] { operator_to_critical_point(jacobi(0, 0, 1), PolyTuple{{Poly<Complex>::linear(1.0)}}); }) ==
        ErrorCode::OffDiagonalViolation);
  CHECK(code_of([] { operator_to_critical_point(jacobi(0, 0, 1), PolyTuple{{Poly<Complex>::linear(0.3)}}); }) ==
        ErrorCode::NotCritical);
  CHECK(code_of([] { operator_to_critical_point(jacobi(0, 0, 2), PolyTuple{{Poly<Complex>::linear(0.3)}}); }) ==
        ErrorCode::InvalidInput);
}

TEST_CASE("round trip keeps the canonical key") {
  const auto ws = generic_r2();
  for (const auto& cp : generic_orbits().orbits) {
    const auto op = build_fundamental<Complex>(ws, PolyTuple::from_coords(cp.coords));
    const auto back = operator_to_critical_point(ws, PolyTuple{op.form->polys});
    CHECK(back.canonical_key == cp.canonical_key);
  }
}
