#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include <lamebethe/errors.hpp>
#include <lamebethe/json_io.hpp>
#include <lamebethe/solver.hpp>

#include "oracles.hpp"

using namespace lamebethe;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidInput;
}

// classical data: rows (0, -m_s) so that (Lambda_s, alpha_1) = m_s
WeightSystem classical(std::vector<double> z, std::vector<double> m, int l) {
  std::vector<Complex> zc(z.begin(), z.end());
  std::vector<WeightRow> rows;
  for (double v : m) rows.push_back({0.0, -v});
  return WeightSystem::make(1, zc, rows, {l});
}

WeightSystem jacobi(double alpha, double beta, int l) {
  return classical({1.0, -1.0}, {-(alpha + 1), -(beta + 1)}, l);
}

std::vector<double> real_sorted(const CriticalPoint& cp) {
  std::vector<double> out;
  for (const auto& x : cp.coords[0]) out.push_back(x.real());
  std::sort(out.begin(), out.end());
  return out;
}

// how many points of a classical orbit sit in each gap of the sorted z
std::vector<int> occupancy(const std::vector<double>& z_sorted, const std::vector<double>& t) {
  std::vector<int> counts(z_sorted.size() - 1, 0);
  for (double x : t) {
    for (std::size_t g = 0; g + 1 < z_sorted.size(); ++g) {
      if (x > z_sorted[g] && x < z_sorted[g + 1]) ++counts[g];
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("compositions") {
  const auto c = compositions(2, 2);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == std::vector<int>{2, 0});
  CHECK(c[1] == std::vector<int>{1, 1});
  CHECK(c[2] == std::vector<int>{0, 2});
  CHECK(compositions(0, 3).size() == 1);
  CHECK(compositions(5, 3).size() == 21);
}

TEST_CASE("Stieltjes: Legendre and Jacobi") {
  const auto p1 = solve_stieltjes_real(jacobi(0, 0, 1));
  REQUIRE(p1.orbits.size() == 1);
  CHECK(std::abs(p1.orbits[0].coords[0][0]) < 1e-14);

  const auto p3 = solve_stieltjes_real(jacobi(0, 0, 3));
  REQUIRE(p3.orbits.size() == 1);
  const auto got = real_sorted(p3.orbits[0]);
  const auto want = oracle::jacobi_roots(3, 0, 0);
  REQUIRE(want.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-13);
  CHECK(std::abs(want[2] - std::sqrt(0.6)) < 1e-15);
  CHECK(p3.saturated);
}

TEST_CASE("Stieltjes: Jacobi l = 2 against the quadratic formula") {
  for (double alpha : {0.0, 0.5, 1.0, 2.5}) {
    for (double beta : {0.0, 0.5, 1.0, 2.5}) {
      const auto c = oracle::jacobi_coeffs(2, alpha, beta);
      const double disc = std::sqrt(c[1] * c[1] - 4 * c[2] * c[0]);
      std::vector<double> want{(-c[1] - disc) / (2 * c[2]), (-c[1] + disc) / (2 * c[2])};
      const auto set = solve_stieltjes_real(jacobi(alpha, beta, 2));
      REQUIRE(set.orbits.size() == 1);
      const auto got = real_sorted(set.orbits[0]);
      CHECK(std::abs(got[0] - want[0]) < 1e-10);
      CHECK(std::abs(got[1] - want[1]) < 1e-10);
    }
  }
}

TEST_CASE("Stieltjes: one orbit per cell") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uz(-4.0, 4.0), um(-3.0, -0.1);
  for (int n = 2; n <= 4; ++n) {
    for (int l = 0; l <= 5; ++l) {
      std::vector<double> z(n), m(n);
      for (auto& v : z) v = uz(rng);
      for (auto& v : m) v = um(rng);
      std::sort(z.begin(), z.end());
      const auto set = solve_stieltjes_real(classical(z, m, l));
      mpz_class expected;
      mpz_bin_uiui(expected.get_mpz_t(), l + n - 2, l);
      CHECK(mpz_class(static_cast<unsigned long>(set.orbits.size())) == expected);
      std::set<std::vector<int>> cells;
      for (const auto& cp : set.orbits) {
        CHECK(cp.residual_norm <= kDefaultResidualTol);
        CHECK_FALSE(cp.degenerate);
        const auto occ = occupancy(z, real_sorted(cp));
        int total = 0;
        for (int v : occ) total += v;
        CHECK(total == l);  // every point strictly inside a gap
        cells.insert(occ);
      }
      CHECK(cells.size() == set.orbits.size());
    }
  }
}

TEST_CASE("Stieltjes: three orbits for n = 3, l = 2") {
  const auto set = solve_stieltjes_real(classical({-1.0, 0.3, 2.0}, {-0.7, -1.2, -0.4}, 2));
  CHECK(set.orbits.size() == 3);
  CHECK(set.bound == 3);
  CHECK(set.saturated);
}

TEST_CASE("Stieltjes rejects non-classical data") {
  CHECK(code_of([] { solve_stieltjes_real(classical({-1.0, 1.0}, {1.0, -1.0}, 1)); }) ==
        ErrorCode::NotClassicalCase);
  const auto complex_z = WeightSystem::make(1, {Complex(0, 1), 1.0}, {{0.0, 1.0}, {0.0, 1.0}}, {1});
  CHECK(code_of([&] { solve_stieltjes_real(complex_z); }) == ErrorCode::NotClassicalCase);
  const auto r2 = WeightSystem::make(2, {0.0, 1.0}, {{0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}}, {1, 0});
  CHECK(code_of([&] { solve_stieltjes_real(r2); }) == ErrorCode::NotClassicalCase);
}

TEST_CASE("empty multidegree gives one empty orbit") {
  const auto ws = classical({-1.0, 1.0}, {-1.0, -1.0}, 0);
  const auto a = solve_stieltjes_real(ws);
  const auto b = solve_multistart(ws, 10, 3);
  REQUIRE(a.orbits.size() == 1);
  REQUIRE(b.orbits.size() == 1);
  CHECK(a.orbits[0].coords[0].empty());
  CHECK(b.orbits[0].canonical_key == a.orbits[0].canonical_key);
}

TEST_CASE("multistart reproduces the Stieltjes orbits") {
  const auto ws = classical({-1.0, 0.3, 2.0}, {-0.7, -1.2, -0.4}, 2);
  const auto ref = solve_stieltjes_real(ws);
  const auto ms = solve_multistart(ws, 400, 5);
  REQUIRE(ms.orbits.size() == ref.orbits.size());
  for (std::size_t k = 0; k < ref.orbits.size(); ++k) {
    CHECK(ms.orbits[k].canonical_key == ref.orbits[k].canonical_key);
  }
}

TEST_CASE("multistart on integral dominant r = 2 data stays under the bound") {
  // rows sum to (3, 1, 0); l = (1, 1) gives m_inf = (2, 1, 1)
  const auto ws = WeightSystem::make(2, {0.0, 1.0}, {{2.0, 0.0, 0.0}, {1.0, 1.0, 0.0}}, {1, 1});
  const auto set = solve_multistart(ws, 0, 9);
  CHECK(set.separating);
  CHECK(set.bound == 2);
  CHECK(set.orbits.size() <= 2);
  for (const auto& cp : set.orbits) CHECK(cp.residual_norm <= kDefaultResidualTol);
  // Pieri: Sym^2 (x) Lambda^2 contains (2,1,1) once, so one orbit is expected
  MESSAGE("integral r=2 n=2: found " << set.orbits.size() << " of " << set.bound.get_str());
}

TEST_CASE("multistart is deterministic across thread counts") {
  const auto ws = WeightSystem::make(2, {0.0, 1.0, Complex(-0.5, 0.7)},
                                     {{0.3, -0.2, 0.1}, {0.7, 0.25, -0.4}, {-0.15, 0.6, 0.35}}, {2, 1});
  SolveOptions one;
  one.threads = 1;
  SolveOptions many;
  many.threads = 4;
  const auto a = solve_multistart(ws, 300, 42, one);
  const auto b = solve_multistart(ws, 300, 42, many);
  const auto c = solve_multistart(ws, 300, 42, many);
  CHECK(to_json(a).dump() == to_json(b).dump());
  CHECK(to_json(b).dump() == to_json(c).dump());
  CHECK(a.search_log.attempted == 300);
  CHECK(a.orbits.size() <= 10);
}

TEST_CASE("certify_orbit") {
  const auto ws = jacobi(0, 0, 1);
  const auto cp = certify_orbit(ws, {{0.0}});
  CHECK(cp.residual_norm == 0.0);
  CHECK(cp.multiplicity() == 1);

  const auto two = jacobi(0, 0, 2);
  try {
    certify_orbit(two, {{0.3, 0.3}});
    FAIL("expected InvariantViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvariantViolation);
    CHECK(std::string(e.what()).find("(i)") != std::string::npos);
  }
  CHECK(code_of([&] { certify_orbit(two, {{0.9, -0.2}}); }) == ErrorCode::NotCritical);
  CHECK(code_of([&] { certify_orbit(two, {{0.9}}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("Newton on a Jacobi start") {
  const auto ws = jacobi(0.5, 1.0, 2);
  const auto res = newton_solve(ws, {{-0.5, 0.4}}, 1e-12);
  CHECK(res.converged);
  CHECK(res.residual <= 1e-12);
}

TEST_CASE("clustered roots still certify to 1e-10") {
  // three points share a gap of width 0.022; rounding alone costs ~1e-10
  const auto ws = classical({-1.4112607756308124, -1.1320771513610124, -1.1097177910840466, -0.04592896727550988},
                            {-1.8689245050638206, -2.520419939091926, -0.30105354933692929, -1.3598654625867088},
                            3);
  const auto set = solve_stieltjes_real(ws);
  CHECK(set.orbits.size() == 10);
  for (const auto& cp : set.orbits) CHECK(cp.residual_norm <= kDefaultResidualTol);
}
