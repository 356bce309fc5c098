// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are pinned below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <lamebethe/diffop.hpp>
#include <lamebethe/errors.hpp>
#include <lamebethe/json_io.hpp>
#include <lamebethe/master.hpp>
#include <lamebethe/rootdata.hpp>
#include <lamebethe/solver.hpp>
#include <lamebethe/verify.hpp>

#include "lamebethe_cli/commands.hpp"
#include "oracles.hpp"

using namespace lamebethe;

namespace {

constexpr double kBaeTol = 1e-10;
constexpr double kVanVleckTol = 1e-9;
constexpr double kClassicalSeconds = 10.0;
constexpr double kJacobiTol = 1e-9;
constexpr double kFloatExponentTol = 1e-7;
constexpr double kFlagTol = 1e-6;
constexpr double kTildeTol = 1e-6;
constexpr std::size_t kMinSamples = 10;
constexpr std::size_t kMinCertified = 20;
constexpr double kGradientTol = 1e-6;
constexpr double kFdStep = 1e-6;
constexpr double kSymmetryTol = 1e-12;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (ok) detail << "first failure: " << why << "; ";
    ok = false;
  }
};

int failures = 0;

void report(int id, const char* name, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.ok) ++failures;
  std::printf("[%s] %d %s (%.2fs) %s\n", out.ok ? "PASS" : "FAIL", id, name, secs, out.detail.str().c_str());
  std::fflush(stdout);
}

WeightSystem jacobi(double alpha, double beta, int l) {
  return WeightSystem::make(1, {1.0, -1.0}, {{0.0, alpha + 1}, {0.0, beta + 1}}, {l});
}

// Certified points used by criteria 3 to 5, with their weight systems.
struct Certified {
  WeightSystem ws;
  CriticalPoint cp;
};

struct InstanceSet {
  std::vector<Certified> points;
  std::vector<OrbitSet> sets;
  int instances = 0;
};

// Rational data: m in eighths, z small Gaussian integers; only separating
// instances are kept.
const InstanceSet& instance_set() {
  static const InstanceSet set = [] {
    InstanceSet out;
    std::mt19937_64 rng(314);
    std::uniform_int_distribution<int> eighths(-14, 14), coord(-2, 2);
    const std::vector<std::vector<int>> ls1{{1}, {2}};
    const std::vector<std::vector<int>> ls2{{1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 2}, {2, 2}};
    for (int r = 1; r <= 2; ++r) {
      for (int n = 2; n <= 3; ++n) {
        for (const auto& l : r == 1 ? ls1 : ls2) {
          for (int attempt = 0; attempt < 6; ++attempt) {
            std::vector<Complex> z;
            while (static_cast<int>(z.size()) < n) {
              const Complex c(coord(rng), coord(rng));
              if (std::find(z.begin(), z.end(), c) == z.end()) z.push_back(c);
            }
            std::vector<WeightRow> m(n);
            for (auto& row : m) {
              for (int i = 0; i <= r; ++i) row.push_back(eighths(rng) / 8.0);
            }
            const auto ws = WeightSystem::make(r, z, m, l);
            if (!is_separating(ws).separating) continue;
            auto orbits = solve_multistart(ws, 0, 17 + attempt);
            for (const auto& cp : orbits.orbits) {
              if (!cp.degenerate) out.points.push_back({ws, cp});
            }
            out.sets.push_back(std::move(orbits));
            ++out.instances;
            break;
          }
        }
      }
    }
    return out;
  }();
  return set;
}

void criterion_classical(Outcome& out) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> uz(-4.0, 4.0), um(-3.0, -0.1);
  const auto start = std::chrono::steady_clock::now();
  int runs = 0;
  double worst_residual = 0.0, worst_remainder = 0.0;
  for (int n = 2; n <= 4; ++n) {
    for (int l = 1; l <= 5; ++l) {
      for (int seed = 0; seed < 5; ++seed) {
        std::vector<double> z(n), m(n);
        for (auto& v : z) v = uz(rng);
        for (auto& v : m) v = um(rng);
        std::sort(z.begin(), z.end());
        const Json doc = {{"z", z}, {"classical_m", m}, {"l", l}};
        const auto res = cli::guarded([&] { return cli::cmd_classical(doc, cli::RunOptions{}); });
        ++runs;
        const auto& rep = res.report;
        if (res.exit_code != cli::kExitOk || rep.value("count_ok", false) != true) {
          out.fail("n=" + std::to_string(n) + " l=" + std::to_string(l) + ": " + rep.dump());
          continue;
        }
        for (const auto& orbit : rep.at("orbits")) {
          const double resid = orbit.at("residual_norm").get<double>();
          const double rem = orbit.at("van_vleck").at("remainder_norm").get<double>();
          worst_residual = std::max(worst_residual, resid);
          worst_remainder = std::max(worst_remainder, rem);
          if (resid > kBaeTol) out.fail("BAE residual " + std::to_string(resid));
          if (rem > kVanVleckTol) out.fail("Van Vleck remainder " + std::to_string(rem));
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > kClassicalSeconds) out.fail("took " + std::to_string(secs) + "s");
  out.detail << runs << " runs, worst residual " << worst_residual << " (tol " << kBaeTol
             << "), worst remainder " << worst_remainder << " (tol " << kVanVleckTol << ")";
}

void criterion_jacobi(Outcome& out) {
  double worst_root = 0.0, worst_h = 0.0;
  for (double alpha : {0.0, 0.5, 1.0, 2.5}) {
    for (double beta : {0.0, 0.5, 1.0, 2.5}) {
      for (int l = 1; l <= 3; ++l) {
        const auto ws = jacobi(alpha, beta, l);
        const auto set = solve_stieltjes_real(ws);
        if (set.orbits.size() != 1) {
          out.fail("expected one orbit");
          continue;
        }
        std::vector<double> got;
        for (const auto& x : set.orbits[0].coords[0]) got.push_back(x.real());
        std::sort(got.begin(), got.end());
        std::vector<double> want;
        if (l == 1) {
          want = {(beta - alpha) / (alpha + beta + 2)};
        } else if (l == 2) {
          const auto c = oracle::jacobi_coeffs(2, alpha, beta);
          const double disc = std::sqrt(c[1] * c[1] - 4 * c[2] * c[0]);
          want = {(-c[1] - disc) / (2 * c[2]), (-c[1] + disc) / (2 * c[2])};
        } else {
          want = oracle::jacobi_roots(3, alpha, beta);
        }
        if (want.size() != got.size()) {
          out.fail("root count");
          continue;
        }
        for (std::size_t k = 0; k < got.size(); ++k) worst_root = std::max(worst_root, std::abs(got[k] - want[k]));
        const auto vv = van_vleck_extract(ws, PolyTuple::from_coords(set.orbits[0].coords).polys[0]);
        const Complex h = vv.H.coeffs().empty() ? Complex{} : vv.H.coeffs()[0];
        worst_h = std::max(worst_h, std::abs(h + double(l) * (l + alpha + beta + 1)));
      }
    }
  }
  if (worst_root > kJacobiTol) out.fail("root error " + std::to_string(worst_root));
  if (worst_h > kJacobiTol) out.fail("Van Vleck error " + std::to_string(worst_h));
  out.detail << "48 cases, worst root error " << worst_root << ", worst H error " << worst_h << " (tol "
             << kJacobiTol << ")";
}

void criterion_exponents(Outcome& out) {
  const auto& set = instance_set();
  if (set.points.size() < kMinCertified) out.fail("only " + std::to_string(set.points.size()) + " points");
  int exact_checks = 0;
  double worst_float = 0.0;
  for (const auto& [ws, cp] : set.points) {
    const auto y = PolyTuple::from_coords(cp.coords);
    try {
      const auto eop = build_fundamental<GaussianRational>(ws, y);
      const auto exact = compare_exponents(ws, eop, ExponentKind::Fundamental);
      if (!exact.ok) out.fail("exact exponents differ at " + cp.canonical_key);
      exact_checks += static_cast<int>(exact.checks.size());
      const auto fop = build_fundamental<Complex>(ws, y);
      const auto flt = compare_exponents(ws, fop, ExponentKind::Fundamental, kFloatExponentTol);
      if (!flt.ok) out.fail("float exponents differ at " + cp.canonical_key);
      for (const auto& c : flt.checks) worst_float = std::max(worst_float, std::min(c.distance, c.coefficient_gap));
      if (!audit_poles(ws, fop).ok) out.fail("apparent pole at a root of y");
    } catch (const Error& e) {
      out.fail(std::string(to_string(e.code())) + ": " + e.what());
    }
  }
  out.detail << set.points.size() << " certified points from " << set.instances << " instances, " << exact_checks
             << " exact point checks, worst float gap " << worst_float << " (tol " << kFloatExponentTol << ")";
}

void criterion_flag(Outcome& out) {
  const auto& set = instance_set();
  if (set.points.size() < kMinCertified) out.fail("only " + std::to_string(set.points.size()) + " points");
  double worst_flag = 0.0, worst_tilde = 0.0;
  std::size_t fewest = SIZE_MAX;
  for (const auto& [ws, cp] : set.points) {
    const auto y = PolyTuple::from_coords(cp.coords);
    const auto op = build_fundamental<Complex>(ws, y);
    FlagOptions fo;
    fo.tol = kFlagTol;
    const auto flag = evaluate_flag(ws, y, op, fo);
    fewest = std::min(fewest, flag.disc.points.size());
    worst_flag = std::max(worst_flag, flag.worst);
    const auto tilde = evaluate_tilde_identities(ws, y, flag, kTildeTol);
    worst_tilde = std::max(worst_tilde, tilde.worst);
  }
  if (fewest < kMinSamples) out.fail("too few samples");
  if (worst_flag > kFlagTol) out.fail("flag residual " + std::to_string(worst_flag));
  if (worst_tilde > kTildeTol) out.fail("tilde residual " + std::to_string(worst_tilde));
  out.detail << "worst flag " << worst_flag << " (tol " << kFlagTol << ", >= " << fewest << " samples), worst tilde "
             << worst_tilde << " (tol " << kTildeTol << ")";
}

void criterion_bound(Outcome& out) {
  const auto& set = instance_set();
  int checked = 0, saturated = 0;
  for (const auto& orbits : set.sets) {
    if (!orbits.separating) continue;
    ++checked;
    if (orbits.saturated) ++saturated;
    if (mpz_class(static_cast<unsigned long>(orbits.orbits.size())) > orbits.bound) {
      out.fail("bound exceeded: " + std::to_string(orbits.orbits.size()) + " > " + orbits.bound.get_str());
    }
  }
  // classical matrix too
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uz(-3.0, 3.0), um(-2.0, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 2;
    std::vector<Complex> z;
    std::vector<WeightRow> m;
    for (int s = 0; s < n; ++s) {
      z.emplace_back(uz(rng), uz(rng));
      m.push_back({um(rng), um(rng)});
    }
    const auto ws = WeightSystem::make(1, z, m, {1 + trial % 3});
    if (!is_separating(ws).separating) continue;
    const auto orbits = solve_multistart(ws, 0, trial);
    ++checked;
    if (mpz_class(static_cast<unsigned long>(orbits.orbits.size())) > orbits.bound) out.fail("r=1 bound exceeded");
  }
  int trips = 0;
  for (const auto& [ws, cp] : set.points) {
    const auto op = build_fundamental<Complex>(ws, PolyTuple::from_coords(cp.coords));
    const auto back = operator_to_critical_point(ws, PolyTuple{op.form->polys});
    ++trips;
    if (back.canonical_key != cp.canonical_key) out.fail("round trip changed the key of " + cp.canonical_key);
  }
  out.detail << checked << " separating instances within d(n-1, l) (" << saturated << " saturated, reported only), "
             << trips << " round trips";
}

void criterion_combinatorics(Outcome& out) {
  int pbw = 0;
  for (int r = 1; r <= 3; ++r) {
    for (int k = 1; k <= 3; ++k) {
      std::vector<int> l(r, 0);
      std::function<void(int, int)> rec = [&](int c, int budget) {
        if (c == r) {
          ++pbw;
          if (d_dimension(k, r, Multidegree::make(l)) != oracle::pbw_count(k, r, l)) out.fail("d_dimension");
          return;
        }
        for (int v = 0; v <= budget; ++v) {
          l[c] = v;
          rec(c + 1, budget - v);
        }
        l[c] = 0;
      };
      rec(0, 6);
    }
  }
  int kostant = 0;
  for (int a = 0; a <= 8; ++a) {
    for (int b = 0; b <= 8; ++b) {
      ++kostant;
      if (kostant_partitions(2, Multidegree::make({a, b})) != std::min(a, b) + 1) out.fail("kostant");
    }
  }
  int sl2 = 0;
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> ms(n, 0);
    std::function<void(int)> rec = [&](int s) {
      if (s == n) {
        const int total = std::accumulate(ms.begin(), ms.end(), 0);
        for (int m_inf = -1; m_inf <= total + 1; ++m_inf) {
          ++sl2;
          if (sl2_multiplicity(ms, m_inf) != oracle::sl2_multiplicity(ms, m_inf)) out.fail("sl2 multiplicity");
        }
        return;
      }
      for (int v = 0; v <= 4; ++v) {
        ms[s] = v;
        rec(s + 1);
      }
    };
    rec(0);
  }
  out.detail << pbw << " PBW cases, " << kostant << " Kostant cases, " << sl2 << " sl2 cases";
}

Complex log_step(Complex a, Complex b) {
  Complex d = a - b;
  const double two_pi = 2.0 * std::numbers::pi;
  d.imag(d.imag() - two_pi * std::round(d.imag() / two_pi));
  return d;
}

void criterion_gradient(Outcome& out) {
  std::mt19937_64 rng(1618);
  std::uniform_int_distribution<int> pick_r(1, 3), pick_n(1, 3), pick_l(0, 2);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst_grad = 0.0, worst_jac = 0.0, worst_sym = 0.0;
  int configs = 0;
  while (configs < 100) {
    const int r = pick_r(rng), n = pick_n(rng);
    std::vector<Complex> z;
    std::vector<WeightRow> m;
    for (int s = 0; s < n; ++s) {
      z.emplace_back(2.0 * g(rng), 2.0 * g(rng));
      WeightRow row;
      for (int i = 0; i <= r; ++i) row.emplace_back(g(rng), 0.3 * g(rng));
      m.push_back(row);
    }
    std::vector<int> l(r);
    for (auto& v : l) v = pick_l(rng);
    if (std::accumulate(l.begin(), l.end(), 0) == 0) l[0] = 1;
    const auto ws = WeightSystem::make(r, z, m, l);
    Coords t;
    for (int i = 0; i < r; ++i) {
      t.emplace_back();
      for (int j = 0; j < l[i]; ++j) t[i].emplace_back(2.0 * g(rng), 2.0 * g(rng));
    }
    std::vector<Complex> res;
    try {
      res = bae_residual(ws, t);
    } catch (const Error&) {
      continue;  // a coincidence; draw again
    }
    ++configs;
    const auto jac = bae_jacobian(ws, t);
    const auto flat = flatten(t);
    for (std::size_t k = 0; k < flat.size(); ++k) {
      auto plus = flat, minus = flat;
      plus[k] += kFdStep;
      minus[k] -= kFdStep;
      const auto tp = unflatten(ws, plus), tm = unflatten(ws, minus);
      const Complex grad = -log_step(log_master(ws, tp), log_master(ws, tm)) / (2 * kFdStep);
      worst_grad = std::max(worst_grad, std::abs(grad - res[k]) / std::max(1.0, std::abs(res[k])));
      const auto rp = bae_residual(ws, tp), rm = bae_residual(ws, tm);
      for (std::size_t j = 0; j < flat.size(); ++j) {
        const double scale = std::max(1.0, std::abs(jac(j, k)));
        worst_jac = std::max(worst_jac, std::abs((rp[j] - rm[j]) / (2 * kFdStep) - jac(j, k)) / scale);
        worst_sym = std::max(worst_sym, std::abs(jac(j, k) - jac(k, j)) / scale);
      }
    }
  }
  if (worst_grad > kGradientTol) out.fail("gradient " + std::to_string(worst_grad));
  if (worst_jac > kGradientTol) out.fail("Jacobian " + std::to_string(worst_jac));
  if (worst_sym > kSymmetryTol) out.fail("symmetry " + std::to_string(worst_sym));
  out.detail << configs << " configurations, gradient " << worst_grad << ", Jacobian " << worst_jac << " (tol "
             << kGradientTol << "), asymmetry " << worst_sym << " (tol " << kSymmetryTol << ")";
}

}  // namespace

int main() {
  report(1, "classical count reproduction", criterion_classical);
  report(2, "Jacobi closed forms", criterion_jacobi);
  report(3, "exponents at every singular point", criterion_exponents);
  report(4, "Wronskian flag identities", criterion_flag);
  report(5, "orbit bound and round trip", criterion_bound);
  report(6, "combinatorics oracles", criterion_combinatorics);
  report(7, "gradient consistency", criterion_gradient);
  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
