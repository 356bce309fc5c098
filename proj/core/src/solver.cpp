#include "lamebethe/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <thread>

#include <Eigen/Dense>

#include "lamebethe/errors.hpp"

namespace lamebethe {

namespace {

Coords add_step(const WeightSystem& ws, const Coords& t, const Eigen::VectorXcd& step, double a) {
  std::vector<Complex> flat = flatten(t);
  for (std::size_t k = 0; k < flat.size(); ++k) flat[k] += a * step(static_cast<Eigen::Index>(k));
  return unflatten(ws, flat);
}

void sort_groups(Coords& t) {
  for (auto& group : t) {
    std::sort(group.begin(), group.end(), [](const Complex& a, const Complex& b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
  }
}

mpz_class orbit_bound(const WeightSystem& ws, const Caps& caps) {
  if (ws.n() < 2) return ws.total_l() == 0 ? 1 : 0;
  return d_dimension(ws.n() - 1, ws.rank(), ws.l(), caps);
}

// ---- real classical cells ----

struct RealData {
  std::vector<double> z;  // ascending
  std::vector<double> p;  // pairings, all negative
};

std::optional<RealData> real_classical_data(const WeightSystem& ws) {
  if (ws.rank() != 1) return std::nullopt;
  std::vector<std::pair<double, double>> pts;
  for (int s = 0; s < ws.n(); ++s) {
    const Complex z = ws.z()[s];
    const Complex p = ws.pairing(s, 0);
    if (std::abs(z.imag()) > 1e-14 * (1.0 + std::abs(z.real()))) return std::nullopt;
    if (std::abs(p.imag()) > 1e-14 * (1.0 + std::abs(p.real())) || !(p.real() < 0.0)) {
      return std::nullopt;
    }
    pts.emplace_back(z.real(), p.real());
  }
  std::sort(pts.begin(), pts.end());
  RealData d;
  for (const auto& [z, p] : pts) {
    d.z.push_back(z);
    d.p.push_back(p);
  }
  return d;
}

struct Cell {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<int> gap;  // gap index per variable
};

Cell make_cell(const RealData& d, const std::vector<int>& counts) {
  Cell c;
  for (std::size_t g = 0; g < counts.size(); ++g) {
    for (int k = 0; k < counts[g]; ++k) {
      c.lo.push_back(d.z[g]);
      c.hi.push_back(d.z[g + 1]);
      c.gap.push_back(static_cast<int>(g));
    }
  }
  return c;
}

// Chebyshev nodes of each gap, ascending.
std::vector<double> chebyshev_start(const RealData& d, const std::vector<int>& counts) {
  std::vector<double> x;
  for (std::size_t g = 0; g < counts.size(); ++g) {
    const int k = counts[g];
    const double mid = 0.5 * (d.z[g] + d.z[g + 1]);
    const double half = 0.5 * (d.z[g + 1] - d.z[g]);
    for (int j = k - 1; j >= 0; --j) {
      x.push_back(mid + half * std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * k)));
    }
  }
  return x;
}

bool feasible(const Cell& c, const std::vector<double>& x) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] > c.lo[j] && x[j] < c.hi[j])) return false;
    if (j + 1 < x.size() && c.gap[j] == c.gap[j + 1] && !(x[j] < x[j + 1])) return false;
  }
  return true;
}

double energy(const RealData& d, const std::vector<double>& x) {
  double e = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t s = 0; s < d.z.size(); ++s) e += d.p[s] * std::log(std::abs(x[j] - d.z[s]));
    for (std::size_t k = j + 1; k < x.size(); ++k) e -= 2.0 * std::log(std::abs(x[j] - x[k]));
  }
  return e;
}

double partial(const RealData& d, const std::vector<double>& x, std::size_t j, double at) {
  double g = 0.0;
  for (std::size_t s = 0; s < d.z.size(); ++s) g += d.p[s] / (at - d.z[s]);
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k != j) g -= 2.0 / (at - x[k]);
  }
  return g;
}

Eigen::VectorXd gradient(const RealData& d, const std::vector<double>& x) {
  Eigen::VectorXd g(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) g(static_cast<Eigen::Index>(j)) = partial(d, x, j, x[j]);
  return g;
}

Eigen::MatrixXd hessian(const RealData& d, const std::vector<double>& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = 0.0;
    for (std::size_t s = 0; s < d.z.size(); ++s) {
      const double u = x[j] - d.z[s];
      diag -= d.p[s] / (u * u);
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double u = x[j] - x[k];
      diag += 2.0 / (u * u);
      h(j, k) = -2.0 / (u * u);
    }
    h(j, j) = diag;
  }
  return h;
}

// Damped Newton descent on the convex cell energy. Returns the final
// gradient max-norm.
double descend(const RealData& d, const Cell& c, std::vector<double>& x, double target,
               int max_iterations) {
  if (x.empty()) return 0.0;
  double e = energy(d, x);
  double gnorm = gradient(d, x).cwiseAbs().maxCoeff();
  for (int it = 0; it < max_iterations && gnorm > target; ++it) {
    const Eigen::VectorXd g = gradient(d, x);
    const Eigen::LLT<Eigen::MatrixXd> llt(hessian(d, x));
    Eigen::VectorXd step = llt.info() == Eigen::Success ? Eigen::VectorXd(-llt.solve(g)) : Eigen::VectorXd(-g);
    bool moved = false;
    double a = 1.0;
    for (int h = 0; h < 60; ++h, a *= 0.5) {
      std::vector<double> trial = x;
      for (std::size_t j = 0; j < x.size(); ++j) trial[j] += a * step(static_cast<Eigen::Index>(j));
      if (!feasible(c, trial)) continue;
      const double et = energy(d, trial);
      if (et < e || (et <= e && a < 1e-8)) {
        x = std::move(trial);
        e = et;
        moved = true;
        break;
      }
    }
    gnorm = gradient(d, x).cwiseAbs().maxCoeff();
    if (!moved) break;
  }
  return gnorm;
}

// Gauss-Seidel bisection: each partial derivative increases monotonically
// from -inf to +inf between the neighbours of x_j.
void bisection_sweeps(const RealData& d, const Cell& c, std::vector<double>& x, int sweeps) {
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      double a = c.lo[j];
      double b = c.hi[j];
      if (j > 0 && c.gap[j - 1] == c.gap[j]) a = x[j - 1];
      if (j + 1 < x.size() && c.gap[j + 1] == c.gap[j]) b = x[j + 1];
      for (int k = 0; k < 200 && b - a > 1e-15 * (1.0 + std::abs(a)); ++k) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        (partial(d, x, j, m) > 0.0 ? b : a) = m;
      }
      x[j] = 0.5 * (a + b);
    }
  }
}

std::string describe_cell(const std::vector<int>& counts) {
  std::string s = "(";
  for (std::size_t g = 0; g < counts.size(); ++g) {
    if (g) s += ",";
    s += std::to_string(counts[g]);
  }
  return s + ")";
}

// ---- multistart plumbing ----

enum class StartStatus { Converged, Diverged, Invariant };

struct StartOutcome {
  StartStatus status = StartStatus::Diverged;
  CriticalPoint point;
};

Complex centroid(const std::vector<Complex>& z) {
  Complex c{};
  for (const auto& v : z) c += v;
  return z.empty() ? c : c / static_cast<double>(z.size());
}

double spread(const std::vector<Complex>& z, Complex c) {
  double s = 0.0;
  for (const auto& v : z) s = std::max(s, std::abs(v - c));
  return s > 0.0 ? s : 1.0;
}

}  // namespace

unsigned default_thread_count() {
  if (const char* env = std::getenv("LAME_BETHE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

std::vector<std::vector<int>> compositions(int l, int parts) {
  std::vector<std::vector<int>> out;
  if (parts <= 0) {
    if (l == 0) out.emplace_back();
    return out;
  }
  std::vector<int> cur(parts, 0);
  // Decreasing lexicographic order, recursing on the first part.
  auto rec = [&](auto&& self, int idx, int left) -> void {
    if (idx == parts - 1) {
      cur[idx] = left;
      out.push_back(cur);
      return;
    }
    for (int k = left; k >= 0; --k) {
      cur[idx] = k;
      self(self, idx + 1, left - k);
    }
  };
  rec(rec, 0, l);
  return out;
}

NewtonResult newton_solve(const WeightSystem& ws, Coords t, double tol, int max_iterations,
                          int max_halvings) {
  // The plain residual decays like 1/|t| at infinity, so the step control
  // weighs each equation by the distance of its variable from the z cloud.
  const Complex c = centroid(ws.z());
  const double scale = spread(ws.z(), c);
  auto merit = [&](const Coords& x, double& plain) {
    std::vector<Complex> f;
    try {
      f = bae_residual(ws, x);
    } catch (const Error&) {
      plain = std::numeric_limits<double>::infinity();
      return plain;
    }
    const auto flat = flatten(x);
    double m = 0.0;
    plain = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      plain = std::max(plain, std::abs(f[k]));
      m = std::max(m, std::abs(f[k]) * (1.0 + std::abs(flat[k] - c) / scale));
    }
    return m;
  };
  NewtonResult res;
  double current = merit(t, res.residual);
  res.t = std::move(t);
  if (ws.total_l() == 0) {
    res.converged = true;
    return res;
  }
  for (; res.iterations < max_iterations && res.residual > tol; ++res.iterations) {
    if (!std::isfinite(current)) break;
    const auto f = bae_residual(ws, res.t);
    Eigen::VectorXcd rhs(static_cast<Eigen::Index>(f.size()));
    for (std::size_t k = 0; k < f.size(); ++k) rhs(static_cast<Eigen::Index>(k)) = -f[k];
    const Eigen::FullPivLU<Eigen::MatrixXcd> lu(bae_jacobian(ws, res.t));
    if (!lu.isInvertible()) break;
    const Eigen::VectorXcd step = lu.solve(rhs);
    if (!step.allFinite()) break;
    bool accepted = false;
    double a = 1.0;
    for (int h = 0; h <= max_halvings; ++h, a *= 0.5) {
      Coords trial = add_step(ws, res.t, step, a);
      double plain = 0.0;
      const double m = merit(trial, plain);
      if (m < current) {
        res.t = std::move(trial);
        res.residual = plain;
        current = m;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  bool bounded = true;
  for (const auto& x : flatten(res.t)) bounded = bounded && std::abs(x - c) < kEscapeRadius * scale;
  res.converged = bounded && res.residual <= tol;
  return res;
}

namespace {

// Newton stalls once coordinates sit within an ulp of the root; clustered
// roots then still show residuals of |J| ulp. Step single coordinates to
// neighbouring doubles while the residual max-norm drops.
void ulp_polish(const WeightSystem& ws, Coords& t, double& residual, int passes = 64) {
  auto flat = flatten(t);
  for (int pass = 0; pass < passes; ++pass) {
    bool improved = false;
    for (auto& x : flat) {
      for (int part = 0; part < 2; ++part) {
        for (double dir : {-1.0, 1.0}) {
          const Complex saved = x;
          double re = x.real(), im = x.imag();
          (part == 0 ? re : im) = std::nextafter(part == 0 ? re : im, dir * HUGE_VAL);
          x = Complex(re, im);
          double r = std::numeric_limits<double>::infinity();
          try {
            r = max_norm(bae_residual(ws, unflatten(ws, flat)));
          } catch (const Error&) {
          }
          if (r < residual) {
            residual = r;
            improved = true;
          } else {
            x = saved;
          }
        }
      }
    }
    if (!improved) break;
  }
  t = unflatten(ws, flat);
}

}  // namespace

CriticalPoint certify_orbit(const WeightSystem& ws, const Coords& t, double tol, double quantum) {
  check_shape(ws, t);
  auto audit = [&](const Coords& c) {
    const OffDiagonalReport rep = check_off_diagonal(ws, c, kRootSeparation);
    if (!rep.ok) fail(ErrorCode::InvariantViolation, rep.detail);
  };
  audit(t);
  NewtonResult polished = newton_solve(ws, t, 1e-3 * tol, 5);
  if (polished.residual > 1e-3 * tol && std::isfinite(polished.residual)) ulp_polish(ws, polished.t, polished.residual);
  if (!(polished.residual <= tol)) {
    fail(ErrorCode::NotCritical,
         "BAE residual " + std::to_string(polished.residual) + " exceeds tolerance");
  }
  audit(polished.t);
  CriticalPoint cp;
  cp.coords = std::move(polished.t);
  sort_groups(cp.coords);
  cp.residual_norm = max_norm(bae_residual(ws, cp.coords));
  cp.degenerate = jacobian_conditioning(ws, cp.coords) <= kDegeneracyRatio;
  cp.canonical_key = canonicalize(cp.coords, quantum);
  return cp;
}

OrbitSet solve_stieltjes_real(const WeightSystem& ws, const SolveOptions& options) {
  const auto data = real_classical_data(ws);
  if (!data) {
    fail(ErrorCode::NotClassicalCase,
         "real classical solver needs r = 1, real z and negative real pairings");
  }
  OrbitSet out;
  out.bound = orbit_bound(ws, options.caps);
  out.separating = is_separating(ws, options.caps).separating;
  const int l = ws.total_l();
  const int gaps = ws.n() - 1;
  if (gaps < 1 && l > 0) {
    out.saturated = out.bound == 0;
    return out;
  }
  for (const auto& counts : compositions(l, std::max(gaps, 0))) {
    ++out.search_log.attempted;
    const Cell cell = make_cell(*data, counts);
    std::vector<double> x = chebyshev_start(*data, counts);
    const double target = 1e-3 * options.tol;
    double g = descend(*data, cell, x, target, options.max_iterations);
    if (g > target) {
      bisection_sweeps(*data, cell, x, 200);
      g = descend(*data, cell, x, target, options.max_iterations);
    }
    Coords t{std::vector<Complex>(x.begin(), x.end())};
    CriticalPoint cp;
    try {
      cp = certify_orbit(ws, t, options.tol, options.quantum);
    } catch (const Error& e) {
      fail(ErrorCode::ConvergenceFailure, "cell " + describe_cell(counts) + ": " + e.what());
    }
    ++out.search_log.converged;
    out.orbits.push_back(std::move(cp));
  }
  std::sort(out.orbits.begin(), out.orbits.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) { return a.canonical_key < b.canonical_key; });
  for (std::size_t k = 1; k < out.orbits.size(); ++k) {
    if (out.orbits[k].canonical_key == out.orbits[k - 1].canonical_key) {
      fail(ErrorCode::ConvergenceFailure, "two cells produced the same orbit");
    }
  }
  out.saturated = mpz_class(static_cast<unsigned long>(out.orbits.size())) == out.bound;
  return out;
}

OrbitSet solve_multistart(const WeightSystem& ws, std::uint64_t starts, std::uint64_t seed,
                          const SolveOptions& options) {
  OrbitSet out;
  out.bound = orbit_bound(ws, options.caps);
  const SeparatingResult sep = is_separating(ws, options.caps);
  out.separating = sep.separating;
  if (!sep.separating) {
    out.warnings.push_back("weights are not separating; the critical set may be infinite");
  }
  if (starts == 0) {
    const mpz_class want = 50 * out.bound;
    starts = want > kMaxDefaultStarts ? kMaxDefaultStarts
                                      : std::max<std::uint64_t>(1, want.get_ui());
  }

  // Perturbed Stieltjes cells come first when the data allows it.
  std::vector<std::vector<double>> cell_starts;
  if (const auto data = real_classical_data(ws); data && ws.n() >= 2) {
    for (const auto& counts : compositions(ws.total_l(), ws.n() - 1)) {
      cell_starts.push_back(chebyshev_start(*data, counts));
    }
  }

  const Complex c = centroid(ws.z());
  const double scale = spread(ws.z(), c);
  std::vector<StartOutcome> outcomes(starts);
  std::atomic<std::uint64_t> next{0};

  auto run_start = [&](std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    Coords t(ws.rank());
    if (index < cell_starts.size()) {
      const double jitter = 1e-3 * scale;
      for (double x : cell_starts[index]) t[0].emplace_back(x + jitter * normal(rng), jitter * normal(rng));
    } else if (index % 2 == 0) {
      for (int i = 0; i < ws.rank(); ++i) {
        for (int j = 0; j < ws.l().entries[i]; ++j) {
          const double re = normal(rng);
          const double im = normal(rng);
          t[i].push_back(c + scale * Complex(re, im));
        }
      }
    } else {
      // random convex combinations of the z, slightly blurred
      std::exponential_distribution<double> expo(1.0);
      for (int i = 0; i < ws.rank(); ++i) {
        for (int j = 0; j < ws.l().entries[i]; ++j) {
          Complex acc{};
          double total = 0.0;
          for (const auto& zs : ws.z()) {
            const double w = expo(rng);
            acc += w * zs;
            total += w;
          }
          const double re = normal(rng);
          const double im = normal(rng);
          t[i].push_back(acc / total + 0.25 * scale * Complex(re, im));
        }
      }
    }
    StartOutcome& o = outcomes[index];
    NewtonResult nr = newton_solve(ws, std::move(t), options.tol, options.max_iterations,
                                   options.max_halvings);
    if (!nr.converged) {
      o.status = StartStatus::Diverged;
      return;
    }
    try {
      o.point = certify_orbit(ws, nr.t, options.tol, options.quantum);
      o.status = StartStatus::Converged;
    } catch (const Error& e) {
      o.status = e.code() == ErrorCode::InvariantViolation ? StartStatus::Invariant
                                                           : StartStatus::Diverged;
    }
  };

  const unsigned workers = std::max<unsigned>(
      1, std::min<std::uint64_t>(options.threads ? options.threads : default_thread_count(), starts));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t k = next++; k < starts; k = next++) run_start(k);
    });
  }
  for (auto& th : pool) th.join();

  // Single-owner reduction in start order.
  std::map<std::string, CriticalPoint> unique;
  for (auto& o : outcomes) {
    ++out.search_log.attempted;
    switch (o.status) {
      case StartStatus::Diverged:
        ++out.search_log.diverged;
        break;
      case StartStatus::Invariant:
        ++out.search_log.rejected_invariant;
        break;
      case StartStatus::Converged: {
        ++out.search_log.converged;
        auto key = o.point.canonical_key;
        if (!unique.emplace(std::move(key), std::move(o.point)).second) {
          ++out.search_log.rejected_duplicate;
        }
        break;
      }
    }
  }
  for (auto& [key, cp] : unique) out.orbits.push_back(std::move(cp));
  const mpz_class found(static_cast<unsigned long>(out.orbits.size()));
  out.saturated = found == out.bound;
  if (out.separating && found > out.bound) {
    fail(ErrorCode::BoundViolation, "found " + found.get_str() + " orbits but d(n-1, l) = " +
                                        out.bound.get_str());
  }
  return out;
}

}  // namespace lamebethe
