#pragma once

// Critical-point search.
//
// solve_stieltjes_real enumerates the real classical case (r = 1, real z,
// negative pairings) cell by cell: one orbit per way of distributing the l
// points over the n-1 gaps between consecutive z. Inside a cell -log|Phi| is
// strictly convex, so a safeguarded Newton descent cannot miss the minimum.
//
// solve_multistart is a heuristic for everything else. It never claims
// completeness; the d(n-1, l) bound is only reported against.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lamebethe/master.hpp"
#include "lamebethe/polytuple.hpp"
#include "lamebethe/rootdata.hpp"

namespace lamebethe {

struct SearchLog {
  std::uint64_t attempted = 0;
  std::uint64_t converged = 0;
  std::uint64_t rejected_duplicate = 0;
  std::uint64_t rejected_invariant = 0;
  std::uint64_t diverged = 0;
};

struct OrbitSet {
  std::vector<CriticalPoint> orbits;  // sorted by canonical key
  mpz_class bound;                    // d(n-1, l)
  bool saturated = false;
  bool separating = true;
  SearchLog search_log;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  double tol = kDefaultResidualTol;
  double quantum = kDefaultQuantum;
  Caps caps{};
  /// 0 means LAME_BETHE_THREADS or the hardware concurrency.
  unsigned threads = 0;
  int max_iterations = 200;
  int max_halvings = 40;
};

/// Starts used when none are requested: 50 d(n-1, l), clamped.
inline constexpr std::uint64_t kMaxDefaultStarts = 200'000;

/// Newton iterates farther than this many z-spreads from the z centroid
/// count as escaped to infinity.
inline constexpr double kEscapeRadius = 1e6;

struct NewtonResult {
  Coords t;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton on bae_residual: halves the step until a distance-weighted
/// max-norm drops. Converged means residual <= tol and no escape.
NewtonResult newton_solve(const WeightSystem& ws, Coords t, double tol, int max_iterations = 200,
                          int max_halvings = 40);

/// Final polish (at most 5 Newton steps) and audit. Throws InvariantViolation
/// naming clause (i)/(ii)/(iii) and NotCritical when the residual stays
/// above tol.
CriticalPoint certify_orbit(const WeightSystem& ws, const Coords& t,
                            double tol = kDefaultResidualTol, double quantum = kDefaultQuantum);

/// Real classical enumeration. Throws NotClassicalCase when r != 1, z is not
/// real or some pairing is not a negative real; ConvergenceFailure naming
/// the cell if a cell cannot be solved.
OrbitSet solve_stieltjes_real(const WeightSystem& ws, const SolveOptions& options = {});

/// Multi-start Newton. starts = 0 picks the default. Deterministic for a
/// fixed seed regardless of thread count. Throws BoundViolation when a
/// separating instance yields more than d(n-1, l) orbits.
OrbitSet solve_multistart(const WeightSystem& ws, std::uint64_t starts, std::uint64_t seed,
                          const SolveOptions& options = {});

/// Worker count from LAME_BETHE_THREADS (if set and positive) else the
/// hardware concurrency.
unsigned default_thread_count();

/// Compositions of l into `parts` nonnegative parts, decreasing
/// lexicographic order.
std::vector<std::vector<int>> compositions(int l, int parts);

}  // namespace lamebethe
