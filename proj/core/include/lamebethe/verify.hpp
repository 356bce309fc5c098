#pragma once

// Checks that tie a critical point to its fundamental operator.
//
// Flag solutions. With v_0 = u and v_{k+1} = (d - g_{k+1}) v_k the factored
// operator becomes the triangular system v_k' = g_{k+1} v_k + v_{k+1},
// v_{r+1} = 0. The flag solution u_i is the solution with v_{i-1}(c) =
// phi_i(c) and every other v_k(c) = 0 at the base point c, where
// phi_i = y_i T_i / y_{i-1}. Then Wr(u_1..u_i) = y_i T_i ... T_1 exactly, so
// the check is a genuine test of the operator's factors against (y, T).
//
// Each solution is integrated along the straight segment from c to a
// sample point; derivatives come from Taylor jets of the same system.

#include <string>
#include <vector>

#include "lamebethe/diffop.hpp"
#include "lamebethe/jet.hpp"
#include "lamebethe/master.hpp"
#include "lamebethe/polytuple.hpp"

namespace lamebethe {

inline constexpr double kIdentityTolerance = 1e-6;

struct FlagOptions {
  int samples = 12;
  double tol = kIdentityTolerance;
  double ode_abs = 1e-14;
  double ode_rel = 1e-13;
};

/// Disc D(center, radius) free of z and of the roots of y; samples lie on
/// two concentric circles inside it.
struct SampleDisc {
  Complex center{};
  double radius = 0.0;
  std::vector<Complex> points;
  /// the outer sample circle (first `probe_count` points)
  int probe_count = 0;
};

SampleDisc choose_sample_disc(const WeightSystem& ws, const PolyTuple& y, int samples);

/// Branch of (x - z_s)^lambda with its cut running from z_s away from a
/// centre point, so the cuts never cross a disc around that centre.
class Branches {
 public:
  Branches(std::vector<Complex> z, Complex center);
  Complex log(int s, Complex x) const;
  Complex power(int s, Complex lambda, Complex x) const;
  /// Jet of (x0 + h - z_s)^lambda.
  Jet power_jet(int s, Complex lambda, Complex x0, int order) const;
  /// Jet of T_i (0-based i).
  Jet t_jet(const WeightSystem& ws, int i, Complex x0, int order) const;
  Complex t_value(const WeightSystem& ws, int i, Complex x0) const;

 private:
  std::vector<Complex> z_;
  std::vector<Complex> dir_;
};

struct FlagWitness {
  SampleDisc disc;
  /// u_jets[p][i] is the jet of u_{i+1} at disc.points[p].
  std::vector<std::vector<Jet>> u_jets;
  /// per level i = 1..r+1: max relative error of Wr(u_1..u_i) vs y_i T_i..T_1
  std::vector<double> wronskian_residuals;
  /// per solution: |D u_i| relative to the size of its terms
  std::vector<double> solution_residuals;
  /// per level i: max over u = x^k (k <= 3) of the factored-form identity
  /// error L_i..L_1 u vs Wr(u_1..u_i, u) / (y_i T_i..T_1)
  std::vector<double> factored_residuals;
  double worst = 0.0;
  bool ok = false;
};

/// Builds the flag and measures every residual; never throws on failure.
/// Throws PathThroughSingularity if a sample path meets a singular point.
template <class K>
FlagWitness evaluate_flag(const WeightSystem& ws, const PolyTuple& y, const LinearDiffOp<K>& op,
                          const FlagOptions& options = {});

/// evaluate_flag, then FlagViolation when a residual exceeds options.tol.
template <class K>
FlagWitness check_flag(const WeightSystem& ws, const PolyTuple& y, const LinearDiffOp<K>& op,
                       const FlagOptions& options = {});

struct TildeReport {
  /// per i = 1..r: max relative error of Wr(y_i, y~_i) vs (T_{i+1}/T_i) y_{i-1} y_{i+1}
  std::vector<double> residuals;
  /// max |y~_i| on the probe circle
  std::vector<double> probe_max;
  bool bounded = true;
  double worst = 0.0;
  bool ok = false;
};

/// y~_1 = u_2 / T_1 and y~_i = Wr(u_1..u_{i-1}, u_{i+1}) / (T_i..T_1).
TildeReport evaluate_tilde_identities(const WeightSystem& ws, const PolyTuple& y,
                                      const FlagWitness& flag, double tol = kIdentityTolerance);

/// Builds the flag and checks the y~ identities; throws IdentityViolation
/// naming the index.
template <class K>
TildeReport check_tilde_identities(const WeightSystem& ws, const PolyTuple& y,
                                   const LinearDiffOp<K>& op, const FlagOptions& options = {});

/// T_1^{-1} D T_1 from the factored form: every factor shifts by ln'(T_1).
template <class K>
LinearDiffOp<K> conjugate_by_t1(const WeightSystem& ws, const LinearDiffOp<K>& op);

/// Exponents of the conjugated operator against the shifted lists; throws
/// ExponentMismatch.
ExponentComparison check_conjugated_exponents(const WeightSystem& ws, const ExactOp& op);
ExponentComparison check_conjugated_exponents(const WeightSystem& ws, const FloatOp& op,
                                              double tol = 1e-7);

/// Roots of y, assembled as coordinates and certified by the BAE residual
/// (no polishing against the BAE). Throws OffDiagonalViolation before any
/// BAE evaluation and NotCritical with the residual vector.
CriticalPoint operator_to_critical_point(const WeightSystem& ws, const PolyTuple& y,
                                         double tol = kDefaultResidualTol,
                                         double quantum = kDefaultQuantum);

}  // namespace lamebethe
