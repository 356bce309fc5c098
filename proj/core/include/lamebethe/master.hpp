#pragma once

// The gl_{r+1} master function and its Bethe ansatz system.
//
//   Phi = prod (t^(i)_j - z_s)^{-(Lambda_s, alpha_i)}
//         prod_{j<k} (t^(i)_j - t^(i)_k)^2
//         prod (t^(i)_j - t^(i+1)_k)^{-1}
//
// The residual vector is the left-hand side of the Bethe ansatz equations,
// which is -d/dt log Phi. Nothing here ever forms Phi itself.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lamebethe/rootdata.hpp"

namespace lamebethe {

/// Coordinates grouped by color: coords[i] holds the l_i values t^(i)_j.
using Coords = std::vector<std::vector<Complex>>;

inline constexpr double kDefaultResidualTol = 1e-10;
inline constexpr double kDefaultQuantum = 1e-6;
inline constexpr double kDegeneracyRatio = 1e-6;

struct CriticalPoint {
  Coords coords;
  double residual_norm = 0.0;
  bool degenerate = false;  // multiplicity ">= 2, undetermined" when true
  std::string canonical_key;

  /// 1 for nondegenerate points; 0 stands for "undetermined (>= 2)".
  int multiplicity() const { return degenerate ? 0 : 1; }
};

/// Throws InvalidInput unless coords has r groups of sizes l_i.
void check_shape(const WeightSystem& ws, const Coords& t);

/// Flattens (i, j) in color-major order; the order used by residuals and
/// Jacobians.
std::vector<Complex> flatten(const Coords& t);
Coords unflatten(const WeightSystem& ws, const std::vector<Complex>& flat);

/// A branch of log Phi (principal branch per factor).
/// Throws SingularConfiguration if a factor vanishes.
Complex log_master(const WeightSystem& ws, const Coords& t);

/// Left-hand sides of the Bethe ansatz equations ordered by (i, j).
/// Throws SingularConfiguration on a vanishing denominator.
std::vector<Complex> bae_residual(const WeightSystem& ws, const Coords& t);

/// Closed-form Jacobian of bae_residual (symmetric: minus the Hessian of
/// log Phi).
Eigen::MatrixXcd bae_jacobian(const WeightSystem& ws, const Coords& t);

double max_norm(const std::vector<Complex>& v);

/// S_l-orbit fingerprint: each color group rounded to `quantum` and sorted
/// by (re, im).
std::string canonicalize(const Coords& t, double quantum = kDefaultQuantum);

/// sigma_min / sigma_max of the Jacobian (1 for l = 0).
double jacobian_conditioning(const WeightSystem& ws, const Coords& t);

}  // namespace lamebethe
