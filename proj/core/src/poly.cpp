#include "lamebethe/poly.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace lamebethe {

std::vector<std::complex<double>> poly_roots(const Poly<std::complex<double>>& p) {
  using C = std::complex<double>;
  if (p.is_zero()) fail(ErrorCode::ZeroInput, "roots of the zero polynomial");
  const int n = p.degree();
  if (n == 0) return {};
  const Poly<C> monic = p.monic();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -monic[i];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::ConvergenceFailure, "companion eigenvalue iteration failed");
  }
  std::vector<C> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  const Poly<C> dp = monic.derivative();
  for (auto& x : roots) {
    for (int it = 0; it < 4; ++it) {
      const C f = monic.eval(x);
      const C df = dp.eval(x);
      if (df == C{}) break;
      const C next = x - f / df;
      if (!(std::abs(monic.eval(next)) < std::abs(f))) break;
      x = next;
    }
  }
  return roots;
}

}  // namespace lamebethe
