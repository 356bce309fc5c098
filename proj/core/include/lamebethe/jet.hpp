#pragma once

// Truncated Taylor series f(x0 + h) = sum_k c_k h^k. Used to take exact
// derivatives of numerically integrated solutions and of quasi-polynomials.

#include <algorithm>
#include <complex>
#include <vector>

#include "lamebethe/poly.hpp"

namespace lamebethe {

class Jet {
 public:
  using C = std::complex<double>;

  Jet() = default;
  explicit Jet(std::vector<C> coeffs) : c_(std::move(coeffs)) {}

  static Jet constant(C v, int order) {
    std::vector<C> c(order + 1, C{});
    c[0] = v;
    return Jet(std::move(c));
  }
  /// x0 + h
  static Jet variable(C x0, int order) {
    Jet j = constant(x0, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }
  static Jet of_poly(const Poly<C>& p, C x0, int order) { return Jet(p.taylor(x0, order)); }
  static Jet of_rational(const RationalFn<C>& f, C x0, int order) {
    return of_poly(f.num(), x0, order) / of_poly(f.den(), x0, order);
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  C value() const { return c_.empty() ? C{} : c_[0]; }
  C operator[](int k) const { return k <= order() ? c_[k] : C{}; }
  const std::vector<C>& coeffs() const { return c_; }

  /// k-th derivative at x0.
  C derivative_value(int k) const {
    C v = (*this)[k];
    for (int i = 2; i <= k; ++i) v *= static_cast<double>(i);
    return v;
  }

  /// d/dh; the order drops by one.
  Jet derivative() const {
    if (c_.size() <= 1) return Jet(std::vector<C>{});
    std::vector<C> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
    return Jet(std::move(d));
  }

  Jet truncated(int order) const {
    std::vector<C> c(c_.begin(), c_.begin() + std::min<std::size_t>(c_.size(), order + 1));
    return Jet(std::move(c));
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    const int n = std::min(a.order(), b.order());
    std::vector<C> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = a.c_[k] + b.c_[k];
    return Jet(std::move(c));
  }
  friend Jet operator-(const Jet& a) {
    std::vector<C> c(a.c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = -a.c_[k];
    return Jet(std::move(c));
  }
  friend Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }
  friend Jet operator*(const Jet& a, const Jet& b) {
    const int n = std::min(a.order(), b.order());
    std::vector<C> c(n + 1, C{});
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Jet(std::move(c));
  }
  friend Jet operator*(C s, const Jet& a) {
    std::vector<C> c(a.c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = s * a.c_[k];
    return Jet(std::move(c));
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    const int n = std::min(a.order(), b.order());
    if (n < 0) return Jet{};
    if (b.c_[0] == C{}) fail(ErrorCode::SingularConfiguration, "jet division by a vanishing series");
    std::vector<C> q(n + 1);
    for (int k = 0; k <= n; ++k) {
      C acc = a.c_[k];
      for (int j = 0; j < k; ++j) acc -= q[j] * b.c_[k - j];
      q[k] = acc / b.c_[0];
    }
    return Jet(std::move(q));
  }

 private:
  std::vector<C> c_;
};

/// Determinant of a small square matrix of jets (Laplace expansion).
Jet jet_determinant(const std::vector<std::vector<Jet>>& m);

/// Wr(f_1..f_k) as a jet: det [f_j^{(i)}].
Jet wronskian(const std::vector<Jet>& fs);

/// Wr from plain derivative values: columns[j][i] = f_j^{(i)}(x).
std::complex<double> wronskian_values(const std::vector<std::vector<std::complex<double>>>& columns);

}  // namespace lamebethe
