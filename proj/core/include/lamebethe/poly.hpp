#pragma once

// Dense univariate polynomials and rational functions over a field K
// (std::complex<double> or GaussianRational), plus quasi-polynomials
// f(x) prod (x - z_s)^{lambda_s}.
//
// Exact fields keep rational functions reduced (monic gcd removed). The
// float field never cancels near-common factors; it only normalizes the
// denominator to be monic.

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "lamebethe/errors.hpp"
#include "lamebethe/exact.hpp"

namespace lamebethe {

template <class K>
class Poly {
 public:
  using F = Field<K>;

  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(const K& v) { return Poly(std::vector<K>{v}); }
  static Poly one() { return constant(F::from_int(1)); }
  static Poly x() { return Poly(std::vector<K>{F::from_int(0), F::from_int(1)}); }
  /// x - root
  static Poly linear(const K& root) { return Poly(std::vector<K>{-root, F::from_int(1)}); }
  static Poly from_roots(std::span<const K> roots) {
    Poly p = one();
    for (const auto& t : roots) p = p * linear(t);
    return p;
  }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<K>& coeffs() const { return c_; }
  K operator[](int k) const {
    return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : F::from_int(0);
  }
  K leading() const { return c_.empty() ? F::from_int(0) : c_.back(); }

  K eval(const K& x) const {
    K acc = F::from_int(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<K> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * F::from_int(static_cast<long long>(k));
    return Poly(std::move(d));
  }

  Poly monic() const {
    if (is_zero()) return {};
    const K lead = leading();
    std::vector<K> out(c_.size());
    for (std::size_t k = 0; k < c_.size(); ++k) out[k] = c_[k] / lead;
    out.back() = F::from_int(1);
    return Poly(std::move(out));
  }

  /// Coefficients of p(x0 + h) in powers of h, truncated at `order`.
  std::vector<K> taylor(const K& x0, int order) const {
    std::vector<K> work = c_;
    std::vector<K> out;
    for (int k = 0; k <= order; ++k) {
      if (work.empty()) {
        out.push_back(F::from_int(0));
        continue;
      }
      // Synthetic division by (x - x0): remainder is the next coefficient.
      K acc = F::from_int(0);
      std::vector<K> quotient(work.size() > 1 ? work.size() - 1 : 0);
      for (int i = static_cast<int>(work.size()) - 1; i >= 0; --i) {
        acc = acc * x0 + work[i];
        if (i > 0) quotient[i - 1] = acc;
      }
      out.push_back(acc);
      work = std::move(quotient);
    }
    return out;
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F::from_int(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F::from_int(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    std::vector<K> out(a.c_.size());
    for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] = -a.c_[k];
    return Poly(std::move(out));
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<K> out(a.c_.size() + b.c_.size() - 1, F::from_int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (F::is_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(out));
  }
  friend Poly operator*(const K& s, const Poly& p) {
    std::vector<K> out(p.c_.size());
    for (std::size_t k = 0; k < p.c_.size(); ++k) out[k] = s * p.c_[k];
    return Poly(std::move(out));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Long division a = q b + rem. Throws ZeroInput for b == 0.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) fail(ErrorCode::ZeroInput, "polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly{}, a};
    std::vector<K> rem = a.c_;
    std::vector<K> q(a.c_.size() - b.c_.size() + 1, F::from_int(0));
    const K lead = b.leading();
    for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
      const K factor = rem[k + b.degree()] / lead;
      q[k] = factor;
      for (int j = 0; j <= b.degree(); ++j) rem[k + j] -= factor * b.c_[j];
      rem[k + b.degree()] = F::from_int(0);
    }
    rem.resize(b.c_.size() - 1);
    return {Poly(std::move(q)), Poly(std::move(rem))};
  }

 private:
  void trim() {
    while (!c_.empty() && F::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<K> c_;
};

/// Monic gcd by the Euclidean algorithm. Only meaningful over exact fields.
template <class K>
Poly<K> gcd(Poly<K> a, Poly<K> b) {
  while (!b.is_zero()) {
    auto rem = Poly<K>::divmod(a, b).second;
    a = std::move(b);
    b = std::move(rem);
  }
  return a.is_zero() ? Poly<K>{} : a.monic();
}

template <class K>
Poly<K> pow(const Poly<K>& p, int e) {
  Poly<K> out = Poly<K>::one();
  for (int k = 0; k < e; ++k) out = out * p;
  return out;
}

template <class To, class From>
Poly<To> convert(const Poly<From>& p) {
  std::vector<To> out;
  out.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) out.push_back(Field<To>::from_complex(Field<From>::to_complex(c)));
  return Poly<To>(std::move(out));
}

template <class K>
class RationalFn {
 public:
  using F = Field<K>;

  RationalFn() : num_(), den_(Poly<K>::one()) {}
  RationalFn(Poly<K> num) : num_(std::move(num)), den_(Poly<K>::one()) {}  // NOLINT
  RationalFn(Poly<K> num, Poly<K> den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) fail(ErrorCode::ZeroInput, "rational function with zero denominator");
    normalize();
  }

  static RationalFn constant(const K& v) { return RationalFn(Poly<K>::constant(v)); }

  /// num / prod(den_factors), reduced one factor at a time. Any common
  /// irreducible factor divides some block, so this is a full reduction,
  /// and every gcd has one small-degree argument.
  static RationalFn from_factored(Poly<K> num, std::vector<Poly<K>> den_factors) {
    if constexpr (F::kExact) {
      for (auto& block : den_factors) {
        while (!num.is_zero() && block.degree() > 0) {
          const Poly<K> g = gcd(block, Poly<K>::divmod(num, block).second);
          if (g.degree() <= 0) break;
          num = Poly<K>::divmod(num, g).first;
          block = Poly<K>::divmod(block, g).first;
        }
      }
    }
    Poly<K> den = Poly<K>::one();
    for (const auto& block : den_factors) den = den * block;
    if (den.is_zero()) fail(ErrorCode::ZeroInput, "rational function with zero denominator");
    RationalFn out(std::move(num), std::move(den), Normalized{});
    out.make_monic();
    return out;
  }

  const Poly<K>& num() const { return num_; }
  const Poly<K>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  K eval(const K& x) const {
    const K d = den_.eval(x);
    if (F::is_zero(d)) fail(ErrorCode::SingularConfiguration, "rational function evaluated at a pole");
    return num_.eval(x) / d;
  }

  RationalFn derivative() const {
    return RationalFn(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
  }

  friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
    if (a.den_ == b.den_) return RationalFn(a.num_ + b.num_, a.den_);
    return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFn operator-(const RationalFn& a) { return RationalFn(-a.num_, a.den_, Normalized{}); }
  friend RationalFn operator-(const RationalFn& a, const RationalFn& b) { return a + (-b); }
  friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
    return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
    if (b.is_zero()) fail(ErrorCode::ZeroInput, "division by the zero rational function");
    return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend RationalFn operator*(const K& s, const RationalFn& a) {
    return RationalFn(s * a.num_, a.den_, Normalized{});
  }
  friend bool operator==(const RationalFn& a, const RationalFn& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  struct Normalized {};
  RationalFn(Poly<K> num, Poly<K> den, Normalized) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.is_zero()) den_ = Poly<K>::one();
  }

  void normalize() {
    if (num_.is_zero()) {
      den_ = Poly<K>::one();
      return;
    }
    if constexpr (F::kExact) {
      const Poly<K> g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = Poly<K>::divmod(num_, g).first;
        den_ = Poly<K>::divmod(den_, g).first;
      }
    }
    make_monic();
  }

  void make_monic() {
    if (num_.is_zero()) return;
    const K lead = den_.leading();
    if (!(lead == F::from_int(1))) {
      const K inv = F::from_int(1) / lead;
      num_ = inv * num_;
      den_ = inv * den_;
    }
  }

  Poly<K> num_;
  Poly<K> den_;
};

template <class To, class From>
RationalFn<To> convert(const RationalFn<From>& f) {
  return RationalFn<To>(convert<To>(f.num()), convert<To>(f.den()));
}

/// f(x) prod_s (x - z_s)^{lambda_s}.
template <class K>
struct QuasiPoly {
  std::vector<K> base;       // z_s, distinct
  std::vector<K> exponents;  // lambda_s
  Poly<K> factor = Poly<K>::one();
};

/// ln'(q) = f'/f + sum_s lambda_s / (x - z_s), as one reduced fraction with
/// denominator f * prod(x - z_s). Throws ZeroInput for q == 0.
template <class K>
RationalFn<K> log_derivative(const QuasiPoly<K>& q) {
  using F = Field<K>;
  if (q.factor.is_zero()) fail(ErrorCode::ZeroInput, "log-derivative of the zero function");
  if (q.base.size() != q.exponents.size()) {
    fail(ErrorCode::InvalidInput, "quasi-polynomial base/exponent size mismatch");
  }
  Poly<K> den = q.factor;
  Poly<K> full = Poly<K>::one();
  for (const auto& z : q.base) full = full * Poly<K>::linear(z);
  Poly<K> num = q.factor.derivative() * full;
  for (std::size_t s = 0; s < q.base.size(); ++s) {
    if (F::is_zero(q.exponents[s])) continue;
    Poly<K> others = Poly<K>::one();
    for (std::size_t o = 0; o < q.base.size(); ++o) {
      if (o != s) others = others * Poly<K>::linear(q.base[o]);
    }
    num += q.exponents[s] * (q.factor * others);
  }
  return RationalFn<K>(std::move(num), den * full);
}

/// Roots of a complex polynomial: companion-matrix eigenvalues polished by
/// a few Newton steps. Throws ZeroInput for the zero polynomial.
std::vector<std::complex<double>> poly_roots(const Poly<std::complex<double>>& p);

}  // namespace lamebethe
