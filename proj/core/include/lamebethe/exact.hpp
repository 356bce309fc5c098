#pragma once

// Exact Gaussian rationals Q[i]. Every finite double converts exactly, which
// is what lets the exact path reproduce float inputs bit for bit.

#include <complex>
#include <string>

#include <gmpxx.h>

namespace lamebethe {

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(int v) : re_(v), im_(0) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }

  /// Exact conversion; throws InvalidInput on non-finite parts.
  static GaussianRational from_complex(std::complex<double> c);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  GaussianRational conj() const { return {re_, -im_}; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend GaussianRational operator-(const GaussianRational& a) { return {-a.re_, -a.im_}; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  std::string str() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Field adaptor used by the polynomial templates.
template <class K>
struct Field;

template <>
struct Field<std::complex<double>> {
  using Scalar = std::complex<double>;
  static constexpr bool kExact = false;
  static bool is_zero(const Scalar& v) { return v == Scalar{}; }
  static std::complex<double> to_complex(const Scalar& v) { return v; }
  static Scalar from_complex(std::complex<double> v) { return v; }
  static Scalar from_int(long long v) { return Scalar(static_cast<double>(v), 0.0); }
};

template <>
struct Field<GaussianRational> {
  using Scalar = GaussianRational;
  static constexpr bool kExact = true;
  static bool is_zero(const Scalar& v) { return v.is_zero(); }
  static std::complex<double> to_complex(const Scalar& v) { return v.to_complex(); }
  static Scalar from_complex(std::complex<double> v) { return Scalar::from_complex(v); }
  static Scalar from_int(long long v) { return Scalar(mpq_class(static_cast<long>(v)), 0); }
};

}  // namespace lamebethe
