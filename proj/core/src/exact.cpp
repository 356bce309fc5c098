#include "lamebethe/exact.hpp"

#include <cmath>

#include "lamebethe/errors.hpp"

namespace lamebethe {

GaussianRational GaussianRational::from_complex(std::complex<double> c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
    fail(ErrorCode::InvalidInput, "cannot convert a non-finite value exactly");
  }
  return {mpq_class(c.real()), mpq_class(c.imag())};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) fail(ErrorCode::ZeroInput, "division by zero in Q[i]");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  const mpq_class den = o.norm();
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / den;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / den;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

std::string GaussianRational::str() const {
  if (sgn(im_) == 0) return re_.get_str();
  return "(" + re_.get_str() + (sgn(im_) < 0 ? "-" : "+") + mpq_class(abs(im_)).get_str() + "i)";
}

}  // namespace lamebethe
