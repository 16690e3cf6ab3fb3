#ifndef MALMSTEN_CLOSEDFORM_HPP
#define MALMSTEN_CLOSEDFORM_HPP

// Closed forms of the logarithmic sech integrals
//
//   Delta(a)  = int_0^inf ln(x^2 + a^2) / cosh(pi x) dx
//             = 2 ln( sqrt(2) Gamma(|a|/2 + 3/4) / Gamma(|a|/2 + 1/4) )
//   B         = int_0^inf ln(x) sech(x) dx = pi ln( 2 pi^{3/2} / Gamma(1/4)^2 )
//   C(a, b)   = int_0^inf ln(a x) sech(b x) dx
//             = (pi / b) ln( 2 sqrt(a) pi^{3/2} / (sqrt(b) Gamma(1/4)^2) ),   a, b > 0
//
// Every logarithm of a product is evaluated as a sum of logarithms.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "malmsten/specfun.hpp"

namespace malmsten::closedform {

namespace detail {
inline constexpr double ln_two = std::numbers::ln2;
inline constexpr double ln_sqrt_two = 0.5 * std::numbers::ln2;
inline const double ln_pi = std::log(std::numbers::pi);
}  // namespace detail

/// Parameters (a, b) of C(a, b); both strictly positive and finite.
class MalmstenParams {
 public:
  MalmstenParams(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::domain_error("MalmstenParams: a must be positive and finite, got " + std::to_string(a));
    }
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw std::domain_error("MalmstenParams: b must be positive and finite, got " + std::to_string(b));
    }
  }

  [[nodiscard]] double a() const { return a_; }
  [[nodiscard]] double b() const { return b_; }

  friend bool operator==(const MalmstenParams&, const MalmstenParams&) = default;

 private:
  double a_;
  double b_;
};

/// Delta(a).  Depends on |a| only and is finite at a = 0.
inline double delta_closed(double a) {
  if (!std::isfinite(a)) throw std::domain_error("delta_closed: a must be finite");
  const double h = 0.5 * std::abs(a);
  return 2.0 * (detail::ln_sqrt_two + specfun::gamma_ratio_log(h + 0.75, h + 0.25));
}

/// The constant int_0^inf ln(x) sech(x) dx.
inline double vardi_b_constant() {
  return std::numbers::pi * (detail::ln_two + 1.5 * detail::ln_pi - 2.0 * specfun::ln_gamma(0.25));
}

inline double malmsten_c(const MalmstenParams& params) {
  const double a = params.a();
  const double b = params.b();
  return (std::numbers::pi / b) * (detail::ln_two + 0.5 * std::log(a) - 0.5 * std::log(b) +
                                   1.5 * detail::ln_pi - 2.0 * specfun::ln_gamma(0.25));
}

/// d Delta / da for a > 0.
inline double delta_derivative(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw std::domain_error("delta_derivative: a must be positive and finite");
  }
  const double h = 0.5 * a;
  return specfun::digamma(h + 0.75) - specfun::digamma(h + 0.25);
}

}  // namespace malmsten::closedform

#endif  // MALMSTEN_CLOSEDFORM_HPP
