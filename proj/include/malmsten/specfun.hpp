#ifndef MALMSTEN_SPECFUN_HPP
#define MALMSTEN_SPECFUN_HPP

/*
 * Real-argument log-gamma and digamma on x > 0.
 *
 * ln_gamma is assembled from three pieces:
 *
 *   x >= 10          Stirling series with 8 Bernoulli terms (truncation < 4e-17).
 *   0.5 <= x < 2.5   Taylor series of lnGamma(2 + e) in e = x - 2 or x - 1,
 *                    lnGamma(2 + e) = (1 - gamma) e + sum_{k>=2} (-1)^k (zeta(k) - 1) e^k / k,
 *                    with lnGamma(1 + e) = lnGamma(2 + e) - log1p(e).  The zeta(k) - 1
 *                    coefficients decay like 2^-k so 31 terms reach 1e-19 at |e| = 1/2.
 *   otherwise        recurrence into one of the two ranges above.
 *
 * The Taylor pieces keep relative accuracy near the zeros of lnGamma at 1 and 2,
 * which a shift-and-subtract scheme cannot.
 *
 * digamma uses the asymptotic series for x >= 10 and psi(x) = psi(x + 1) - 1/x below.
 */

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace malmsten::specfun {

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double half_ln_two_pi = 0.91893853320467274178;
inline constexpr double stirling_threshold = 10.0;

// zeta(k) - 1 for k = 2..32 (mpmath, 20 digits).
inline constexpr std::array<double, 31> zeta_minus_one = {
    0.64493406684822643647,   0.2020569031595942854,    0.082323233711138191516,
    0.036927755143369926331,  0.017343061984449139715,  0.0083492773819228268398,
    0.0040773561979443393787, 0.0020083928260822144179, 0.00099457512781808533715,
    0.0004941886041194645587, 0.00024608655330804829864, 0.00012271334757848914675,
    6.1248135058704829259e-5, 3.0588236307020493552e-5, 1.5282259408651871733e-5,
    7.6371976378997622736e-6, 3.8172932649998398565e-6, 1.9082127165539389257e-6,
    9.5396203387279611315e-7, 4.7693298678780646312e-7, 2.3845050272773299e-7,
    1.1921992596531107307e-7, 5.9608189051259479612e-8, 2.9803503514652280186e-8,
    1.4901554828365041235e-8, 7.450711789835429492e-9,  3.7253340247884570548e-9,
    1.8626597235130490064e-9, 9.3132743241966818287e-10, 4.656629065033784073e-10,
    2.328311833676505492e-10,
};

// B_{2k} for k = 1..8.
inline constexpr std::array<double, 8> bernoulli_even = {
    1.0 / 6.0,    -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0,   -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0,
};

inline void require_positive_finite(double x, const char* function) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error(std::string(function) + ": argument must be positive and finite, got " +
                            std::to_string(x));
  }
}

// lnGamma(2 + e) for |e| <= 1/2.
inline double ln_gamma_two_plus(double e) {
  double sum = 0.0;
  // Horner from the tail: sum_{k=2}^{32} (-1)^k c_k e^k / k.
  for (std::size_t i = zeta_minus_one.size(); i-- > 0;) {
    const double k = static_cast<double>(i + 2);
    const double coef = ((i % 2 == 0) ? 1.0 : -1.0) * zeta_minus_one[i] / k;
    sum = sum * e + coef;
  }
  return e * ((1.0 - euler_gamma) + e * sum);
}

// Stirling correction sum_{k=1}^{8} B_{2k} / (2k (2k-1) x^{2k-1}).
inline double stirling_correction(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double sum = 0.0;
  for (std::size_t i = bernoulli_even.size(); i-- > 0;) {
    const double k2 = 2.0 * static_cast<double>(i + 1);
    sum = sum * inv2 + bernoulli_even[i] / (k2 * (k2 - 1.0));
  }
  return sum * inv;
}

inline double ln_gamma_stirling(double x) {
  return (x - 0.5) * std::log(x) - x + half_ln_two_pi + stirling_correction(x);
}

}  // namespace detail

/// Natural logarithm of the gamma function for x > 0.
/// Throws std::domain_error for x <= 0, NaN or infinity.
inline double ln_gamma(double x) {
  detail::require_positive_finite(x, "ln_gamma");
  if (x >= detail::stirling_threshold) return detail::ln_gamma_stirling(x);
  if (x < 0.5) {
    // lnGamma(x) = lnGamma(1 + x) - ln x, with 1 + x in [1, 1.5).
    return detail::ln_gamma_two_plus(x) - std::log1p(x) - std::log(x);
  }
  if (x < 1.5) return detail::ln_gamma_two_plus(x - 1.0) - std::log1p(x - 1.0);
  if (x < 2.5) return detail::ln_gamma_two_plus(x - 2.0);
  // Downward recurrence into [1.5, 2.5): lnGamma(x) = lnGamma(x - n) + ln((x-1)...(x-n)).
  double y = x;
  double product = 1.0;
  while (y >= 2.5) {
    y -= 1.0;
    product *= y;
  }
  return detail::ln_gamma_two_plus(y - 2.0) + std::log(product);
}

/// Digamma function psi_0(x) = d/dx lnGamma(x) for x > 0.
inline double digamma(double x) {
  detail::require_positive_finite(x, "digamma");
  double shift = 0.0;
  while (x < detail::stirling_threshold) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  for (std::size_t i = detail::bernoulli_even.size(); i-- > 0;) {
    const double k2 = 2.0 * static_cast<double>(i + 1);
    series = series * inv2 + detail::bernoulli_even[i] / k2;
  }
  return std::log(x) - 0.5 / x - series * inv2 + shift;
}

/// ln(Gamma(p) / Gamma(q)).  When both arguments sit in the Stirling range the
/// leading terms are differenced analytically, so the result keeps its accuracy
/// even when the two log-gammas are large and nearly equal.
inline double gamma_ratio_log(double p, double q) {
  detail::require_positive_finite(p, "gamma_ratio_log");
  detail::require_positive_finite(q, "gamma_ratio_log");
  if (p == q) return 0.0;
  if (p < detail::stirling_threshold || q < detail::stirling_threshold) {
    return ln_gamma(p) - ln_gamma(q);
  }
  // (p - 1/2) ln p - (q - 1/2) ln q - (p - q)
  //   = (p - 1/2) ln(p/q) + (p - q)(ln q - 1)
  const double diff = p - q;
  const double log_ratio = std::log1p(diff / q);
  return (p - 0.5) * log_ratio + diff * (std::log(q) - 1.0) +
         (detail::stirling_correction(p) - detail::stirling_correction(q));
}

}  // namespace malmsten::specfun

#endif  // MALMSTEN_SPECFUN_HPP
