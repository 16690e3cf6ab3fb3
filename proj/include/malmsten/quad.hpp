#ifndef MALMSTEN_QUAD_HPP
#define MALMSTEN_QUAD_HPP

/*
 * Double-exponential quadrature.
 *
 *   integrate_finite         tanh-sinh:  x = mid + half * tanh(pi/2 sinh t)
 *   integrate_semi_infinite  exp-sinh:   x = exp(pi/2 sinh t)
 *
 * Both run the trapezoid rule in t with step h = 2^-level, reusing every node of
 * the previous level, and stop when two successive levels agree to
 * max(abs_tol, rel_tol * |I|).  Nodes are never placed on an endpoint; nodes
 * closer than 1e-300 to a finite endpoint are dropped.
 *
 * References:
 *   Takahasi, Mori, "Double exponential formulas for numerical integration" (1974).
 *   Tanaka et al., "Function classes for double exponential integration formulas" (2009).
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace malmsten::quad {

struct ToleranceSpec {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_level = 12;

  /// Smallest relative tolerance accepted; anything tighter is below binary64 resolution.
  static constexpr double min_rel_tol = 1e-14;
  static constexpr int max_supported_level = 20;

  void validate() const {
    if (!(rel_tol >= min_rel_tol) || !std::isfinite(rel_tol)) {
      throw std::invalid_argument("ToleranceSpec: rel_tol must be finite and >= 1e-14");
    }
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
      throw std::invalid_argument("ToleranceSpec: abs_tol must be finite and > 0");
    }
    if (max_level < 1 || max_level > max_supported_level) {
      throw std::invalid_argument("ToleranceSpec: max_level must lie in [1, 20]");
    }
  }

  [[nodiscard]] double threshold(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = false;
  int levels = 0;  // finest level used

  friend bool operator==(const QuadratureResult&, const QuadratureResult&) = default;
};

/// Raised when the integrand produces a non-finite value.
class quadrature_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline constexpr double endpoint_guard = 1e-300;
inline constexpr double tail_cutoff = 1e-300;
inline constexpr double half_pi = std::numbers::pi / 2.0;

struct NodeSum {
  double sum = 0.0;
  double abs_sum = 0.0;
};

inline void check_finite(double fx, double x) {
  if (!std::isfinite(fx)) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand returned a non-finite value (" << fx << ") at x = " << x;
    throw quadrature_error(os.str());
  }
}

// Shared level-doubling driver.  `level_zero` returns the trapezoid sum on
// integer t; `refine(h)` returns the sum over the new nodes t = (2j+1) h.
template <class LevelZero, class Refine>
QuadratureResult drive(const ToleranceSpec& tol, std::size_t& evaluations, LevelZero&& level_zero,
                       Refine&& refine) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  NodeSum total = level_zero();
  double h = 1.0;
  double previous = total.sum * h;
  QuadratureResult result;
  result.value = previous;
  result.error_estimate = std::abs(previous);
  for (int level = 1; level <= tol.max_level; ++level) {
    h *= 0.5;
    const NodeSum fresh = refine(h);
    total.sum += fresh.sum;
    total.abs_sum += fresh.abs_sum;
    const double current = total.sum * h;
    const double l1 = total.abs_sum * h;
    result.value = current;
    result.levels = level;
    result.error_estimate = std::max(std::abs(current - previous), 4.0 * eps * l1);
    previous = current;
    if (level >= 2 && result.error_estimate <= tol.threshold(current)) {
      result.converged = true;
      break;
    }
  }
  result.evaluations = evaluations;
  return result;
}

}  // namespace detail

/// Integrate f over (lo, hi) by tanh-sinh quadrature.
///
/// f may take one argument (x) or two (x, hi - x).  The two-argument form receives
/// the distance to the upper endpoint computed without cancellation, which is what
/// an integrand with a singularity or removable point at hi should use.
template <class F>
  requires std::invocable<const F&, double> || std::invocable<const F&, double, double>
QuadratureResult integrate_finite(const F& f, double lo, double hi, const ToleranceSpec& tol = {}) {
  tol.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw std::invalid_argument("integrate_finite: need finite lo < hi");
  }
  constexpr bool two_arg = std::invocable<const F&, double, double>;
  const double half = 0.5 * (hi - lo);
  const double mid = lo + half;
  std::size_t evaluations = 0;

  auto call = [&](double x, double to_hi) -> double {
    ++evaluations;
    double fx;
    if constexpr (two_arg) {
      fx = f(x, to_hi);
    } else {
      fx = f(x);
    }
    detail::check_finite(fx, x);
    return fx;
  };

  // Largest t whose endpoint offset half * (1 - tanh u) stays above the guard:
  // 1 - tanh u ~ 2 exp(-2u).
  const double u_max = 0.5 * std::log(2.0 * half / detail::endpoint_guard);
  const double t_max = std::asinh(u_max / detail::half_pi);

  // Contribution of the mirrored pair of nodes at +t and -t (or the centre at t = 0).
  auto nodes = [&](double t) -> detail::NodeSum {
    detail::NodeSum s;
    if (t == 0.0) {
      const double fx = call(mid, hi - mid);
      const double w = detail::half_pi * half;
      s.sum = fx * w;
      s.abs_sum = std::abs(s.sum);
      return s;
    }
    const double u = detail::half_pi * std::sinh(t);
    const double cu = std::cosh(u);
    const double w = half * detail::half_pi * std::cosh(t) / (cu * cu);
    const double offset = half / (std::exp(u) * cu);  // half * (1 - tanh u)
    if (!(offset > detail::endpoint_guard) || w == 0.0) return s;
    const double x_hi = hi - offset;
    const double x_lo = lo + offset;
    if (two_arg || x_hi < hi) {
      const double term = call(x_hi, offset) * w;
      s.sum += term;
      s.abs_sum += std::abs(term);
    }
    if (x_lo > lo) {
      const double term = call(x_lo, hi - x_lo) * w;
      s.sum += term;
      s.abs_sum += std::abs(term);
    }
    return s;
  };

  auto level_zero = [&] {
    detail::NodeSum s = nodes(0.0);
    for (double t = 1.0; t <= t_max; t += 1.0) {
      const auto n = nodes(t);
      s.sum += n.sum;
      s.abs_sum += n.abs_sum;
    }
    return s;
  };
  auto refine = [&](double h) {
    detail::NodeSum s;
    for (double t = h; t <= t_max; t += 2.0 * h) {
      const auto n = nodes(t);
      s.sum += n.sum;
      s.abs_sum += n.abs_sum;
    }
    return s;
  };
  return detail::drive(tol, evaluations, level_zero, refine);
}

/// Integrate f over (0, inf) by exp-sinh quadrature.  f must decay at least like
/// x^-2 and may have an integrable (logarithmic or power) singularity at 0.
/// The right tail is truncated at the first integer t where |f w| falls below 1e-300.
template <class F>
  requires std::invocable<const F&, double>
QuadratureResult integrate_semi_infinite(const F& f, const ToleranceSpec& tol = {}) {
  tol.validate();
  std::size_t evaluations = 0;

  // x = exp(pi/2 sinh t) stays inside [1e-300, 1e300] for |t| <= t_bound.
  const double t_bound = std::asinh(std::log(1.0 / detail::endpoint_guard) / detail::half_pi);
  double t_lo = -t_bound;
  double t_hi = t_bound;

  auto term = [&](double t) -> double {
    const double s = detail::half_pi * std::sinh(t);
    const double x = std::exp(s);
    const double w = detail::half_pi * std::cosh(t) * x;
    ++evaluations;
    const double fx = f(x);
    detail::check_finite(fx, x);
    return fx * w;
  };

  auto level_zero = [&] {
    detail::NodeSum s;
    const double centre = term(0.0);
    s.sum = centre;
    s.abs_sum = std::abs(centre);
    for (double t = 1.0; t <= t_bound; t += 1.0) {
      const double v = term(t);
      if (std::abs(v) < detail::tail_cutoff) {
        t_hi = t;
        break;
      }
      s.sum += v;
      s.abs_sum += std::abs(v);
    }
    for (double t = -1.0; t >= -t_bound; t -= 1.0) {
      const double v = term(t);
      if (std::abs(v) < detail::tail_cutoff) {
        t_lo = t;
        break;
      }
      s.sum += v;
      s.abs_sum += std::abs(v);
    }
    return s;
  };
  auto refine = [&](double h) {
    detail::NodeSum s;
    for (double t = h; t < t_hi; t += 2.0 * h) {
      const double v = term(t);
      s.sum += v;
      s.abs_sum += std::abs(v);
    }
    for (double t = -h; t > t_lo; t -= 2.0 * h) {
      const double v = term(t);
      s.sum += v;
      s.abs_sum += std::abs(v);
    }
    return s;
  };
  return detail::drive(tol, evaluations, level_zero, refine);
}

}  // namespace malmsten::quad

#endif  // MALMSTEN_QUAD_HPP
