#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

namespace oracle {

// Laplace exponent of the alpha-stable subordinator with jumps below eps removed:
// B_eps(u) = int_eps^inf (1 - e^{-ux}) nu(dx).
inline double truncated_exponent(double alpha, double eps, double u) {
  const double a = 0.5 * alpha;
  const double g = std::tgamma(1.0 - a);
  if (u == 0.0) return 0.0;
  return (std::pow(eps, -a) * -std::expm1(-u * eps) + std::pow(u, a) * boost::math::tgamma(1.0 - a, u * eps)) / g;
}

// E[S_t^{-1/2} | S_t > 0] for the truncated pure-jump clock.
inline double truncated_inverse_sqrt(double alpha, double eps, double t) {
  const double a = 0.5 * alpha;
  const double k = std::pow(eps, -a) / std::tgamma(1.0 - a);
  const double empty = std::exp(-t * k);
  // u = s^2 removes the u^{-1/2} singularity.
  auto g = [&](double s) { return 2.0 * (std::exp(-t * truncated_exponent(alpha, eps, s * s)) - empty); };
  boost::math::quadrature::exp_sinh<double> q;
  const double integral = q.integrate(g, 0.0, std::numeric_limits<double>::infinity());
  return integral / std::sqrt(M_PI) / (1.0 - empty);
}

// d/dx E sign(x + W_S) at x = 0 for a standard Brownian motion run by the clock S.
inline double sign_gradient_truncated(double alpha, double eps, double t) {
  return std::sqrt(2.0 / M_PI) * truncated_inverse_sqrt(alpha, eps, t);
}

// Same with the untruncated stable clock: sqrt(2/pi) E S_t^{-1/2}.
inline double sign_gradient_stable(double alpha, double t) {
  const double a = 0.5 * alpha;
  return std::sqrt(2.0 / M_PI) * std::tgamma(0.5 / a) / (a * std::tgamma(0.5)) * std::pow(t, -0.5 / a);
}

}  // namespace oracle
