#include "mmudn/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "mmudn/error.hpp"

namespace mmudn {

namespace {

using boost::math::quadrature::gauss_kronrod;
constexpr double kPi = std::numbers::pi;
constexpr double kAlphaGuard = 2.0 + 1e-6;

void require_alpha(double alpha) {
  require(std::isfinite(alpha) && alpha > kAlphaGuard,
          "path-loss exponent must exceed 2 (integral diverges at 2)");
}

/// ln(1 + x^k) for x > 0 without overflowing x^k.
double log1p_pow(double x, double k) {
  const double lx = k * std::log(x);
  return lx > 0.0 ? lx + std::log1p(std::exp(-lx)) : std::log1p(std::exp(lx));
}

/// Adaptive G7K15 over [a, b]; throws if the error estimate misses the tolerance.
template <class F>
double integrate(F f, double a, double b, double rel_tol, const char* what) {
  double error = 0.0;
  double l1 = 0.0;
  const double value = gauss_kronrod<double, 15>::integrate(f, a, b, 20, rel_tol, &error, &l1);
  if (!std::isfinite(value) || error > std::max(rel_tol * l1, 1e-13)) {
    throw NumericalFailure(what, error);
  }
  return value;
}

}  // namespace

double rho_const(double alpha) {
  require_alpha(alpha);
  const double x = 2.0 * kPi / alpha;
  return x / std::sin(x);
}

double rho_t(double alpha, double t) {
  require_alpha(alpha);
  require(t > 0.0, "rho_t requires t > 0");
  const double k = 0.5 * alpha;
  // Lower limit (e^t - 1)^(-2/alpha); evaluated in logs so large t gives 0, not inf * 0.
  const double lower = std::exp(-std::log(std::expm1(t)) / k);
  if (lower == 0.0) return rho_const(alpha);
  const auto f = [k](double u) { return 1.0 / (1.0 + std::pow(u, k)); };
  if (lower < 1.0) {
    // Subtract the bounded head from the closed-form total. u^k is not smooth at 0, which
    // tanh-sinh absorbs through its endpoint clustering.
    boost::math::quadrature::tanh_sinh<double> head;
    double error = 0.0;
    double l1 = 0.0;
    const double value = head.integrate(f, 0.0, lower, 1e-12, &error, &l1);
    if (!std::isfinite(value) || error > std::max(1e-10 * l1, 1e-13)) {
      throw NumericalFailure("rho_t head quadrature did not converge", error);
    }
    return rho_const(alpha) - value;
  }
  boost::math::quadrature::exp_sinh<double> tail;
  double error = 0.0;
  double l1 = 0.0;
  const double value = tail.integrate(f, lower, std::numeric_limits<double>::infinity(), 1e-12,
                                      &error, &l1);
  if (!std::isfinite(value) || error > 1e-10 * std::max(l1, 1e-300)) {
    throw NumericalFailure("rho_t tail quadrature did not converge", error);
  }
  return value;
}

double se_exact_muw(double lambda_hat, double alpha) {
  require(std::isfinite(lambda_hat) && lambda_hat > 0.0, "lambda_hat must be positive");
  require_alpha(alpha);
  const double k = 0.5 * alpha;
  // With pi lambda R^2 ~ Exp(1), E_R[exp(-lambda_u pi R^2 c)] = 1 / (1 + c / lambda_hat).
  const auto coverage = [&](double t) {
    if (t <= 0.0) return 1.0;
    const double c = std::pow(std::expm1(t), 1.0 / k) * rho_t(alpha, t);
    return 1.0 / (1.0 + c / lambda_hat);
  };

  // The integrand is ~1 up to t* where lambda_hat ~ rho e^(t/k), then decays like e^(-t/k).
  const double rho = rho_const(alpha);
  const double knee = std::max(1.0, k * std::log(std::max(lambda_hat / rho, 1.0)));
  constexpr double kTol = 1e-9;
  double total = integrate(coverage, 0.0, knee, kTol, "se_exact head quadrature");
  double a = knee;
  // Geometric tail: after each window of length 40 k the integrand shrinks by ~e^-40.
  for (int i = 0; i < 8; ++i) {
    const double b = a + 40.0 * k;
    const double piece = integrate(coverage, a, b, kTol, "se_exact tail quadrature");
    total += piece;
    a = b;
    if (piece < 1e-15 * total) break;
  }
  return total;
}

SeBounds se_bounds_muw(double lambda_hat, double alpha) {
  require(std::isfinite(lambda_hat) && lambda_hat > 0.0, "lambda_hat must be positive");
  const double k = 0.5 * alpha;
  const double rho = rho_const(alpha);
  SeBounds b;
  b.lower = std::max(0.0, log1p_pow(lambda_hat / rho, k) - k);
  b.upper = log1p_pow((1.0 + 2.0 / alpha) * lambda_hat, k) - k;
  return b;
}

double c_l(double lambda_m, double r_l) {
  require(lambda_m > 0.0 && std::isfinite(lambda_m), "lambda_m must be positive");
  require(r_l >= 0.0 && !std::isnan(r_l), "r_L must be nonnegative");
  if (std::isinf(r_l)) return 1.0;
  return -std::expm1(-lambda_m * kPi * r_l * r_l);
}

SeBounds se_bounds_mmw(double lambda_hat_m, double lambda_m, double alpha_m, double theta,
                       double r_l) {
  require(std::isfinite(lambda_hat_m) && lambda_hat_m > 0.0, "lambda_hat_m must be positive");
  require(std::isfinite(lambda_m) && lambda_m > 0.0, "lambda_m must be positive");
  require(theta > 0.0 && theta <= 2.0 * kPi, "theta must lie in (0, 2 pi]");
  require(r_l > 0.0 && !std::isnan(r_l), "r_L must be positive");
  require_alpha(alpha_m);

  const double rho = rho_const(alpha_m);
  const double k = 0.5 * alpha_m;
  const double beam = theta / (2.0 * kPi);
  const double los_mass = std::isinf(r_l) ? std::numeric_limits<double>::infinity()
                                          : lambda_m * kPi * r_l * r_l;
  // [theta (e^t - 1) / (2 pi)]^(2 / alpha)
  const auto spread = [=](double t) { return std::pow(beam * std::expm1(t), 1.0 / k); };
  const auto c_l_t = [=](double t) {
    if (std::isinf(los_mass)) return 1.0;
    return -std::expm1(-los_mass * (1.0 + rho / lambda_hat_m * spread(t)));
  };

  const auto bound = [&](double coefficient) {
    // Support ends where coefficient * spread(t) = 1.
    const double cutoff = std::log1p(std::pow(1.0 / coefficient, k) / beam);
    const auto f = [&](double t) {
      return c_l_t(t) * std::max(0.0, 1.0 - coefficient * spread(t));
    };
    // (e^t - 1)^(2/alpha) is not smooth at t = 0; tanh-sinh clusters nodes at the ends.
    boost::math::quadrature::tanh_sinh<double> q;
    double error = 0.0;
    double l1 = 0.0;
    const double value = q.integrate(f, 0.0, cutoff, 1e-10, &error, &l1);
    if (!std::isfinite(value) || error > std::max(1e-8 * l1, 1e-13)) {
      throw NumericalFailure("mmW bound quadrature did not converge", error);
    }
    return value;
  };

  SeBounds b;
  b.lower = bound(rho / lambda_hat_m);
  b.upper = bound(1.0 / ((1.0 + 2.0 / alpha_m) * lambda_hat_m));
  return b;
}

double se_asymptotic_muw(double lambda_hat, double alpha) {
  require(std::isfinite(lambda_hat) && lambda_hat >= 1.0, "asymptotic SE requires lambda_hat >= 1");
  require_alpha(alpha);
  return 0.5 * alpha * std::log(lambda_hat);
}

double se_asymptotic_mmw(double lambda_hat_m, double lambda_m, double alpha_m, double r_l) {
  return c_l(lambda_m, r_l) * se_asymptotic_muw(lambda_hat_m, alpha_m);
}

}  // namespace mmudn
