#pragma once

namespace mmudn {

/// Spectral-efficiency bounds in nats/s/Hz; lower is clamped at 0.
struct SeBounds {
  double lower = 0.0;
  double upper = 0.0;

  double midpoint() const noexcept { return 0.5 * (lower + upper); }
};

/// Integral of du / (1 + u^(alpha/2)) over [0, inf) = (2 pi / alpha) csc(2 pi / alpha).
/// Throws InvalidInput for alpha <= 2 + 1e-6, where the integral diverges.
double rho_const(double alpha);

/// Same integrand over [(e^t - 1)^(-2/alpha), inf), by quadrature. Throws for t <= 0.
double rho_t(double alpha, double t);

/// Ergodic uW SE of the typical user with nearest-BS association at density ratio
/// lambda_hat = lambda / lambda_u: the integral over t > 0 of the coverage probability
/// E_R[exp(-lambda_u pi R^2 (e^t - 1)^(2/alpha) rho_t)], R the nearest-BS distance.
/// Throws NumericalFailure (carrying the achieved error) if quadrature does not converge.
double se_exact_muw(double lambda_hat, double alpha);

/// Closed-form uW UDN bounds (lower uses rho_const, upper uses 1 + 2/alpha).
SeBounds se_bounds_muw(double lambda_hat, double alpha);

/// Probability that the nearest mmW BS is within LOS range: 1 - exp(-lambda_m pi r_L^2).
double c_l(double lambda_m, double r_l);

/// mmW UDN bounds: integrals over t of C_L(t) (1 - k [theta (e^t - 1) / (2 pi)]^(2/alpha))^+
/// with k = rho_m / lambda_hat (lower) or 1 / ((1 + 2/alpha) lambda_hat) (upper), and
/// C_L(t) = 1 - exp(-lambda_m pi r_L^2 {1 + rho_m / lambda_hat [theta (e^t - 1) / (2 pi)]^(2/alpha)}).
/// r_l may be +infinity.
SeBounds se_bounds_mmw(double lambda_hat_m, double lambda_m, double alpha_m, double theta,
                       double r_l);

/// (alpha / 2) ln(lambda_hat); requires lambda_hat >= 1.
double se_asymptotic_muw(double lambda_hat, double alpha);

/// (alpha_m / 2) C_L ln(lambda_hat_m); requires lambda_hat_m >= 1.
double se_asymptotic_mmw(double lambda_hat_m, double lambda_m, double alpha_m, double r_l);

inline constexpr double kNatsPerBit = 0.69314718055994530942;

}  // namespace mmudn
