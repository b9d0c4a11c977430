#pragma once

#include "mwk/quadrature.hpp"

namespace mwk::specfun {

/// Indices and argument of W_{kappa,mu}(x). Evaluation is even in mu.
struct WhittakerArgs {
    double kappa = 0.0;
    double mu = 0.0;
    double x = 1.0;
};

/// Euler gamma. Arguments below 1/2 go through the reflection formula.
/// Throws PoleError at 0, -1, -2, ... and OverflowError past ~171.6.
double gamma(double x);

/// sin(pi x) with exact zeros at the integers.
double sin_pi(double x);

/// Rising factorial (a)_m = a (a+1) ... (a+m-1), computed as a direct product.
double pochhammer(double a, unsigned m);

/// x^a / Gamma(a+1) on x > 0, and 0 on x <= 0. Requires a > -1.
double phi(double a, double x);

/// Tolerance used for the integral representation behind whittaker_w.
inline constexpr numerics::QuadratureSpec kWhittakerQuadrature{1e-12, 0.0, 2000};

/// W_{kappa,mu}(x) evaluated directly from
///   e^{-x/2} x^{mu+1/2} \int_0^\infty phi_{mu-kappa-1/2}(tau) (1+tau)^{mu+kappa-1/2} e^{-tau x} dtau.
/// Requires mu - kappa + 1/2 > 0 (DomainError otherwise). The tau integral is
/// split at 1/x with the algebraic endpoint weight absorbed by substitution.
double whittaker_w_integral(double kappa, double mu, double x,
                            const numerics::QuadratureSpec& spec = kWhittakerQuadrature);

/// W_{kappa,mu}(x) together with W_{kappa-1,mu}(x).
struct WhittakerPair {
    double w = 0.0;        // W_{kappa,mu}(x)
    double w_lower = 0.0;  // W_{kappa-1,mu}(x)
};

/// Evaluates the pair from the integral representation at |mu|. When
/// |mu| - kappa + 1/2 is too small for it, the two lowest orders are taken
/// far enough below kappa and the three-term recurrence
///   W_{k+1} = (x - 2k) W_k - ((k - 1/2)^2 - mu^2) W_{k-1}
/// is run upward. Throws DomainError for x <= 0, OverflowError if a value
/// stops being finite.
WhittakerPair whittaker_pair(double kappa, double mu, double x);

double whittaker_w(const WhittakerArgs& args);

/// d/dx W_{kappa,mu}(x) = ((kappa - x/2) W_{kappa,mu} + ((kappa-1/2)^2 - mu^2) W_{kappa-1,mu}) / x.
double whittaker_w_deriv(const WhittakerArgs& args);

/// Relative residual of
///   \int_0^\infty x^{b-c/2-1} e^{-x/2} W_{c/2-a,(c-1)/2}(x) dx = Gamma(b) Gamma(b-c+1) / Gamma(a+b-c+1).
/// Requires b > 0 and b - c + 1 > 0; throws QuadratureError if the outer
/// integral does not converge.
double moment_identity_residual(double a, double b, double c);

}  // namespace mwk::specfun
