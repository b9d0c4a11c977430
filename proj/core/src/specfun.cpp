#include "mwk/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mwk/errors.hpp"

namespace mwk::specfun {

namespace {

// Lowest admissible value of mu - kappa + 1/2 at the base of the recurrence.
// Below it the tau^(a) weight approaches a delta and the representation loses
// its margin.
constexpr double kBaseMargin = 0.25;

void require_positive_argument(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        std::ostringstream os;
        os << "Whittaker function requires a finite argument x > 0 (got x = " << x << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

double sin_pi(double x) {
    if (!std::isfinite(x)) throw DomainError("sin_pi: non-finite argument");
    double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
    if (r > 0.5) return std::sin(std::numbers::pi * (1.0 - r));
    if (r < -0.5) return -std::sin(std::numbers::pi * (1.0 + r));
    return std::sin(std::numbers::pi * r);
}

double gamma(double x) {
    if (std::isnan(x)) throw DomainError("gamma: NaN argument");
    if (x <= 0.0 && x == std::floor(x)) {
        std::ostringstream os;
        os << "gamma: pole at non-positive integer " << x;
        throw PoleError(os.str());
    }
    if (x < 0.5) {
        const double g = std::tgamma(1.0 - x);
        if (!std::isfinite(g)) {
            // 1/Gamma(1-x) underflows: Gamma(x) itself is then below the
            // smallest normal number, which we return as signed zero.
            return 0.0 * sin_pi(x);
        }
        return std::numbers::pi / (sin_pi(x) * g);
    }
    const double g = std::tgamma(x);
    if (!std::isfinite(g)) {
        std::ostringstream os;
        os << "gamma: overflow at x = " << x;
        throw OverflowError(os.str());
    }
    return g;
}

double pochhammer(double a, unsigned m) {
    double p = 1.0;
    for (unsigned k = 0; k < m; ++k) p *= a + k;
    return p;
}

double phi(double a, double x) {
    if (!(a > -1.0)) {
        std::ostringstream os;
        os << "phi: order a must exceed -1 (got " << a << ")";
        throw DomainError(os.str());
    }
    if (x <= 0.0) return 0.0;
    return std::exp(a * std::log(x) - std::lgamma(a + 1.0));
}

double whittaker_w_integral(double kappa, double mu, double x, const numerics::QuadratureSpec& spec) {
    require_positive_argument(x);
    const double a = mu - kappa - 0.5;
    const double b = mu + kappa - 0.5;
    if (!(a > -1.0)) {
        std::ostringstream os;
        os << "integral representation of W needs mu - kappa + 1/2 > 0 (kappa = " << kappa
           << ", mu = " << mu << ")";
        throw DomainError(os.str());
    }
    const auto integrand = [a, b, x](double tau) {
        return std::pow(tau, a) * std::pow(1.0 + tau, b) * std::exp(-tau * x);
    };
    const auto res = numerics::integrate_1d(integrand, numerics::HalfLine{0.0, 1.0 / x, a}, spec);
    if (!std::isfinite(res.value) || res.value <= 0.0) {
        std::ostringstream os;
        os << "W integral is not representable (kappa = " << kappa << ", mu = " << mu
           << ", x = " << x << ")";
        throw OverflowError(os.str());
    }
    const double log_w = -0.5 * x + (mu + 0.5) * std::log(x) - std::lgamma(a + 1.0) + std::log(res.value);
    if (log_w > std::log(std::numeric_limits<double>::max())) {
        std::ostringstream os;
        os << "W overflows double precision (kappa = " << kappa << ", mu = " << mu << ", x = " << x << ")";
        throw OverflowError(os.str());
    }
    return std::exp(log_w);
}

WhittakerPair whittaker_pair(double kappa, double mu, double x) {
    require_positive_argument(x);
    if (!std::isfinite(kappa) || !std::isfinite(mu)) {
        throw DomainError("Whittaker function requires finite indices");
    }
    mu = std::abs(mu);
    const double deficit = kappa - mu - 0.5 + kBaseMargin;
    const int shifts = deficit > 0.0 ? static_cast<int>(std::ceil(deficit)) : 0;
    const double base = kappa - shifts;

    double lower = whittaker_w_integral(base - 1.0, mu, x);
    double current = whittaker_w_integral(base, mu, x);
    for (int j = 0; j < shifts; ++j) {
        const double k = base + j;
        const double next = (x - 2.0 * k) * current - ((k - 0.5) * (k - 0.5) - mu * mu) * lower;
        lower = current;
        current = next;
        if (!std::isfinite(current)) {
            std::ostringstream os;
            os << "W recurrence overflow (kappa = " << kappa << ", mu = " << mu << ", x = " << x << ")";
            throw OverflowError(os.str());
        }
    }
    return {current, lower};
}

double whittaker_w(const WhittakerArgs& args) {
    return whittaker_pair(args.kappa, args.mu, args.x).w;
}

double whittaker_w_deriv(const WhittakerArgs& args) {
    const auto [w, w_lower] = whittaker_pair(args.kappa, args.mu, args.x);
    const double k = args.kappa;
    const double c = (k - 0.5) * (k - 0.5) - args.mu * args.mu;
    return ((k - 0.5 * args.x) * w + c * w_lower) / args.x;
}

double moment_identity_residual(double a, double b, double c) {
    if (!(b > 0.0) || !(b - c + 1.0 > 0.0)) {
        std::ostringstream os;
        os << "moment identity needs b > 0 and b - c + 1 > 0 (a = " << a << ", b = " << b
           << ", c = " << c << ")";
        throw DomainError(os.str());
    }
    const double kappa = 0.5 * c - a;
    const double mu = 0.5 * (c - 1.0);
    const double rhs = gamma(b) * gamma(b - c + 1.0) / gamma(a + b - c + 1.0);
    if (rhs == 0.0) throw DomainError("moment identity: right-hand side vanishes");

    // W_{kappa,mu}(x) ~ x^{1/2 - |mu|} at the origin.
    const double exponent = b - 0.5 * c - 1.0 + 0.5 - std::abs(mu);
    const auto lhs = numerics::integrate_1d(
        [&](double x) {
            return std::exp((b - 0.5 * c - 1.0) * std::log(x) - 0.5 * x) *
                   whittaker_w({kappa, mu, x});
        },
        numerics::HalfLine{0.0, 1.0, exponent}, numerics::QuadratureSpec{1e-11, 0.0, 2000});
    return std::abs(lhs.value - rhs) / std::abs(rhs);
}

}  // namespace mwk::specfun
