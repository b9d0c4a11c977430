#pragma once

#include <functional>
#include <vector>
#include <variant>

namespace mwk::numerics {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;

    /// Throws DomainError unless rel_tol > 0, abs_tol >= 0 and max_subdivisions >= 1.
    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
    int evaluations = 0;
};

/// Finite interval [lo, hi]. When the integrand behaves like
/// (x - lo)^left_exponent near lo (left_exponent > -1), the rule maps
/// x = lo + (hi - lo) u^(1/(1+left_exponent)) so the transformed integrand
/// is regular at the endpoint.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    double left_exponent = 0.0;
};

/// Half-line [start, inf). Split at start + scale; the head is treated as an
/// Interval (with left_exponent), the tail through x = start + scale + L*(-log(1-t))
/// with L = 2*scale, so integrands decaying at least like exp(-x/(2*scale))
/// become bounded on t in [0, 1).
struct HalfLine {
    double start = 0.0;
    double scale = 1.0;
    double left_exponent = 0.0;
};

using Domain = std::variant<Interval, HalfLine>;
using Integrand = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

/// Globally adaptive Gauss-Kronrod (10/21) quadrature. Stops when the summed
/// error estimate is <= max(rel_tol*|value|, abs_tol); throws QuadratureError
/// (carrying the best estimate) after spec.max_subdivisions bisections.
QuadResult integrate_1d(const Integrand& f, const Domain& domain, const QuadratureSpec& spec = {});

/// Iterated 2-D quadrature: outer variable r over outer, inner s over inner.
/// The inner integrals run at a tenth of the outer tolerances; the reported
/// error is the outer estimate plus the worst inner relative estimate times
/// |value|. Inner non-convergence propagates as QuadratureError.
QuadResult integrate_2d(const Integrand2& f, const Domain& outer, const Domain& inner,
                        const QuadratureSpec& spec = {});

/// Gauss-Legendre nodes and weights on [lo, hi].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussRule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

}  // namespace mwk::numerics
