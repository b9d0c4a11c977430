#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mwk/dense.hpp"
#include "mwk/quadrature.hpp"

namespace mwk::whittaker {

/// Real parameters m < z, z' < m+1 (z, z' not integers), with t = z z'.
struct KernelParams {
    double z = 0.0;
    double zp = 0.0;
    double t = 0.0;
    int m = 0;
};

/// Builds KernelParams, rejecting integer z or z' and pairs that do not
/// share a unit interval (DomainError).
KernelParams validate_params(double z, double zp);

/// Complex entry point. Pairs with a nonzero imaginary part (the z' = conj(z)
/// family) throw UnsupportedModeError; real pairs go through the overload above.
KernelParams validate_params(std::complex<double> z, std::complex<double> zp);

/// Nonzero real point of R* = R_+ disjoint-union R_-.
class SignedPoint {
public:
    explicit SignedPoint(double value);

    double value() const noexcept { return value_; }
    double magnitude() const noexcept { return value_ < 0.0 ? -value_ : value_; }
    bool positive() const noexcept { return value_ > 0.0; }

private:
    double value_;
};

using Configuration = std::vector<SignedPoint>;

enum class HalfLine { plus, minus };

/// A, B and their derivatives on one half-line at a positive argument x:
///   A_+(x) = x^{-1/2} W_{(z+z'+1)/2, mu}(x),  B_+(x) = x^{-1/2} W_{(z+z'-1)/2, mu}(x),
///   A_-(x) = x^{-1/2} W_{(-z-z'+1)/2, mu}(x), B_-(x) = x^{-1/2} W_{(-z-z'-1)/2, mu}(x),
/// with mu = (z - z')/2. The raw W values are kept for the closed-form blocks.
struct BlockValues {
    double x = 0.0;
    double a = 0.0, b = 0.0;
    double da = 0.0, db = 0.0;
    double wa = 0.0, wb = 0.0;
    double dwa = 0.0, dwb = 0.0;
};

BlockValues block_values(const KernelParams& p, HalfLine side, double x);

double a_plus(const KernelParams& p, double x);
double b_plus(const KernelParams& p, double x);
double a_minus(const KernelParams& p, double x);
double b_minus(const KernelParams& p, double x);

/// Matrix Whittaker kernel K(x, y) on R*. Negative coordinates enter the
/// blocks through |u|. Same-sign arguments closer than 1e-6 relative use the
/// diagonal formula at their midpoint.
double kernel(const KernelParams& p, SignedPoint x, SignedPoint y);

/// K(x, x) = (A'(x) B(x) - A(x) B'(x)) / (Gamma(z) Gamma(z')) for x > 0, and
/// the mirrored expression with A_-, B_- and Gamma(-z) Gamma(-z') for x < 0.
double kernel_diag(const KernelParams& p, SignedPoint x);

/// [K(x_i, x_j)] for a configuration; each point's W values are computed once.
numerics::DenseMatrix kernel_matrix(const KernelParams& p, std::span<const SignedPoint> points);

/// det[K(x_i, x_j)]; the empty configuration gives 1.
double correlation(const KernelParams& p, std::span<const SignedPoint> points);

/// Kernel N~(x, y) assembled from the closed forms for the four quadrants
/// (N_{++}, N_{+-}, N_{-+}, N_{--}) rather than from K.
double ntilde(const KernelParams& p, SignedPoint x, SignedPoint y);

numerics::DenseMatrix ntilde_matrix(const KernelParams& p, std::span<const SignedPoint> points);

/// h(u) with N~(x, y) = h(x)/h(y) K(x, y):
///   h(u) = |u|^{(z+z')/2} e^{-u/2}                                  for u > 0,
///   h(u) = |u|^{(z+z')/2} e^{-u/2} pi / sqrt(sin(pi z) sin(pi z'))   for u < 0.
/// The extra constant on R_- rebalances the off-diagonal prefactors of N~
/// and K; like the exponential factor it cancels in every determinant.
double gauge_factor(const KernelParams& p, SignedPoint u);

struct RelationCheck {
    double closed_form = 0.0;
    double quadrature = 0.0;
    double residual = 0.0;  // |quadrature - closed_form| / |closed_form|
    bool converged = false;
    std::string error;      // quadrature failure message, empty on success
};

struct StieltjesReport {
    RelationCheck plus_plus;    // N_{++}(x,y) vs \int N_{+-}(x,s)/(s+y) ds
    RelationCheck minus_minus;  // N_{--}(x,y) vs \int N_{+-}(r,y)/(r+x) dr
    RelationCheck minus_plus;   // N_{-+}(x,y) vs \iint N_{+-}(r,s)/((r+x)(s+y)) - 1/(x+y)

    bool all_converged() const {
        return plus_plus.converged && minus_minus.converged && minus_plus.converged;
    }
    double max_residual() const;
};

/// Integrates the N_{+-} block to reproduce N_{++}, N_{--} and N_{-+}.
/// Requires -1 < z, z' < 0 (where those integrals converge) and x, y > 0.
StieltjesReport verify_stieltjes_consistency(const KernelParams& p, double x, double y,
                                             const numerics::QuadratureSpec& spec = {});

struct JSymmetryReport {
    std::size_t pairs = 0;
    double plus_plus = 0.0;    // max |K_{++}(x,y) - K_{++}(y,x)|
    double minus_minus = 0.0;  // max |K_{--}(x,y) - K_{--}(y,x)|
    double plus_minus = 0.0;   // max |K_{+-}(x,y) + K_{-+}(y,x)|

    double max_violation() const;
};

/// Evaluates the three J-symmetry relations on positive (x, y) pairs.
JSymmetryReport verify_j_symmetry(const KernelParams& p,
                                  std::span<const std::pair<double, double>> samples);

}  // namespace mwk::whittaker
