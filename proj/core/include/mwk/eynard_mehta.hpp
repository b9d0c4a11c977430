#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mwk/dense.hpp"
#include "mwk/necklace.hpp"
#include "mwk/quadrature.hpp"

namespace mwk::em {

/// Two coupled N x N hermitian matrices with density proportional to
/// exp(-tr(U(A) + V(B) - c A B)). Coefficients are in ascending powers:
/// U(x) = sum_k U[k] x^k.
struct TwoMatrixModel {
    std::vector<double> U;
    std::vector<double> V;
    double c = 0.0;
    int N = 1;

    /// Even degree with positive leading coefficient for U and V, N >= 1,
    /// finite coefficients (DomainError otherwise).
    void validate() const;

    /// True when U = a x^2 + const and V = b x^2 + const.
    bool is_quadratic() const noexcept;
};

TwoMatrixModel gaussian_model(double a, double b, double c, int N);

/// Parses {"U": [...], "V": [...], "c": ..., "N": ...} and validates it.
TwoMatrixModel parse_model(std::string_view json_text);
TwoMatrixModel load_model(const std::string& path);

double poly_eval(const std::vector<double>& coeffs, double x);

/// w(x2, x1) = exp(-U(x1) - V(x2) + c x1 x2): the first argument belongs to
/// the second matrix and the second argument to the first matrix.
double weight(const TwoMatrixModel& model, double x2, double x1);

/// Symmetric box [-R, R] outside which the weight (times polynomial growth up
/// to degree 2N) falls below 1e-18 of its maximum.
double truncation_radius(const TwoMatrixModel& model);

inline numerics::QuadratureSpec default_em_spec() { return {1e-12, 1e-300, 4000}; }

/// M_ij = <x^i, y^j> = iint x^i y^j w(y, x) dx dy for 0 <= i, j < N.
numerics::DenseMatrix pairing_moments(const TwoMatrixModel& model,
                                      const numerics::QuadratureSpec& spec = default_em_spec());

/// Coefficient triangles over the monomial basis: P_i(x) = sum_k P(i,k) x^k.
/// With M = L D U, P = |D|^{-1/2} L^{-1} and Q = sign(D) |D|^{-1/2} U^{-T},
/// so that P M Q^T = I.
struct BiorthogonalSystem {
    numerics::DenseMatrix P;
    numerics::DenseMatrix Q;

    int size() const noexcept { return static_cast<int>(P.rows()); }
    double eval_P(int i, double x) const;
    double eval_Q(int i, double y) const;
};

/// DegeneracyError names the first vanishing leading minor.
BiorthogonalSystem biorthogonalize(const numerics::DenseMatrix& moments, double pivot_tol = 1e-12);

/// max_ij |(P M Q^T)_ij - delta_ij|.
double biorthogonality_residual(const BiorthogonalSystem& sys, const numerics::DenseMatrix& moments);

/// H(x, y) = sum_i P_i(x) Q_i(y).
double kernel_H(const BiorthogonalSystem& sys, double x, double y);

/// The four blocks, indexed by which matrix each argument belongs to:
///   K11(x, y) = int H(x, s) w(s, y) ds
///   K12(x, y) = H(x, y)
///   K21(x, y) = iint w(x, r) H(r, s) w(s, y) dr ds - w(x, y)
///   K22(x, y) = int w(x, r) H(r, y) dr
/// The integrals factor through the polynomials, so each is a sum of
/// one-dimensional quadratures over the truncated box.
double em_kernel_block(const BiorthogonalSystem& sys, const TwoMatrixModel& model, int i, int j,
                       double x, double y,
                       const numerics::QuadratureSpec& spec = default_em_spec());

/// Eigenvalue positions: k points of the first matrix, l of the second.
struct CorrelationQuery {
    std::vector<double> x1;
    std::vector<double> x2;
};

/// det of the (k+l) x (k+l) block matrix, first-matrix points first.
double rho_kl(const BiorthogonalSystem& sys, const TwoMatrixModel& model,
              const CorrelationQuery& q, const numerics::QuadratureSpec& spec = default_em_spec());

struct BruteForceSpec {
    int nodes = 48;           // Gauss-Legendre nodes per axis
    double half_width = 0.0;  // 0 picks truncation_radius(model)
};

/// Direct integration of the joint eigenvalue density over the mute
/// variables with the factor N!^2/((N-k)!(N-l)!). The density constant is
/// fixed by integrating the full density with the same rule.
/// Guards: N <= 3, k + l <= 2 (SizeGuardError).
double brute_force_rho(const TwoMatrixModel& model, const CorrelationQuery& q,
                       const BruteForceSpec& grid = {});

/// The block formula with integrals replaced by sums over finite grids
/// (counting measure), computed by direct loops over H and w.
necklace::NtildeBlocks discrete_em_blocks(const BiorthogonalSystem& sys, const TwoMatrixModel& model,
                                          const std::vector<double>& x1_grid,
                                          const std::vector<double>& x2_grid);

// Monte Carlo sampling for quadratic potentials.

struct McSamples {
    int N = 0;
    std::vector<std::vector<double>> a_eigs;  // one sorted row per sample
    std::vector<std::vector<double>> b_eigs;
};

/// Draws (A, B) hermitian with density exp(-tr(a A^2 + b B^2 - c A B)).
/// Each diagonal pair (A_ii, B_ii) is Gaussian with precision
/// [[2a, -c], [-c, 2b]]; real and imaginary parts of each off-diagonal pair
/// have twice that precision. Sample k uses RngStream(seed).split(k).
/// Requires a quadratic model with 4ab > c^2 (DomainError).
McSamples mc_sample(const TwoMatrixModel& model, std::size_t samples, std::uint64_t seed);

/// Raw (A, B) draws for N = 1: pairs (A_11, B_11).
std::vector<std::pair<double, double>> mc_sample_scalar(const TwoMatrixModel& model,
                                                        std::size_t samples, std::uint64_t seed);

struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> counts;
    std::size_t below = 0;
    std::size_t above = 0;

    double edge(std::size_t i) const { return lo + (hi - lo) * static_cast<double>(i) / counts.size(); }
};

Histogram histogram(const std::vector<std::vector<double>>& rows, double lo, double hi,
                    std::size_t bins);

/// Header "sample,a1..aN,b1..bN", then one row per sample, 17 significant digits.
void write_samples_csv(std::ostream& os, const McSamples& s);

}  // namespace mwk::em
