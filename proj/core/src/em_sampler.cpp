#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "mwk/dense.hpp"
#include "mwk/errors.hpp"
#include "mwk/eynard_mehta.hpp"
#include "mwk/rng.hpp"

namespace mwk::em {

namespace {

// Cholesky factor of the 2x2 covariance inverse([[2a, -c], [-c, 2b]]) / scale.
struct PairSampler {
    double l11, l21, l22;

    PairSampler(double a, double b, double c, double scale) {
        const double det = 4.0 * a * b - c * c;
        const double s11 = 2.0 * b / det / scale;
        const double s12 = c / det / scale;
        const double s22 = 2.0 * a / det / scale;
        l11 = std::sqrt(s11);
        l21 = s12 / l11;
        l22 = std::sqrt(s22 - l21 * l21);
    }

    std::pair<double, double> draw(numerics::RngStream& rng) const {
        const double g1 = rng.gaussian();
        const double g2 = rng.gaussian();
        return {l11 * g1, l21 * g1 + l22 * g2};
    }
};

struct QuadraticCoeffs {
    double a, b, c;
};

QuadraticCoeffs check_sampler_model(const TwoMatrixModel& model) {
    model.validate();
    if (!model.is_quadratic()) {
        throw DomainError("Monte Carlo sampling needs U = a x^2 and V = b x^2");
    }
    const double a = model.U[2];
    const double b = model.V[2];
    if (!(4.0 * a * b > model.c * model.c)) {
        throw DomainError("Monte Carlo sampling needs 4ab > c^2");
    }
    return {a, b, model.c};
}

// Eigenvalues of the hermitian X + iY through its real 2n x 2n form
// [[X, -Y], [Y, X]], whose spectrum repeats each eigenvalue twice.
std::vector<double> hermitian_eigenvalues(const numerics::DenseMatrix& re,
                                          const numerics::DenseMatrix& im) {
    const std::size_t n = re.rows();
    numerics::DenseMatrix big(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            big(i, j) = re(i, j);
            big(i + n, j + n) = re(i, j);
            big(i, j + n) = -im(i, j);
            big(i + n, j) = im(i, j);
        }
    const auto all = numerics::sym_eigenvalues(big);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = all[2 * i];
    return out;
}

}  // namespace

McSamples mc_sample(const TwoMatrixModel& model, std::size_t samples, std::uint64_t seed) {
    const auto q = check_sampler_model(model);
    const std::size_t n = static_cast<std::size_t>(model.N);
    const PairSampler diag(q.a, q.b, q.c, 1.0);
    const PairSampler off(q.a, q.b, q.c, 2.0);
    const numerics::RngStream root(seed);

    McSamples out;
    out.N = model.N;
    out.a_eigs.reserve(samples);
    out.b_eigs.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        auto rng = root.split(k);
        numerics::DenseMatrix ar(n, n), ai(n, n), br(n, n), bi(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto [u, v] = diag.draw(rng);
            ar(i, i) = u;
            br(i, i) = v;
            for (std::size_t j = i + 1; j < n; ++j) {
                const auto [ur, vr] = off.draw(rng);
                const auto [ui, vi] = off.draw(rng);
                ar(i, j) = ar(j, i) = ur;
                br(i, j) = br(j, i) = vr;
                ai(i, j) = ui;
                ai(j, i) = -ui;
                bi(i, j) = vi;
                bi(j, i) = -vi;
            }
        }
        out.a_eigs.push_back(hermitian_eigenvalues(ar, ai));
        out.b_eigs.push_back(hermitian_eigenvalues(br, bi));
    }
    return out;
}

std::vector<std::pair<double, double>> mc_sample_scalar(const TwoMatrixModel& model,
                                                        std::size_t samples, std::uint64_t seed) {
    const auto q = check_sampler_model(model);
    const PairSampler diag(q.a, q.b, q.c, 1.0);
    const numerics::RngStream root(seed);
    std::vector<std::pair<double, double>> out;
    out.reserve(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        auto rng = root.split(k);
        out.push_back(diag.draw(rng));
    }
    return out;
}

Histogram histogram(const std::vector<std::vector<double>>& rows, double lo, double hi,
                    std::size_t bins) {
    if (!(hi > lo) || bins == 0) throw DomainError("histogram needs lo < hi and bins >= 1");
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(bins, 0);
    for (const auto& row : rows)
        for (double x : row) {
            if (x < lo) {
                ++h.below;
            } else if (x >= hi) {
                ++h.above;
            } else {
                auto b = static_cast<std::size_t>((x - lo) / (hi - lo) * bins);
                ++h.counts[std::min(b, bins - 1)];
            }
        }
    return h;
}

void write_samples_csv(std::ostream& os, const McSamples& s) {
    os << "sample";
    for (int i = 1; i <= s.N; ++i) os << ",a" << i;
    for (int i = 1; i <= s.N; ++i) os << ",b" << i;
    os << "\n" << std::setprecision(17);
    for (std::size_t k = 0; k < s.a_eigs.size(); ++k) {
        os << k;
        for (double v : s.a_eigs[k]) os << "," << v;
        for (double v : s.b_eigs[k]) os << "," << v;
        os << "\n";
    }
}

}  // namespace mwk::em
