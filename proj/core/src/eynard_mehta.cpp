#include "mwk/eynard_mehta.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <sstream>

#include "mwk/errors.hpp"

namespace mwk::em {

namespace {

// ln(1e18): the weight is truncated where it drops below 1e-18 of its max.
constexpr double kLogCutoff = 41.446531673892822;
constexpr double kRadiusStep = 0.5;
constexpr double kMaxRadius = 1e4;

void check_potential(const std::vector<double>& p, const char* name) {
    if (p.empty()) throw DomainError(std::string(name) + " must have at least one coefficient");
    for (double v : p)
        if (!std::isfinite(v)) throw DomainError(std::string(name) + " has a non-finite coefficient");
    std::size_t deg = p.size() - 1;
    while (deg > 0 && p[deg] == 0.0) --deg;
    if (deg == 0 || deg % 2 != 0) {
        throw DomainError(std::string(name) + " must have even positive degree");
    }
    if (!(p[deg] > 0.0)) throw DomainError(std::string(name) + " must have a positive leading coefficient");
}

// Largest g on a uniform grid of [-r, r].
double grid_max(const std::function<double(double)>& g, double r) {
    double m = -INFINITY;
    constexpr int kPoints = 801;
    for (int i = 0; i < kPoints; ++i) m = std::max(m, g(-r + 2.0 * r * i / (kPoints - 1)));
    return m;
}

// Symmetric interval outside which g has dropped kLogCutoff below its max.
double slice_radius(const std::function<double(double)>& g, double start) {
    double r = std::max(start, 1.0);
    while (r < kMaxRadius) {
        const double top = grid_max(g, r);
        if (g(r) < top - kLogCutoff && g(-r) < top - kLogCutoff) return r;
        r += kRadiusStep;
    }
    throw DomainError("weight does not decay: cannot truncate the integration domain");
}

// Adaptive integral over [-r, r] with an absolute floor tied to the L1 size
// of the integrand, so integrals that vanish by symmetry still terminate.
double integrate_scaled(const std::function<double(double)>& f, double r,
                        const numerics::QuadratureSpec& spec) {
    const auto rule = numerics::gauss_legendre(96, -r, r);
    double l1 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) l1 += rule.weights[i] * std::abs(f(rule.nodes[i]));
    numerics::QuadratureSpec s = spec;
    s.abs_tol = std::max(spec.abs_tol, spec.rel_tol * l1);
    if (l1 == 0.0) return 0.0;
    return numerics::integrate_1d(f, numerics::Interval{-r, r, 0.0}, s).value;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

void TwoMatrixModel::validate() const {
    check_potential(U, "U");
    check_potential(V, "V");
    if (!std::isfinite(c)) throw DomainError("coupling c must be finite");
    if (N < 1) throw DomainError("N must be >= 1");
}

bool TwoMatrixModel::is_quadratic() const noexcept {
    auto quad = [](const std::vector<double>& p) {
        if (p.size() < 3) return false;
        for (std::size_t k = 3; k < p.size(); ++k)
            if (p[k] != 0.0) return false;
        return p[1] == 0.0 && p[2] > 0.0;
    };
    return quad(U) && quad(V);
}

TwoMatrixModel gaussian_model(double a, double b, double c, int N) {
    TwoMatrixModel m{{0.0, 0.0, a}, {0.0, 0.0, b}, c, N};
    m.validate();
    return m;
}

TwoMatrixModel parse_model(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("model file is not valid JSON: ") + e.what());
    }
    TwoMatrixModel m;
    try {
        m.U = j.at("U").get<std::vector<double>>();
        m.V = j.at("V").get<std::vector<double>>();
        m.c = j.at("c").get<double>();
        m.N = j.at("N").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("model file needs U, V, c, N: ") + e.what());
    }
    m.validate();
    return m;
}

TwoMatrixModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open model file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

double poly_eval(const std::vector<double>& coeffs, double x) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

double weight(const TwoMatrixModel& model, double x2, double x1) {
    return std::exp(-poly_eval(model.U, x1) - poly_eval(model.V, x2) + model.c * x1 * x2);
}

double truncation_radius(const TwoMatrixModel& model) {
    const double growth = 2.0 * model.N;
    auto g = [&](double x, double y) {
        return -poly_eval(model.U, x) - poly_eval(model.V, y) + model.c * x * y +
               growth * std::log1p(std::max(std::abs(x), std::abs(y)));
    };
    for (double r = 1.0; r < kMaxRadius; r += kRadiusStep) {
        constexpr int kInner = 61;
        constexpr int kBoundary = 401;
        double inner = -INFINITY, boundary = -INFINITY;
        for (int i = 0; i < kInner; ++i)
            for (int j = 0; j < kInner; ++j)
                inner = std::max(inner, g(-r + 2.0 * r * i / (kInner - 1), -r + 2.0 * r * j / (kInner - 1)));
        for (int i = 0; i < kBoundary; ++i) {
            const double t = -r + 2.0 * r * i / (kBoundary - 1);
            boundary = std::max({boundary, g(t, r), g(t, -r), g(r, t), g(-r, t)});
        }
        if (boundary < inner - kLogCutoff) return r;
    }
    throw DomainError("weight does not decay: cannot truncate the integration domain");
}

numerics::DenseMatrix pairing_moments(const TwoMatrixModel& model,
                                      const numerics::QuadratureSpec& spec) {
    model.validate();
    spec.validate();
    const double r = truncation_radius(model);
    const int n = model.N;
    numerics::DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto f = [&](double x, double y) { return std::pow(x, i) * std::pow(y, j) * weight(model, y, x); };
            const auto rule = numerics::gauss_legendre(64, -r, r);
            double l1 = 0.0;
            for (std::size_t a = 0; a < rule.nodes.size(); ++a)
                for (std::size_t b = 0; b < rule.nodes.size(); ++b)
                    l1 += rule.weights[a] * rule.weights[b] * std::abs(f(rule.nodes[a], rule.nodes[b]));
            numerics::QuadratureSpec s = spec;
            s.abs_tol = std::max(spec.abs_tol, spec.rel_tol * l1);
            const numerics::Interval box{-r, r, 0.0};
            m(i, j) = numerics::integrate_2d(f, box, box, s).value;
        }
    return m;
}

double BiorthogonalSystem::eval_P(int i, double x) const {
    double v = 0.0;
    for (int k = i; k >= 0; --k) v = v * x + P(i, k);
    return v;
}

double BiorthogonalSystem::eval_Q(int i, double y) const {
    double v = 0.0;
    for (int k = i; k >= 0; --k) v = v * y + Q(i, k);
    return v;
}

BiorthogonalSystem biorthogonalize(const numerics::DenseMatrix& moments, double pivot_tol) {
    const auto f = numerics::ldu_biorthogonalize(moments, pivot_tol);
    const std::size_t n = moments.rows();
    // Inverses of the unit triangular factors by substitution.
    numerics::DenseMatrix linv = numerics::DenseMatrix::identity(n);
    numerics::DenseMatrix uinv_t = numerics::DenseMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            double sl = 0.0, su = 0.0;
            for (std::size_t k = j; k < i; ++k) {
                sl += f.lower(i, k) * linv(k, j);
                su += f.upper(k, i) * uinv_t(k, j);
            }
            linv(i, j) = -sl;
            uinv_t(i, j) = -su;
        }
    BiorthogonalSystem sys{numerics::DenseMatrix(n, n), numerics::DenseMatrix(n, n)};
    for (std::size_t i = 0; i < n; ++i) {
        const double d = f.diagonal[i];
        const double s = 1.0 / std::sqrt(std::abs(d));
        const double sign = d < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j <= i; ++j) {
            sys.P(i, j) = s * linv(i, j);
            sys.Q(i, j) = sign * s * uinv_t(i, j);
        }
    }
    return sys;
}

double biorthogonality_residual(const BiorthogonalSystem& sys, const numerics::DenseMatrix& moments) {
    const auto g = sys.P * moments * sys.Q.transposed();
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            worst = std::max(worst, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

double kernel_H(const BiorthogonalSystem& sys, double x, double y) {
    double h = 0.0;
    for (int i = 0; i < sys.size(); ++i) h += sys.eval_P(i, x) * sys.eval_Q(i, y);
    return h;
}

namespace {

// int f(s) w(s, y) ds over the second-matrix variable s.
double integrate_over_second(const TwoMatrixModel& model, const std::function<double(double)>& f,
                             double y, const numerics::QuadratureSpec& spec) {
    auto g = [&](double s) {
        return -poly_eval(model.V, s) + model.c * y * s + 2.0 * model.N * std::log1p(std::abs(s));
    };
    const double r = slice_radius(g, truncation_radius(model));
    return integrate_scaled([&](double s) { return f(s) * weight(model, s, y); }, r, spec);
}

// int w(x, r) f(r) dr over the first-matrix variable r.
double integrate_over_first(const TwoMatrixModel& model, const std::function<double(double)>& f,
                            double x, const numerics::QuadratureSpec& spec) {
    auto g = [&](double r) {
        return -poly_eval(model.U, r) + model.c * x * r + 2.0 * model.N * std::log1p(std::abs(r));
    };
    const double rad = slice_radius(g, truncation_radius(model));
    return integrate_scaled([&](double r) { return weight(model, x, r) * f(r); }, rad, spec);
}

}  // namespace

double em_kernel_block(const BiorthogonalSystem& sys, const TwoMatrixModel& model, int i, int j,
                       double x, double y, const numerics::QuadratureSpec& spec) {
    if (i == 1 && j == 2) return kernel_H(sys, x, y);
    if (i == 1 && j == 1) {
        return integrate_over_second(model, [&](double s) { return kernel_H(sys, x, s); }, y, spec);
    }
    if (i == 2 && j == 2) {
        return integrate_over_first(model, [&](double r) { return kernel_H(sys, r, y); }, x, spec);
    }
    if (i == 2 && j == 1) {
        double total = 0.0;
        for (int k = 0; k < sys.size(); ++k) {
            const double left = integrate_over_first(model, [&](double r) { return sys.eval_P(k, r); }, x, spec);
            const double right = integrate_over_second(model, [&](double s) { return sys.eval_Q(k, s); }, y, spec);
            total += left * right;
        }
        return total - weight(model, x, y);
    }
    throw DomainError("block indices must be 1 or 2");
}

double rho_kl(const BiorthogonalSystem& sys, const TwoMatrixModel& model, const CorrelationQuery& q,
              const numerics::QuadratureSpec& spec) {
    const std::size_t k = q.x1.size();
    const std::size_t l = q.x2.size();
    if (k + l == 0) throw DomainError("correlation query needs at least one point");
    if (k > static_cast<std::size_t>(sys.size()) || l > static_cast<std::size_t>(sys.size())) {
        throw DomainError("correlation query has more points than N");
    }
    std::vector<std::pair<int, double>> pts;
    for (double x : q.x1) pts.emplace_back(1, x);
    for (double x : q.x2) pts.emplace_back(2, x);
    numerics::DenseMatrix m(k + l, k + l);
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = 0; b < pts.size(); ++b)
            m(a, b) = em_kernel_block(sys, model, pts[a].first, pts[b].first, pts[a].second,
                                      pts[b].second, spec);
    return numerics::det(m);
}

double brute_force_rho(const TwoMatrixModel& model, const CorrelationQuery& q, const BruteForceSpec& grid) {
    model.validate();
    const int n = model.N;
    const int k = static_cast<int>(q.x1.size());
    const int l = static_cast<int>(q.x2.size());
    if (n > 3) throw SizeGuardError("brute_force_rho: N must be <= 3");
    if (k + l > 2) throw SizeGuardError("brute_force_rho: k + l must be <= 2");
    if (k + l < 1 || k > n || l > n) throw DomainError("brute_force_rho: need 1 <= k + l, k, l <= N");
    if (grid.nodes < 2) throw DomainError("brute_force_rho: need at least 2 nodes");
    const double r = grid.half_width > 0.0 ? grid.half_width : truncation_radius(model);
    const auto rule = numerics::gauss_legendre(grid.nodes, -r, r);

    std::vector<double> x1(n), x2(n);
    auto density = [&] {
        numerics::DenseMatrix w(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) w(i, j) = weight(model, x2[i], x1[j]);
        double vdm = 1.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) vdm *= (x1[i] - x1[j]) * (x2[i] - x2[j]);
        return numerics::det(w) * vdm;
    };
    // Tensor rule over the variables not pinned: x1[p1..n) and x2[p2..n).
    auto integrate = [&](int p1, int p2) {
        const int dims = (n - p1) + (n - p2);
        std::vector<int> idx(dims, 0);
        double total = 0.0;
        while (true) {
            double wt = 1.0;
            for (int d = 0; d < dims; ++d) {
                const double node = rule.nodes[idx[d]];
                wt *= rule.weights[idx[d]];
                if (d < n - p1) x1[p1 + d] = node;
                else x2[p2 + d - (n - p1)] = node;
            }
            total += wt * density();
            int d = 0;
            for (; d < dims; ++d) {
                if (++idx[d] < grid.nodes) break;
                idx[d] = 0;
            }
            if (d == dims) break;
        }
        return total;
    };
    const double z = integrate(0, 0);
    for (int i = 0; i < k; ++i) x1[i] = q.x1[i];
    for (int i = 0; i < l; ++i) x2[i] = q.x2[i];
    const double pinned = integrate(k, l);
    const double combinatorial = factorial(n) * factorial(n) / (factorial(n - k) * factorial(n - l));
    return combinatorial * pinned / z;
}

necklace::NtildeBlocks discrete_em_blocks(const BiorthogonalSystem& sys, const TwoMatrixModel& model,
                                          const std::vector<double>& x1_grid,
                                          const std::vector<double>& x2_grid) {
    const std::size_t p = x1_grid.size();
    const std::size_t q = x2_grid.size();
    necklace::NtildeBlocks b{numerics::DenseMatrix(p, p), numerics::DenseMatrix(p, q),
                             numerics::DenseMatrix(q, p), numerics::DenseMatrix(q, q)};
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t c = 0; c < p; ++c) {
            double s = 0.0;
            for (double t : x2_grid) s += kernel_H(sys, x1_grid[a], t) * weight(model, t, x1_grid[c]);
            b.pp(a, c) = s;
        }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t c = 0; c < q; ++c) b.pn(a, c) = kernel_H(sys, x1_grid[a], x2_grid[c]);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t c = 0; c < p; ++c) {
            double s = 0.0;
            for (double r : x1_grid)
                for (double t : x2_grid)
                    s += weight(model, x2_grid[a], r) * kernel_H(sys, r, t) * weight(model, t, x1_grid[c]);
            b.np(a, c) = s - weight(model, x2_grid[a], x1_grid[c]);
        }
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t c = 0; c < q; ++c) {
            double s = 0.0;
            for (double r : x1_grid) s += weight(model, x2_grid[a], r) * kernel_H(sys, r, x2_grid[c]);
            b.nn(a, c) = s;
        }
    return b;
}

}  // namespace mwk::em
