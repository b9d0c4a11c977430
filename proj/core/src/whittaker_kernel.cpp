#include "mwk/whittaker_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

#include "mwk/errors.hpp"
#include "mwk/specfun.hpp"

namespace mwk::whittaker {

namespace {

constexpr double kNearDiagonal = 1e-6;

double sin_product(const KernelParams& p) {
    return specfun::sin_pi(p.z) * specfun::sin_pi(p.zp);
}

double prefactor_plus(const KernelParams& p) {
    return 1.0 / (specfun::gamma(p.z) * specfun::gamma(p.zp));
}

double prefactor_minus(const KernelParams& p) {
    return 1.0 / (specfun::gamma(-p.z) * specfun::gamma(-p.zp));
}

double prefactor_off(const KernelParams& p) {
    return std::sqrt(sin_product(p)) / std::numbers::pi;
}

double kappa_a(const KernelParams& p, HalfLine side) {
    const double s = p.z + p.zp;
    return side == HalfLine::plus ? 0.5 * (s + 1.0) : 0.5 * (1.0 - s);
}

bool near_diagonal(double x, double y) {
    return std::abs(x - y) < kNearDiagonal * std::max(x, y);
}

struct PointValues {
    SignedPoint point;
    BlockValues v;
};

PointValues evaluate_point(const KernelParams& p, SignedPoint u) {
    const auto side = u.positive() ? HalfLine::plus : HalfLine::minus;
    return {u, block_values(p, side, u.magnitude())};
}

double diag_from(double pref, const BlockValues& v) { return pref * (v.da * v.b - v.a * v.db); }

double same_side(const KernelParams& p, HalfLine side, double pref, const BlockValues& vx,
                 const BlockValues& vy) {
    if (near_diagonal(vx.x, vy.x)) {
        return diag_from(pref, block_values(p, side, 0.5 * (vx.x + vy.x)));
    }
    return pref * (vx.a * vy.b - vx.b * vy.a) / (vx.x - vy.x);
}

double kernel_from(const KernelParams& p, const PointValues& px, const PointValues& py) {
    const bool xp = px.point.positive();
    const bool yp = py.point.positive();
    const auto& vx = px.v;
    const auto& vy = py.v;
    if (xp && yp) return same_side(p, HalfLine::plus, prefactor_plus(p), vx, vy);
    if (!xp && !yp) return same_side(p, HalfLine::minus, prefactor_minus(p), vx, vy);
    if (xp) {
        return prefactor_off(p) * (vx.a * vy.a + p.t * vx.b * vy.b) / (vx.x + vy.x);
    }
    return -prefactor_off(p) * (vy.a * vx.a + p.t * vy.b * vx.b) / (vx.x + vy.x);
}

// (x/y)^{(z+z')/2} e^{sign*(...)} (xy)^{-1/2} assembled in log space.
double closed_form_scale(const KernelParams& p, double x, double y, double exp_arg) {
    const double s = 0.5 * (p.z + p.zp);
    return std::exp(s * std::log(x / y) + exp_arg - 0.5 * std::log(x * y));
}

double n_plus_minus(const KernelParams& p, const BlockValues& vx, const BlockValues& vy) {
    const double x = vx.x;
    const double y = vy.x;
    const double num = vx.wa * vy.wa + p.t * vx.wb * vy.wb;
    return sin_product(p) / (std::numbers::pi * std::numbers::pi) *
           closed_form_scale(p, x, y, -0.5 * (x + y)) * num / (x + y);
}

double n_minus_plus(const KernelParams& p, const BlockValues& vx, const BlockValues& vy) {
    const double x = vx.x;
    const double y = vy.x;
    const double num = vx.wa * vy.wa + p.t * vx.wb * vy.wb;
    return -closed_form_scale(p, x, y, 0.5 * (x + y)) * num / (x + y);
}

// N_{++} (sign = -1) and N_{--} (sign = +1) share one shape:
// pref (x/y)^s e^{sign (x-y)/2} (xy)^{-1/2} (W_a(x) W_b(y) - W_b(x) W_a(y)) / (x - y).
double n_same_side(const KernelParams& p, HalfLine side, const BlockValues& vx,
                   const BlockValues& vy) {
    const double pref = side == HalfLine::plus ? prefactor_plus(p) : prefactor_minus(p);
    const double sign = side == HalfLine::plus ? -1.0 : 1.0;
    const double x = vx.x;
    const double y = vy.x;
    const double ratio = closed_form_scale(p, x, y, sign * 0.5 * (x - y)) * std::sqrt(x * y);
    if (near_diagonal(x, y)) {
        // The bracket (xy)^{-1/2}(...)/(x-y) is symmetric in x, y: take it at the midpoint.
        const auto vm = block_values(p, side, 0.5 * (x + y));
        return pref * ratio * (vm.dwa * vm.wb - vm.wa * vm.dwb) / vm.x;
    }
    return pref * ratio * (vx.wa * vy.wb - vx.wb * vy.wa) / (std::sqrt(x * y) * (x - y));
}

double ntilde_from(const KernelParams& p, const PointValues& px, const PointValues& py) {
    const bool xp = px.point.positive();
    const bool yp = py.point.positive();
    if (xp && yp) return n_same_side(p, HalfLine::plus, px.v, py.v);
    if (!xp && !yp) return n_same_side(p, HalfLine::minus, px.v, py.v);
    if (xp) return n_plus_minus(p, px.v, py.v);
    return n_minus_plus(p, px.v, py.v);
}

RelationCheck run_relation(double closed_form, const std::function<double()>& integrate) {
    RelationCheck rc;
    rc.closed_form = closed_form;
    try {
        rc.quadrature = integrate();
        rc.converged = true;
        rc.residual = std::abs(rc.quadrature - closed_form) / std::abs(closed_form);
    } catch (const QuadratureError& e) {
        rc.quadrature = e.best_estimate();
        rc.residual = std::nan("");
        rc.error = e.what();
    }
    return rc;
}

}  // namespace

KernelParams validate_params(double z, double zp) {
    if (!std::isfinite(z) || !std::isfinite(zp)) {
        throw DomainError("kernel parameters must be finite reals");
    }
    if (z == std::floor(z)) {
        std::ostringstream os;
        os << "z must not be an integer (got z = " << z << ")";
        throw DomainError(os.str());
    }
    if (zp == std::floor(zp)) {
        std::ostringstream os;
        os << "z' must not be an integer (got z' = " << zp << ")";
        throw DomainError(os.str());
    }
    const double m = std::floor(z);
    if (std::floor(zp) != m) {
        std::ostringstream os;
        os << "z and z' must lie in a common interval (m, m+1) (got z = " << z << ", z' = " << zp
           << ")";
        throw DomainError(os.str());
    }
    return {z, zp, z * zp, static_cast<int>(m)};
}

KernelParams validate_params(std::complex<double> z, std::complex<double> zp) {
    if (z.imag() != 0.0 || zp.imag() != 0.0) {
        throw UnsupportedModeError("unsupported mode: complex z, z' are not evaluated");
    }
    return validate_params(z.real(), zp.real());
}

SignedPoint::SignedPoint(double value) : value_(value) {
    if (value == 0.0 || !std::isfinite(value)) {
        throw DomainError("points of R* must be finite and nonzero");
    }
}

BlockValues block_values(const KernelParams& p, HalfLine side, double x) {
    const double kappa = kappa_a(p, side);
    const double mu = 0.5 * (p.z - p.zp);
    const auto pair = specfun::whittaker_pair(kappa, mu, x);
    BlockValues v;
    v.x = x;
    v.wa = pair.w;
    v.wb = pair.w_lower;
    const double c = (kappa - 0.5) * (kappa - 0.5) - mu * mu;
    v.dwa = ((kappa - 0.5 * x) * v.wa + c * v.wb) / x;
    v.dwb = ((0.5 * x - kappa + 1.0) * v.wb - v.wa) / x;
    const double scale = 1.0 / std::sqrt(x);
    v.a = scale * v.wa;
    v.b = scale * v.wb;
    v.da = scale * (v.dwa - 0.5 * v.wa / x);
    v.db = scale * (v.dwb - 0.5 * v.wb / x);
    return v;
}

double a_plus(const KernelParams& p, double x) { return block_values(p, HalfLine::plus, x).a; }
double b_plus(const KernelParams& p, double x) { return block_values(p, HalfLine::plus, x).b; }
double a_minus(const KernelParams& p, double x) { return block_values(p, HalfLine::minus, x).a; }
double b_minus(const KernelParams& p, double x) { return block_values(p, HalfLine::minus, x).b; }

double kernel(const KernelParams& p, SignedPoint x, SignedPoint y) {
    return kernel_from(p, evaluate_point(p, x), evaluate_point(p, y));
}

double kernel_diag(const KernelParams& p, SignedPoint x) {
    const auto pv = evaluate_point(p, x);
    return diag_from(x.positive() ? prefactor_plus(p) : prefactor_minus(p), pv.v);
}

namespace {

template <class Entry>
numerics::DenseMatrix assemble(const KernelParams& p, std::span<const SignedPoint> points,
                               Entry&& entry) {
    std::vector<PointValues> values;
    values.reserve(points.size());
    for (auto u : points) values.push_back(evaluate_point(p, u));
    const std::size_t n = points.size();
    numerics::DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(p, values[i], values[j]);
    return m;
}

}  // namespace

numerics::DenseMatrix kernel_matrix(const KernelParams& p, std::span<const SignedPoint> points) {
    return assemble(p, points, kernel_from);
}

double correlation(const KernelParams& p, std::span<const SignedPoint> points) {
    return numerics::det(kernel_matrix(p, points));
}

double ntilde(const KernelParams& p, SignedPoint x, SignedPoint y) {
    return ntilde_from(p, evaluate_point(p, x), evaluate_point(p, y));
}

numerics::DenseMatrix ntilde_matrix(const KernelParams& p, std::span<const SignedPoint> points) {
    return assemble(p, points, ntilde_from);
}

double gauge_factor(const KernelParams& p, SignedPoint u) {
    const double s = 0.5 * (p.z + p.zp);
    const double g = std::exp(s * std::log(u.magnitude()) - 0.5 * u.value());
    return u.positive() ? g : g * std::numbers::pi / std::sqrt(sin_product(p));
}

double StieltjesReport::max_residual() const {
    double m = 0.0;
    for (const auto* r : {&plus_plus, &minus_minus, &minus_plus}) {
        if (!r->converged) return std::nan("");
        m = std::max(m, r->residual);
    }
    return m;
}

StieltjesReport verify_stieltjes_consistency(const KernelParams& p, double x, double y,
                                             const numerics::QuadratureSpec& spec) {
    if (!(p.z > -1.0 && p.z < 0.0 && p.zp > -1.0 && p.zp < 0.0)) {
        throw DomainError("Stieltjes relations need -1 < z, z' < 0");
    }
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("Stieltjes relations need x, y > 0");
    spec.validate();

    const auto vx_plus = block_values(p, HalfLine::plus, x);
    const auto vy_plus = block_values(p, HalfLine::plus, y);
    const auto vx_minus = block_values(p, HalfLine::minus, x);
    const auto vy_minus = block_values(p, HalfLine::minus, y);

    // N_{+-}(r, s) ~ r^{min(z,z')} as r -> 0 and ~ s^{-max(z,z')} as s -> 0.
    const double r_exponent = std::min(p.z, p.zp);
    const double s_exponent = -std::max(p.z, p.zp);

    std::unordered_map<double, BlockValues> minus_cache;
    const auto minus_at = [&](double s) -> const BlockValues& {
        auto it = minus_cache.find(s);
        if (it == minus_cache.end()) {
            it = minus_cache.emplace(s, block_values(p, HalfLine::minus, s)).first;
        }
        return it->second;
    };

    StieltjesReport rep;
    rep.plus_plus = run_relation(n_same_side(p, HalfLine::plus, vx_plus, vy_plus), [&] {
        return numerics::integrate_1d(
                   [&](double s) { return n_plus_minus(p, vx_plus, minus_at(s)) / (s + y); },
                   numerics::HalfLine{0.0, 1.0, s_exponent}, spec)
            .value;
    });
    rep.minus_minus = run_relation(n_same_side(p, HalfLine::minus, vx_minus, vy_minus), [&] {
        return numerics::integrate_1d(
                   [&](double r) {
                       return n_plus_minus(p, block_values(p, HalfLine::plus, r), vy_minus) / (r + x);
                   },
                   numerics::HalfLine{0.0, 1.0, r_exponent}, spec)
            .value;
    });
    rep.minus_plus = run_relation(n_minus_plus(p, vx_minus, vy_plus), [&] {
        const numerics::Domain outer = numerics::HalfLine{0.0, 1.0, r_exponent};
        const numerics::Domain inner = numerics::HalfLine{0.0, 1.0, s_exponent};
        BlockValues vr;
        const auto res = numerics::integrate_2d(
            [&](double r, double s) {
                if (vr.x != r) vr = block_values(p, HalfLine::plus, r);
                return n_plus_minus(p, vr, minus_at(s)) / ((r + x) * (s + y));
            },
            outer, inner, spec);
        return res.value - 1.0 / (x + y);
    });
    return rep;
}

double JSymmetryReport::max_violation() const {
    return std::max({plus_plus, minus_minus, plus_minus});
}

JSymmetryReport verify_j_symmetry(const KernelParams& p,
                                  std::span<const std::pair<double, double>> samples) {
    JSymmetryReport rep;
    for (const auto& [x, y] : samples) {
        if (!(x > 0.0) || !(y > 0.0)) throw DomainError("J-symmetry samples must be positive");
        const SignedPoint xp(x), yp(y), xm(-x), ym(-y);
        const auto vxp = evaluate_point(p, xp);
        const auto vyp = evaluate_point(p, yp);
        const auto vxm = evaluate_point(p, xm);
        const auto vym = evaluate_point(p, ym);
        rep.plus_plus = std::max(rep.plus_plus,
                                 std::abs(kernel_from(p, vxp, vyp) - kernel_from(p, vyp, vxp)));
        rep.minus_minus = std::max(rep.minus_minus,
                                   std::abs(kernel_from(p, vxm, vym) - kernel_from(p, vym, vxm)));
        // K_{+-}(x,y) = K(x,-y) and K_{-+}(y,x) = K(-y,x).
        rep.plus_minus = std::max(rep.plus_minus,
                                  std::abs(kernel_from(p, vxp, vym) + kernel_from(p, vym, vxp)));
        ++rep.pairs;
    }
    return rep;
}

}  // namespace mwk::whittaker
