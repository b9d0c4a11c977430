#include "mwk/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "mwk/errors.hpp"

namespace mwk::numerics {

namespace {

// Kronrod abscissae: odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    std::size_t piece;
};

struct ByError {
    bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

double checked(double v) {
    if (!std::isfinite(v)) {
        throw QuadratureError("integrand returned a non-finite value", std::nan(""), INFINITY);
    }
    return v;
}

Segment gauss_kronrod_21(const Integrand& f, double a, double b, std::size_t piece) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double uflow = std::numeric_limits<double>::min();
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 10> f1{};
    std::array<double, 10> f2{};
    const double fc = checked(f(centre));
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = checked(f(centre - dx));
        f2[j] = checked(f(centre + dx));
        const double sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(f1[j] - reskh) + std::abs(f2[j] - reskh));
    }
    const double scale = std::abs(half);
    resabs *= scale;
    resasc *= scale;
    double err = std::abs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    if (resabs > uflow / (50.0 * eps)) {
        err = std::max(50.0 * eps * resabs, err);
    }
    return {a, b, resk * half, err, piece};
}

struct Piece {
    Integrand g;
    double a;
    double b;
};

Integrand power_mapped(const Integrand& f, double lo, double hi, double alpha) {
    if (alpha == 0.0) return f;
    const double p = 1.0 / (1.0 + alpha);
    const double h = hi - lo;
    return [f, lo, h, p](double u) {
        const double up = std::pow(u, p);
        return f(lo + h * up) * h * p * (up / u);
    };
}

void add_interval(std::vector<Piece>& pieces, const Integrand& f, const Interval& iv) {
    if (!(iv.left_exponent > -1.0)) {
        throw DomainError("quadrature: left_exponent must exceed -1");
    }
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
        throw DomainError("quadrature: interval endpoints must be finite");
    }
    if (iv.left_exponent == 0.0) {
        pieces.push_back({f, iv.lo, iv.hi});
    } else {
        pieces.push_back({power_mapped(f, iv.lo, iv.hi, iv.left_exponent), 0.0, 1.0});
    }
}

std::vector<Piece> make_pieces(const Integrand& f, const Domain& domain) {
    std::vector<Piece> pieces;
    if (const auto* iv = std::get_if<Interval>(&domain)) {
        add_interval(pieces, f, *iv);
    } else {
        const auto& hl = std::get<HalfLine>(domain);
        if (!(hl.scale > 0.0) || !std::isfinite(hl.scale) || !std::isfinite(hl.start)) {
            throw DomainError("quadrature: half-line needs finite start and scale > 0");
        }
        const double split = hl.start + hl.scale;
        add_interval(pieces, f, Interval{hl.start, split, hl.left_exponent});
        const double decay = 2.0 * hl.scale;
        pieces.push_back({[f, split, decay](double t) {
                              const double x = split - decay * std::log1p(-t);
                              const double v = f(x);
                              return v == 0.0 ? 0.0 : v * decay / (1.0 - t);
                          },
                          0.0, 1.0});
    }
    return pieces;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol >= 0.0) || max_subdivisions < 1) {
        std::ostringstream os;
        os << "invalid QuadratureSpec (rel_tol=" << rel_tol << ", abs_tol=" << abs_tol
           << ", max_subdivisions=" << max_subdivisions << ")";
        throw DomainError(os.str());
    }
}

QuadResult integrate_1d(const Integrand& f, const Domain& domain, const QuadratureSpec& spec) {
    spec.validate();
    const auto pieces = make_pieces(f, domain);

    std::priority_queue<Segment, std::vector<Segment>, ByError> heap;
    std::vector<Segment> settled;
    double total = 0.0;
    double errsum = 0.0;
    int evaluations = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (pieces[i].a == pieces[i].b) continue;
        Segment s = gauss_kronrod_21(pieces[i].g, pieces[i].a, pieces[i].b, i);
        evaluations += 21;
        total += s.value;
        errsum += s.error;
        heap.push(s);
    }

    int subdivisions = 0;
    while (errsum > std::max(spec.rel_tol * std::abs(total), spec.abs_tol)) {
        if (heap.empty() || subdivisions >= spec.max_subdivisions) {
            std::ostringstream os;
            os << "quadrature did not converge after " << subdivisions
               << " subdivisions (estimate " << total << ", error " << errsum << ")";
            throw QuadratureError(os.str(), total, errsum);
        }
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval at floating-point resolution; its error can no longer shrink.
            settled.push_back(worst);
            continue;
        }
        const auto& g = pieces[worst.piece].g;
        const Segment left = gauss_kronrod_21(g, worst.a, mid, worst.piece);
        const Segment right = gauss_kronrod_21(g, mid, worst.b, worst.piece);
        evaluations += 42;
        ++subdivisions;
        total += left.value + right.value - worst.value;
        errsum += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Resum to drop the drift of the incremental updates.
    QuadResult out;
    out.subdivisions = subdivisions;
    out.evaluations = evaluations;
    auto& c = settled;
    while (!heap.empty()) {
        c.push_back(heap.top());
        heap.pop();
    }
    std::sort(c.begin(), c.end(), [](const Segment& x, const Segment& y) {
        return std::abs(x.value) < std::abs(y.value);
    });
    for (const auto& s : c) {
        out.value += s.value;
        out.error += s.error;
    }
    return out;
}

QuadResult integrate_2d(const Integrand2& f, const Domain& outer, const Domain& inner,
                        const QuadratureSpec& spec) {
    spec.validate();
    QuadratureSpec inner_spec = spec;
    inner_spec.rel_tol = spec.rel_tol / 10.0;
    inner_spec.abs_tol = spec.abs_tol / 10.0;
    double worst_inner_rel = 0.0;
    int inner_evals = 0;
    const auto outer_result = integrate_1d(
        [&](double r) {
            const auto res = integrate_1d([&](double s) { return f(r, s); }, inner, inner_spec);
            inner_evals += res.evaluations;
            if (res.value != 0.0) {
                worst_inner_rel = std::max(worst_inner_rel, res.error / std::abs(res.value));
            }
            return res.value;
        },
        outer, spec);
    QuadResult out = outer_result;
    out.error += worst_inner_rel * std::abs(out.value);
    out.evaluations = inner_evals;
    return out;
}

GaussRule gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        {
            // Recompute the derivative at the converged node.
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    return rule;
}

}  // namespace mwk::numerics
