#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "mwk/dense.hpp"
#include "mwk/errors.hpp"
#include "mwk/necklace.hpp"
#include "mwk/rng.hpp"
#include "mwk/specfun.hpp"

namespace mwk::cli {

using nlohmann::json;
using numerics::DenseMatrix;
using numerics::RngStream;

namespace {

json matrix_json(const DenseMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto r = m.row(i);
        rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    return rows;
}

double hadamard_bound(const DenseMatrix& m) {
    double b = 1.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (double v : m.row(i)) s += v * v;
        b *= std::sqrt(s);
    }
    return b;
}

double uniform(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

// Keeps the largest residual and its instance. NaN counts as worst.
class Tracker {
public:
    explicit Tracker(VerifyReport& r) : r_(r) {}

    void record(double residual, const std::function<json()>& instance) {
        if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
        if (!seen_ || residual > r_.max_residual) {
            r_.max_residual = residual;
            r_.worst = instance();
            seen_ = true;
        }
    }

private:
    VerifyReport& r_;
    bool seen_ = false;
};

VerifyReport start(std::string suite, std::size_t trials, double threshold) {
    VerifyReport r;
    r.suite = std::move(suite);
    r.trials = trials;
    r.threshold = threshold;
    return r;
}

void finish(VerifyReport& r) { r.pass = r.max_residual < r.threshold; }

}  // namespace

json VerifyReport::to_json() const {
    json j{{"schema_version", 1},
           {"suite", suite},
           {"trials", trials},
           {"max_residual", max_residual},
           {"threshold", threshold},
           {"pass", pass}};
    if (!pass) j["offending"] = worst;
    return j;
}

VerifyReport verify_necklace(std::uint64_t seed, std::size_t trials) {
    auto report = start("necklace", trials, 1e-10);
    Tracker track(report);
    const RngStream root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = root.split(t);
        const auto dk = necklace::random_pair(3, 3, rng);
        for (int n = 1; n <= 4; ++n)
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                std::vector<necklace::GridPoint> pts;
                for (int i = 0; i < n; ++i)
                    pts.push_back({(mask >> i & 1u) == 0, static_cast<std::size_t>(rng.next_u64() % 3)});
                const double lhs = necklace::necklace_lhs(dk, pts);
                const double rhs = necklace::necklace_rhs(dk, pts);
                const double scale =
                    std::max(std::abs(rhs), hadamard_bound(necklace::ntilde_matrix(dk, pts)));
                track.record(std::abs(lhs - rhs) / scale, [&] {
                    std::vector<double> values;
                    for (const auto& p : pts)
                        values.push_back(p.positive ? dk.pos_grid[p.index] : dk.neg_grid[p.index]);
                    return json{{"trial", t},          {"pos_grid", dk.pos_grid},
                                {"neg_grid", dk.neg_grid}, {"N", matrix_json(dk.N)},
                                {"w", matrix_json(dk.w)},  {"points", values},
                                {"lhs", lhs},              {"rhs", rhs}};
                });
            }
    }
    finish(report);
    return report;
}

VerifyReport verify_laplace(std::uint64_t seed, std::size_t trials) {
    auto report = start("laplace", trials, 1e-12);
    Tracker track(report);
    const RngStream root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = root.split(t);
        DenseMatrix m(6, 6);
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 6; ++j) m(i, j) = uniform(rng, -1.0, 1.0);
        const double ref = numerics::det(m);
        for (int k = 0; k <= 4; ++k)
            for (int l = 0; k + l <= 4; ++l) {
                if (k + l == 0) continue;
                const double v = necklace::laplace_expand(m, k, l);
                track.record(std::abs(v - ref) / std::abs(ref), [&] {
                    return json{{"trial", t}, {"matrix", matrix_json(m)}, {"k", k},
                                {"l", l},     {"expansion", v},           {"det", ref}};
                });
            }
    }
    finish(report);
    return report;
}

VerifyReport verify_jsym(const whittaker::KernelParams& p, std::uint64_t seed, std::size_t trials) {
    auto report = start("jsym", trials, 1e-8);
    Tracker track(report);
    const RngStream root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = root.split(t);
        std::vector<std::pair<double, double>> pairs(100);
        // 1 - u lies in (0, 1]
        for (auto& [x, y] : pairs) {
            x = 10.0 * (1.0 - rng.uniform());
            y = 10.0 * (1.0 - rng.uniform());
        }
        const auto r = whittaker::verify_j_symmetry(p, pairs);
        track.record(r.max_violation(), [&] {
            return json{{"trial", t},
                        {"z", p.z},
                        {"zp", p.zp},
                        {"pairs", pairs},
                        {"plus_plus", r.plus_plus},
                        {"minus_minus", r.minus_minus},
                        {"plus_minus", r.plus_minus}};
        });
    }
    finish(report);
    return report;
}

VerifyReport verify_stieltjes(const whittaker::KernelParams& p, std::uint64_t seed,
                              std::size_t trials, const numerics::QuadratureSpec& spec) {
    auto report = start("stieltjes", trials, 1e-6);
    Tracker track(report);
    const RngStream root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = root.split(t);
        const double x = uniform(rng, 0.5, 5.0);
        const double y = uniform(rng, 0.5, 5.0);
        const auto r = whittaker::verify_stieltjes_consistency(p, x, y, spec);
        const double res = r.all_converged() ? r.max_residual() : std::numeric_limits<double>::infinity();
        track.record(res, [&] {
            auto rel = [](const whittaker::RelationCheck& c) {
                json j{{"closed_form", c.closed_form}, {"quadrature", c.quadrature},
                       {"residual", c.residual}, {"converged", c.converged}};
                if (!c.error.empty()) j["error"] = c.error;
                return j;
            };
            return json{{"trial", t},
                        {"z", p.z},
                        {"zp", p.zp},
                        {"x", x},
                        {"y", y},
                        {"plus_plus", rel(r.plus_plus)},
                        {"minus_minus", rel(r.minus_minus)},
                        {"minus_plus", rel(r.minus_plus)}};
        });
    }
    finish(report);
    return report;
}

VerifyReport verify_em(const em::TwoMatrixModel& model, std::uint64_t seed, std::size_t trials,
                       const numerics::QuadratureSpec& spec) {
    auto report = start("em", trials, 1e-5);
    Tracker track(report);
    const auto sys = em::biorthogonalize(em::pairing_moments(model, spec));
    constexpr std::pair<int, int> kShapes[] = {{1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}};
    const RngStream root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = root.split(t);
        const auto [k, l] = kShapes[rng.next_u64() % 5];
        em::CorrelationQuery q;
        for (int i = 0; i < k; ++i) q.x1.push_back(uniform(rng, -2.0, 2.0));
        for (int i = 0; i < l; ++i) q.x2.push_back(uniform(rng, -2.0, 2.0));
        const double v = em::rho_kl(sys, model, q, spec);
        const double ref = em::brute_force_rho(model, q);
        track.record(std::abs(v - ref) / std::abs(ref), [&] {
            return json{{"trial", t}, {"U", model.U},   {"V", model.V},     {"c", model.c},
                        {"N", model.N}, {"x1", q.x1},   {"x2", q.x2},       {"rho", v},
                        {"brute_force", ref}};
        });
    }
    finish(report);
    return report;
}

VerifyReport verify_moment(std::uint64_t seed, std::size_t trials) {
    auto report = start("moment", trials, 1e-8);
    Tracker track(report);
    const RngStream root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        auto rng = root.split(t);
        const double a = uniform(rng, -0.5, 0.5);
        const double b = uniform(rng, 0.3, 2.0);
        const double c = uniform(rng, 0.1, b + 0.9);
        double r;
        try {
            r = specfun::moment_identity_residual(a, b, c);
        } catch (const QuadratureError&) {
            r = std::numeric_limits<double>::infinity();
        }
        track.record(r, [&] { return json{{"trial", t}, {"a", a}, {"b", b}, {"c", c}, {"residual", r}}; });
    }
    finish(report);
    return report;
}

}  // namespace mwk::cli
