#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "mwk/errors.hpp"
#include "mwk/necklace.hpp"

using namespace mwk::necklace;
using mwk::numerics::DenseMatrix;
using mwk::numerics::RngStream;

namespace {

struct NecklaceRow {
    std::vector<GridPoint> points;
    double value;
};

const NecklaceRow kNecklaceTable[] = {
#include "oracles/necklace_table.inc"
};

DiscreteKernelPair fixed_pair() {
    DiscreteKernelPair dk;
    dk.pos_grid = {1.0, 2.0, 3.0};
    dk.neg_grid = {-1.0, -2.0, -3.0};
    dk.N = DenseMatrix{{0.3, -0.7, 0.2}, {0.5, 0.1, -0.4}, {-0.6, 0.8, 0.9}};
    dk.w = DenseMatrix{{-0.2, 0.4, 0.7}, {0.9, -0.5, 0.1}, {0.3, 0.6, -0.8}};
    return dk;
}

// Plain cofactor expansion along the first row.
double cofactor_det(const DenseMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1.0;
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::size_t> rows(n - 1), cols;
        std::iota(rows.begin(), rows.end(), 1);
        for (std::size_t c = 0; c < n; ++c)
            if (c != j) cols.push_back(c);
        total += (j % 2 ? -1.0 : 1.0) * m(0, j) * cofactor_det(m.select(rows, cols));
    }
    return total;
}

DenseMatrix random_matrix(std::size_t n, RngStream& rng) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = 2.0 * rng.uniform() - 1.0;
    return m;
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

}  // namespace

TEST(EnumPhi, Counts) {
    EXPECT_EQ(enum_phi(1, 1).size(), 2u);
    EXPECT_EQ(enum_phi(2, 2).size(), 8u);
    EXPECT_TRUE(enum_phi(3, 1).empty());
    EXPECT_EQ(enum_phi_kl(1, 1, 1).size(), 1u);
    EXPECT_EQ(enum_phi_kl(1, 1, 2).size(), 2u);
    EXPECT_EQ(enum_phi_kl(1, 0, 1).size(), 1u);
}

TEST(EnumPhi, EmptyExactlyOutsideRange) {
    for (int n = 1; n <= 6; ++n)
        for (int d = 1; d <= 7; ++d) {
            const bool in_range = 2 * d >= n && d <= n;
            EXPECT_EQ(enum_phi(n, d).empty(), !in_range) << n << " " << d;
        }
}

TEST(EnumPhi, MapsAreInjectiveAndCoverEveryPair) {
    for (const auto& phi : enum_phi(4, 3)) {
        std::set<int> slots(phi.targets.begin(), phi.targets.end());
        EXPECT_EQ(slots.size(), phi.targets.size());
        for (int i = 0; i < phi.d; ++i) EXPECT_TRUE(slots.count(2 * i) || slots.count(2 * i + 1));
    }
}

TEST(EnumPhi, LexicographicOrderAndFormatting) {
    const auto maps = enum_phi(1, 1);
    EXPECT_EQ(maps[0].to_string(), "1->1");
    EXPECT_EQ(maps[1].to_string(), "1->1'");
    const auto all = enum_phi(3, 2);
    EXPECT_TRUE(std::is_sorted(all.begin(), all.end(),
                               [](const PhiMap& a, const PhiMap& b) { return a.targets < b.targets; }));
}

TEST(EnumPhi, SizeGuard) {
    EXPECT_THROW(enum_phi(9, 5), mwk::SizeGuardError);
    EXPECT_THROW(enum_phi_kl(5, 4, 5), mwk::SizeGuardError);
}

TEST(Orbits, EveryOrbitHasDFactorialElements) {
    for (int n = 1; n <= 5; ++n)
        for (int d = (n + 1) / 2; d <= n; ++d) {
            double fact = 1.0;
            for (int i = 2; i <= d; ++i) fact *= i;
            EXPECT_DOUBLE_EQ(orbit_representatives(n, d).size() * fact,
                             static_cast<double>(enum_phi(n, d).size()));
        }
}

TEST(Orbits, SumOverOrbitEqualsSizeTimesRepresentative) {
    RngStream rng(11);
    const auto dk = random_pair(3, 3, rng);
    const std::vector<GridPoint> pts{{true, 0}, {false, 2}, {true, 1}};
    for (const auto& rep : orbit_representatives(3, 2)) {
        bool ok = true;
        for (int k = 0; k < 3; ++k) ok &= pts[k].positive != PhiMap::primed(rep.targets[k]);
        if (!ok) continue;
        const double v = apply_phi(dk, rep, pts);
        double orbit_sum = 0.0;
        for (const auto& perm : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
            const auto img = permute_pairs(rep, perm);
            EXPECT_EQ(orbit_representative(img), rep);
            orbit_sum += apply_phi(dk, img, pts);
        }
        EXPECT_NEAR(orbit_sum, 2.0 * v, 1e-14);
    }
}

TEST(EvalH, SmallCases) {
    auto dk = fixed_pair();
    EXPECT_DOUBLE_EQ(eval_H_d(dk, {1}, {2}), dk.w(2, 1) * dk.N(1, 2));
    const double expect = 0.5 * dk.w(0, 1) * dk.w(2, 0) *
                          (dk.N(1, 0) * dk.N(0, 2) - dk.N(1, 2) * dk.N(0, 0));
    EXPECT_NEAR(eval_H_d(dk, {1, 0}, {0, 2}), expect, 1e-15);
    dk.w(0, 1) = 0.0;
    EXPECT_EQ(eval_H_d(dk, {1, 0}, {0, 2}), 0.0);
}

TEST(ApplyPhi, NoMutesIsPinnedH) {
    const auto dk = fixed_pair();
    const PhiMap phi{2, 2, {0, 3}};  // 1->1, 2->2'
    const std::vector<GridPoint> pts{{true, 2}, {false, 1}};
    // Pair 1 has a free s, pair 2 a free r.
    double expect = 0.0;
    for (std::size_t s1 = 0; s1 < 3; ++s1)
        for (std::size_t r2 = 0; r2 < 3; ++r2) expect += eval_H_d(dk, {2, r2}, {s1, 1});
    EXPECT_NEAR(apply_phi(dk, phi, pts), expect, 1e-15);

    const PhiMap full{2, 1, {0, 1}};
    EXPECT_DOUBLE_EQ(apply_phi(dk, full, {{true, 2}, {false, 1}}), eval_H_d(dk, {2}, {1}));
}

TEST(ApplyPhi, SingleMapIsDiscreteNtildeDiagonal) {
    const auto dk = fixed_pair();
    const PhiMap phi{1, 1, {0}};
    double expect = 0.0;
    for (std::size_t s = 0; s < 3; ++s) expect += dk.N(1, s) * dk.w(s, 1);
    EXPECT_NEAR(apply_phi(dk, phi, {{true, 1}}), expect, 1e-15);
}

TEST(ApplyPhi, NestedLoopReference) {
    RngStream rng(5);
    const auto dk = random_pair(3, 4, rng);
    const std::vector<GridPoint> pts{{false, 3}, {true, 0}};
    for (const auto& phi : enum_phi(2, 2)) {
        bool ok = true;
        for (int k = 0; k < 2; ++k) ok &= pts[k].positive != PhiMap::primed(phi.targets[k]);
        if (!ok) {
            EXPECT_THROW(apply_phi(dk, phi, pts), mwk::DomainError);
            continue;
        }
        double ref = 0.0;
        for (std::size_t r0 = 0; r0 < 3; ++r0)
            for (std::size_t r1 = 0; r1 < 3; ++r1)
                for (std::size_t s0 = 0; s0 < 4; ++s0)
                    for (std::size_t s1 = 0; s1 < 4; ++s1) {
                        std::size_t r[2] = {r0, r1}, s[2] = {s0, s1};
                        bool pinned = true;
                        for (int k = 0; k < 2; ++k) {
                            const int slot = phi.targets[k];
                            const std::size_t v = PhiMap::primed(slot) ? s[slot / 2] : r[slot / 2];
                            pinned &= v == pts[k].index;
                        }
                        if (!pinned) continue;
                        const double det = dk.N(r0, s0) * dk.N(r1, s1) - dk.N(r0, s1) * dk.N(r1, s0);
                        ref += 0.5 * dk.w(s0, r0) * dk.w(s1, r1) * det;
                    }
        EXPECT_NEAR(apply_phi(dk, phi, pts), ref, 1e-14) << phi.to_string();
    }
}

TEST(Necklace, FrozenBruteForceValues) {
    const auto dk = fixed_pair();
    for (const auto& row : kNecklaceTable) {
        EXPECT_NEAR(necklace_lhs(dk, row.points), row.value, 1e-13);
        EXPECT_NEAR(necklace_rhs(dk, row.points), row.value, 1e-13);
    }
}

TEST(Necklace, SinglePointCases) {
    const auto dk = fixed_pair();
    double pos = 0.0, neg = 0.0;
    for (std::size_t s = 0; s < 3; ++s) pos += dk.N(0, s) * dk.w(s, 0);
    for (std::size_t r = 0; r < 3; ++r) neg += dk.w(1, r) * dk.N(r, 1);
    EXPECT_NEAR(necklace_lhs(dk, {{true, 0}}), pos, 1e-15);
    EXPECT_NEAR(necklace_lhs(dk, {{false, 1}}), neg, 1e-15);
}

TEST(Necklace, NegPosEntryCarriesSubtractedW) {
    const auto dk = fixed_pair();
    const auto b = build_ntilde(dk.N, dk.w);
    double wnw = 0.0;
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t s = 0; s < 3; ++s) wnw += dk.w(2, r) * dk.N(r, s) * dk.w(s, 1);
    EXPECT_NEAR(b.np(2, 1), wnw - dk.w(2, 1), 1e-15);
}

TEST(Necklace, LhsEqualsRhsOnRandomInstances) {
    RngStream rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto dk = random_pair(3, 3, rng);
        for (int n = 1; n <= 4; ++n)
            for (int mask = 0; mask < (1 << n); ++mask) {
                std::vector<GridPoint> pts;
                for (int k = 0; k < n; ++k)
                    pts.push_back({((mask >> k) & 1) == 0, static_cast<std::size_t>(rng.next_u64() % 3)});
                const double l = necklace_lhs(dk, pts);
                const double r = necklace_rhs(dk, pts);
                const double scale = std::max(std::abs(r), hadamard_bound(ntilde_matrix(dk, pts)));
                worst = std::max(worst, std::abs(l - r) / scale);
            }
    }
    EXPECT_LT(worst, 1e-10);
}

TEST(Necklace, Guards) {
    const auto dk = fixed_pair();
    const std::vector<GridPoint> seven(7, GridPoint{true, 0});
    EXPECT_THROW(necklace_lhs(dk, seven), mwk::SizeGuardError);
    EXPECT_THROW(necklace_rhs(dk, seven), mwk::SizeGuardError);
    EXPECT_THROW(locate(dk, 1.5), mwk::DomainError);
    EXPECT_EQ(locate(dk, -2.0), (GridPoint{false, 1}));
    auto bad = dk;
    bad.neg_grid[0] = 1.0;
    EXPECT_THROW(bad.validate(), mwk::DomainError);
}

TEST(Laplace, FirstRowExpansion) {
    RngStream rng(3);
    const auto m = random_matrix(5, rng);
    EXPECT_NEAR(laplace_expand(m, 1, 0), cofactor_det(m), 1e-13);
    EXPECT_NEAR(laplace_expand(m, 0, 1), cofactor_det(m), 1e-13);
}

TEST(Laplace, RowAndColumnFormula) {
    RngStream rng(4);
    const auto m = random_matrix(4, rng);
    const std::size_t n = 4;
    auto minor = [&](std::vector<std::size_t> dr, std::vector<std::size_t> dc) {
        std::vector<std::size_t> rows, cols;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(dr.begin(), dr.end(), i) == dr.end()) rows.push_back(i);
            if (std::find(dc.begin(), dc.end(), i) == dc.end()) cols.push_back(i);
        }
        return cofactor_det(m.select(rows, cols));
    };
    double expect = m(0, 0) * minor({0}, {0});
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 1; j < n; ++j)
            expect += ((i + j) % 2 ? 1.0 : -1.0) * m(i, 0) * m(0, j) * minor({0, i}, {0, j});
    EXPECT_NEAR(expect, cofactor_det(m), 1e-13);
    EXPECT_NEAR(laplace_expand(m, 1, 1), expect, 1e-13);
}

TEST(Laplace, AllSplitsMatchDeterminant) {
    RngStream rng(9);
    for (int trial = 0; trial < 5; ++trial) {
        const auto m = random_matrix(6, rng);
        const double ref = cofactor_det(m);
        for (int k = 0; k <= 4; ++k)
            for (int l = 0; k + l <= 4; ++l) {
                if (k + l == 0) continue;
                EXPECT_LT(std::abs(laplace_expand(m, k, l) - ref), 1e-12 * std::abs(ref))
                    << k << " " << l;
            }
    }
}

TEST(Laplace, Guards) {
    RngStream rng(1);
    EXPECT_THROW(laplace_expand(random_matrix(9, rng), 1, 0), mwk::SizeGuardError);
    EXPECT_THROW(laplace_expand(random_matrix(5, rng), 3, 2), mwk::SizeGuardError);
    EXPECT_THROW(laplace_expand(random_matrix(5, rng), 0, 0), mwk::DomainError);
    EXPECT_THROW(laplace_expand(random_matrix(2, rng), 3, 0), mwk::DomainError);
}

TEST(Diagram, StepTwoNecklaceAndDump) {
    const PhiMap phi{2, 2, {0, 3}};  // 1->1, 2->2'
    const auto full = necklace_from_phi(phi, {1, 0});
    EXPECT_EQ(full.dump(), "W1 -> B2 -> W -> B -> (W1)\n");
    const auto two = necklace_from_phi(phi, {0, 1});
    EXPECT_EQ(two.dump(), "W1 -> B -> (W1)\nB2 -> W -> (B2)\n");
    EXPECT_EQ(reduce(full).dump(), "W1 -> B2 -N-> (W1)\n");
}

TEST(Diagram, ReduceExpandRoundTripAndSigns) {
    // Every (phi, sigma) summand maps to a right-side necklace whose tau and
    // w-choices reproduce the sign: sgn sigma = sgn tau (-1)^{#w}.
    for (int n = 1; n <= 4; ++n)
        for (int d = (n + 1) / 2; d <= n; ++d)
            for (const auto& phi : orbit_representatives(n, d)) {
                std::vector<int> sigma(d);
                std::iota(sigma.begin(), sigma.end(), 0);
                do {
                    const auto full = necklace_from_phi(phi, sigma);
                    const auto red = reduce(full);
                    EXPECT_EQ(red.bead_count(), static_cast<std::size_t>(n));
                    EXPECT_EQ(expand(red).dump(), full.dump());

                    std::vector<bool> negative(n);
                    std::vector<int> tau(n);
                    std::vector<EdgeMark> marks(n, EdgeMark::none);
                    int w_choices = 0;
                    for (const auto& c : red.components)
                        for (std::size_t i = 0; i < c.size(); ++i) {
                            const int k = c[i].label - 1;
                            negative[k] = c[i].black;
                            tau[k] = c[(i + 1) % c.size()].label - 1;
                            marks[k] = c[i].next;
                            w_choices += c[i].next == EdgeMark::w;
                        }
                    EXPECT_EQ(necklace_from_tau(negative, tau, marks).dump(), red.dump());
                    EXPECT_EQ(w_choices, n - d);
                    auto cycles = [](const std::vector<int>& p) {
                        std::vector<char> seen(p.size(), 0);
                        int c = 0;
                        for (std::size_t i = 0; i < p.size(); ++i) {
                            if (seen[i]) continue;
                            ++c;
                            for (std::size_t j = i; !seen[j]; j = p[j]) seen[j] = 1;
                        }
                        return c;
                    };
                    const int sgn_sigma = (d - cycles(sigma)) % 2 ? -1 : 1;
                    const int sgn_tau = (n - cycles(tau)) % 2 ? -1 : 1;
                    EXPECT_EQ(sgn_sigma, sgn_tau * (w_choices % 2 ? -1 : 1));
                } while (std::next_permutation(sigma.begin(), sigma.end()));
            }
}
