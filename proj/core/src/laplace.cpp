#include <algorithm>
#include <numeric>
#include <vector>

#include "mwk/errors.hpp"
#include "mwk/necklace.hpp"

namespace mwk::necklace {

namespace {

int permutation_sign(std::vector<std::size_t> p) {
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (p[i] != i) {
            std::swap(p[i], p[p[i]]);
            sign = -sign;
        }
    }
    return sign;
}

// Sign with which prod_i m(a_i, b_i) * M(rows without a | cols without b)
// enters det M: (-1)^{sum a + sum b} (1-based) times the sign of the pairing
// between the sorted a's and the sorted b's.
int term_sign(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    const std::size_t d = a.size();
    std::size_t total = 2 * d;  // 1-based correction
    for (std::size_t i = 0; i < d; ++i) total += a[i] + b[i];
    std::vector<std::size_t> ra(d), rb(d), order(d);
    std::iota(order.begin(), order.end(), 0);
    auto rank = [&](const std::vector<std::size_t>& v, std::vector<std::size_t>& out) {
        auto idx = order;
        std::ranges::sort(idx, {}, [&](std::size_t i) { return v[i]; });
        for (std::size_t r = 0; r < d; ++r) out[idx[r]] = r;
    };
    rank(a, ra);
    rank(b, rb);
    std::vector<std::size_t> pi(d);
    for (std::size_t i = 0; i < d; ++i) pi[ra[i]] = rb[i];
    return (total % 2 ? -1 : 1) * permutation_sign(pi);
}

std::vector<std::size_t> complement(std::size_t n, const std::vector<std::size_t>& removed) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (std::ranges::find(removed, i) == removed.end()) keep.push_back(i);
    return keep;
}

// Calls f for every assignment of distinct values from pool to the slots
// marked free (kFree) in v.
constexpr std::size_t kFree = static_cast<std::size_t>(-1);

template <class F>
void fill_distinct(std::vector<std::size_t>& v, const std::vector<std::size_t>& pool, F&& f,
                   std::size_t pos = 0) {
    while (pos < v.size() && v[pos] != kFree) ++pos;
    if (pos == v.size()) {
        f();
        return;
    }
    for (std::size_t x : pool) {
        if (std::ranges::find(v, x) != v.end()) continue;
        v[pos] = x;
        fill_distinct(v, pool, f, pos + 1);
        v[pos] = kFree;
    }
}

}  // namespace

double laplace_expand(const numerics::DenseMatrix& m, int k, int l) {
    if (!m.square()) throw DomainError("laplace_expand: matrix must be square");
    const std::size_t n = m.rows();
    if (n > 8) throw SizeGuardError("laplace_expand: N must be <= 8");
    if (k < 0 || l < 0 || k + l < 1) throw DomainError("laplace_expand: need k, l >= 0, k + l >= 1");
    if (k + l > 4) throw SizeGuardError("laplace_expand: k + l must be <= 4");
    const std::size_t uk = static_cast<std::size_t>(k);
    const std::size_t ul = static_cast<std::size_t>(l);
    if (n < std::max(uk, ul)) throw DomainError("laplace_expand: N must be >= max(k, l)");

    std::vector<std::size_t> row_pool, col_pool;
    for (std::size_t i = uk; i < n; ++i) row_pool.push_back(i);
    for (std::size_t j = ul; j < n; ++j) col_pool.push_back(j);

    double total = 0.0;
    const int d_max = std::min(k + l, static_cast<int>(n));
    for (int d = std::max(k, l); d <= d_max; ++d) {
        double sum_d = 0.0;
        for (const auto& phi : enum_phi_kl(k, l, d)) {
            // Specified indices: row label m sits at a_i, column label m at b_j.
            std::vector<std::size_t> a(d, kFree), b(d, kFree);
            for (int src = 0; src < k + l; ++src) {
                const int slot = phi.targets[src];
                if (src < k) a[PhiMap::pair(slot)] = static_cast<std::size_t>(src);
                else b[PhiMap::pair(slot)] = static_cast<std::size_t>(src - k);
            }
            fill_distinct(a, row_pool, [&] {
                fill_distinct(b, col_pool, [&] {
                    double prod = 1.0;
                    for (int i = 0; i < d; ++i) prod *= m(a[i], b[i]);
                    if (prod == 0.0) return;
                    const auto minor = m.select(complement(n, a), complement(n, b));
                    sum_d += term_sign(a, b) * prod * numerics::det(minor);
                });
            });
        }
        double fact = 1.0;
        for (int i = 2; i <= d; ++i) fact *= i;
        total += sum_d / fact;
    }
    return total;
}

}  // namespace mwk::necklace
