#include "mwk/necklace.hpp"

#include <algorithm>
#include <numeric>
#include <ranges>
#include <set>
#include <sstream>

#include "mwk/errors.hpp"

namespace mwk::necklace {

namespace {

constexpr int kMaxEnumSources = 8;
constexpr int kMaxNecklacePoints = 6;

double factorial(int d) {
    double f = 1.0;
    for (int i = 2; i <= d; ++i) f *= i;
    return f;
}

void guard(bool ok, const std::string& what) {
    if (!ok) throw SizeGuardError(what);
}

// Depth-first over target tuples in lexicographic order. allowed(k, slot)
// restricts the slot of source k.
template <class Allowed>
std::vector<PhiMap> enumerate(int n, int d, Allowed&& allowed) {
    std::vector<PhiMap> out;
    if (n < 1 || d < 1 || 2 * d < n || d > n) return out;
    std::vector<int> targets(n);
    std::vector<char> used(2 * d, 0);
    auto rec = [&](auto&& self, int k) -> void {
        if (k == n) {
            for (int i = 0; i < d; ++i)
                if (!used[2 * i] && !used[2 * i + 1]) return;
            out.push_back({n, d, targets});
            return;
        }
        for (int slot = 0; slot < 2 * d; ++slot) {
            if (used[slot] || !allowed(k, slot)) continue;
            used[slot] = 1;
            targets[k] = slot;
            self(self, k + 1);
            used[slot] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

std::string PhiMap::to_string() const {
    std::ostringstream os;
    for (int k = 0; k < n; ++k) {
        if (k) os << ", ";
        os << k + 1 << "->" << pair(targets[k]) + 1 << (primed(targets[k]) ? "'" : "");
    }
    return os.str();
}

std::vector<PhiMap> enum_phi(int n, int d) {
    guard(n <= kMaxEnumSources, "enum_phi: n must be <= 8");
    return enumerate(n, d, [](int, int) { return true; });
}

std::vector<PhiMap> enum_phi_kl(int k, int l, int d) {
    guard(k + l <= kMaxEnumSources, "enum_phi_kl: k + l must be <= 8");
    if (k < 0 || l < 0) throw DomainError("enum_phi_kl: k, l must be nonnegative");
    return enumerate(k + l, d, [k](int src, int slot) { return PhiMap::primed(slot) == (src >= k); });
}

PhiMap permute_pairs(const PhiMap& phi, const std::vector<int>& perm) {
    PhiMap out = phi;
    for (auto& slot : out.targets) slot = 2 * perm[PhiMap::pair(slot)] + slot % 2;
    return out;
}

PhiMap orbit_representative(const PhiMap& phi) {
    // Relabel pairs in order of first appearance; this gives the lexicographic
    // minimum since earlier sources then get the smallest possible pair.
    std::vector<int> perm(phi.d, -1);
    int next = 0;
    for (int slot : phi.targets) {
        int& p = perm[PhiMap::pair(slot)];
        if (p < 0) p = next++;
    }
    return permute_pairs(phi, perm);
}

std::vector<PhiMap> orbit_representatives(int n, int d) {
    std::vector<PhiMap> reps;
    for (auto& phi : enum_phi(n, d))
        if (orbit_representative(phi) == phi) reps.push_back(std::move(phi));
    return reps;
}

void DiscreteKernelPair::validate() const {
    for (double x : pos_grid)
        if (!(x > 0.0)) throw DomainError("pos_grid entries must be positive");
    for (double x : neg_grid)
        if (!(x < 0.0)) throw DomainError("neg_grid entries must be negative");
    for (const auto* g : {&pos_grid, &neg_grid}) {
        std::set<double> seen(g->begin(), g->end());
        if (seen.size() != g->size()) throw DomainError("grid entries must be distinct");
    }
    if (N.rows() != pos_grid.size() || N.cols() != neg_grid.size()) {
        throw DomainError("N must be |pos_grid| x |neg_grid|");
    }
    if (w.rows() != neg_grid.size() || w.cols() != pos_grid.size()) {
        throw DomainError("w must be |neg_grid| x |pos_grid|");
    }
}

DiscreteKernelPair random_pair(std::size_t p, std::size_t q, numerics::RngStream& rng) {
    DiscreteKernelPair dk;
    for (std::size_t i = 0; i < p; ++i) dk.pos_grid.push_back(static_cast<double>(i + 1));
    for (std::size_t j = 0; j < q; ++j) dk.neg_grid.push_back(-static_cast<double>(j + 1));
    dk.N = numerics::DenseMatrix(p, q);
    dk.w = numerics::DenseMatrix(q, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j) dk.N(i, j) = 2.0 * rng.uniform() - 1.0;
    for (std::size_t j = 0; j < q; ++j)
        for (std::size_t i = 0; i < p; ++i) dk.w(j, i) = 2.0 * rng.uniform() - 1.0;
    return dk;
}

GridPoint locate(const DiscreteKernelPair& dk, double value) {
    const auto& grid = value > 0.0 ? dk.pos_grid : dk.neg_grid;
    const auto it = std::find(grid.begin(), grid.end(), value);
    if (it == grid.end()) {
        std::ostringstream os;
        os << "point " << value << " is not on the grid";
        throw DomainError(os.str());
    }
    return {value > 0.0, static_cast<std::size_t>(it - grid.begin())};
}

double eval_H_d(const DiscreteKernelPair& dk, const std::vector<std::size_t>& r_idx,
                const std::vector<std::size_t>& s_idx) {
    if (r_idx.size() != s_idx.size()) throw DomainError("eval_H_d: r and s lengths differ");
    const std::size_t d = r_idx.size();
    double prod = 1.0;
    for (std::size_t i = 0; i < d; ++i) prod *= dk.w(s_idx[i], r_idx[i]);
    if (prod == 0.0) return 0.0;
    return prod * numerics::det(dk.N.select(r_idx, s_idx)) / factorial(static_cast<int>(d));
}

double apply_phi(const DiscreteKernelPair& dk, const PhiMap& phi,
                 const std::vector<GridPoint>& points) {
    if (points.size() != static_cast<std::size_t>(phi.n)) {
        throw DomainError("apply_phi: point count does not match phi");
    }
    constexpr std::size_t kFree = static_cast<std::size_t>(-1);
    const std::size_t d = static_cast<std::size_t>(phi.d);
    std::vector<std::size_t> r(d, kFree), s(d, kFree);
    for (int k = 0; k < phi.n; ++k) {
        const int slot = phi.targets[k];
        const bool want_positive = !PhiMap::primed(slot);
        if (points[k].positive != want_positive) {
            std::ostringstream os;
            os << "apply_phi: point " << k + 1 << " has the wrong sign for slot "
               << PhiMap::pair(slot) + 1 << (want_positive ? "" : "'");
            throw DomainError(os.str());
        }
        (want_positive ? r : s)[PhiMap::pair(slot)] = points[k].index;
    }
    // Mute variables, r's first then s's, each with its grid size.
    std::vector<std::size_t*> mute;
    std::vector<std::size_t> extent;
    for (auto& v : r)
        if (v == kFree) mute.push_back(&v), extent.push_back(dk.pos_grid.size());
    for (auto& v : s)
        if (v == kFree) mute.push_back(&v), extent.push_back(dk.neg_grid.size());
    for (auto* v : mute) *v = 0;
    for (std::size_t e : extent)
        if (e == 0) return 0.0;

    double total = 0.0;
    while (true) {
        total += eval_H_d(dk, r, s);
        std::size_t i = 0;
        for (; i < mute.size(); ++i) {
            if (++*mute[i] < extent[i]) break;
            *mute[i] = 0;
        }
        if (i == mute.size()) break;
    }
    return total;
}

double necklace_lhs(const DiscreteKernelPair& dk, const std::vector<GridPoint>& points) {
    const int n = static_cast<int>(points.size());
    guard(n <= kMaxNecklacePoints, "necklace_lhs: at most 6 points");
    if (n == 0) return 1.0;
    double total = 0.0;
    for (int d = (n + 1) / 2; d <= n; ++d) {
        double sum_d = 0.0;
        for (const auto& phi : orbit_representatives(n, d)) {
            const bool signs_match = std::ranges::all_of(std::views::iota(0, n), [&](int k) {
                return points[k].positive != PhiMap::primed(phi.targets[k]);
            });
            if (signs_match) sum_d += apply_phi(dk, phi, points);
        }
        total += factorial(d) * sum_d;
    }
    return total;
}

NtildeBlocks build_ntilde(const numerics::DenseMatrix& N, const numerics::DenseMatrix& w) {
    if (N.rows() != w.cols() || N.cols() != w.rows()) {
        throw DomainError("build_ntilde: N and w shapes are not transposed");
    }
    NtildeBlocks b;
    b.pp = N * w;
    b.pn = N;
    b.nn = w * N;
    b.np = w * N * w - w;
    return b;
}

numerics::DenseMatrix ntilde_matrix(const DiscreteKernelPair& dk,
                                    const std::vector<GridPoint>& points) {
    const auto blocks = build_ntilde(dk.N, dk.w);
    const std::size_t n = points.size();
    numerics::DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const auto& a = points[i];
            const auto& b = points[j];
            const auto& block = a.positive ? (b.positive ? blocks.pp : blocks.pn)
                                           : (b.positive ? blocks.np : blocks.nn);
            m(i, j) = block(a.index, b.index);
        }
    return m;
}

double necklace_rhs(const DiscreteKernelPair& dk, const std::vector<GridPoint>& points) {
    guard(points.size() <= static_cast<std::size_t>(kMaxNecklacePoints),
          "necklace_rhs: at most 6 points");
    return numerics::det(ntilde_matrix(dk, points));
}

// Diagnostic necklaces.

namespace {

int smallest_label_position(const std::vector<Bead>& cycle) {
    int best = -1;
    for (int i = 0; i < static_cast<int>(cycle.size()); ++i) {
        if (cycle[i].label == 0) continue;
        if (best < 0 || cycle[i].label < cycle[best].label) best = i;
    }
    return best;
}

std::string bead_name(const Bead& b) {
    std::string s = b.black ? "B" : "W";
    if (b.label) s += std::to_string(b.label);
    return s;
}

const char* arrow(EdgeMark m) {
    switch (m) {
        case EdgeMark::N: return " -N-> ";
        case EdgeMark::w: return " -w-> ";
        default: return " -> ";
    }
}

}  // namespace

void Necklace::canonicalize() {
    for (auto& c : components) {
        const int start = smallest_label_position(c);
        if (start > 0) std::rotate(c.begin(), c.begin() + start, c.end());
    }
    std::ranges::stable_sort(components, {}, [](const std::vector<Bead>& c) {
        return c.empty() || c.front().label == 0 ? 1 << 30 : c.front().label;
    });
}

std::string Necklace::dump() const {
    std::ostringstream os;
    for (const auto& c : components) {
        for (const auto& b : c) os << bead_name(b) << arrow(b.next);
        if (!c.empty()) os << "(" << bead_name(c.front()) << ")";
        os << "\n";
    }
    return os.str();
}

std::size_t Necklace::bead_count() const {
    std::size_t n = 0;
    for (const auto& c : components) n += c.size();
    return n;
}

Necklace necklace_from_phi(const PhiMap& phi, const std::vector<int>& sigma) {
    const int d = phi.d;
    if (static_cast<int>(sigma.size()) != d) throw DomainError("sigma must have length d");
    std::vector<int> white_label(d, 0), black_label(d, 0);
    for (int k = 0; k < phi.n; ++k) {
        const int slot = phi.targets[k];
        (PhiMap::primed(slot) ? black_label : white_label)[PhiMap::pair(slot)] = k + 1;
    }
    Necklace out;
    std::vector<char> seen(d, 0);
    for (int start = 0; start < d; ++start) {
        if (seen[start]) continue;
        std::vector<Bead> cycle;
        for (int i = start; !seen[i]; i = sigma[i]) {
            seen[i] = 1;
            cycle.push_back({false, white_label[i], EdgeMark::none});
            cycle.push_back({true, black_label[sigma[i]], EdgeMark::none});
        }
        out.components.push_back(std::move(cycle));
    }
    out.canonicalize();
    return out;
}

Necklace necklace_from_tau(const std::vector<bool>& negative, const std::vector<int>& tau,
                           const std::vector<EdgeMark>& marks) {
    const int n = static_cast<int>(tau.size());
    if (negative.size() != tau.size() || marks.size() != tau.size()) {
        throw DomainError("necklace_from_tau: size mismatch");
    }
    Necklace out;
    std::vector<char> seen(n, 0);
    for (int start = 0; start < n; ++start) {
        if (seen[start]) continue;
        std::vector<Bead> cycle;
        for (int i = start; !seen[i]; i = tau[i]) {
            seen[i] = 1;
            const bool b2w = negative[i] && !negative[tau[i]];
            cycle.push_back({negative[i], i + 1, b2w ? marks[i] : EdgeMark::none});
        }
        out.components.push_back(std::move(cycle));
    }
    out.canonicalize();
    return out;
}

Necklace reduce(const Necklace& full) {
    Necklace out;
    for (const auto& c : full.components) {
        const int len = static_cast<int>(c.size());
        std::vector<Bead> kept;
        for (int i = 0; i < len; ++i) {
            if (c[i].label == 0) continue;
            Bead b = c[i];
            int mutes = 0;
            int j = (i + 1) % len;
            while (c[j].label == 0) ++mutes, j = (j + 1) % len;
            b.next = EdgeMark::none;
            if (b.black && !c[j].black) b.next = mutes == 0 ? EdgeMark::w : EdgeMark::N;
            kept.push_back(b);
        }
        if (!kept.empty()) out.components.push_back(std::move(kept));
    }
    out.canonicalize();
    return out;
}

Necklace expand(const Necklace& reduced) {
    Necklace out;
    for (const auto& c : reduced.components) {
        std::vector<Bead> cycle;
        const std::size_t len = c.size();
        for (std::size_t i = 0; i < len; ++i) {
            const Bead& u = c[i];
            const Bead& v = c[(i + 1) % len];
            cycle.push_back({u.black, u.label, EdgeMark::none});
            if (!u.black && !v.black) {
                cycle.push_back({true, 0, EdgeMark::none});
            } else if (u.black && v.black) {
                cycle.push_back({false, 0, EdgeMark::none});
            } else if (u.black && u.next == EdgeMark::N) {
                cycle.push_back({false, 0, EdgeMark::none});
                cycle.push_back({true, 0, EdgeMark::none});
            }
        }
        out.components.push_back(std::move(cycle));
    }
    out.canonicalize();
    return out;
}

}  // namespace mwk::necklace
