#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mwk/dense.hpp"
#include "mwk/rng.hpp"

namespace mwk::necklace {

/// Injective map from n source labels into the pairs {1,1'; ...; d,d'} that
/// hits every pair. Targets are encoded as slots: 2i for the unprimed element
/// of pair i and 2i+1 for the primed one (pairs and sources are 0-based).
struct PhiMap {
    int n = 0;
    int d = 0;
    std::vector<int> targets;

    static bool primed(int slot) noexcept { return slot % 2 == 1; }
    static int pair(int slot) noexcept { return slot / 2; }

    /// "1->1', 2->2" with 1-based labels.
    std::string to_string() const;

    friend bool operator==(const PhiMap&, const PhiMap&) = default;
};

/// All of Phi_{n,d}, lexicographic in the target tuple. Empty unless
/// n/2 <= d <= n. SizeGuardError for n > 8.
std::vector<PhiMap> enum_phi(int n, int d);

/// Phi_{k,l;d}: sources are k row labels followed by l column labels; row
/// labels go to unprimed slots and column labels to primed ones.
/// SizeGuardError for k + l > 8.
std::vector<PhiMap> enum_phi_kl(int k, int l, int d);

/// Image of phi under the pair permutation perm (pair i goes to perm[i]).
PhiMap permute_pairs(const PhiMap& phi, const std::vector<int>& perm);

/// Lexicographically smallest element of the S_d orbit of phi.
PhiMap orbit_representative(const PhiMap& phi);

/// One representative per S_d orbit of Phi_{n,d}, in lexicographic order.
/// Every orbit has exactly d! elements because phi covers every pair.
std::vector<PhiMap> orbit_representatives(int n, int d);

/// Finite grids with kernels N (pos x neg) and w (neg x pos). Integrals over
/// R_+ and R_- become sums over the grids (counting measure).
struct DiscreteKernelPair {
    std::vector<double> pos_grid;
    std::vector<double> neg_grid;
    numerics::DenseMatrix N;
    numerics::DenseMatrix w;

    /// Checks grid signs, distinctness and matrix shapes (DomainError).
    void validate() const;
};

/// Grids {1..p} and {-1..-q} with N, w entries uniform in [-1, 1].
DiscreteKernelPair random_pair(std::size_t p, std::size_t q, numerics::RngStream& rng);

/// A point of one of the grids.
struct GridPoint {
    bool positive = true;
    std::size_t index = 0;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Finds a real value on the grids; DomainError if it is on neither.
GridPoint locate(const DiscreteKernelPair& dk, double value);

/// H_d = (1/d!) prod_i w(s_i, r_i) det[N(r_i, s_j)], with r given as
/// pos-grid indices and s as neg-grid indices.
double eval_H_d(const DiscreteKernelPair& dk, const std::vector<std::size_t>& r_idx,
                const std::vector<std::size_t>& s_idx);

/// (phi H_d)(x_1..x_n): pins r_i or s_i to the points named by phi and sums
/// the mute variables over their grids. DomainError when a point's sign does
/// not match its slot.
double apply_phi(const DiscreteKernelPair& dk, const PhiMap& phi,
                 const std::vector<GridPoint>& points);

/// sum_d sum_{phi in Phi_{n,d}} (phi H_d), evaluated once per S_d orbit and
/// weighted by d!. SizeGuardError for n > 6.
double necklace_lhs(const DiscreteKernelPair& dk, const std::vector<GridPoint>& points);

/// The four blocks of N~ over the full grids:
///   pp = N w,  pn = N,  np = w N w - w,  nn = w N.
struct NtildeBlocks {
    numerics::DenseMatrix pp, pn, np, nn;
};

NtildeBlocks build_ntilde(const numerics::DenseMatrix& N, const numerics::DenseMatrix& w);

/// [N~(x_i, x_j)] for points on the grids.
numerics::DenseMatrix ntilde_matrix(const DiscreteKernelPair& dk,
                                    const std::vector<GridPoint>& points);

/// det[N~(x_i, x_j)]. SizeGuardError for n > 6.
double necklace_rhs(const DiscreteKernelPair& dk, const std::vector<GridPoint>& points);

/// Expansion of det M along its first k rows and l columns: the sum over
/// Phi_{k,l;d} of (1/d!)(phi M). Guards: N <= 8, 1 <= k + l <= 4, N >= max(k, l).
double laplace_expand(const numerics::DenseMatrix& m, int k, int l);

// Diagnostic necklaces.

enum class EdgeMark { none, N, w };

struct Bead {
    bool black = false;
    int label = 0;                  // 1..n, or 0 for a mute bead
    EdgeMark next = EdgeMark::none; // mark on the edge to the following bead
};

/// Oriented, possibly disconnected necklace. Each component is a cycle; the
/// last bead is followed by the first.
struct Necklace {
    std::vector<std::vector<Bead>> components;

    /// Rotates each component to start at its smallest label and orders the
    /// components by that label.
    void canonicalize();

    /// One line per component, e.g. "W1 -> B -w-> W2 -> B3 -N-> (W1)".
    std::string dump() const;

    std::size_t bead_count() const;
};

/// Necklace of the summand (phi, sigma) of the left side: white bead i is
/// followed by black sigma(i)', black j' by white j. sigma is a permutation
/// of 0..d-1. Edges are unmarked; their factors follow from the colors.
Necklace necklace_from_phi(const PhiMap& phi, const std::vector<int>& sigma);

/// Necklace of a right-side summand: bead i (black when negative) is followed
/// by bead tau(i). marks[i] picks N or w on black-to-white edges leaving i.
Necklace necklace_from_tau(const std::vector<bool>& negative, const std::vector<int>& tau,
                           const std::vector<EdgeMark>& marks);

/// Removes mute beads. A black-to-white edge that survives unchanged is
/// marked w; one that lost two mute beads is marked N.
Necklace reduce(const Necklace& full);

/// Inverse of reduce: reinserts mute beads by edge type.
Necklace expand(const Necklace& reduced);

}  // namespace mwk::necklace
