#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "mwk/eynard_mehta.hpp"
#include "mwk/quadrature.hpp"
#include "mwk/whittaker_kernel.hpp"

namespace mwk::cli {

/// Outcome of one verification suite. `worst` describes the instance with
/// the largest residual (grids, points, parameters).
struct VerifyReport {
    std::string suite;
    std::size_t trials = 0;
    double max_residual = 0.0;
    double threshold = 0.0;
    bool pass = true;
    nlohmann::json worst;

    nlohmann::json to_json() const;
};

// Each trial draws from RngStream(seed).split(trial).

/// Random 3+3 discrete kernel pairs, every sign pattern of 1..4 grid points.
/// Residual |lhs - rhs| / max(|rhs|, Hadamard bound of the N~ matrix).
VerifyReport verify_necklace(std::uint64_t seed, std::size_t trials);

/// Random 6x6 matrices, every split with 1 <= k + l <= 4, relative to det.
VerifyReport verify_laplace(std::uint64_t seed, std::size_t trials);

/// 100 pairs per trial in (0, 10]^2, absolute.
VerifyReport verify_jsym(const whittaker::KernelParams& p, std::uint64_t seed, std::size_t trials);

/// One (x, y) per trial, uniform in [0.5, 5]^2.
VerifyReport verify_stieltjes(const whittaker::KernelParams& p, std::uint64_t seed,
                              std::size_t trials, const numerics::QuadratureSpec& spec);

/// rho_kl against brute_force_rho: one (k, l) with k + l <= 2 and points
/// uniform in [-2, 2] per trial.
VerifyReport verify_em(const em::TwoMatrixModel& model, std::uint64_t seed, std::size_t trials,
                       const numerics::QuadratureSpec& spec);

/// Random (a, b, c) with b in [0.3, 2] and c in [0.1, b + 0.9].
VerifyReport verify_moment(std::uint64_t seed, std::size_t trials);

}  // namespace mwk::cli
