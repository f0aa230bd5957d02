#pragma once

#include "pivotgrowth/repair.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace pivotgrowth {

/// Float values x_{i,j,k} of an elimination pyramid, 0-based: level k holds
/// the trailing (n-k) x (n-k) block. Complete pivoting fixes x_{0,0,0} = 1;
/// rook pivoting instead bounds every level-0 entry by 1.
struct PyramidCandidate {
    std::size_t n = 0;
    std::vector<double> x;
    double objective = 0;  // |last pivot| / max|a_ij|
    double residual = 0;

    static std::size_t level_offset(std::size_t n, std::size_t k);
    static std::size_t size_for(std::size_t n) { return level_offset(n, n); }
    double& at(std::size_t k, std::size_t i, std::size_t j) {
        return x[level_offset(n, k) + (i - k) * (n - k) + (j - k)];
    }
    double at(std::size_t k, std::size_t i, std::size_t j) const {
        return x[level_offset(n, k) + (i - k) * (n - k) + (j - k)];
    }
    /// The level-0 matrix, row-major.
    std::vector<double> matrix() const;
};

struct OptimizerOptions {
    int max_outer = 40;
    int max_inner = 400;
    double feasibility_tol = 1e-11;
    double feasibility_start = 1e-6;
    double gradient_tol = 1e-10;
    double initial_penalty = 10;
    double max_penalty = 1e12;
    double pivot_floor = 1e-3;
    int lbfgs_memory = 12;
};

struct SearchConfig {
    std::size_t n = 0;
    PivotStrategy strategy = PivotStrategy::Complete;
    std::size_t restarts = 64;
    std::uint64_t seed = 1;
    unsigned parallelism = 1;
    OptimizerOptions options;
    /// How many of the best float candidates go through exact repair.
    std::size_t certify_top = 4;
};

/// Builds the float pyramid of a matrix without pivoting. Throws ZeroPivot.
PyramidCandidate pyramid_from_matrix(std::size_t n, const std::vector<double>& matrix);

/// Gaussian start permuted to the strategy, scaled so a_11 = 1, with row
/// signs chosen to make every pivot positive. The stream depends only on
/// (seed, restart).
PyramidCandidate random_start(std::size_t n, PivotStrategy strategy, std::uint64_t seed,
                              std::uint64_t restart = 0);
inline PyramidCandidate random_cp_start(std::size_t n, std::uint64_t seed, std::uint64_t restart = 0) {
    return random_start(n, PivotStrategy::Complete, seed, restart);
}

/// Max violation of the recurrence equalities and the pivoting inequalities.
double pyramid_residual(const PyramidCandidate& candidate, PivotStrategy strategy);

struct OptimizeResult {
    PyramidCandidate candidate;
    bool converged = false;
    int outer_iterations = 0;
    std::string diagnostic;
};

/// Maximizes the last pivot subject to the recurrence and pivoting
/// constraints (augmented Lagrangian with an L-BFGS inner solver).
OptimizeResult optimize_growth(const PyramidCandidate& start, PivotStrategy strategy,
                               const OptimizerOptions& options = {});

/// Exact certificate from a float candidate: rational snapping variants,
/// reordering when needed, then cp_repair or rook_repair. Keeps the best.
GrowthCertificate certify_candidate(const PyramidCandidate& candidate, PivotStrategy strategy);

struct RestartRecord {
    std::size_t restart = 0;
    double objective = 0;
    double residual = 0;
    bool converged = false;
    std::string diagnostic;
};

struct SearchResult {
    PyramidCandidate best;
    std::size_t best_restart = 0;
    GrowthCertificate certificate;
    std::vector<RestartRecord> restarts;
};

using ProgressCallback = std::function<void(const RestartRecord&, std::size_t done, std::size_t total)>;

/// Throws SearchFailed when no restart produced a certifiable candidate.
SearchResult multistart_search(const SearchConfig& config, const ProgressCallback& progress = {});

} // namespace pivotgrowth
