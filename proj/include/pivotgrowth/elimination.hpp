#pragma once

#include "pivotgrowth/matrix.hpp"
#include "pivotgrowth/rational.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pivotgrowth {

enum class PivotStrategy { None, Partial, Rook, Complete };

std::string_view to_string(PivotStrategy strategy);

/// Accepts none, partial/pp, rook/rp, complete/cp (case sensitive).
PivotStrategy parse_strategy(std::string_view name);

/// The full elimination pyramid of one exact run without pivoting.
///
/// Indices are 0-based and global: `at(k, i, j)` is a^{(k+1)}_{i+1,j+1} in
/// the usual 1-based notation and is defined for i, j >= k.
struct EliminationTrace {
    /// levels[k] holds the trailing (n-k) x (n-k) block A^{(k+1)}.
    std::vector<RationalMatrix> levels;
    Rational max_abs_entry;
    Rational growth;
    std::size_t max_numerator_bits = 0;
    std::size_t max_denominator_bits = 0;

    std::size_t n() const noexcept { return levels.size(); }
    const Rational& at(std::size_t k, std::size_t i, std::size_t j) const {
        return levels[k](i - k, j - k);
    }
    const Rational& pivot(std::size_t k) const { return levels[k](0, 0); }
    std::vector<Rational> pivots() const;

    /// L(i, j) = a^{(j)}_{i,j} / a^{(j)}_{j,j} for i >= j.
    Rational multiplier(std::size_t i, std::size_t j) const { return at(j, i, j) / pivot(j); }
    RationalMatrix lower() const;
    RationalMatrix upper() const;
};

/// Exact Gaussian elimination without pivoting. Throws ZeroPivot(k) if any
/// pivot vanishes.
EliminationTrace eliminate(const RationalMatrix& matrix);

/// Per-step slack eps_k = max|constrained entry| / |pivot| - 1 for steps
/// 1..n-1, where the constrained entries exclude the pivot itself. An empty
/// constrained set counts as maximum 0.
std::vector<Rational> pivot_slack(const EliminationTrace& trace, PivotStrategy strategy);
std::vector<Rational> pivot_slack(const RationalMatrix& matrix, PivotStrategy strategy);

struct PivotCheck {
    bool pivoted = false;
    std::optional<std::size_t> failing_step;  // 1-based
    std::string diagnostic;
};

PivotCheck check_pivoted(const EliminationTrace& trace, PivotStrategy strategy);
PivotCheck check_pivoted(const RationalMatrix& matrix, PivotStrategy strategy);

/// True iff every pivot is nonzero and every slack is <= 0, compared exactly.
bool is_pivoted(const RationalMatrix& matrix, PivotStrategy strategy);

struct PermutedMatrix {
    RationalMatrix matrix;
    std::vector<std::size_t> rows;  // matrix(i, j) = input(rows[i], cols[j])
    std::vector<std::size_t> cols;
};

/// Runs pivoted elimination and returns the input reordered so that it needs
/// no further pivoting. Ties go to the smallest row index, then column index.
/// Throws Singular when no nonzero pivot exists at some step.
PermutedMatrix permute_for_strategy(const RationalMatrix& matrix, PivotStrategy strategy);

/// Trailing block after `steps` steps of exact elimination without pivoting.
/// Throws ZeroPivot.
RationalMatrix eliminate_steps(const RationalMatrix& matrix, std::size_t steps);

/// L * U from the trace; equals the original matrix exactly.
RationalMatrix reconstruct(const EliminationTrace& trace);

/// ||A^{-1}||_inf computed exactly from the LU factors.
Rational inverse_inf_norm(const EliminationTrace& trace);

} // namespace pivotgrowth
