#pragma once

#include "pivotgrowth/elimination.hpp"

#include <vector>

namespace pivotgrowth {

/// Base-beta floating point with t significant digits, round to nearest even,
/// unbounded exponent.
struct FloatFormat {
    unsigned beta = 2;
    unsigned t = 53;

    /// beta^(1-t) / 2
    Rational unit_roundoff() const;
};

Rational round_to(const Rational& x, const FloatFormat& fmt);

/// A simulated elimination. Everything is stored in the pivoted order, i.e.
/// for `permuted_input` = input(rows[i], cols[j]).
struct FloatTrace {
    FloatFormat format;
    PivotStrategy strategy = PivotStrategy::None;
    std::vector<std::size_t> rows, cols;
    RationalMatrix permuted_input;
    /// levels[k] is the rounded iterate, trailing (n-k) x (n-k) block.
    std::vector<RationalMatrix> levels;
    /// multipliers(i, k) = s_{i,k} for i > k.
    RationalMatrix multipliers;
    /// Relative errors: input rounding, per-update product and difference
    /// roundings (indexed like levels[k+1]), and multiplier roundings.
    RationalMatrix initial_error;
    std::vector<RationalMatrix> product_error;
    std::vector<RationalMatrix> update_error;
    RationalMatrix multiplier_error;
    /// Steps (1-based) where the pivot search saw equal rounded magnitudes.
    std::vector<std::size_t> tie_steps;
    Rational growth;

    std::size_t n() const noexcept { return levels.size(); }
    const Rational& at(std::size_t k, std::size_t i, std::size_t j) const {
        return levels[k](i - k, j - k);
    }
};

/// Throws ZeroPivot (or Singular when a pivot search finds only zeros).
FloatTrace float_eliminate(const RationalMatrix& matrix, const FloatFormat& fmt, PivotStrategy strategy);

/// The matrix whose exact elimination reproduces the float trace on every
/// pivot row and column.
RationalMatrix shadow_matrix(const FloatTrace& trace);

/// Checks |ahat^{(k)}_{ij} - b^{(k)}_{ij}| <= u sum_{l=k}^{min(i,j)-1} [|ahat^{(l)}_{ij}| + |ahat^{(l)}_{lj}| (3+u)]
/// exactly for every entry. Returns the first violating (k, i, j) if any.
struct DeviationCheck {
    bool ok = true;
    std::size_t k = 0, i = 0, j = 0;
    Rational worst_ratio;  // max deviation / bound over entries with nonzero bound
};
DeviationCheck check_shadow_deviation(const FloatTrace& trace, const RationalMatrix& shadow);

/// Reproduces every stored iterate from the recorded relative errors.
bool replay_consistent(const FloatTrace& trace);

struct FloatComparison {
    Rational exact_growth;
    Rational float_growth;
    Rational ratio;
    bool within = false;      // ratio <= 1 + C
    Rational envelope_bound;  // (1 + (1+u)^2)^(n-1)
    bool within_envelope = false;
    std::vector<std::size_t> tie_steps;
};

FloatComparison float_vs_exact_report(const RationalMatrix& matrix, const FloatFormat& fmt,
                                      PivotStrategy strategy, const Rational& C = Rational(1, 2));

} // namespace pivotgrowth
