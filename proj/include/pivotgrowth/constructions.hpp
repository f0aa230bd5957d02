#pragma once

#include "pivotgrowth/elimination.hpp"

#include <mpfr.h>

#include <string>
#include <vector>

namespace pivotgrowth {

/// Sylvester Hadamard matrix of order 2^k.
RationalMatrix sylvester_hadamard(unsigned k);

/// Unit diagonal, -1 below, ones in the last column. Growth 2^(n-1) under
/// partial pivoting.
RationalMatrix wilkinson_pp_matrix(std::size_t n);

struct ComplexEliminationReport {
    std::size_t n = 0;
    /// Decimal renderings "re+imi" of the input entries.
    std::vector<std::string> entries;
    std::vector<std::string> pivot_moduli;
    std::string growth;               // decimal, `precision` bits
    double growth_error = 0;          // |growth - 16/(3 sqrt 3)|
    double max_slack = 0;             // complete pivoting slack, largest step
    bool completely_pivoted = false;  // max_slack <= 2^(-precision/2)
};

/// The complex 3x3 matrix [[1,1,1],[1,z,1/z],[1,1/z,z]] with z = (-1 + 2 sqrt(2) i)/3,
/// eliminated in MPFR complex arithmetic.
ComplexEliminationReport tornheim_complex3(mpfr_prec_t precision = 256);

/// A (x) H_1, reordered if needed so that the result is completely pivoted.
/// Throws NotPivoted when A is not completely pivoted.
RationalMatrix cp_kron_h1(const RationalMatrix& a);

/// A (x) B for rook pivoted A and B. Throws NotPivoted naming the bad input.
RationalMatrix rp_kron(const RationalMatrix& a, const RationalMatrix& b);

/// [[1, 0], [0, A / max|A|]].
RationalMatrix border(const RationalMatrix& a);

/// Layout of a {0,1} matrix whose elimination approximates a given matrix.
struct EmbeddingPlan {
    std::size_t n = 0;
    std::size_t gadgets = 0;          // 3n^2 + n, one per column of the middle matrix
    std::size_t m = 0;                // 4 * gadgets + 1
    std::size_t bit_depth = 0;        // 3n
    std::size_t prescribed_steps = 0; // after these steps the trailing n x n block remains
    /// Row of B where gadget g starts (three consecutive rows and columns).
    std::vector<std::size_t> gadget_rows;
    /// First row/column of B holding the {0, 1/2, 1} middle matrix.
    std::size_t middle_offset = 0;
    /// bits[k] is the n x n 0/1 matrix R_k; bits[0] is the integer part.
    std::vector<RationalMatrix> bits;
    /// The block the elimination reaches is sign * (R_0 - sum_k 2^-k R_k).
    int sign = -1;

    /// R_0 - sum_k 2^-k R_k.
    RationalMatrix truncated_value() const;
};

struct Embedding {
    RationalMatrix matrix;
    EmbeddingPlan plan;
};

/// Requires A completely pivoted, a_11 = 1 and |a_ij| <= 1. Throws NotPivoted
/// or NotNormalized.
Embedding binary_embed(const RationalMatrix& a);

} // namespace pivotgrowth
