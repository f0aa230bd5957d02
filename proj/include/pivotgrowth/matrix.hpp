#pragma once

#include "pivotgrowth/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pivotgrowth {

/// Dense square matrix of exact rationals, row-major. Entries are kept in
/// canonical (reduced) form by GMP.
class RationalMatrix {
public:
    RationalMatrix() = default;
    explicit RationalMatrix(std::size_t n);
    RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

    static RationalMatrix identity(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    bool empty() const noexcept { return n_ == 0; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::span<const Rational> entries() const noexcept { return data_; }

    /// max |a_ij|
    Rational max_abs() const;

    RationalMatrix scaled(const Rational& c) const;
    RationalMatrix transposed() const;

    /// Rows and columns reordered: out(i, j) = this(rows[i], cols[j]).
    RationalMatrix permuted(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

    friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Rational> data_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);

/// Kronecker product: block (i, j) is a_ij * b.
RationalMatrix kron(const RationalMatrix& a, const RationalMatrix& b);

} // namespace pivotgrowth
