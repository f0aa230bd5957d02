#include "pivotgrowth/matrix.hpp"

#include "pivotgrowth/errors.hpp"

namespace pivotgrowth {

RationalMatrix::RationalMatrix(std::size_t n) : n_(n), data_(n * n) {}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows)
    : n_(rows.size()), data_() {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) throw Error("RationalMatrix: rows must form a square matrix");
        for (const auto& v : row) {
            data_.push_back(v);
            data_.back().canonicalize();
        }
    }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
    RationalMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
    return out;
}

Rational RationalMatrix::max_abs() const {
    Rational best = 0;
    for (const auto& v : data_) {
        const Rational a = abs(v);
        if (a > best) best = a;
    }
    return best;
}

RationalMatrix RationalMatrix::scaled(const Rational& c) const {
    RationalMatrix out(*this);
    for (auto& v : out.data_) v *= c;
    return out;
}

RationalMatrix RationalMatrix::transposed() const {
    RationalMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

RationalMatrix RationalMatrix::permuted(std::span<const std::size_t> rows,
                                        std::span<const std::size_t> cols) const {
    if (rows.size() != n_ || cols.size() != n_) throw Error("permuted: permutation size mismatch");
    RationalMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out(i, j) = (*this)(rows[i], cols[j]);
    return out;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.n() != b.n()) throw Error("matrix product: dimension mismatch");
    const std::size_t n = a.n();
    RationalMatrix out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < n; ++j) out(i, j) += a(i, k) * b(k, j);
        }
    return out;
}

RationalMatrix kron(const RationalMatrix& a, const RationalMatrix& b) {
    const std::size_t m = a.n(), n = b.n();
    RationalMatrix out(m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t p = 0; p < n; ++p)
                for (std::size_t q = 0; q < n; ++q) out(i * n + p, j * n + q) = a(i, j) * b(p, q);
    return out;
}

} // namespace pivotgrowth
