#pragma once

// Reference computations that share no code with the library's elimination.
// Iterates come from determinant ratios (Sylvester's identity), determinants
// from a pivoted row reduction on a private copy.

#include <gmpxx.h>

#include <cstddef>
#include <random>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Dense = std::vector<std::vector<Q>>;

inline Q det(Dense a) {
    const std::size_t n = a.size();
    Q d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            const Q f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return d;
}

inline Dense minor_of(const Dense& a, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    Dense m(rows.size(), std::vector<Q>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) m[i][j] = a[rows[i]][cols[j]];
    return m;
}

/// a^{(k)}_{i,j} (0-based, k steps done, i,j >= k) as a ratio of bordered minors.
inline Q iterate(const Dense& a, std::size_t k, std::size_t i, std::size_t j) {
    std::vector<std::size_t> lead(k);
    for (std::size_t t = 0; t < k; ++t) lead[t] = t;
    std::vector<std::size_t> rows = lead, cols = lead;
    rows.push_back(i);
    cols.push_back(j);
    const Q base = k == 0 ? Q(1) : det(minor_of(a, lead, lead));
    return det(minor_of(a, rows, cols)) / base;
}

/// All iterates, level k as a (n-k) x (n-k) block. Stops early after a level
/// whose corner is zero.
inline std::vector<Dense> pyramid(const Dense& a) {
    const std::size_t n = a.size();
    std::vector<Dense> out;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && out.back()[0][0] == 0) break;
        Dense level(n - k, std::vector<Q>(n - k));
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) level[i - k][j - k] = iterate(a, k, i, j);
        out.push_back(std::move(level));
    }
    return out;
}

inline Q max_abs(const Dense& a) {
    Q m = 0;
    for (const auto& r : a)
        for (const auto& v : r)
            if (abs(v) > m) m = abs(v);
    return m;
}

inline Q growth(const Dense& a) {
    Q top = 0;
    for (const auto& level : pyramid(a))
        if (max_abs(level) > top) top = max_abs(level);
    return top / max_abs(a);
}

enum class Rule { Partial, Rook, Complete };

/// Direct check of the pivoting inequalities on every level.
inline bool pivoted(const Dense& a, Rule rule) {
    const auto levels = pyramid(a);
    if (levels.size() < a.size()) return false;
    for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
        const Dense& l = levels[k];
        const Q p = abs(l[0][0]);
        if (p == 0) return false;
        for (std::size_t i = 0; i < l.size(); ++i)
            for (std::size_t j = 0; j < l.size(); ++j) {
                const bool in_col = j == 0, in_row = i == 0;
                const bool constrained = rule == Rule::Complete || (rule == Rule::Rook && (in_row || in_col)) ||
                                         (rule == Rule::Partial && in_col);
                if (constrained && abs(l[i][j]) > p) return false;
            }
    }
    return levels.back()[0][0] != 0;
}

inline Dense random_integer(std::size_t n, std::mt19937_64& rng, int lo = -9, int hi = 9) {
    std::uniform_int_distribution<int> d(lo, hi);
    Dense a(n, std::vector<Q>(n));
    for (auto& r : a)
        for (auto& v : r) v = d(rng);
    return a;
}

inline Dense random_rational(std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-50, 50), den(1, 12);
    Dense a(n, std::vector<Q>(n));
    for (auto& r : a)
        for (auto& v : r) {
            v = Q(num(rng), den(rng));
            v.canonicalize();
        }
    return a;
}

} // namespace oracle
