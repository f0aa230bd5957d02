#include "pivotgrowth/elimination.hpp"

#include "pivotgrowth/errors.hpp"

#include <numeric>

namespace pivotgrowth {

std::string_view to_string(PivotStrategy strategy) {
    switch (strategy) {
    case PivotStrategy::None: return "none";
    case PivotStrategy::Partial: return "partial";
    case PivotStrategy::Rook: return "rook";
    case PivotStrategy::Complete: return "complete";
    }
    return "unknown";
}

PivotStrategy parse_strategy(std::string_view name) {
    if (name == "none") return PivotStrategy::None;
    if (name == "partial" || name == "pp") return PivotStrategy::Partial;
    if (name == "rook" || name == "rp") return PivotStrategy::Rook;
    if (name == "complete" || name == "cp") return PivotStrategy::Complete;
    throw ParseError("unknown pivot strategy '" + std::string(name) + "'");
}

std::vector<Rational> EliminationTrace::pivots() const {
    std::vector<Rational> out;
    out.reserve(n());
    for (std::size_t k = 0; k < n(); ++k) out.push_back(pivot(k));
    return out;
}

RationalMatrix EliminationTrace::lower() const {
    RationalMatrix l(n());
    for (std::size_t j = 0; j < n(); ++j) {
        l(j, j) = 1;
        for (std::size_t i = j + 1; i < n(); ++i) l(i, j) = multiplier(i, j);
    }
    return l;
}

RationalMatrix EliminationTrace::upper() const {
    RationalMatrix u(n());
    for (std::size_t i = 0; i < n(); ++i)
        for (std::size_t j = i; j < n(); ++j) u(i, j) = at(i, i, j);
    return u;
}

EliminationTrace eliminate(const RationalMatrix& matrix) {
    const std::size_t n = matrix.n();
    if (n == 0) throw Error("eliminate: empty matrix");
    EliminationTrace trace;
    trace.levels.reserve(n);
    trace.levels.push_back(matrix);

    Rational max_entry = 0;
    auto observe = [&](const RationalMatrix& level) {
        for (const auto& v : level.entries()) {
            const Rational a = abs(v);
            if (a > max_entry) max_entry = a;
            const std::size_t nb = mpz_sizeinbase(v.get_num_mpz_t(), 2);
            const std::size_t db = mpz_sizeinbase(v.get_den_mpz_t(), 2);
            if (nb > trace.max_numerator_bits) trace.max_numerator_bits = nb;
            if (db > trace.max_denominator_bits) trace.max_denominator_bits = db;
        }
    };
    observe(matrix);
    const Rational initial_max = max_entry;

    for (std::size_t k = 0; k < n; ++k) {
        const RationalMatrix& cur = trace.levels.back();
        if (cur(0, 0) == 0) throw ZeroPivot(k + 1);
        if (k + 1 == n) break;
        const std::size_t m = cur.n() - 1;
        RationalMatrix next(m);
        const Rational inv_pivot = 1 / cur(0, 0);
        for (std::size_t i = 0; i < m; ++i) {
            const Rational factor = cur(i + 1, 0) * inv_pivot;
            for (std::size_t j = 0; j < m; ++j) {
                if (factor == 0)
                    next(i, j) = cur(i + 1, j + 1);
                else
                    next(i, j) = cur(i + 1, j + 1) - factor * cur(0, j + 1);
            }
        }
        observe(next);
        trace.levels.push_back(std::move(next));
    }
    trace.max_abs_entry = max_entry;
    trace.growth = max_entry / initial_max;
    return trace;
}

namespace {

Rational constrained_max(const RationalMatrix& level, PivotStrategy strategy) {
    Rational best = 0;
    auto take = [&](const Rational& v) {
        const Rational a = abs(v);
        if (a > best) best = a;
    };
    const std::size_t m = level.n();
    switch (strategy) {
    case PivotStrategy::None: break;
    case PivotStrategy::Partial:
        for (std::size_t i = 1; i < m; ++i) take(level(i, 0));
        break;
    case PivotStrategy::Rook:
        for (std::size_t i = 1; i < m; ++i) {
            take(level(i, 0));
            take(level(0, i));
        }
        break;
    case PivotStrategy::Complete:
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (i != 0 || j != 0) take(level(i, j));
        break;
    }
    return best;
}

} // namespace

std::vector<Rational> pivot_slack(const EliminationTrace& trace, PivotStrategy strategy) {
    std::vector<Rational> slack;
    const std::size_t n = trace.n();
    if (n < 2) return slack;
    slack.reserve(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const Rational& p = trace.pivot(k);
        if (p == 0) throw ZeroPivot(k + 1);
        slack.push_back(constrained_max(trace.levels[k], strategy) / abs(p) - 1);
    }
    return slack;
}

std::vector<Rational> pivot_slack(const RationalMatrix& matrix, PivotStrategy strategy) {
    return pivot_slack(eliminate(matrix), strategy);
}

PivotCheck check_pivoted(const EliminationTrace& trace, PivotStrategy strategy) {
    PivotCheck check;
    const auto slack = pivot_slack(trace, strategy);
    for (std::size_t k = 0; k < slack.size(); ++k) {
        if (slack[k] > 0) {
            check.failing_step = k + 1;
            check.diagnostic = "not " + std::string(to_string(strategy)) + " pivoted at step " +
                               std::to_string(k + 1) + ": slack " + to_string(slack[k]) + " > 0";
            return check;
        }
    }
    check.pivoted = true;
    return check;
}

PivotCheck check_pivoted(const RationalMatrix& matrix, PivotStrategy strategy) {
    try {
        return check_pivoted(eliminate(matrix), strategy);
    } catch (const ZeroPivot& e) {
        PivotCheck check;
        check.failing_step = e.step();
        check.diagnostic = e.what();
        return check;
    }
}

bool is_pivoted(const RationalMatrix& matrix, PivotStrategy strategy) {
    return check_pivoted(matrix, strategy).pivoted;
}

PermutedMatrix permute_for_strategy(const RationalMatrix& matrix, PivotStrategy strategy) {
    const std::size_t n = matrix.n();
    std::vector<std::size_t> rows(n), cols(n);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    RationalMatrix work = matrix;

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < n; ++j) std::swap(work(a, j), work(b, j));
        std::swap(rows[a], rows[b]);
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < n; ++i) std::swap(work(i, a), work(i, b));
        std::swap(cols[a], cols[b]);
    };

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = k, pc = k;
        switch (strategy) {
        case PivotStrategy::None:
            if (work(k, k) == 0) throw ZeroPivot(k + 1);
            break;
        case PivotStrategy::Partial: {
            Rational best = 0;
            for (std::size_t i = k; i < n; ++i) {
                const Rational a = abs(work(i, k));
                if (a > best) {
                    best = a;
                    pr = i;
                }
            }
            if (best == 0) throw Singular(k + 1);
            break;
        }
        case PivotStrategy::Complete: {
            Rational best = 0;
            for (std::size_t i = k; i < n; ++i)
                for (std::size_t j = k; j < n; ++j) {
                    const Rational a = abs(work(i, j));
                    if (a > best) {
                        best = a;
                        pr = i;
                        pc = j;
                    }
                }
            if (best == 0) throw Singular(k + 1);
            break;
        }
        case PivotStrategy::Rook: {
            std::vector<Rational> row_max(n), col_max(n);
            for (std::size_t i = k; i < n; ++i)
                for (std::size_t j = k; j < n; ++j) {
                    const Rational a = abs(work(i, j));
                    if (a > row_max[i]) row_max[i] = a;
                    if (a > col_max[j]) col_max[j] = a;
                }
            bool found = false;
            for (std::size_t i = k; i < n && !found; ++i)
                for (std::size_t j = k; j < n && !found; ++j) {
                    const Rational a = abs(work(i, j));
                    if (a != 0 && a == row_max[i] && a == col_max[j]) {
                        pr = i;
                        pc = j;
                        found = true;
                    }
                }
            if (!found) throw Singular(k + 1);
            break;
        }
        }
        swap_rows(k, pr);
        swap_cols(k, pc);

        const Rational inv_pivot = 1 / work(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (work(i, k) == 0) continue;
            const Rational factor = work(i, k) * inv_pivot;
            for (std::size_t j = k + 1; j < n; ++j) work(i, j) -= factor * work(k, j);
        }
    }
    return {matrix.permuted(rows, cols), rows, cols};
}

RationalMatrix eliminate_steps(const RationalMatrix& matrix, std::size_t steps) {
    if (steps >= matrix.n()) throw Error("eliminate_steps: too many steps");
    RationalMatrix cur = matrix;
    for (std::size_t k = 0; k < steps; ++k) {
        if (cur(0, 0) == 0) throw ZeroPivot(k + 1);
        const std::size_t m = cur.n() - 1;
        RationalMatrix next(m);
        const Rational inv_pivot = 1 / cur(0, 0);
        for (std::size_t i = 0; i < m; ++i) {
            const Rational factor = cur(i + 1, 0) * inv_pivot;
            for (std::size_t j = 0; j < m; ++j)
                next(i, j) = factor == 0 ? cur(i + 1, j + 1) : Rational(cur(i + 1, j + 1) - factor * cur(0, j + 1));
        }
        cur = std::move(next);
    }
    return cur;
}

RationalMatrix reconstruct(const EliminationTrace& trace) { return trace.lower() * trace.upper(); }

Rational inverse_inf_norm(const EliminationTrace& trace) {
    const std::size_t n = trace.n();
    const RationalMatrix l = trace.lower();
    const RationalMatrix u = trace.upper();
    // Column-by-column solve of L U x = e_c; accumulate row sums of |A^{-1}|.
    std::vector<Rational> row_sums(n);
    std::vector<Rational> y(n), x(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            Rational s = (i == c) ? Rational(1) : Rational(0);
            for (std::size_t j = 0; j < i; ++j)
                if (l(i, j) != 0) s -= l(i, j) * y[j];
            y[i] = s;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            Rational s = y[ii];
            for (std::size_t j = ii + 1; j < n; ++j)
                if (u(ii, j) != 0) s -= u(ii, j) * x[j];
            x[ii] = s / u(ii, ii);
        }
        for (std::size_t i = 0; i < n; ++i) row_sums[i] += abs(x[i]);
    }
    Rational best = 0;
    for (const auto& s : row_sums)
        if (s > best) best = s;
    return best;
}

} // namespace pivotgrowth
