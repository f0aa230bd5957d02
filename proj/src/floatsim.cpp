#include "pivotgrowth/floatsim.hpp"

#include "pivotgrowth/errors.hpp"

#include <numeric>

namespace pivotgrowth {

Rational FloatFormat::unit_roundoff() const {
    return Rational(Integer(1), 2 * ipow(beta, t - 1));
}

Rational round_to(const Rational& x, const FloatFormat& fmt) {
    if (fmt.beta < 2 || fmt.t < 1) throw Error("invalid float format");
    if (x == 0) return 0;
    const Rational a = abs(x);
    const Integer beta(fmt.beta);
    // e with beta^(e-1) <= a < beta^e
    long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), fmt.beta)) -
             static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), fmt.beta));
    auto power = [&](long p) {
        return p >= 0 ? Rational(ipow(beta, static_cast<unsigned long>(p)))
                      : Rational(Integer(1), ipow(beta, static_cast<unsigned long>(-p)));
    };
    while (power(e - 1) > a) --e;
    while (power(e) <= a) ++e;
    const long shift = static_cast<long>(fmt.t) - e;
    const Rational scaled = a * power(shift);
    Integer q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    const Integer twice = 2 * r;
    const int cmp = mpz_cmp(twice.get_mpz_t(), scaled.get_den_mpz_t());
    if (cmp > 0 || (cmp == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
    Rational out = Rational(q) * power(-shift);
    out.canonicalize();
    return x < 0 ? Rational(-out) : out;
}

namespace {

Rational relative_error(const Rational& rounded, const Rational& exact) {
    return exact == 0 ? Rational(0) : Rational(rounded / exact - 1);
}

} // namespace

FloatTrace float_eliminate(const RationalMatrix& matrix, const FloatFormat& fmt, PivotStrategy strategy) {
    const std::size_t n = matrix.n();
    if (n == 0) throw Error("float_eliminate: empty matrix");
    FloatTrace tr;
    tr.format = fmt;
    tr.strategy = strategy;
    tr.rows.resize(n);
    tr.cols.resize(n);
    std::iota(tr.rows.begin(), tr.rows.end(), 0);
    std::iota(tr.cols.begin(), tr.cols.end(), 0);

    // Working copy in global coordinates: rounded input, then updated in place.
    RationalMatrix work(n);
    RationalMatrix input = matrix;
    tr.initial_error = RationalMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) work(i, j) = round_to(matrix(i, j), fmt);

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(work(a, j), work(b, j));
            std::swap(input(a, j), input(b, j));
        }
        std::swap(tr.rows[a], tr.rows[b]);
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < n; ++i) {
            std::swap(work(i, a), work(i, b));
            std::swap(input(i, a), input(i, b));
        }
        std::swap(tr.cols[a], tr.cols[b]);
    };

    // Pass 1 decides the order from the rounded values.
    {
        RationalMatrix w = work;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t pr = k, pc = k;
            Rational best = -1;
            bool tie = false;
            auto consider = [&](std::size_t i, std::size_t j) {
                const Rational a = abs(w(i, j));
                if (a > best) {
                    best = a;
                    pr = i;
                    pc = j;
                    tie = false;
                } else if (a == best && a != 0) {
                    tie = true;
                }
            };
            switch (strategy) {
            case PivotStrategy::None: best = abs(w(k, k)); break;
            case PivotStrategy::Partial:
                for (std::size_t i = k; i < n; ++i) consider(i, k);
                break;
            case PivotStrategy::Complete:
                for (std::size_t i = k; i < n; ++i)
                    for (std::size_t j = k; j < n; ++j) consider(i, j);
                break;
            case PivotStrategy::Rook: {
                std::vector<Rational> rmax(n), cmax(n);
                for (std::size_t i = k; i < n; ++i)
                    for (std::size_t j = k; j < n; ++j) {
                        const Rational a = abs(w(i, j));
                        if (a > rmax[i]) rmax[i] = a;
                        if (a > cmax[j]) cmax[j] = a;
                    }
                bool found = false;
                for (std::size_t i = k; i < n; ++i)
                    for (std::size_t j = k; j < n; ++j) {
                        const Rational a = abs(w(i, j));
                        if (a != 0 && a == rmax[i] && a == cmax[j]) {
                            if (!found) {
                                pr = i;
                                pc = j;
                                best = a;
                                found = true;
                            } else {
                                tie = true;
                            }
                        }
                    }
                if (!found) best = 0;
                break;
            }
            }
            if (best == 0) {
                if (strategy == PivotStrategy::None) throw ZeroPivot(k + 1);
                throw Singular(k + 1);
            }
            if (tie) tr.tie_steps.push_back(k + 1);
            if (pr != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(w(pr, j), w(k, j));
                swap_rows(k, pr);
            }
            if (pc != k) {
                for (std::size_t i = 0; i < n; ++i) std::swap(w(i, pc), w(i, k));
                swap_cols(k, pc);
            }
            for (std::size_t i = k + 1; i < n; ++i) {
                const Rational s = round_to(w(i, k) / w(k, k), fmt);
                for (std::size_t j = k + 1; j < n; ++j)
                    w(i, j) = round_to(w(i, j) - round_to(s * w(k, j), fmt), fmt);
            }
        }
    }

    // Pass 2: no-pivot run on the reordered matrix, recording every rounding.
    tr.permuted_input = input;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) tr.initial_error(i, j) = relative_error(work(i, j), input(i, j));
    tr.multipliers = RationalMatrix(n);
    tr.multiplier_error = RationalMatrix(n);
    tr.levels.push_back(work);
    Rational max_initial = work.max_abs(), max_all = max_initial;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const RationalMatrix& cur = tr.levels.back();
        if (cur(0, 0) == 0) throw ZeroPivot(k + 1);
        const std::size_t m = cur.n() - 1;
        RationalMatrix next(m), theta(m), phi(m);
        for (std::size_t i = 0; i < m; ++i) {
            const Rational ratio = cur(i + 1, 0) / cur(0, 0);
            const Rational s = round_to(ratio, fmt);
            tr.multipliers(k + 1 + i, k) = s;
            tr.multiplier_error(k + 1 + i, k) = relative_error(s, ratio);
            for (std::size_t j = 0; j < m; ++j) {
                const Rational exact_prod = s * cur(0, j + 1);
                const Rational prod = round_to(exact_prod, fmt);
                const Rational exact_diff = cur(i + 1, j + 1) - prod;
                next(i, j) = round_to(exact_diff, fmt);
                theta(i, j) = relative_error(prod, exact_prod);
                phi(i, j) = relative_error(next(i, j), exact_diff);
                if (abs(next(i, j)) > max_all) max_all = abs(next(i, j));
            }
        }
        tr.product_error.push_back(std::move(theta));
        tr.update_error.push_back(std::move(phi));
        tr.levels.push_back(std::move(next));
    }
    if (tr.levels.back()(0, 0) == 0) throw ZeroPivot(n);
    tr.growth = max_all / max_initial;
    return tr;
}

RationalMatrix shadow_matrix(const FloatTrace& trace) {
    const std::size_t n = trace.n();
    RationalMatrix b = trace.levels.back();
    for (std::size_t k = n - 1; k-- > 0;) {
        const RationalMatrix& a = trace.levels[k];
        const std::size_t m = a.n();
        RationalMatrix out(m);
        out(0, 0) = a(0, 0);
        for (std::size_t t = 1; t < m; ++t) {
            out(0, t) = a(0, t);
            out(t, 0) = a(t, 0);
        }
        for (std::size_t i = 1; i < m; ++i)
            for (std::size_t j = 1; j < m; ++j) out(i, j) = b(i - 1, j - 1) + a(i, 0) * a(0, j) / a(0, 0);
        b = std::move(out);
    }
    return b;
}

DeviationCheck check_shadow_deviation(const FloatTrace& trace, const RationalMatrix& shadow) {
    const EliminationTrace exact = eliminate(shadow);
    const Rational u = trace.format.unit_roundoff();
    const std::size_t n = trace.n();
    DeviationCheck out;
    out.worst_ratio = 0;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                const Rational dev = abs(trace.at(k, i, j) - exact.at(k, i, j));
                Rational bound = 0;
                for (std::size_t l = k; l < std::min(i, j); ++l)
                    bound += abs(trace.at(l, i, j)) + abs(trace.at(l, l, j)) * (3 + u);
                bound *= u;
                if (dev > bound) {
                    if (out.ok) {
                        out.ok = false;
                        out.k = k + 1;
                        out.i = i + 1;
                        out.j = j + 1;
                    }
                }
                if (bound > 0 && dev / bound > out.worst_ratio) out.worst_ratio = dev / bound;
            }
    return out;
}

bool replay_consistent(const FloatTrace& trace) {
    const Rational u = trace.format.unit_roundoff();
    auto small = [&](const Rational& e) { return abs(e) <= u; };
    const std::size_t n = trace.n();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!small(trace.initial_error(i, j))) return false;
            const Rational& a = trace.permuted_input(i, j);
            if (a * (1 + trace.initial_error(i, j)) != trace.levels[0](i, j)) return false;
            if (round_to(trace.levels[0](i, j), trace.format) != trace.levels[0](i, j)) return false;
        }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const RationalMatrix& cur = trace.levels[k];
        const RationalMatrix& next = trace.levels[k + 1];
        for (std::size_t i = k + 1; i < n; ++i) {
            const Rational s = trace.multipliers(i, k);
            const Rational phi_s = trace.multiplier_error(i, k);
            if (!small(phi_s) || cur(i - k, 0) / cur(0, 0) * (1 + phi_s) != s) return false;
            for (std::size_t j = k + 1; j < n; ++j) {
                const Rational& theta = trace.product_error[k](i - k - 1, j - k - 1);
                const Rational& phi = trace.update_error[k](i - k - 1, j - k - 1);
                if (!small(theta) || !small(phi)) return false;
                const Rational v = (cur(i - k, j - k) - s * cur(0, j - k) * (1 + theta)) * (1 + phi);
                if (v != next(i - k - 1, j - k - 1)) return false;
                if (round_to(v, trace.format) != v) return false;
            }
        }
    }
    return true;
}

FloatComparison float_vs_exact_report(const RationalMatrix& matrix, const FloatFormat& fmt,
                                      PivotStrategy strategy, const Rational& C) {
    FloatComparison out;
    out.exact_growth = eliminate(matrix).growth;
    const FloatTrace tr = float_eliminate(matrix, fmt, strategy);
    out.float_growth = tr.growth;
    out.ratio = out.float_growth / out.exact_growth;
    out.within = out.ratio <= 1 + C;
    const Rational u = fmt.unit_roundoff();
    const Rational base = 1 + (1 + u) * (1 + u);
    Rational env = 1;
    for (std::size_t k = 1; k < matrix.n(); ++k) env *= base;
    out.envelope_bound = env;
    out.within_envelope = out.float_growth <= env;
    out.tie_steps = tr.tie_steps;
    return out;
}

} // namespace pivotgrowth
