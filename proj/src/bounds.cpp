#include "pivotgrowth/bounds.hpp"

#include "pivotgrowth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace pivotgrowth {

namespace {

Interval iv(long v, mpfr_prec_t p) { return Interval(v, p); }
Interval iv(const Rational& v, mpfr_prec_t p) { return Interval(v, p); }

// ln(n)/2 + (1/2) sum_{k=2}^{n} ln(k)/(k-1), cached incrementally.
class WilkinsonSeries {
public:
    explicit WilkinsonSeries(mpfr_prec_t precision) : prec_(precision), partial_{iv(0L, precision)} {}

    Interval log_bound(std::size_t n) {
        while (partial_.size() < n) {
            const long k = static_cast<long>(partial_.size()) + 1;
            partial_.push_back(partial_.back() + log(iv(k, prec_)) / iv(k - 1, prec_));
        }
        if (n == 1) return iv(0L, prec_);
        const Interval half(Rational(1, 2), prec_);
        return half * (log(iv(static_cast<long>(n), prec_)) + partial_[n - 1]);
    }

    Interval bound(std::size_t n) {
        if (n == 1) return iv(1L, prec_);
        return exp(log_bound(n));
    }

private:
    mpfr_prec_t prec_;
    std::vector<Interval> partial_;  // partial_[n-1] = sum_{k=2}^{n} ln k/(k-1)
};

Rational floor_to_grid(const Rational& x, unsigned bits) {
    Rational scaled = x * pow2(static_cast<long>(bits));
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
    Rational out(f);
    out *= pow2(-static_cast<long>(bits));
    out.canonicalize();
    return out;
}

Integer binomial(const Integer& n, unsigned long k) {
    if (n < 0 || n < k) return 0;
    Integer out;
    mpz_bin_ui(out.get_mpz_t(), n.get_mpz_t(), k);
    return out;
}

// Smallest t >= 1 with beta^(t-1) >= x.
std::uint64_t digits_for(const Rational& x, unsigned beta) {
    if (x <= 1) return 1;
    const double estimate = (std::log2(mpz_get_d(x.get_num_mpz_t())) -
                             std::log2(mpz_get_d(x.get_den_mpz_t()))) /
                            std::log2(static_cast<double>(beta));
    long e = std::isfinite(estimate) ? static_cast<long>(std::floor(estimate)) - 2 : 0;
    if (e < 0) e = 0;
    if (!std::isfinite(estimate)) {
        const std::size_t bits = mpz_sizeinbase(x.get_num_mpz_t(), 2);
        e = static_cast<long>(bits / std::log2(static_cast<double>(beta))) - 2;
        if (e < 0) e = 0;
    }
    Integer power = ipow(beta, static_cast<unsigned long>(e));
    while (Rational(power) < x) {
        power *= beta;
        ++e;
    }
    while (e > 0 && Rational(Integer(power / beta)) >= x) {
        power /= beta;
        --e;
    }
    return static_cast<std::uint64_t>(e) + 1;
}

Rational prefactor(const Rational& C) {
    if (C <= 0 || C >= 1) throw Error("mantissa requirement needs 0 < C < 1");
    return (1 + C) * (4 + 5 * C) / C;
}

class MantissaEvaluator {
public:
    MantissaEvaluator(const GrowthModel& model, const Rational& C, unsigned beta, mpfr_prec_t precision)
        : model_(model), factor_(prefactor(C)), beta_(beta), prec_(precision), series_(precision) {
        if (beta < 2) throw Error("base must be at least 2");
    }

    std::uint64_t operator()(std::uint64_t n) {
        if (n == 0) throw Error("dimension must be positive");
        switch (model_.kind) {
        case GrowthModel::Kind::Linear3n: {
            const Integer s = 9 * binomial(Integer(std::to_string(n + 2)), 4);
            return digits_for(factor_ * Rational(s), beta_);
        }
        case GrowthModel::Kind::HalfSquare: {
            const Integer m(std::to_string(n));
            const Integer s4 = binomial(m + 4, 6) + 2 * binomial(m + 3, 6) + binomial(m + 2, 6);
            Rational quarter_sum(s4, 4);
            quarter_sum.canonicalize();
            return digits_for(factor_ * quarter_sum, beta_);
        }
        case GrowthModel::Kind::Wilkinson:
        case GrowthModel::Kind::Custom: break;
        }
        ensure(n);
        Interval s = iv(0L, prec_);
        for (std::uint64_t m = 1; m < n; ++m) s = s + g_[m - 1] * prefix_[n - m - 1];
        const Interval x = iv(factor_, prec_) * s;
        return digits_for(x.upper(), beta_);
    }

private:
    void ensure(std::uint64_t n) {
        while (g_.size() < n) {
            const std::size_t m = g_.size() + 1;
            Interval g = model_.kind == GrowthModel::Kind::Wilkinson ? series_.bound(m) : model_.custom(m, prec_);
            prefix_.push_back(prefix_.empty() ? g : prefix_.back() + g);
            g_.push_back(std::move(g));
        }
    }

    GrowthModel model_;
    Rational factor_;
    unsigned beta_;
    mpfr_prec_t prec_;
    WilkinsonSeries series_;
    std::vector<Interval> g_;
    std::vector<Interval> prefix_;
};

} // namespace

Interval wilkinson_bound(std::size_t n, mpfr_prec_t precision) {
    if (n == 0) throw Error("wilkinson_bound needs n >= 1");
    WilkinsonSeries series(precision);
    return series.bound(n);
}

Interval foster_rook_bound(std::size_t n, mpfr_prec_t precision) {
    if (n == 0) throw Error("foster_rook_bound needs n >= 1");
    const Interval three_halves(Rational(3, 2), precision);
    if (n == 1) return three_halves;
    const Interval ln = log(iv(static_cast<long>(n), precision));
    return three_halves * exp(Interval(Rational(3, 4), precision) * ln * ln);
}

Interval q_pochhammer(const Rational& a, const Rational& q, std::size_t terms, mpfr_prec_t precision) {
    if (abs(a) > 1) throw Error("q_pochhammer needs |a| <= 1");
    if (q < 0 || q >= 1) throw Error("q_pochhammer needs 0 <= q < 1");
    Interval product = iv(1L, precision);
    Rational x = a;
    for (std::size_t i = 0; i < terms; ++i) {
        product = product * iv(1 - x, precision);
        x *= q;
        if (x == 0) break;
    }
    return product;
}

Interval q_pochhammer_infinite(const Rational& a, const Rational& q, const Rational& tolerance,
                               mpfr_prec_t precision) {
    if (q >= 1) throw Divergent("infinite q-Pochhammer product needs q < 1");
    if (tolerance <= 0) throw Error("tolerance must be positive");
    if (a == 0 || q == 0) return q_pochhammer(a, q, 1, precision);
    // Tail after m factors: sum_{i>=m} |a| q^i = |a| q^m / (1-q).
    const Rational cap = tolerance < Rational(1, 2) ? tolerance : Rational(1, 2);
    std::size_t m = 0;
    Rational tail = abs(a) / (1 - q);
    while (tail > cap) {
        tail *= q;
        ++m;
    }
    const Interval head = q_pochhammer(a, q, m, precision);
    const Interval one = iv(1L, precision);
    if (a > 0) return head * hull(Interval(1 - tail, precision), one);
    return head * hull(one, exp(Interval(tail, precision)));
}

std::optional<Rational> LowerBoundTable::at(std::size_t n) const {
    auto it = entries.find(n);
    if (it == entries.end()) return std::nullopt;
    return it->second.value;
}

LowerBoundTable LowerBoundTable::certified_only() const {
    LowerBoundTable out;
    out.strategy = strategy;
    for (const auto& [n, e] : entries)
        if (e.source != kSourcePaper) out.entries.emplace(n, e);
    return out;
}

LowerBoundTable published_complete_table() {
    static const char* const values[] = {
        "1",      "2",      "9/4",    "4",      "4.13",   "5",      "6.05",   "8",      "8.69",
        "9.96",   "11.05",  "12.55",  "13.76",  "15.25",  "16.92",  "18.46",  "19.86",  "21.25",
        "22.85",  "24.71",  "26.21",  "28.01",  "29.72",  "31.63",  "33.67",  "34.96",  "36.88",
        "39.05",  "41.46",  "43.40",  "45.43",  "47.74",  "50.36",  "52.78",  "54.84",  "57.66",
        "59.91",  "63.18",  "64.87",  "67.52",  "70.44",  "73.49",  "77.68",  "79.25",  "82.56",
        "85.85",  "87.54",  "91.44",  "94.72",  "97.24",  "101.82", "104.61", "108.09", "111.19",
        "114.76", "118.18", "121.90", "126.23", "129.42", "134.27", "137.55", "141.83", "144.72",
        "148.05", "153.98", "157.05", "162.20", "166.89", "171.33", "174.45", "182.98", "184.91",
        "190.57", "193.28", "196.79"};
    LowerBoundTable table;
    table.strategy = PivotStrategy::Complete;
    std::size_t n = 1;
    for (const char* v : values) table.set(n++, parse_rational(v), kSourcePaper);
    table.set(100, parse_rational("331.71"), kSourcePaper);
    return table;
}

LowerBoundTable published_rook_table() {
    LowerBoundTable table;
    table.strategy = PivotStrategy::Rook;
    table.set(48, parse_rational("640.4861"), kSourcePaper);
    return table;
}

LinearExtrapolation extrapolate_linear_constant(const LowerBoundTable& table, std::size_t k,
                                                mpfr_prec_t precision) {
    if (k < 2) throw Error("extrapolation needs k >= 2");
    std::vector<std::size_t> missing;
    LinearExtrapolation out;
    out.k = k;
    bool first = true;
    for (std::size_t n = k; n < 2 * k; ++n) {
        auto lb = table.at(n);
        if (!lb) {
            missing.push_back(n);
            continue;
        }
        const Rational ratio = *lb / Rational(static_cast<unsigned long>(n));
        if (first || ratio < out.base_constant) {
            out.base_constant = ratio;
            out.argmin = n;
            first = false;
        }
    }
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "lower bound table lacks n =";
        for (auto n : missing) msg << ' ' << n;
        throw MissingEntries(msg.str());
    }
    const Rational inv_k(1, static_cast<unsigned long>(k));
    out.pochhammer = q_pochhammer_infinite(inv_k, Rational(1, 2), Rational(1, 1000000000000UL), precision);
    const Interval c = Interval(out.base_constant, precision) * out.pochhammer / Interval(1 - inv_k, precision);
    out.constant = floor_to_grid(c.lower(), 64);
    return out;
}

LimsupBound doubling_limsup(const LowerBoundTable& table) {
    if (table.empty()) throw Error("doubling_limsup needs a nonempty table");
    LimsupBound out;
    bool first = true;
    for (const auto& [n, e] : table.entries) {
        const Rational ratio = e.value / Rational(static_cast<unsigned long>(n));
        if (first || ratio > out.ratio) {
            out.ratio = ratio;
            out.n = n;
            first = false;
        }
    }
    return out;
}

PowerLawBound rook_exponent(const LowerBoundTable& table, mpfr_prec_t precision) {
    if (table.empty()) throw Error("rook_exponent needs a nonempty table");
    PowerLawBound best;
    best.k = 1;
    best.exponent = 0;
    best.constant = 1;
    bool have = false;
    for (const auto& [k, e] : table.entries) {
        if (k < 2 || e.value < 1) continue;
        PowerLawBound cand;
        cand.k = k;
        // Exact when lb(k) is an integer power of k.
        bool exact = false;
        if (e.value.get_den() == 1) {
            Integer power = 1;
            for (unsigned long d = 0; power <= e.value.get_num(); ++d, power *= static_cast<unsigned long>(k))
                if (power == e.value.get_num()) {
                    cand.exponent = Rational(static_cast<long>(d));
                    cand.constant = Rational(Integer(1), ipow(static_cast<unsigned long>(k), d));
                    exact = true;
                    break;
                }
        }
        if (!exact) {
            const Interval lnk = log(Interval(static_cast<long>(k), precision));
            const Interval alpha = log(Interval(e.value, precision)) / lnk;
            cand.exponent = floor_to_grid(alpha.lower(), 40);
            const Interval c = exp(-(Interval(cand.exponent, precision) * lnk));
            cand.constant = floor_to_grid(c.lower(), 64);
        }
        if (!have || cand.exponent > best.exponent ||
            (cand.exponent == best.exponent && cand.constant > best.constant)) {
            best = cand;
            have = true;
        }
    }
    return best;
}

std::string GrowthModel::name() const {
    switch (kind) {
    case Kind::Linear3n: return "3n";
    case Kind::HalfSquare: return "n^2/2";
    case Kind::Wilkinson: return "wilkinson";
    case Kind::Custom: return "custom";
    }
    return "unknown";
}

std::uint64_t mantissa_requirement(std::uint64_t n, const GrowthModel& model, const Rational& C,
                                   unsigned beta, mpfr_prec_t precision) {
    MantissaEvaluator eval(model, C, beta, precision);
    return eval(n);
}

std::uint64_t max_n_for_mantissa(std::uint64_t t, const GrowthModel& model, const Rational& C,
                                 unsigned beta, mpfr_prec_t precision) {
    MantissaEvaluator eval(model, C, beta, precision);
    if (eval(1) > t) return 0;
    std::uint64_t lo = 1, hi = 2;
    while (eval(hi) <= t) {
        lo = hi;
        hi *= 2;
    }
    // eval(lo) <= t < eval(hi)
    while (hi - lo > 1) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (eval(mid) <= t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace {

struct Step {
    Rational value;
    enum class Via { Table, Border, Double, Product } via = Via::Table;
    std::size_t a = 0, b = 0;
};

std::string describe(const std::vector<Step>& f, std::size_t n) {
    const Step& s = f[n];
    switch (s.via) {
    case Step::Via::Table: return "lb(" + std::to_string(n) + ")";
    case Step::Via::Border: {
        std::size_t m = n;
        while (f[m].via == Step::Via::Border) --m;
        return describe(f, m) + " bordered to " + std::to_string(n);
    }
    case Step::Via::Double: return "2 * [" + describe(f, s.a) + "]";
    case Step::Via::Product: return "[" + describe(f, s.a) + "] * [" + describe(f, s.b) + "]";
    }
    return "";
}

} // namespace

BoundReport bound_report(std::size_t n, PivotStrategy strategy, const LowerBoundTable& table,
                         mpfr_prec_t precision) {
    if (n == 0) throw Error("bound_report needs n >= 1");
    BoundReport r;
    r.n = n;
    r.strategy = strategy;
    r.wilkinson_upper = wilkinson_bound(n, precision);
    r.foster_upper = foster_rook_bound(n, precision);
    if (auto lb = table.at(n)) {
        r.best_known_lower = *lb;
        r.best_known_source = table.entries.at(n).source;
    }

    std::vector<Step> f(n + 1);
    f[1].value = 1;
    for (std::size_t m = 1; m <= n; ++m) {
        Step best;
        best.value = m == 1 ? Rational(1) : f[m - 1].value;
        best.via = m == 1 ? Step::Via::Table : Step::Via::Border;
        if (auto lb = table.at(m); lb && *lb > best.value) {
            best.value = *lb;
            best.via = Step::Via::Table;
        }
        if (strategy == PivotStrategy::Complete && m % 2 == 0 && 2 * f[m / 2].value > best.value) {
            best.value = 2 * f[m / 2].value;
            best.via = Step::Via::Double;
            best.a = m / 2;
        }
        if (strategy == PivotStrategy::Rook) {
            for (std::size_t d = 2; d * d <= m; ++d)
                if (m % d == 0 && f[d].value * f[m / d].value > best.value) {
                    best.value = f[d].value * f[m / d].value;
                    best.via = Step::Via::Product;
                    best.a = d;
                    best.b = m / d;
                }
        }
        f[m] = std::move(best);
    }
    r.extrapolated_lower = f[n].value;
    r.derivation = describe(f, n);
    return r;
}

} // namespace pivotgrowth
