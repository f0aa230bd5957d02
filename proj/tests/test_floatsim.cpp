#include "support.hpp"

#include "pivotgrowth/constructions.hpp"
#include "pivotgrowth/floatsim.hpp"

#include <doctest.h>

using namespace pivotgrowth;

namespace {

// Nearest value m * beta^e with beta^(t-1) <= m < beta^t, by enumeration.
Rational round_oracle(const Rational& x, unsigned beta, unsigned t) {
    if (x == 0) return 0;
    const Rational ax = abs(x);
    const long lo = ipow(beta, t - 1).get_si(), hi = ipow(beta, t).get_si();
    Rational best = -1;
    long best_m = 0;
    for (long e = -12; e <= 12; ++e) {
        const Rational scale = e >= 0 ? Rational(ipow(beta, e)) : Rational(Integer(1), ipow(beta, -e));
        for (long m = lo; m < hi; ++m) {
            const Rational v = Rational(m) * scale;
            const Rational d = abs(v - ax), bd = abs(best - ax);
            if (best < 0 || d < bd || (d == bd && m % 2 == 0 && best_m % 2 != 0)) {
                best = v;
                best_m = m;
            }
        }
    }
    return x < 0 ? Rational(-best) : best;
}

RationalMatrix gaussian_matrix(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    RationalMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = from_double(g(rng));
    return a;
}

} // namespace

TEST_CASE("rounding examples") {
    const FloatFormat b3{2, 3};
    CHECK(round_to(Rational(5, 4), b3) == Rational(5, 4));
    CHECK(round_to(Rational(9, 8), b3) == 1);
    CHECK(round_to(Rational(-9, 8), b3) == -1);
    CHECK(round_to(Rational(11, 8), b3) == Rational(3, 2));  // tie between 5/4 and 3/2, even mantissa 6
    CHECK(round_to(parse_rational("0.1149"), FloatFormat{10, 2}) == Rational(11, 100));
    CHECK(round_to(0, b3) == 0);
    CHECK(FloatFormat{2, 53}.unit_roundoff() == pow2(-53));
}

TEST_CASE("rounding agrees with enumeration of representable neighbours") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> num(-5000, 5000), den(1, 700);
    for (unsigned beta : {2u, 3u, 10u})
        for (unsigned t : {1u, 2u, 3u})
            for (int trial = 0; trial < 40; ++trial) {
                Rational x(num(rng), den(rng));
                x.canonicalize();
                const FloatFormat f{beta, t};
                const Rational r = round_to(x, f);
                CHECK(r == round_oracle(x, beta, t));
                CHECK(abs(r - x) <= f.unit_roundoff() * abs(x));
                CHECK(round_to(r, f) == r);
            }
}

TEST_CASE("rounding-free runs match exact elimination") {
    const auto h = sylvester_hadamard(2);
    const auto t = float_eliminate(h, FloatFormat{2, 53}, PivotStrategy::Complete);
    const auto exact = eliminate(h);
    for (std::size_t k = 0; k < 4; ++k) CHECK(t.levels[k] == exact.levels[k]);
    CHECK(t.growth == 4);
    CHECK(shadow_matrix(t) == h);

    const auto w = float_eliminate(wilkinson_pp_matrix(5), FloatFormat{2, 53}, PivotStrategy::Partial);
    CHECK(w.growth == 16);
}

TEST_CASE("two by two shadow formula") {
    const RationalMatrix a{{3, 1}, {1, 3}};
    const FloatFormat f{2, 3};
    const auto t = float_eliminate(a, f, PivotStrategy::Partial);
    const auto b = shadow_matrix(t);
    CHECK(b(1, 1) == t.at(1, 1, 1) + t.at(0, 1, 0) * t.at(0, 0, 1) / t.at(0, 0, 0));
    CHECK(b(0, 0) == t.at(0, 0, 0));
}

TEST_CASE("recorded perturbations replay the model and are bounded by u") {
    std::mt19937_64 rng(31);
    for (auto s : {PivotStrategy::Partial, PivotStrategy::Complete})
        for (int trial = 0; trial < 8; ++trial) {
            const auto a = gaussian_matrix(6, rng);
            const FloatFormat f{2, 10};
            const Rational u = f.unit_roundoff();
            const auto t = float_eliminate(a, f, s);
            CHECK(replay_consistent(t));
            // Independent replay of s = (a_ik/a_kk)(1+phi), a' = [a_ij - s a_kj (1+theta)](1+psi).
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 6; ++j) {
                    const Rational e = t.initial_error(i, j);
                    CHECK(abs(e) <= u);
                    CHECK(t.levels[0](i, j) == t.permuted_input(i, j) * (1 + e));
                }
            for (std::size_t k = 0; k + 1 < 6; ++k)
                for (std::size_t i = k + 1; i < 6; ++i) {
                    const Rational phi = t.multiplier_error(i, k);
                    CHECK(abs(phi) <= u);
                    CHECK(t.multipliers(i, k) == t.at(k, i, k) / t.at(k, k, k) * (1 + phi));
                    if (s == PivotStrategy::Partial) CHECK(abs(t.multipliers(i, k)) <= 1);
                    for (std::size_t j = k + 1; j < 6; ++j) {
                        const Rational th = t.product_error[k](i - k - 1, j - k - 1);
                        const Rational ps = t.update_error[k](i - k - 1, j - k - 1);
                        CHECK(abs(th) <= u);
                        CHECK(abs(ps) <= u);
                        CHECK(t.at(k + 1, i, j) ==
                              (t.at(k, i, j) - t.multipliers(i, k) * t.at(k, k, j) * (1 + th)) * (1 + ps));
                    }
                }
            for (const auto& level : t.levels)
                for (const auto& v : level.entries()) CHECK(round_to(v, f) == v);
        }
}

TEST_CASE("shadow matrix reproduces pivot rows and columns and obeys the deviation bound") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = gaussian_matrix(6, rng);
        const FloatFormat f{2, 10};
        const Rational u = f.unit_roundoff();
        const auto t = float_eliminate(a, f, PivotStrategy::Partial);
        const auto b = shadow_matrix(t);
        const auto exact = eliminate(b);
        for (std::size_t k = 0; k < 6; ++k)
            for (std::size_t x = k; x < 6; ++x) {
                CHECK(exact.at(k, k, x) == t.at(k, k, x));
                CHECK(exact.at(k, x, k) == t.at(k, x, k));
            }
        for (std::size_t k = 0; k < 6; ++k)
            for (std::size_t i = k; i < 6; ++i)
                for (std::size_t j = k; j < 6; ++j) {
                    Rational bound = 0;
                    for (std::size_t l = k; l < std::min(i, j); ++l)
                        bound += u * (abs(t.at(l, i, j)) + abs(t.at(l, l, j)) * (3 + u));
                    CHECK(abs(exact.at(k, i, j) - t.at(k, i, j)) <= bound);
                }
        CHECK(check_shadow_deviation(t, b).ok);
    }
}

TEST_CASE("float versus exact growth") {
    const auto h = sylvester_hadamard(3);
    const auto r = float_vs_exact_report(h, FloatFormat{2, 53}, PivotStrategy::Complete);
    CHECK(r.ratio == 1);
    CHECK(r.within);

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = permute_for_strategy(gaussian_matrix(15, rng), PivotStrategy::Complete).matrix;
        const auto c53 = float_vs_exact_report(a, FloatFormat{2, 53}, PivotStrategy::Complete);
        CHECK(c53.ratio <= Rational(3, 2));
        CHECK(c53.within_envelope);
        const auto c8 = float_vs_exact_report(a, FloatFormat{2, 8}, PivotStrategy::Complete);
        CHECK(c8.within_envelope);
    }
}

TEST_CASE("envelope holds with coarse rounding") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = gaussian_matrix(7, rng);
        const FloatFormat f{2, 3};
        const auto t = float_eliminate(a, f, PivotStrategy::Partial);
        const Rational u = f.unit_roundoff();
        Rational env = 1;
        for (int k = 0; k < 6; ++k) env *= 1 + (1 + u) * (1 + u);
        CHECK(t.growth <= env);
    }
}

TEST_CASE("pivot ties are recorded") {
    const RationalMatrix a{{1, 1}, {1, -1}};
    const auto t = float_eliminate(a, FloatFormat{2, 53}, PivotStrategy::Complete);
    CHECK(t.tie_steps == std::vector<std::size_t>{1});
    CHECK(t.rows == std::vector<std::size_t>{0, 1});
}
