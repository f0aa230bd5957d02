#include "support.hpp"

#include "pivotgrowth/bounds.hpp"

#include <doctest.h>

#include <cmath>

using namespace pivotgrowth;

namespace {

double wilkinson_double(std::size_t n) {
    double s = 0.5 * std::log(double(n));
    for (std::size_t k = 2; k <= n; ++k) s += 0.5 * std::log(double(k)) / double(k - 1);
    return std::exp(s);
}

// Smallest t with 2^(t-1) >= X, X computed exactly from the double sum.
std::uint64_t mantissa_oracle(std::uint64_t n, bool linear) {
    auto g = [&](std::uint64_t k) { return linear ? Rational(3 * k) : Rational(k * k, 2); };
    Rational sum = 0;
    for (std::uint64_t m = 1; m < n; ++m) {
        Rational inner = 0;
        for (std::uint64_t l = 1; l <= n - m; ++l) inner += g(l);
        sum += g(m) * inner;
    }
    const Rational c(1, 2);
    const Rational x = (1 + c) * (4 + 5 * c) / c * sum;
    std::uint64_t t = 1;
    Rational p = 1;
    while (p < x) {
        p *= 2;
        ++t;
    }
    return t;
}

} // namespace

TEST_CASE("complete pivoting upper bound") {
    CHECK(wilkinson_bound(1).contains(1));
    CHECK(wilkinson_bound(2).contains(2));
    CHECK(wilkinson_bound(100).lower() >= parse_rational("331.71"));
    for (std::size_t n : {3u, 10u, 57u}) {
        const Interval w = wilkinson_bound(n);
        CHECK(w.lower_double() <= wilkinson_double(n) * (1 + 1e-12));
        CHECK(w.upper_double() >= wilkinson_double(n) * (1 - 1e-12));
    }
    // The closed-form majorant 2 sqrt(n) n^(ln n / 4) dominates the product form.
    for (std::size_t n : {5u, 20u, 200u})
        CHECK(wilkinson_bound(n).upper_double() <= 2 * std::sqrt(double(n)) * std::pow(double(n), std::log(double(n)) / 4));
}

TEST_CASE("rook pivoting upper bound") {
    CHECK(foster_rook_bound(1).contains(Rational(3, 2)));
    CHECK(foster_rook_bound(48).lower() >= parse_rational("640.4861"));
    const double direct = 1.5 * std::pow(4.0, 3 * std::log(4.0) / 4);
    CHECK(foster_rook_bound(4).upper_double() == doctest::Approx(direct).epsilon(1e-12));
    CHECK(foster_rook_bound(4).upper_double() == doctest::Approx(6.34).epsilon(0.01));
}

TEST_CASE("upper bounds are nondecreasing") {
    for (std::size_t n = 1; n < 60; ++n) {
        CHECK(wilkinson_bound(n).lower() <= wilkinson_bound(n + 1).upper());
        CHECK(foster_rook_bound(n).lower() <= foster_rook_bound(n + 1).upper());
    }
}

TEST_CASE("q-Pochhammer products") {
    CHECK(q_pochhammer_infinite(0, Rational(1, 2)).contains(1));
    const Interval half = q_pochhammer_infinite(Rational(1, 2), Rational(1, 2));
    double direct = 1;
    for (int i = 0; i < 80; ++i) direct *= 1 - std::ldexp(0.5, -i);
    CHECK(half.lower_double() <= direct);
    CHECK(half.upper_double() >= direct - 1e-11);
    CHECK(half.mid() == doctest::Approx(0.288788).epsilon(1e-6));

    // Finite truncations decrease with the number of terms and stay above the limit.
    const Rational a(1, 14), q(1, 2);
    const Interval inf = q_pochhammer_infinite(a, q);
    Rational prev = 2;
    for (std::size_t m = 0; m < 30; ++m) {
        const Interval p = q_pochhammer(a, q, m);
        CHECK(p.upper() <= prev);
        CHECK(inf.lower() <= p.upper());
        prev = p.upper();
    }
    CHECK(q_pochhammer(a, q, 0).contains(1));
    CHECK(q_pochhammer(Rational(1, 3), Rational(1, 5), 2).contains(Rational(2, 3) * Rational(14, 15)));
    CHECK_THROWS_AS(q_pochhammer_infinite(a, 1), Divergent);
}

TEST_CASE("linear extrapolation constant") {
    const auto published = published_complete_table();
    const auto ext = extrapolate_linear_constant(published, 14);
    CHECK(ext.constant >= parse_rational("1.0045"));
    CHECK(ext.constant <= ext.base_constant);

    // lb(n) = n on [k, 2k) gives C = 1 and C' = (1/k;1/2)_inf / (1 - 1/k) < 1.
    LowerBoundTable unit;
    for (std::size_t n = 6; n < 12; ++n) unit.set(n, Rational(n));
    const auto u = extrapolate_linear_constant(unit, 6);
    CHECK(u.base_constant == 1);
    CHECK(u.constant < 1);
    const Interval expected = q_pochhammer_infinite(Rational(1, 6), Rational(1, 2)) / Interval(Rational(5, 6), 128);
    CHECK(u.constant <= expected.upper());
    CHECK(u.constant >= expected.lower() - Rational(1, 1000000000000UL));

    LowerBoundTable small;
    small.set(2, 2);
    small.set(3, Rational(9, 4));
    const auto s = extrapolate_linear_constant(small, 2);
    CHECK(s.base_constant == Rational(3, 4));
    const double target = 0.75 * 0.288788095 * 2;
    CHECK(double(s.constant.get_d()) == doctest::Approx(target).epsilon(1e-6));

    LowerBoundTable gap;
    gap.set(14, 15);
    try {
        extrapolate_linear_constant(gap, 14);
        FAIL("expected MissingEntries");
    } catch (const MissingEntries& e) {
        CHECK(std::string(e.what()).find("15") != std::string::npos);
        CHECK(std::string(e.what()).find("27") != std::string::npos);
    }
}

TEST_CASE("doubling limsup") {
    const auto published = published_complete_table();
    const auto l = doubling_limsup(published);
    CHECK(l.ratio == parse_rational("3.3171"));
    CHECK(l.n == 100);
    LowerBoundTable four;
    four.set(4, 4);
    CHECK(doubling_limsup(four).ratio == 1);
    LowerBoundTable one;
    one.set(1, 1);
    CHECK(doubling_limsup(one).ratio == 1);
    CHECK_THROWS(doubling_limsup(LowerBoundTable{}));
}

TEST_CASE("rook exponent") {
    const auto r = rook_exponent(published_rook_table());
    CHECK(r.k == 48);
    CHECK(r.exponent >= parse_rational("1.669"));
    CHECK(r.constant >= Rational(1, 641));
    // constant * n^exponent dominates n^1.669 / 641 for a spread of n.
    for (double n : {2.0, 10.0, 48.0, 1000.0, 1e6})
        CHECK(r.constant.get_d() * std::pow(n, r.exponent.get_d()) >= std::pow(n, 1.669) / 641);

    LowerBoundTable two;
    two.strategy = PivotStrategy::Rook;
    two.set(2, 2);
    CHECK(rook_exponent(two).exponent == 1);
    CHECK(rook_exponent(two).constant == Rational(1, 2));
    LowerBoundTable four;
    four.strategy = PivotStrategy::Rook;
    four.set(4, 4);
    CHECK(rook_exponent(four).exponent == 1);
    CHECK(rook_exponent(four).constant == Rational(1, 4));
}

TEST_CASE("mantissa requirement agrees with a direct double sum") {
    for (std::uint64_t n : {2u, 3u, 7u, 20u, 64u}) {
        CHECK(mantissa_requirement(n, GrowthModel::linear(), Rational(1, 2)) == mantissa_oracle(n, true));
        CHECK(mantissa_requirement(n, GrowthModel::half_square(), Rational(1, 2)) == mantissa_oracle(n, false));
    }
}

TEST_CASE("mantissa requirement and its inverse are consistent") {
    for (auto model : {GrowthModel::linear(), GrowthModel::half_square(), GrowthModel::wilkinson()})
        for (std::uint64_t t : {20u, 30u, 40u}) {
            const std::uint64_t n = max_n_for_mantissa(t, model, Rational(1, 2));
            CHECK(mantissa_requirement(n, model, Rational(1, 2)) <= t);
            CHECK(mantissa_requirement(n + 1, model, Rational(1, 2)) > t);
        }
}

TEST_CASE("mantissa table entries at t = 52") {
    CHECK(max_n_for_mantissa(52, GrowthModel::linear(), Rational(1, 2)) == 4188);
    CHECK(max_n_for_mantissa(52, GrowthModel::half_square(), Rational(1, 2)) == 660);
    CHECK(max_n_for_mantissa(52, GrowthModel::wilkinson(), Rational(1, 2)) == 554);
}

TEST_CASE("bound report combines the pieces") {
    const auto published = published_complete_table();
    const auto r = bound_report(20, PivotStrategy::Complete, published);
    REQUIRE(r.best_known_lower);
    CHECK(*r.best_known_lower == parse_rational("24.71"));
    CHECK(r.extrapolated_lower <= r.wilkinson_upper.upper());

    // Without data at n = 8, doubling H_2 (n = 4) gives 8.
    LowerBoundTable t;
    t.set(4, 4);
    const auto d = bound_report(8, PivotStrategy::Complete, t);
    CHECK(d.extrapolated_lower >= 8);
    CHECK_FALSE(d.derivation.empty());

    LowerBoundTable rook;
    rook.strategy = PivotStrategy::Rook;
    rook.set(3, 3);
    const auto rr = bound_report(9, PivotStrategy::Rook, rook);
    CHECK(rr.extrapolated_lower >= 9);
    CHECK(rr.extrapolated_lower <= rr.foster_upper.upper());
}

TEST_CASE("published tables keep their provenance") {
    const auto published = published_complete_table();
    CHECK(published.entries.size() == 76);
    CHECK(*published.at(3) == Rational(9, 4));
    CHECK(published.entries.at(100).source == kSourcePaper);
    CHECK(published.certified_only().empty());
}
