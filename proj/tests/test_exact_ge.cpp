#include "support.hpp"

#include "pivotgrowth/constructions.hpp"
#include "pivotgrowth/io.hpp"

#include <doctest.h>

using namespace pivotgrowth;
using oracle::Q;

TEST_CASE("two by two example has pivots 1, -2 and growth 2") {
    const RationalMatrix a{{1, 1}, {1, -1}};
    const auto t = eliminate(a);
    CHECK(t.pivots() == std::vector<Rational>{1, -2});
    CHECK(t.growth == 2);
}

TEST_CASE("identity has unit pivots and growth 1") {
    const auto t = eliminate(RationalMatrix::identity(5));
    for (const auto& p : t.pivots()) CHECK(p == 1);
    CHECK(t.growth == 1);
}

TEST_CASE("order four Hadamard: pivot magnitudes 1,2,2,4 and growth 4") {
    const auto t = eliminate(sylvester_hadamard(2));
    const std::vector<Rational> expected{1, 2, 2, 4};
    for (std::size_t k = 0; k < 4; ++k) CHECK(abs(t.pivot(k)) == expected[k]);
    CHECK(t.growth == 4);
}

TEST_CASE("zero leading pivot is reported with its step") {
    const RationalMatrix a{{1, 2, 3}, {2, 4, 5}, {1, 1, 1}};
    try {
        eliminate(a);
        FAIL("expected ZeroPivot");
    } catch (const ZeroPivot& e) {
        CHECK(e.step() == 2);
    }
}

TEST_CASE("iterates agree with the determinant-ratio oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto dense = oracle::random_rational(2 + trial % 5, rng);
        const RationalMatrix a = support::to_matrix(dense);
        EliminationTrace t;
        try {
            t = eliminate(a);
        } catch (const ZeroPivot&) {
            continue;
        }
        const auto levels = oracle::pyramid(dense);
        for (std::size_t k = 0; k < a.n(); ++k)
            for (std::size_t i = k; i < a.n(); ++i)
                for (std::size_t j = k; j < a.n(); ++j) REQUIRE(t.at(k, i, j) == levels[k][i - k][j - k]);
        CHECK(t.growth == oracle::growth(dense));
    }
}

TEST_CASE("exact recurrence holds at every level") {
    std::mt19937_64 rng(5);
    const auto a = support::random_pivoted(7, PivotStrategy::Partial, rng);
    const auto t = eliminate(a);
    for (std::size_t k = 0; k + 1 < a.n(); ++k)
        for (std::size_t i = k + 1; i < a.n(); ++i)
            for (std::size_t j = k + 1; j < a.n(); ++j)
                CHECK(t.at(k + 1, i, j) + t.at(k, i, k) * t.at(k, k, j) / t.pivot(k) == t.at(k, i, j));
}

TEST_CASE("slack examples") {
    CHECK(pivot_slack(RationalMatrix{{7}}, PivotStrategy::Complete).empty());
    for (const auto& e : pivot_slack(sylvester_hadamard(2), PivotStrategy::Complete)) CHECK(e <= 0);
    const Rational tiny(1, 10000);
    const RationalMatrix a{{1, 1}, {1, 1 + tiny}};
    const auto s = pivot_slack(a, PivotStrategy::Complete);
    REQUIRE(s.size() == 1);
    CHECK(s[0] == tiny);
    // Only the pivot column counts for partial pivoting.
    CHECK(pivot_slack(a, PivotStrategy::Partial)[0] == 0);
    CHECK(pivot_slack(a, PivotStrategy::None)[0] == -1);
}

TEST_CASE("pivoting predicate examples") {
    CHECK(is_pivoted(sylvester_hadamard(2), PivotStrategy::Complete));
    const auto check = check_pivoted(RationalMatrix{{0, 1}, {1, 0}}, PivotStrategy::Complete);
    CHECK_FALSE(check.pivoted);
    CHECK(check.failing_step == 1u);
    CHECK_FALSE(check.diagnostic.empty());
    for (std::size_t n : {2u, 5u, 9u}) CHECK(is_pivoted(wilkinson_pp_matrix(n), PivotStrategy::Partial));
    CHECK_FALSE(is_pivoted(wilkinson_pp_matrix(3), PivotStrategy::Complete));
}

TEST_CASE("predicate matches a direct inequality check") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const auto dense = oracle::random_integer(2 + trial % 4, rng, -3, 3);
        const RationalMatrix a = support::to_matrix(dense);
        const bool direct_cp = oracle::pivoted(dense, oracle::Rule::Complete);
        const bool direct_rook = oracle::pivoted(dense, oracle::Rule::Rook);
        const bool direct_pp = oracle::pivoted(dense, oracle::Rule::Partial);
        CHECK(is_pivoted(a, PivotStrategy::Complete) == direct_cp);
        CHECK(is_pivoted(a, PivotStrategy::Rook) == direct_rook);
        CHECK(is_pivoted(a, PivotStrategy::Partial) == direct_pp);
    }
}

TEST_CASE("permutation examples") {
    const auto h = sylvester_hadamard(2);
    const auto same = permute_for_strategy(h, PivotStrategy::Complete);
    CHECK(same.matrix == h);
    CHECK(same.rows == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(same.cols == std::vector<std::size_t>{0, 1, 2, 3});

    const auto swapped = permute_for_strategy(RationalMatrix{{0, 2}, {1, 0}}, PivotStrategy::Complete);
    CHECK(swapped.matrix == RationalMatrix{{2, 0}, {0, 1}});

    CHECK_THROWS_AS(permute_for_strategy(RationalMatrix{{1, 2}, {2, 4}}, PivotStrategy::Complete), Singular);
}

TEST_CASE("permuted outputs satisfy the predicate for every strategy") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (auto s : {PivotStrategy::Partial, PivotStrategy::Rook, PivotStrategy::Complete})
        for (int trial = 0; trial < 10; ++trial) {
            RationalMatrix a(6);
            for (std::size_t i = 0; i < 6; ++i)
                for (std::size_t j = 0; j < 6; ++j) a(i, j) = from_double(g(rng));
            const auto p = permute_for_strategy(a, s);
            CHECK(is_pivoted(p.matrix, s));
            CHECK(p.matrix == a.permuted(p.rows, p.cols));
            if (s == PivotStrategy::Partial)
                for (std::size_t j = 0; j < 6; ++j) CHECK(p.cols[j] == j);
        }
}

TEST_CASE("reconstruction is exact") {
    CHECK(reconstruct(eliminate(RationalMatrix::identity(3))) == RationalMatrix::identity(3));
    CHECK(reconstruct(eliminate(sylvester_hadamard(2))) == sylvester_hadamard(2));
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const auto a = support::to_matrix(oracle::random_rational(8, rng));
        try {
            CHECK(reconstruct(eliminate(a)) == a);
        } catch (const ZeroPivot&) {
        }
    }
}

TEST_CASE("scaling leaves growth and slack unchanged") {
    std::mt19937_64 rng(9);
    const auto a = support::random_pivoted(6, PivotStrategy::Complete, rng);
    for (const Rational c : {Rational(-3), Rational(2, 7), Rational(-1, 1000)}) {
        CHECK(eliminate(a.scaled(c)).growth == eliminate(a).growth);
        CHECK(pivot_slack(a.scaled(c), PivotStrategy::Complete) == pivot_slack(a, PivotStrategy::Complete));
    }
}

TEST_CASE("complete pivoting at most doubles consecutive pivots") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = support::random_pivoted(7, PivotStrategy::Complete, rng);
        const auto t = eliminate(a);
        for (std::size_t k = 0; k + 1 < 7; ++k) CHECK(abs(t.pivot(k + 1)) <= 2 * abs(t.pivot(k)));
        CHECK(t.growth >= 1);
    }
}

TEST_CASE("inverse norm matches the oracle on a small case") {
    // [[2,1],[1,1]]^{-1} = [[1,-1],[-1,2]], infinity norm 3.
    CHECK(inverse_inf_norm(eliminate(RationalMatrix{{2, 1}, {1, 1}})) == 3);
}

TEST_CASE("eliminate_steps returns the trailing iterate") {
    const auto h = sylvester_hadamard(2);
    const auto t = eliminate(h);
    CHECK(eliminate_steps(h, 2) == t.levels[2]);
    CHECK(eliminate_steps(h, 0) == h);
    CHECK_THROWS(eliminate_steps(h, 4));
}

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("1.25") == Rational(5, 4));
    CHECK(parse_rational(" -6/8 ") == Rational(-3, 4));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("+2.5E2") == 250);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
    CHECK(to_string(Rational(6, 4)) == "3/2");  // unreduced input still prints reduced
    CHECK(to_decimal(Rational(-1, 3), 4) == "-0.3333");
    CHECK(to_decimal(Rational(2), 4) == "2");
}

TEST_CASE("matrix JSON accepts fractions, decimals and numbers") {
    const auto j = nlohmann::json::parse(R"({"n": 2, "entries": [["1/2", "0.25"], [3, -1.5]]})");
    const RationalMatrix m = matrix_from_json(j);
    CHECK(m == RationalMatrix{{Rational(1, 2), Rational(1, 4)}, {3, Rational(-3, 2)}});
    CHECK(matrix_to_json(m)["entries"][1][1] == "-3/2");
    CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"entries": [["1", "2"]]})")), ParseError);
    CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse(R"({"n": 3, "entries": [["1"]]})")), ParseError);
}

TEST_CASE("strategy names") {
    CHECK(parse_strategy("cp") == PivotStrategy::Complete);
    CHECK(parse_strategy("rook") == PivotStrategy::Rook);
    CHECK(parse_strategy("pp") == PivotStrategy::Partial);
    CHECK(to_string(PivotStrategy::None) == "none");
    CHECK_THROWS_AS(parse_strategy("full"), ParseError);
}
