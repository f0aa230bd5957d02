#include "support.hpp"

#include "pivotgrowth/constructions.hpp"
#include "pivotgrowth/search.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>

using namespace pivotgrowth;

namespace {

// Float pivot slack of a start: max |entry| / pivot - 1 over each level.
double float_slack(const PyramidCandidate& c) {
    double worst = -1;
    for (std::size_t k = 0; k + 1 < c.n; ++k) {
        const double p = std::fabs(c.at(k, k, k));
        for (std::size_t i = k; i < c.n; ++i)
            for (std::size_t j = k; j < c.n; ++j)
                if (i != k || j != k) worst = std::max(worst, std::fabs(c.at(k, i, j)) / p - 1);
    }
    return worst;
}

PyramidCandidate normalized_pyramid(const RationalMatrix& m) {
    const std::size_t n = m.n();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = Rational(m(i, j) / m(0, 0)).get_d();
    auto c = pyramid_from_matrix(n, a);
    for (std::size_t k = 1; k < n; ++k)
        if (c.at(k, k, k) < 0)
            for (std::size_t j = 0; j < n; ++j) a[k * n + j] = -a[k * n + j];
    return pyramid_from_matrix(n, a);
}

} // namespace

TEST_CASE("pyramid layout") {
    CHECK(PyramidCandidate::size_for(1) == 1);
    CHECK(PyramidCandidate::size_for(4) == 16 + 9 + 4 + 1);
    CHECK(PyramidCandidate::level_offset(4, 2) == 25);
    const auto one = random_cp_start(1, 3);
    CHECK(one.x == std::vector<double>{1.0});
}

TEST_CASE("random starts are reproducible and feasible") {
    const auto a = random_cp_start(5, 1234);
    const auto b = random_cp_start(5, 1234);
    REQUIRE(a.x.size() == b.x.size());
    CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
    CHECK(random_cp_start(5, 1234, 1).x != a.x);
    CHECK(a.at(0, 0, 0) == 1.0);

    const auto big = random_cp_start(10, 99);
    CHECK(float_slack(big) <= 1e-12);
    CHECK(pyramid_residual(big, PivotStrategy::Complete) <= 1e-12);
    for (std::size_t k = 0; k < 10; ++k) CHECK(big.at(k, k, k) > 0);

    const auto rook = random_start(6, PivotStrategy::Rook, 5);
    CHECK(pyramid_residual(rook, PivotStrategy::Rook) <= 1e-12);
}

TEST_CASE("residual of exact pyramids and corrupted ones") {
    const auto h = sylvester_hadamard(2);
    std::vector<double> m(16);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m[i * 4 + j] = h(i, j).get_d();
    auto c = pyramid_from_matrix(4, m);
    CHECK(pyramid_residual(c, PivotStrategy::Complete) == 0);
    CHECK(c.objective == 4);

    const double delta = 1e-3;
    c.at(1, 2, 3) += delta;
    CHECK(pyramid_residual(c, PivotStrategy::Complete) >= delta / 2);
}

TEST_CASE("optimizer reaches the small optima") {
    const auto two = optimize_growth(random_cp_start(2, 1), PivotStrategy::Complete);
    CHECK(two.candidate.objective == doctest::Approx(2.0).epsilon(1e-4));

    bool reached_four = false;
    for (std::uint64_t r = 0; r < 8 && !reached_four; ++r) {
        const auto res = optimize_growth(random_cp_start(4, 1, r), PivotStrategy::Complete);
        CHECK(res.candidate.objective >= random_cp_start(4, 1, r).objective - 1e-8);
        reached_four = res.candidate.objective >= 4 - 1e-6;
    }
    CHECK(reached_four);
}

TEST_CASE("the n = 3 optimum is a fixed point") {
    SearchConfig cfg;
    cfg.n = 3;
    cfg.restarts = 16;
    const auto res = multistart_search(cfg);
    REQUIRE(res.certificate.growth == Rational(9, 4));
    const auto start = normalized_pyramid(res.certificate.matrix);
    CHECK(start.objective == doctest::Approx(2.25).epsilon(1e-12));
    const auto again = optimize_growth(start, PivotStrategy::Complete);
    CHECK(std::fabs(again.candidate.objective - 2.25) <= 1e-8);
}

TEST_CASE("search certificates are exact and deterministic across worker counts") {
    SearchConfig cfg;
    cfg.n = 4;
    cfg.restarts = 12;
    cfg.seed = 5;
    const auto one = multistart_search(cfg);
    cfg.parallelism = 3;
    const auto three = multistart_search(cfg);
    CHECK(one.certificate.matrix == three.certificate.matrix);
    CHECK(one.best_restart == three.best_restart);
    CHECK(one.certificate.growth == 4);
    CHECK(is_pivoted(one.certificate.matrix, PivotStrategy::Complete));
    CHECK(one.certificate.growth == eliminate(one.certificate.matrix).growth);
    CHECK(one.restarts.size() == 12);
    CHECK(one.certificate.source.count("seed") == 1);
}

TEST_CASE("rook search certifies a rook pivoted matrix") {
    SearchConfig cfg;
    cfg.n = 4;
    cfg.strategy = PivotStrategy::Rook;
    cfg.restarts = 8;
    const auto res = multistart_search(cfg);
    CHECK(oracle::pivoted(support::to_dense(res.certificate.matrix), oracle::Rule::Rook));
    CHECK(res.certificate.growth >= 4);
    CHECK(res.certificate.growth <= Rational(7));  // below the rook upper bound at n = 4
}

TEST_CASE("certification snaps float candidates to exact optima") {
    // H_2 with tiny float noise still certifies to exactly 4.
    const auto h = sylvester_hadamard(2);
    std::vector<double> m(16);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m[i * 4 + j] = h(i, j).get_d() * (1 + 1e-13 * double(i + j));
    const auto cert = certify_candidate(pyramid_from_matrix(4, m), PivotStrategy::Complete);
    CHECK(cert.growth == 4);
}

TEST_CASE("invalid configurations are rejected") {
    SearchConfig cfg;
    cfg.n = 3;
    cfg.restarts = 0;
    CHECK_THROWS(multistart_search(cfg));
    CHECK_THROWS(optimize_growth(random_cp_start(3, 1), PivotStrategy::Partial));
    auto bad = random_cp_start(3, 1);
    bad.at(1, 1, 2) += 1;
    CHECK_THROWS(optimize_growth(bad, PivotStrategy::Complete));
}
