#include <theta/qseries.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"

using theta::Int;
using theta::QSeries;
using theta::inf;

namespace {

QSeries from_coeffs(std::initializer_list<long> cs) {
    QSeries s(static_cast<long>(cs.size()) - 1);
    long v = 0;
    for (long c : cs) s.coeff(v++) = c;
    return s;
}

} // namespace

TEST_CASE("mul matches direct expansions") {
    CHECK(from_coeffs({1, -1, 0, 0}) * from_coeffs({1, 1, 0, 0}) == from_coeffs({1, 0, -1, 0}));
    const QSeries s = from_coeffs({3, 1, 4, 1, 5, 9});
    CHECK(QSeries::one(5) * s == s);
    CHECK(from_coeffs({1, -1, 0, 0}) * from_coeffs({1, 0, -1, 0}) == from_coeffs({1, -1, -1, 1}));
}

TEST_CASE("mul truncates to the shorter operand") {
    const QSeries a = from_coeffs({1, 2, 3, 4, 5});
    const QSeries b = from_coeffs({1, 1});
    const QSeries p = a * b;
    REQUIRE(p.order() == 1);
    CHECK(p[0] == 1);
    CHECK(p[1] == 3);
}

TEST_CASE("invert_unit basics") {
    CHECK(theta::invert_unit(from_coeffs({1, -1, 0, 0, 0})) == from_coeffs({1, 1, 1, 1, 1}));
    CHECK(theta::invert_unit(QSeries::one(3)) == QSeries::one(3));
    CHECK_THROWS_AS(theta::invert_unit(from_coeffs({2, 1})), std::invalid_argument);
    CHECK_THROWS_AS(theta::invert_unit(from_coeffs({0, 1})), std::invalid_argument);
}

TEST_CASE("inverse of (q;q)_inf carries the partition numbers") {
    const QSeries inv = theta::invert_unit(theta::pochhammer(inf, 6));
    // frozen from the enumeration oracle below
    CHECK(inv == from_coeffs({1, 1, 2, 3, 5, 7, 11}));
    for (long v = 0; v <= 6; ++v) CHECK(inv[v] == oracle::partitions(v));
}

TEST_CASE("mul/invert_unit round-trip on pseudo-random unit series") {
    std::mt19937 rng(20240817u);
    std::uniform_int_distribution<int> coeff(-9, 9);
    for (int trial = 0; trial < 25; ++trial) {
        QSeries a(24);
        a.coeff(0) = 1;
        for (long v = 1; v <= 24; ++v) a.coeff(v) = coeff(rng);
        CHECK(a * theta::invert_unit(a) == QSeries::one(24));
    }
}

TEST_CASE("pochhammer products") {
    CHECK(theta::pochhammer(0, 5) == QSeries::one(5));
    CHECK(theta::pochhammer(2, 3) == from_coeffs({1, -1, -1, 1}));
    // pentagonal-number pattern: exponents 1, 2, 5, 7, ... so order 6 ends at q^5
    CHECK(theta::pochhammer(inf, 6) == from_coeffs({1, -1, -1, 0, 0, 1, 0}));
    CHECK(theta::pochhammer(inf, 7) == from_coeffs({1, -1, -1, 0, 0, 1, 0, 1}));
    CHECK_THROWS_AS(theta::pochhammer(-1, 5), std::invalid_argument);
}

TEST_CASE("product_one_pm expansions") {
    // distinct-part partition counts Q(v)
    const QSeries q = theta::product_one_pm(1, inf, +1, 10);
    CHECK(q == from_coeffs({1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10}));
    for (long v = 0; v <= 10; ++v) CHECK(q[v] == oracle::distinct_partitions(v, 1));

    CHECK(theta::product_one_pm(1, 1, -1, 2) == from_coeffs({1, -1, 0}));
    CHECK(theta::product_one_pm(3, 4, +1, 7) == from_coeffs({1, 0, 0, 1, 1, 0, 0, 1}));
    CHECK_THROWS_AS(theta::product_one_pm(2, 1, +1, 5), std::invalid_argument);
    CHECK_THROWS_AS(theta::product_one_pm(0, 3, +1, 5), std::invalid_argument);
}

TEST_CASE("series_U coefficients against the convolution oracle") {
    const long N = 20;
    const QSeries u = theta::series_U(N);
    CHECK(u[0] == 0);
    CHECK(u[1] == 1);
    CHECK(u[2] == 2);
    CHECK(u[3] == 5);
    // u_v = sum_k Q(k) p(v-k), with Q and p enumerated independently
    std::vector<Int> qdist(N + 1), part(N + 1);
    for (long v = 0; v <= N; ++v) {
        qdist[static_cast<size_t>(v)] = (v == 0) ? 0 : oracle::distinct_partitions(v, 1);
        part[static_cast<size_t>(v)] = oracle::partitions(v);
    }
    for (long v = 1; v <= N; ++v) {
        CHECK(u[v] == oracle::convolve_at(qdist, part, v));
        CHECK(u[v] > 0);
    }
}

TEST_CASE("series_Ujn leading behavior") {
    const long N = 12;
    SECTION("exact expansion for (2,1)") {
        // q^2 / ((1-q)(1-q^2)) built independently from the primitives
        const QSeries expected =
            theta::shifted(theta::invert_unit(theta::pochhammer(2, N)), 2);
        CHECK(theta::series_Ujn(2, 1, N) == expected);
        CHECK(expected[2] == 1);
        CHECK(expected[3] == 1);
        CHECK(expected[4] == 2);
    }
    SECTION("coefficients vanish through n and open with 1") {
        for (auto [j, n] : {std::pair<long, long>{3, 1}, {5, 2}, {7, 0}, {9, 4}}) {
            const QSeries s = theta::series_Ujn(j, n, N);
            for (long v = 0; v <= n; ++v) CHECK(s[v] == 0);
            CHECK(s[n + 1] == 1);
        }
        const QSeries s = theta::series_Ujn(inf, 3, N);
        for (long v = 0; v <= 3; ++v) CHECK(s[v] == 0);
        CHECK(s[4] == 1);
    }
    SECTION("rejects j <= n") {
        CHECK_THROWS_AS(theta::series_Ujn(2, 2, N), std::invalid_argument);
        CHECK_THROWS_AS(theta::series_Ujn(1, 3, N), std::invalid_argument);
    }
}

TEST_CASE("series_Vjn") {
    CHECK(theta::series_Vjn(inf, 0, 10) == theta::series_U(10));
    CHECK(theta::series_Vjn(4, 2, 8)[3] == 1);
    CHECK(theta::series_Vjn(2, 1, 4) == from_coeffs({0, 0, 1, 1, 2}));
    for (long v = 0; v <= 16; ++v) CHECK(theta::series_Vjn(inf, 2, 16)[v] >= 0);
    CHECK_THROWS_AS(theta::series_Vjn(1, 1, 4), std::invalid_argument);
}

TEST_CASE("series_Sr counts distinct partitions with a floor") {
    const long N = 24;
    SECTION("coefficients equal the enumeration for r in {0,1,2,5}") {
        for (long r : {0L, 1L, 2L, 5L}) {
            const QSeries s = theta::series_Sr(r, N);
            for (long v = 1; v <= N; ++v)
                CHECK(s[v] == oracle::distinct_partitions(v, r + 1));
            CHECK(s[0] == 0);
        }
    }
    SECTION("spot values") {
        CHECK(theta::series_Sr(0, 8)[6] == 4); // 6, 5+1, 4+2, 3+2+1
        CHECK(theta::series_Sr(2, 8)[5] == 1); // only 5 itself
        for (long r = 1; r <= 6; ++r) CHECK(theta::series_Sr(r, 8)[std::min(r, 8L)] == 0);
    }
    SECTION("shifted coefficients never exceed the unshifted ones") {
        const QSeries s0 = theta::series_Sr(0, N);
        for (long n : {1L, 2L, 3L, 5L}) {
            const QSeries sn = theta::series_Sr(n, N);
            for (long nu = 1; nu + n <= N; ++nu) CHECK(sn[n + nu] <= s0[nu]);
        }
    }
}

TEST_CASE("series_Utilde") {
    const long N = 10;
    SECTION("(n-1, n) gives -q^n/(q;q)_n") {
        for (long n : {2L, 3L, 5L}) {
            const QSeries expected =
                theta::shifted(theta::invert_unit(theta::pochhammer(n, N)), n);
            QSeries got = theta::series_Utilde(n - 1, n, N);
            QSeries neg(N);
            for (long v = 0; v <= N; ++v) neg.coeff(v) = -expected[v];
            CHECK(got == neg);
        }
    }
    SECTION("constant term is zero") {
        for (auto [j, n] : {std::pair<long, long>{0, 1}, {0, 3}, {2, 5}, {4, 6}})
            CHECK(theta::series_Utilde(j, n, N)[0] == 0);
    }
    SECTION("(0,2) expansion") {
        CHECK(theta::series_Utilde(0, 2, 4) == from_coeffs({0, -1, -2, -2, -3}));
    }
    SECTION("leading term is -q^{j+1}") {
        for (auto [j, n] : {std::pair<long, long>{0, 2}, {1, 4}, {3, 7}}) {
            const QSeries s = theta::series_Utilde(j, n, N);
            for (long v = 0; v <= j; ++v) CHECK(s[v] == 0);
            CHECK(s[j + 1] == -1);
        }
    }
    CHECK_THROWS_AS(theta::series_Utilde(3, 3, 8), std::invalid_argument);
    CHECK_THROWS_AS(theta::series_Utilde(4, 2, 8), std::invalid_argument);
}

TEST_CASE("count_distinct_partitions") {
    CHECK(theta::count_distinct_partitions(6, 1) == 4);
    for (long k : {1L, 3L, 17L}) CHECK(theta::count_distinct_partitions(0, k) == 1);
    CHECK(theta::count_distinct_partitions(5, 3) == 1);
    for (long v = 0; v <= 24; ++v)
        for (long m = 1; m <= 5; ++m)
            CHECK(theta::count_distinct_partitions(v, m) == oracle::distinct_partitions(v, m));
    CHECK_THROWS_AS(theta::count_distinct_partitions(-1, 1), std::invalid_argument);
    CHECK_THROWS_AS(theta::count_distinct_partitions(3, 0), std::invalid_argument);
}

TEST_CASE("series_Sr agrees with count_distinct_partitions across orders") {
    for (long r : {0L, 3L}) {
        const QSeries s = theta::series_Sr(r, 30);
        for (long v = 0; v <= 30; ++v)
            CHECK(s[v] == theta::count_distinct_partitions(v, r + 1) - (v == 0 ? 1 : 0));
    }
}
