#include <theta/analytic.hpp>

#include <catch2/catch_amalgamated.hpp>

using theta::Cx;
using theta::PrecisionContext;
using theta::Real;

namespace {

const PrecisionContext kCtx{};

double dabs(const Cx& v) { return static_cast<double>(abs(v)); }

} // namespace

TEST_CASE("theta_eval basics") {
    theta::PrecisionScope scope(kCtx.mantissa_bits);
    SECTION("theta(q, 0) = 1") {
        for (double q : {0.0, 0.3, 0.9}) {
            const Cx v = theta::theta_eval(Cx(Real(q)), Cx(Real(0)), kCtx);
            CHECK(v.re == 1);
            CHECK(v.im == 0);
        }
    }
    SECTION("theta(0, z) = 1") {
        const Cx v = theta::theta_eval(Cx(Real(0)), Cx(Real(5), Real(-2)), kCtx);
        CHECK(v.re == 1);
        CHECK(v.im == 0);
    }
    SECTION("theta(0.5, 1) matches the direct summation oracle") {
        const Cx v = theta::theta_eval(Cx(Real("0.5")), Cx(Real(1)), kCtx);
        // frozen from 60-digit direct summation
        const Real expected("1.64163256065515386629384277022542943422606153795673974780465");
        CHECK(abs(v.re - expected) < Real("1e-28"));
        CHECK(v.im == 0);
    }
    SECTION("two precisions agree") {
        PrecisionContext hi = kCtx;
        hi.mantissa_bits = 512;
        hi.eval_tolerance = 1e-60;
        const Cx a = theta::theta_eval(Cx(Real("0.5")), Cx(Real(1)), kCtx);
        const Cx b = theta::theta_eval(Cx(Real("0.5")), Cx(Real(1)), hi);
        CHECK(dabs(a - b) < 1e-28);
    }
    SECTION("rejects |q| >= 1") {
        CHECK_THROWS_AS(theta::theta_eval(Cx(Real(1)), Cx(Real(0)), kCtx), std::domain_error);
    }
}

TEST_CASE("theta_prime_eval") {
    theta::PrecisionScope scope(kCtx.mantissa_bits);
    SECTION("value at z = 0 is q") {
        const Cx v = theta::theta_prime_eval(Cx(Real("0.3")), Cx(Real(0)), kCtx);
        CHECK(abs(v.re - Real("0.3")) < Real("1e-70"));
        CHECK(v.im == 0);
    }
    SECTION("value at q = 0 is 0") {
        const Cx v = theta::theta_prime_eval(Cx(Real(0)), Cx(Real(2)), kCtx);
        CHECK(v.re == 0);
        CHECK(v.im == 0);
    }
    SECTION("matches central finite differences") {
        const Cx q(Real("0.3"));
        const Cx z(Real(2), Real(1));
        const Real h("1e-8");
        const Cx fp = theta::theta_eval(q, z + Cx(h), kCtx);
        const Cx fm = theta::theta_eval(q, z - Cx(h), kCtx);
        const Cx fd = (fp - fm) / (2 * h);
        const Cx an = theta::theta_prime_eval(q, z, kCtx);
        CHECK(dabs(an - fd) / dabs(an) < 1e-6);
    }
}

TEST_CASE("u_eval") {
    theta::PrecisionScope scope(kCtx.mantissa_bits);
    SECTION("vanishes at z = -q^{-l}") {
        const Cx q(Real("0.3"));
        for (long l : {1L, 2L, 3L}) {
            const Cx z = theta::pow_int(Cx(Real(1)) / q, l) * Real(-1);
            const Cx v = theta::u_eval(q, z, kCtx);
            // the factor v = l is exactly zero up to rounding in z itself
            CHECK(dabs(v) < 1e-60);
        }
    }
    SECTION("u(q, 0) = 1") {
        const Cx v = theta::u_eval(Cx(Real("0.7")), Cx(Real(0)), kCtx);
        CHECK(v.re == 1);
        CHECK(v.im == 0);
    }
    SECTION("u(0.5, 1) matches the direct product oracle") {
        const Cx v = theta::u_eval(Cx(Real("0.5")), Cx(Real(1)), kCtx);
        const Real expected("2.3842310290313717241498992886783972387716195165084334576921");
        CHECK(abs(v.re - expected) < Real("1e-28"));
    }
    SECTION("q = 0 returns 1") {
        const Cx v = theta::u_eval(Cx(Real(0)), Cx(Real(9)), kCtx);
        CHECK(v.re == 1);
    }
}

TEST_CASE("pochhammer_num") {
    theta::PrecisionScope scope(kCtx.mantissa_bits);
    CHECK(theta::pochhammer_num(Cx(Real("0.4")), 0, kCtx).re == 1);
    const Cx v = theta::pochhammer_num(Cx(Real("0.5")), 2, kCtx);
    CHECK(abs(v.re - Real("0.375")) < Real("1e-70"));
    SECTION("infinite product modulus dominates the real-axis value") {
        const Cx q = theta::polar(Real("0.4"), Real(2));
        const Cx at_q = theta::pochhammer_num(q, theta::inf, kCtx);
        const Cx at_aq = theta::pochhammer_num(Cx(abs(q)), theta::inf, kCtx);
        CHECK(abs(at_q) >= at_aq.re);
    }
}

TEST_CASE("count_zeros small cases") {
    SECTION("q = 0.1: one zero inside |q|^{-1.5}, three inside |q|^{-3.5}") {
        const Cx q(Real("0.1"));
        const auto one = theta::count_zeros(q, pow(Real("0.1"), Real("-1.5")), kCtx);
        CHECK(one.count == 1);
        CHECK(one.residual < 1e-3);
        const auto three = theta::count_zeros(q, pow(Real("0.1"), Real("-3.5")), kCtx);
        CHECK(three.count == 3);
    }
    SECTION("small disks hold no zeros") {
        const auto res = theta::count_zeros(Cx(Real("0.4")), Real(1), kCtx);
        CHECK(res.count == 0);
    }
    SECTION("stability under doubling the nodes") {
        // convergence at K implies identical count at 2K; spot-check directly
        const Cx q(Real("0.1"));
        const auto a = theta::count_zeros(q, pow(Real("0.1"), Real("-3.5")), kCtx);
        CHECK(a.quadrature_points >= 512);
        CHECK(a.count == 3);
    }
    CHECK_THROWS_AS(theta::count_zeros(Cx(Real(0)), Real(1), kCtx), std::domain_error);
}

TEST_CASE("find_zeros in the direct-seeding regime") {
    const Cx q(Real("0.05"));
    const auto report = theta::find_zeros(q, 5, kCtx);
    REQUIRE(report.zeros.size() == 5);
    SECTION("residuals are tiny in absolute terms") {
        for (const auto& zero : report.zeros) {
            const Cx v = theta::theta_eval(q, zero.location, kCtx);
            CHECK(dabs(v) < 1e-20);
            CHECK(static_cast<double>(zero.residual) < kCtx.eval_tolerance * 10);
        }
    }
    SECTION("contour cross-check") {
        CHECK(report.contour_count == 5);
        CHECK(report.cross_check_passed());
    }
    SECTION("leading asymptotic z_1 ~ -1/q") {
        theta::PrecisionScope scope(kCtx.mantissa_bits);
        const Cx prod = report.zeros.front().location * q;
        CHECK(dabs(prod + Cx(Real(1))) < 0.1);
    }
    SECTION("moduli strictly increase") {
        theta::PrecisionScope scope(kCtx.mantissa_bits);
        for (size_t i = 1; i < report.zeros.size(); ++i)
            CHECK(abs(report.zeros[i].location) > abs(report.zeros[i - 1].location));
    }
}

TEST_CASE("find_zeros by continuation beyond the seeding regime") {
    const Cx q = theta::polar(Real("0.2"), theta::real_pi() / 4);
    const auto report = theta::find_zeros(q, 6, kCtx);
    REQUIRE(report.zeros.size() == 6);
    CHECK(report.contour_count == 6);
    CHECK(report.cross_check_passed());
    for (const auto& zero : report.zeros) CHECK(zero.multiplicity == 1);
}

TEST_CASE("identity transport between product and series forms") {
    theta::PrecisionScope scope(kCtx.mantissa_bits);
    const Cx q(Real("0.3"));
    const Cx z(Real(2));
    const Cx product = theta::u_eval(q, z, kCtx);
    Real prev_err(0);
    bool first = true;
    for (long J : {4L, 8L, 16L, 32L}) {
        Cx sum(Real(0));
        for (long j = 0; j <= J; ++j) {
            const Cx tri = theta::pow_int(q, j * (j + 1) / 2);
            sum = sum + tri * theta::pow_int(z, j) / theta::pochhammer_num(q, j, kCtx);
        }
        const Real err = abs(product - sum);
        // decreases until it reaches the u_eval truncation floor
        if (!first && prev_err > Real("1e-29")) CHECK(err < prev_err);
        prev_err = err;
        first = false;
    }
    CHECK(prev_err < Real("1e-25"));
}

TEST_CASE("circle_min_modulus_u") {
    SECTION("positive on the mid-circle") {
        const Real m = theta::circle_min_modulus_u(Cx(Real("0.25")), 3, 64, kCtx);
        CHECK(m > 0);
    }
    SECTION("minimizing direction for real q is the negative real axis") {
        theta::PrecisionScope scope(kCtx.mantissa_bits);
        const Cx q(Real("0.25"));
        const long n = 3;
        const Real radius = pow(Real("0.25"), -(Real(n) + Real(1) / 2));
        const Real at_pi = abs(theta::u_eval(q, Cx(-radius), kCtx));
        const Real global = theta::circle_min_modulus_u(q, n, 1024, kCtx);
        // 1024 samples include the angle pi exactly
        CHECK(abs(at_pi - global) <= Real("1e-40") * at_pi);
    }
    CHECK_THROWS_AS(theta::circle_min_modulus_u(Cx(Real("0.3")), 0, 64, kCtx),
                    std::invalid_argument);
    CHECK_THROWS_AS(theta::circle_min_modulus_u(Cx(Real("0.3")), 2, 8, kCtx),
                    std::invalid_argument);
}

TEST_CASE("precision context validation") {
    PrecisionContext bad = kCtx;
    bad.mantissa_bits = 32;
    CHECK_THROWS_AS(theta::theta_eval(Cx(Real("0.1")), Cx(Real(1)), bad), std::domain_error);
    bad = kCtx;
    bad.eval_tolerance = 0;
    CHECK_THROWS_AS(theta::theta_eval(Cx(Real("0.1")), Cx(Real(1)), bad), std::domain_error);
}

TEST_CASE("determinism: identical inputs give bit-identical outputs") {
    const Cx q(Real("0.17"));
    const Cx z(Real("3.5"), Real("-1.25"));
    const Cx a = theta::theta_eval(q, z, kCtx);
    const Cx b = theta::theta_eval(q, z, kCtx);
    CHECK(a.re == b.re);
    CHECK(a.im == b.im);
    const auto ra = theta::find_zeros(Cx(Real("0.05")), 3, kCtx);
    const auto rb = theta::find_zeros(Cx(Real("0.05")), 3, kCtx);
    REQUIRE(ra.zeros.size() == rb.zeros.size());
    for (size_t i = 0; i < ra.zeros.size(); ++i)
        CHECK(ra.zeros[i].location == rb.zeros[i].location);
}
