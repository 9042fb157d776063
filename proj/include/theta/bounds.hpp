#pragma once

// Numeric evaluation, with explicit truncation-error accumulation, of the
// bound functions
//
//   P_k(x) = prod_{l=0}^{k} (1 - x^{l+1/2}),
//   R(x)   = sum_{s>=1} x^{s^2/2},
//   U(x)   = (prod_{l>=1}(1+x^l) - 1) / (x;x)_inf   (via exact coefficients),
//   T(x)   = (prod_{l>=1}(1+x^l) + 1) / (x;x)_inf,
//   M(x)   = 1 / (x;x)_inf,
//
// and the certified threshold n0(delta0, delta): the smallest n0 such that
// for every q with delta0 <= |q| <= delta and every n >= n0,
//
//   (a) delta^n U(delta) R(delta)                          < P_inf(delta)^2/4,
//   (b) T(delta) sum_{s>=m} delta^{s^2/2}                 <= P_inf(delta)^2/4,
//   (c) M ((1+delta^n/delta0^{max(0,m-2)})^{m-1} - 1)
//         * sum_{s=1}^{m-1} delta^{s^2/2}                  < P_inf(delta)^2/4,
//
// which pins |u - theta/(q;q)_n| <= (3/4)|q|^{-n^2/2} P_inf(delta)^2 < |u| on
// the circle |z| = |q|^{-n-1/2}. Every certified inequality must hold with a
// separation of at least twice the accumulated error bound; otherwise the
// precision doubles and the evaluation is retried.

#include <theta/analytic.hpp>
#include <theta/precision.hpp>
#include <theta/qseries.hpp>

#include <stdexcept>
#include <vector>

namespace theta {

// A value together with a bound on its distance from the true quantity.
struct Approx {
    Real value;
    Real err;

    Real upper() const { return value + err; }
    Real lower() const { return value - err; }

    friend Approx operator*(const Approx& a, const Approx& b) {
        // |ab - AB| <= |a||B-b| + |b'||A-a| with outward rounding slack
        Real err = abs(a.value) * b.err + abs(b.value) * a.err + a.err * b.err;
        Real v = a.value * b.value;
        err += abs(v) * rounding_eps();
        return {v, err};
    }
    friend Approx operator*(const Real& s, const Approx& a) {
        return {s * a.value, abs(s) * a.err + abs(s * a.value) * rounding_eps()};
    }
    friend Approx operator+(const Approx& a, const Approx& b) {
        return {a.value + b.value, a.err + b.err + (abs(a.value) + abs(b.value)) * rounding_eps()};
    }

    static Real rounding_eps() {
        // one-step relative rounding bound at the working precision, padded
        return ldexp(Real(1), -static_cast<long>(Real::default_precision() * 3.32) + 4);
    }
};

struct AnnulusSpec {
    Real delta0;
    Real delta;

    void validate() const {
        if (!(delta0 > 0 && delta0 < delta && delta < 1))
            throw std::domain_error("AnnulusSpec: requires 0 < delta0 < delta < 1");
    }
};

struct BoundSuite {
    Real x;
    Approx P_inf;
    Approx U_val;
    Approx R_val;
    Approx T_val;
    Approx M_val;
    unsigned precision_bits = 0;
};

struct TermBound {
    long j = 0;
    Real magnitude;
};

struct ThresholdCertificate {
    AnnulusSpec annulus;
    long m = 0;
    long n0 = 0;
    BoundSuite suite_at_delta;
    Approx z1_bound; // delta^{n0} U(delta) R(delta)
    Approx z2_bound; // T(delta) sum_{s>=m} delta^{s^2/2}
    Approx z3_bound; // M ((1+delta^{n0}/delta0^{max(0,m-2)})^{m-1}-1) sum_{s<m} delta^{s^2/2}
    Approx target;   // P_inf(delta)^2 / 4
    unsigned precision_bits = 0;
};

namespace detail {

inline Real require_unit_interval(const Real& x, const char* who) {
    if (!(x > 0 && x < 1)) throw std::domain_error(std::string(who) + ": requires 0 < x < 1");
    return x;
}

// prod_{l>=1}(1 + x^l) with the tail bounded through log(1+w) <= w:
// the skipped factors multiply the value by at most exp(x^{L+1}/(1-x)).
inline Approx prod_plus(const Real& x, const PrecisionContext& ctx) {
    const Real tol = Real(ctx.eval_tolerance);
    Real v(1), xp(1);
    long ops = 0;
    while (true) {
        const Real tail = xp * x / (1 - x);
        if (tail < tol) {
            const Real slack = v * (exp(tail) - 1) + v * Real(ops + 8) * Approx::rounding_eps();
            return {v, slack};
        }
        xp = xp * x;
        v = v * (1 + xp);
        ++ops;
        if (ops > 10000000)
            throw numeric_error(numeric_error::kind::no_convergence, "prod_plus: no convergence");
    }
}

// (x;x)_inf with the analogous tail: skipped factors multiply the value by
// something in [exp(-s), 1], s = x^{L+1}/((1-x)(1-x^{L+1})).
inline Approx poch_inf_pos(const Real& x, const PrecisionContext& ctx) {
    const Real tol = Real(ctx.eval_tolerance);
    Real v(1), xp(1);
    long ops = 0;
    while (true) {
        const Real head = xp * x;
        const Real tail = head / ((1 - x) * (1 - head));
        if (tail < tol) {
            const Real slack = v * (1 - exp(-tail)) + v * Real(ops + 8) * Approx::rounding_eps();
            return {v, slack};
        }
        xp = xp * x;
        v = v * (1 - xp);
        ++ops;
        if (ops > 10000000)
            throw numeric_error(numeric_error::kind::no_convergence, "poch_inf_pos: no convergence");
    }
}

// sum_{s=s0}^{inf} x^{s^2/2}; consecutive term ratio is x^{s+1/2} < 1, so the
// truncated tail is bounded geometrically.
inline Approx power_square_tail(const Real& x, long s0, const PrecisionContext& ctx) {
    const Real tol = Real(ctx.eval_tolerance);
    Real sum(0);
    Real term = pow(x, Real(s0) * Real(s0) / 2);
    Real ratio = pow(x, Real(s0) + Real(1) / 2); // term_{s+1}/term_s at s = s0
    long s = s0;
    long ops = 0;
    while (true) {
        sum = sum + term;
        term = term * ratio;
        ratio = ratio * x;
        ++s;
        ++ops;
        if (term < tol * (sum + 1)) {
            const Real tail = term / (1 - ratio);
            return {sum + tail, tail + (sum + 1) * Real(ops + 8) * Approx::rounding_eps()};
        }
        if (ops > 1000000)
            throw numeric_error(numeric_error::kind::no_convergence,
                                "power_square_tail: no convergence");
    }
}

inline Approx quotient(const Approx& num, const Approx& den) {
    // den assumed positive and separated from zero
    const Real v = num.value / den.value;
    const Real rel = num.err / abs(num.value == 0 ? Real(1) : num.value) +
                     den.err / den.value + 4 * Approx::rounding_eps();
    return {v, abs(v) * rel + num.err / den.value};
}

} // namespace detail

// P_k(x), finite k.
inline Approx eval_P(const Real& x_in, long k, const PrecisionContext& ctx = {}) {
    ctx.validate();
    if (k < 0) throw std::invalid_argument("eval_P: requires k >= 0");
    PrecisionScope scope(ctx.mantissa_bits);
    const Real x = detail::require_unit_interval(at_working_precision(x_in), "eval_P");
    Real v(1);
    Real f = sqrt(x); // x^{l+1/2} for l = 0
    for (long l = 0; l <= k; ++l) {
        v = v * (1 - f);
        f = f * x;
    }
    return {v, v * Real(k + 8) * Approx::rounding_eps()};
}

// P_inf(x): stops once the remaining factors change the product by less than
// the tolerance; -log prod_{l>L}(1 - x^{l+1/2}) <= x^{L+3/2}/(1-x)^2.
inline Approx eval_P(const Real& x_in, inf_t, const PrecisionContext& ctx = {}) {
    ctx.validate();
    PrecisionScope scope(ctx.mantissa_bits);
    const Real x = detail::require_unit_interval(at_working_precision(x_in), "eval_P");
    const Real tol = Real(ctx.eval_tolerance);
    Real v(1);
    Real f = sqrt(x); // the monomial of the next factor to include
    long ops = 0;
    while (true) {
        const Real tail = f / ((1 - x) * (1 - x));
        if (tail < tol) {
            const Real slack = v * (1 - exp(-tail)) + v * Real(ops + 8) * Approx::rounding_eps();
            return {v, slack};
        }
        v = v * (1 - f);
        f = f * x;
        ++ops;
        if (ops > 10000000)
            throw numeric_error(numeric_error::kind::no_convergence, "eval_P: no convergence");
    }
}

// All five bound values at x. U(x) is summed from the exact integer
// coefficients of series_U; its tail is bounded by comparison against the
// defining products at the midpoint y = (1+x)/2, since u_v <= U(y)/y^v.
inline BoundSuite eval_bound_suite(const Real& x_in, const PrecisionContext& ctx = {}) {
    ctx.validate();
    PrecisionScope scope(ctx.mantissa_bits);
    const Real x = detail::require_unit_interval(at_working_precision(x_in), "eval_bound_suite");

    BoundSuite suite;
    suite.x = x;
    suite.precision_bits = ctx.mantissa_bits;
    suite.P_inf = eval_P(x, inf, ctx);
    suite.R_val = detail::power_square_tail(x, 1, ctx);

    const Approx plus = detail::prod_plus(x, ctx);
    const Approx poch = detail::poch_inf_pos(x, ctx);
    suite.T_val = detail::quotient({plus.value + 1, plus.err}, poch);
    suite.M_val = detail::quotient({Real(1), Real(0)}, poch);

    // upper bound for U(y), y = (1+x)/2, from the product forms
    const Real y = (1 + x) / 2;
    const Approx plus_y = detail::prod_plus(y, ctx);
    const Approx poch_y = detail::poch_inf_pos(y, ctx);
    const Real u_upper_y = (plus_y.upper() - 1) / (poch_y.lower());

    // order big enough that U(y) (x/y)^{N+1} / (1 - x/y) < tol * x
    const Real tol_abs = Real(ctx.eval_tolerance) * x;
    const Real r = x / y;
    Real tail = u_upper_y * r / (1 - r);
    long order = 1;
    while (tail >= tol_abs) {
        tail = tail * r;
        ++order;
        if (order > 2000000)
            throw numeric_error(numeric_error::kind::no_convergence,
                                "eval_bound_suite: U order selection diverged");
    }
    const QSeries u = series_U(order);
    Real acc(0);
    for (long v = order; v >= 1; --v) acc = acc * x + to_real(u[v]);
    acc = acc * x;
    suite.U_val = {acc, tail + acc * Real(order + 8) * Approx::rounding_eps()};
    return suite;
}

// Smallest m >= 1 with T(delta) sum_{s>=m} delta^{s^2/2} <= P_inf(delta)^2/4,
// established on the conservative sides of every bound.
inline long choose_m(const Real& delta_in, const PrecisionContext& ctx = {}) {
    ctx.validate();
    PrecisionScope scope(ctx.mantissa_bits);
    const Real delta = detail::require_unit_interval(at_working_precision(delta_in), "choose_m");

    const Approx p = eval_P(delta, inf, ctx);
    const Real target_lower = p.lower() * p.lower() / 4;
    const Approx plus = detail::prod_plus(delta, ctx);
    const Approx poch = detail::poch_inf_pos(delta, ctx);
    const Real t_upper = (plus.upper() + 1) / poch.lower();

    for (long m = 1; m <= 10000; ++m) {
        const Approx tail = detail::power_square_tail(delta, m, ctx);
        if (t_upper * tail.upper() <= target_lower) return m;
    }
    throw numeric_error(numeric_error::kind::no_convergence, "choose_m: no m below 10000");
}

namespace detail {

// Strict inequality with a separation of at least twice the accumulated
// error bound.
inline bool separated_below(const Approx& lhs, const Approx& rhs) {
    const Real gap = rhs.value - lhs.value;
    return gap > 0 && gap >= 2 * (lhs.err + rhs.err);
}

// Plain value comparison; true when the inequality holds numerically but the
// separation requirement cannot distinguish it from a tie.
inline bool ambiguous_below(const Approx& lhs, const Approx& rhs) {
    return lhs.value < rhs.value && !separated_below(lhs, rhs);
}

} // namespace detail

// Certified threshold for the annulus. Scans n upward from 1 (the two
// n-dependent bounds are checked to be nonincreasing along the way) and
// escalates the working precision up to four times if an inequality cannot
// be separated from a tie.
inline ThresholdCertificate certify_threshold(const AnnulusSpec& annulus_in,
                                              const PrecisionContext& ctx_in = {}) {
    ctx_in.validate();
    {
        PrecisionScope scope(ctx_in.mantissa_bits);
        annulus_in.validate();
    }

    PrecisionContext ctx = ctx_in;
    for (int escalation = 0; escalation <= 4; ++escalation, ctx = ctx.escalated()) {
        PrecisionScope scope(ctx.mantissa_bits);
        const AnnulusSpec annulus{at_working_precision(annulus_in.delta0),
                                  at_working_precision(annulus_in.delta)};
        const Real delta = annulus.delta;
        const Real delta0 = annulus.delta0;

        const BoundSuite suite = eval_bound_suite(delta, ctx);
        const long m = choose_m(delta, ctx);
        const Approx target = {suite.P_inf.value * suite.P_inf.value / 4,
                               (2 * suite.P_inf.value + suite.P_inf.err) * suite.P_inf.err / 4 +
                                   suite.P_inf.value * suite.P_inf.value * Approx::rounding_eps()};
        const Approx z2 = suite.T_val * detail::power_square_tail(delta, m, ctx);

        // finite sum sum_{s=1}^{m-1} delta^{s^2/2} (empty for m = 1)
        Approx s1{Real(0), Real(0)};
        for (long s = 1; s < m; ++s)
            s1 = s1 + Approx{pow(delta, Real(s) * Real(s) / 2), Real(0)};

        const Real d0_shift = pow(delta0, Real(std::max(0L, m - 2)));
        const Approx ur = suite.U_val * suite.R_val;

        bool ambiguous = false;
        Real dpow(1);
        Approx prev_z1, prev_z3;
        for (long n = 1; n <= 1000000; ++n) {
            dpow = dpow * delta;
            const Approx z1 = Approx{dpow, dpow * Approx::rounding_eps()} * ur;
            const Real growth = pow(1 + dpow / d0_shift, Real(m - 1)) - 1;
            const Approx z3 =
                suite.M_val * Approx{growth, growth * 8 * Approx::rounding_eps()} * s1;

            if (n > 1) {
                // both certified expressions must be nonincreasing in n
                if (z1.value > prev_z1.value + prev_z1.err + z1.err ||
                    z3.value > prev_z3.value + prev_z3.err + z3.err)
                    throw numeric_error(numeric_error::kind::no_convergence,
                                        "certify_threshold: bound not monotone in n");
            }
            prev_z1 = z1;
            prev_z3 = z3;

            if (detail::ambiguous_below(z1, target) || detail::ambiguous_below(z3, target)) {
                ambiguous = true;
                break;
            }
            if (detail::separated_below(z1, target) && detail::separated_below(z3, target)) {
                ThresholdCertificate cert;
                cert.annulus = annulus;
                cert.m = m;
                cert.n0 = n;
                cert.suite_at_delta = suite;
                cert.z1_bound = z1;
                cert.z2_bound = z2;
                cert.z3_bound = z3;
                cert.target = target;
                cert.precision_bits = ctx.mantissa_bits;
                return cert;
            }
        }
        if (!ambiguous)
            throw numeric_error(numeric_error::kind::no_convergence,
                                "certify_threshold: no n0 below 10^6");
        // else: retry with doubled precision
    }
    throw numeric_error(numeric_error::kind::no_convergence,
                        "certify_threshold: could not separate the inequalities after "
                        "4 precision escalations");
}

struct UCircleBound {
    long n = 0;
    Approx value;       // |q|^{-n^2/2} P_{n-1}(|q|) P_inf(|q|)
    Approx via_pinf_sq; // the weaker |q|^{-n^2/2} P_inf(|q|)^2
};

// Lower bound for min_{|z| = |q|^{-n-1/2}} |u(q,z)|.
inline UCircleBound u_circle_lower_bound(const Cx& q, long n, const PrecisionContext& ctx = {}) {
    ctx.validate();
    if (n < 1) throw std::invalid_argument("u_circle_lower_bound: requires n >= 1");
    PrecisionScope scope(ctx.mantissa_bits);
    const Cx qq = at_working_precision(q);
    const Real aq = detail::require_unit_interval(abs(qq), "u_circle_lower_bound");

    const Real qpow = pow(aq, -Real(n) * Real(n) / 2);
    const Approx scale{qpow, qpow * 8 * Approx::rounding_eps()};
    const Approx p_head = eval_P(aq, n - 1, ctx);
    const Approx p_inf = eval_P(aq, inf, ctx);
    UCircleBound out;
    out.n = n;
    out.value = scale * p_head * p_inf;
    out.via_pinf_sq = scale * p_inf * p_inf;
    return out;
}

// The same bound chained through the annulus: |q|^{-n^2/2} P_inf(delta)^2.
inline Approx u_circle_lower_bound_at_delta(const Cx& q, long n, const Real& delta,
                                            const PrecisionContext& ctx = {}) {
    ctx.validate();
    if (n < 1) throw std::invalid_argument("u_circle_lower_bound_at_delta: requires n >= 1");
    PrecisionScope scope(ctx.mantissa_bits);
    const Real aq = detail::require_unit_interval(abs(at_working_precision(q)),
                                                  "u_circle_lower_bound_at_delta");
    const Real qpow = pow(aq, -Real(n) * Real(n) / 2);
    const Approx p_inf = eval_P(at_working_precision(delta), inf, ctx);
    return Approx{qpow, qpow * 8 * Approx::rounding_eps()} * p_inf * p_inf;
}

// Max over equispaced samples of |u - theta/(q;q)_n| / |u| on the circle
// |z| = |q|^{-n-1/2}. A value < 1 witnesses the comparison hypothesis at the
// sampled points; the certified proof is the z1+z2+z3 chain.
inline Real rouche_margin(const Cx& q, long n, long samples, const PrecisionContext& ctx = {}) {
    ctx.validate();
    if (n < 1) throw std::invalid_argument("rouche_margin: requires n >= 1");
    if (samples < 16) throw std::invalid_argument("rouche_margin: requires samples >= 16");
    PrecisionScope scope(ctx.mantissa_bits);
    const Cx qq = at_working_precision(q);
    const Real aq = detail::require_unit_interval(abs(qq), "rouche_margin");
    const Real radius = pow(aq, -(Real(n) + Real(1) / 2));
    const Real two_pi = 2 * real_pi();
    const Cx poch = pochhammer_num(qq, n, ctx);

    Real worst(0), umin(0), umax(0);
    for (long k = 0; k < samples; ++k) {
        const Real angle = two_pi * Real(k) / Real(samples);
        const Cx z = polar(radius, angle);
        const Cx uu = detail::u_product(qq, z, ctx);
        const Cx diff = uu - detail::theta_sum(qq, z, ctx).value / poch;
        const Real au = abs(uu);
        if (k == 0 || au < umin) umin = au;
        if (k == 0 || au > umax) umax = au;
        const Real ratio = abs(diff) / au;
        if (ratio > worst) worst = ratio;
    }
    if (umin < ldexp(umax, -static_cast<long>(ctx.mantissa_bits / 2)))
        throw numeric_error(numeric_error::kind::underflow,
                            "rouche_margin: |u| underflows the working precision on a sample; "
                            "escalate precision");
    return worst;
}

// |beta_j| on the circle |z| = |q|^{-n-1/2}: 0 at j = n, and
// |q|^{-n^2/2+(j-n)^2/2} times |U_{j,n}(q)| (j > n) or |Ut_{j,n}(q)| (j < n),
// both evaluated from their closed product forms.
inline std::vector<TermBound> term_bounds_on_circle(const Cx& q, long n, long j_min, long j_max,
                                                    const PrecisionContext& ctx = {}) {
    ctx.validate();
    if (n < 1) throw std::invalid_argument("term_bounds_on_circle: requires n >= 1");
    if (j_min < 0 || j_max < j_min)
        throw std::invalid_argument("term_bounds_on_circle: bad j range");
    PrecisionScope scope(ctx.mantissa_bits);
    const Cx qq = at_working_precision(q);
    const Real aq = detail::require_unit_interval(abs(qq), "term_bounds_on_circle");

    auto finite_poch = [&](long j) {
        Cx prod(Real(1));
        Cx qpow(Real(1));
        for (long l = 1; l <= j; ++l) {
            qpow = qpow * qq;
            prod = prod * (Cx(Real(1)) - qpow);
        }
        return prod;
    };
    auto range_minus = [&](long lo, long hi) { // prod_{l=lo}^{hi} (1 - q^l)
        Cx prod(Real(1));
        Cx qpow = pow_int(qq, lo);
        for (long l = lo; l <= hi; ++l) {
            prod = prod * (Cx(Real(1)) - qpow);
            qpow = qpow * qq;
        }
        return prod;
    };

    std::vector<TermBound> out;
    out.reserve(static_cast<size_t>(j_max - j_min + 1));
    for (long j = j_min; j <= j_max; ++j) {
        if (j == n) {
            out.push_back({j, Real(0)});
            continue;
        }
        const Real prefactor =
            pow(aq, (Real(j - n) * Real(j - n) - Real(n) * Real(n)) / 2);
        Cx coeff;
        if (j > n) {
            const Cx num = Cx(Real(1)) - range_minus(n + 1, j);
            coeff = num / finite_poch(j);
        } else {
            const Cx num = range_minus(j + 1, n) - Cx(Real(1));
            coeff = num / finite_poch(n);
        }
        out.push_back({j, prefactor * abs(coeff)});
    }
    return out;
}

} // namespace theta
