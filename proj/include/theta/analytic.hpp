#pragma once

// Arbitrary-precision evaluation of the partial theta series
// theta(q,z) = sum_{j>=0} q^{j(j+1)/2} z^j, its z-derivative, the product
// u(q,z) = prod_{v>=1}(1+q^v z) and the numeric q-Pochhammer symbol, plus
// argument-principle zero counting on circles and Newton zero finding with
// continuation in q.

#include <theta/precision.hpp>
#include <theta/qseries.hpp>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace theta {

struct EvalPoint {
    Cx q;
    Cx z;
};

struct numeric_error : std::runtime_error {
    enum class kind {
        zero_near_contour,
        no_convergence,
        continuation_stalled,
        newton_divergence,
        underflow,
    };
    kind failure;
    numeric_error(kind k, const std::string& what) : std::runtime_error(what), failure(k) {}
};

inline Real to_real(const Int& n) { return static_cast<Real>(n); }

namespace detail {

inline Real effective_tolerance(const PrecisionContext& ctx) { return Real(ctx.eval_tolerance); }

// Floor below which further terms cannot move a sum at the working precision.
inline Real precision_floor(const PrecisionContext& ctx) {
    return ldexp(Real(1), -static_cast<long>(ctx.mantissa_bits) - 16);
}

struct SeriesSum {
    Cx value;
    Real scale; // sum of term magnitudes; the conditioning scale of the sum
    long terms = 0;
};

// Partial sum of theta truncated once the geometric tail estimate drops below
// tolerance relative to the partial sum (or below the precision floor of the
// largest terms, whichever happens first).
inline SeriesSum theta_sum(const Cx& q, const Cx& z, const PrecisionContext& ctx) {
    const Real aq = abs(q);
    if (!(aq < 1)) throw std::domain_error("theta_eval: requires |q| < 1");
    const Real az = abs(z);
    const Real tol = effective_tolerance(ctx);
    const Real floor_eps = precision_floor(ctx);

    SeriesSum out;
    out.value = Cx(Real(1)); // j = 0 term
    out.scale = Real(1);
    Cx term(Real(1));
    Cx qpow(Real(1));
    Real aqpow(1), mag(1);
    long j = 0;
    while (true) {
        ++j;
        qpow = qpow * q;        // q^j
        term = term * qpow * z; // q^{j(j+1)/2} z^j
        aqpow = aqpow * aq;
        mag = mag * aqpow * az;
        out.value = out.value + term;
        out.scale = out.scale + mag;
        const Real ratio = aqpow * aq * az; // |term_{j+1}| / |term_j|
        if (ratio < 1) {
            const Real tail = mag * ratio / (1 - ratio);
            if (tail <= tol * abs(out.value) || tail <= floor_eps * out.scale) break;
        }
        if (j > 2000000)
            throw numeric_error(numeric_error::kind::no_convergence,
                                "theta_eval: series did not converge");
    }
    out.terms = j + 1;
    return out;
}

// Termwise z-derivative, sum_{j>=1} j q^{j(j+1)/2} z^{j-1}. The magnitude
// ratio ((j+1)/j)|q|^{j+1}|z| is eventually decreasing, giving the tail bound.
inline SeriesSum theta_prime_sum(const Cx& q, const Cx& z, const PrecisionContext& ctx) {
    const Real aq = abs(q);
    if (!(aq < 1)) throw std::domain_error("theta_prime_eval: requires |q| < 1");
    const Real az = abs(z);
    const Real tol = effective_tolerance(ctx);
    const Real floor_eps = precision_floor(ctx);

    SeriesSum out;
    out.value = Cx(q); // j = 1 term: 1 * q^1 * z^0
    out.scale = aq;
    Cx term(q);
    Cx qpow(q);
    Real aqpow = aq, mag = aq;
    long j = 1;
    while (true) {
        ++j;
        qpow = qpow * q; // q^j
        term = term * qpow * z * (Real(j) / Real(j - 1));
        aqpow = aqpow * aq;
        mag = mag * aqpow * az * (Real(j) / Real(j - 1));
        out.value = out.value + term;
        out.scale = out.scale + mag;
        const Real ratio = aqpow * aq * az * (Real(j + 1) / Real(j));
        if (ratio < 1) {
            const Real tail = mag * ratio / (1 - ratio);
            if (tail <= tol * abs(out.value) || tail <= floor_eps * out.scale) break;
        }
        if (j > 2000000)
            throw numeric_error(numeric_error::kind::no_convergence,
                                "theta_prime_eval: series did not converge");
    }
    out.terms = j;
    return out;
}

} // namespace detail

inline Cx theta_eval(const EvalPoint& pt, const PrecisionContext& ctx = {}) {
    ctx.validate();
    PrecisionScope scope(ctx.mantissa_bits);
    return detail::theta_sum(at_working_precision(pt.q), at_working_precision(pt.z), ctx).value;
}

inline Cx theta_eval(const Cx& q, const Cx& z, const PrecisionContext& ctx = {}) {
    return theta_eval(EvalPoint{q, z}, ctx);
}

inline Cx theta_prime_eval(const EvalPoint& pt, const PrecisionContext& ctx = {}) {
    ctx.validate();
    PrecisionScope scope(ctx.mantissa_bits);
    return detail::theta_prime_sum(at_working_precision(pt.q), at_working_precision(pt.z), ctx)
        .value;
}

inline Cx theta_prime_eval(const Cx& q, const Cx& z, const PrecisionContext& ctx = {}) {
    return theta_prime_eval(EvalPoint{q, z}, ctx);
}

namespace detail {

// Product for u(q,z) truncated once the remaining factors multiply the value
// by 1 + O(tol): sum_{v>V} |q^v z| <= |z| |q|^{V+1} / (1-|q|) < tol.
inline Cx u_product(const Cx& q, const Cx& z, const PrecisionContext& ctx) {
    const Real aq = abs(q);
    if (!(aq < 1)) throw std::domain_error("u_eval: requires |q| < 1");
    if (aq == 0) return Cx(Real(1));
    const Real az = abs(z);
    const Real tol = effective_tolerance(ctx);

    Cx prod(Real(1));
    Cx qpow(Real(1));
    Real aqpow(1);
    long v = 0;
    while (true) {
        const Real tail = az * aqpow * aq / (1 - aq);
        if (tail < tol) break;
        ++v;
        qpow = qpow * q;
        aqpow = aqpow * aq;
        prod = prod * (Cx(Real(1)) + qpow * z);
        if (v > 10000000)
            throw numeric_error(numeric_error::kind::no_convergence,
                                "u_eval: product did not converge");
    }
    return prod;
}

} // namespace detail

inline Cx u_eval(const EvalPoint& pt, const PrecisionContext& ctx = {}) {
    ctx.validate();
    PrecisionScope scope(ctx.mantissa_bits);
    return detail::u_product(at_working_precision(pt.q), at_working_precision(pt.z), ctx);
}

inline Cx u_eval(const Cx& q, const Cx& z, const PrecisionContext& ctx = {}) {
    return u_eval(EvalPoint{q, z}, ctx);
}

inline Cx pochhammer_num(const Cx& q, long j, const PrecisionContext& ctx = {}) {
    if (j < 0) throw std::invalid_argument("pochhammer_num: index must be >= 0");
    ctx.validate();
    PrecisionScope scope(ctx.mantissa_bits);
    const Cx qq = at_working_precision(q);
    Cx prod(Real(1));
    Cx qpow(Real(1));
    for (long l = 1; l <= j; ++l) {
        qpow = qpow * qq;
        prod = prod * (Cx(Real(1)) - qpow);
    }
    return prod;
}

inline Cx pochhammer_num(const Cx& q, inf_t, const PrecisionContext& ctx = {}) {
    ctx.validate();
    PrecisionScope scope(ctx.mantissa_bits);
    const Cx qq = at_working_precision(q);
    // (1 + q^v z) product with z = -1
    return detail::u_product(qq, Cx(Real(-1)), ctx);
}

struct CountResult {
    long count = 0;
    unsigned long quadrature_points = 0;
    double residual = 0; // distance of the quadrature value to the integer
};

// Argument-principle count of zeros of theta(q, .) in |z| < radius via
// trapezoidal quadrature of theta'/theta. The node count doubles until two
// successive quadratures round to the same integer with distance < 1e-3;
// trapezoid sums converge geometrically for this periodic analytic integrand.
inline CountResult count_zeros(const Cx& q, const Real& radius, const PrecisionContext& ctx = {}) {
    ctx.validate();
    PrecisionScope scope(ctx.mantissa_bits);
    const Cx qq = at_working_precision(q);
    const Real r = at_working_precision(radius);
    const Real aq = abs(qq);
    if (!(aq > 0 && aq < 1)) throw std::domain_error("count_zeros: requires 0 < |q| < 1");
    if (!(r > 0)) throw std::domain_error("count_zeros: requires radius > 0");

    const Real two_pi = 2 * real_pi();
    const Real near_zero_guard("1e-8");
    const Real residual_limit("1e-3");

    long prev_round = -1;
    Real prev_dist(0);
    bool have_prev = false;
    for (unsigned long k_points = 256; k_points <= (1ul << 20); k_points *= 2) {
        Cx acc(Real(0));
        Real min_theta(0), max_theta(0);
        bool first = true;
        for (unsigned long k = 0; k < k_points; ++k) {
            const Real angle = two_pi * Real(k) / Real(k_points);
            const Cx z = polar(r, angle);
            const Cx th = detail::theta_sum(qq, z, ctx).value;
            const Cx tp = detail::theta_prime_sum(qq, z, ctx).value;
            const Real at = abs(th);
            if (first || at < min_theta) min_theta = at;
            if (first || at > max_theta) max_theta = at;
            first = false;
            acc = acc + tp * z / th;
        }
        if (min_theta < near_zero_guard * max_theta)
            throw numeric_error(numeric_error::kind::zero_near_contour,
                                "count_zeros: theta nearly vanishes on the contour; "
                                "nudge the radius");
        const Cx val = acc / Real(static_cast<long>(k_points));
        const long rounded = static_cast<long>(floor(val.re + Real(1) / 2));
        const Real dist = abs(val - Cx(Real(rounded)));
        if (have_prev && rounded == prev_round && dist < residual_limit &&
            prev_dist < residual_limit) {
            CountResult res;
            res.count = rounded;
            res.quadrature_points = k_points;
            res.residual = static_cast<double>(dist);
            return res;
        }
        prev_round = rounded;
        prev_dist = dist;
        have_prev = true;
    }
    throw numeric_error(numeric_error::kind::no_convergence,
                        "count_zeros: quadrature did not stabilize");
}

inline CountResult count_zeros(const Cx& q, double radius, const PrecisionContext& ctx = {}) {
    return count_zeros(q, Real(radius), ctx);
}

struct ZeroEntry {
    Cx location;
    long multiplicity = 1;
    Real residual; // |theta| at the zero, relative to the positive-term scale
};

struct ZeroReport {
    Cx q;
    Real disk_radius; // |q|^{-L-1/2}
    long contour_count = 0;
    std::vector<ZeroEntry> zeros;
    unsigned long quadrature_points = 0;
    double contour_residual = 0;

    long multiplicity_in_disk() const {
        long total = 0;
        for (const auto& entry : zeros)
            if (abs(entry.location) < disk_radius) total += entry.multiplicity;
        return total;
    }
    bool cross_check_passed() const { return multiplicity_in_disk() == contour_count; }
};

namespace detail {

struct NewtonOutcome {
    Cx z;
    Real rel_residual;
    bool converged = false;
};

// Newton iteration on theta(q, .). move_cap bounds the total displacement
// relative to the seed, so a polish step cannot hop to a neighboring zero.
inline NewtonOutcome newton_polish(const Cx& q, const Cx& seed, const PrecisionContext& ctx,
                                   double move_cap) {
    const Real tol = effective_tolerance(ctx);
    const Real seed_mag = abs(seed);
    NewtonOutcome out;
    out.z = seed;
    int settled = 0;
    for (long it = 1; it <= 200; ++it) {
        const SeriesSum th = theta_sum(q, out.z, ctx);
        const SeriesSum tp = theta_prime_sum(q, out.z, ctx);
        const Real dmag = abs(tp.value);
        if (dmag == 0) return out;
        const Cx step = th.value / tp.value;
        out.z = out.z - step;
        if (abs(out.z - seed) > Real(move_cap) * seed_mag) return out; // escaped the basin
        if (abs(step) <= tol * abs(out.z)) {
            // a couple of extra iterations drive the residual to the
            // precision floor (quadratic convergence)
            if (++settled >= 3) break;
        }
    }
    if (settled == 0) return out;
    const SeriesSum th = theta_sum(q, out.z, ctx);
    out.rel_residual = abs(th.value) / th.scale;
    out.converged = true;
    return out;
}

} // namespace detail

// Locates the L zeros of theta(q,.) of smallest modulus. Inside |q| <= 0.108
// (the proven direct-seeding regime) Newton starts from the seeds -q^{-l};
// beyond it the zeros are continued along the ray of constant arg(q) from
// |q| = 0.10, polishing at each step. Duplicates within relative distance
// 1e-10 merge with multiplicity; the multiplicity sum inside
// |z| < |q|^{-L-1/2} is cross-checked against the contour count.
inline ZeroReport find_zeros(const Cx& q, long L, const PrecisionContext& ctx = {}) {
    ctx.validate();
    if (L < 1) throw std::invalid_argument("find_zeros: requires L >= 1");
    PrecisionScope scope(ctx.mantissa_bits);
    const Cx qq = at_working_precision(q);
    const Real aq = abs(qq);
    if (!(aq > 0 && aq < 1)) throw std::domain_error("find_zeros: requires 0 < |q| < 1");

    const Real seeding_limit("0.108"); // proven Laurent-expansion regime
    const Real merge_tol("1e-10");

    auto seed_all = [&](const Cx& at_q) {
        std::vector<Cx> zs;
        zs.reserve(static_cast<size_t>(L));
        const Cx inv_q = Cx(Real(1)) / at_q;
        Cx seed(Real(-1));
        for (long l = 1; l <= L; ++l) {
            seed = seed * inv_q; // -q^{-l}
            const auto res = detail::newton_polish(at_q, seed, ctx, 0.5);
            if (!res.converged)
                throw numeric_error(numeric_error::kind::newton_divergence,
                                    "find_zeros: Newton failed from the asymptotic seed " +
                                        std::to_string(l));
            zs.push_back(res.z);
        }
        return zs;
    };

    std::vector<Cx> zs;
    if (aq <= seeding_limit) {
        zs = seed_all(qq);
    } else {
        const Cx dir = qq / aq; // unit modulus, the ray of constant arg(q)
        Real t("0.1");
        zs = seed_all(dir * t);
        Real step("0.01");
        const Real min_step("1e-4");
        while (t < aq) {
            Real tn = t + step;
            bool final_leg = false;
            if (tn >= aq) {
                tn = aq;
                final_leg = true;
            }
            const Cx q_next = final_leg ? qq : dir * tn;
            std::vector<Cx> next;
            next.reserve(zs.size());
            bool ok = true;
            for (const Cx& z : zs) {
                const auto res = detail::newton_polish(q_next, z, ctx, 0.25);
                if (!res.converged) {
                    ok = false;
                    break;
                }
                next.push_back(res.z);
            }
            if (ok) {
                zs = std::move(next);
                t = tn;
            } else {
                step = step / 2;
                if (step < min_step)
                    throw numeric_error(numeric_error::kind::continuation_stalled,
                                        "find_zeros: continuation step underflowed; "
                                        "zeros may collide near a spectral value of q");
            }
        }
    }

    // final residuals, sorted by modulus then by phase angle
    std::vector<ZeroEntry> entries;
    entries.reserve(zs.size());
    for (const Cx& z : zs) {
        const auto sum = detail::theta_sum(qq, z, ctx);
        entries.push_back({z, 1, abs(sum.value) / sum.scale});
    }
    std::sort(entries.begin(), entries.end(), [](const ZeroEntry& a, const ZeroEntry& b) {
        const Real ma = abs(a.location), mb = abs(b.location);
        if (ma != mb) return ma < mb;
        if (a.location.re != b.location.re) return a.location.re < b.location.re;
        return a.location.im < b.location.im;
    });

    std::vector<ZeroEntry> merged;
    for (auto& entry : entries) {
        if (!merged.empty()) {
            ZeroEntry& last = merged.back();
            const Real gap = abs(entry.location - last.location);
            const Real scale = std::max(abs(entry.location), abs(last.location));
            if (gap <= merge_tol * scale) {
                last.multiplicity += 1;
                last.residual = std::max(last.residual, entry.residual);
                continue;
            }
        }
        merged.push_back(std::move(entry));
    }

    ZeroReport report;
    report.q = qq;
    report.disk_radius = pow(aq, -(Real(L) + Real(1) / 2));
    report.zeros = std::move(merged);
    const CountResult contour = count_zeros(qq, report.disk_radius, ctx);
    report.contour_count = contour.count;
    report.quadrature_points = contour.quadrature_points;
    report.contour_residual = contour.residual;
    return report;
}

// Minimum of |u(q,z)| over `samples` equispaced points on |z| = |q|^{-n-1/2}.
inline Real circle_min_modulus_u(const Cx& q, long n, long samples,
                                 const PrecisionContext& ctx = {}) {
    ctx.validate();
    if (n < 1) throw std::invalid_argument("circle_min_modulus_u: requires n >= 1");
    if (samples < 16) throw std::invalid_argument("circle_min_modulus_u: requires samples >= 16");
    PrecisionScope scope(ctx.mantissa_bits);
    const Cx qq = at_working_precision(q);
    const Real aq = abs(qq);
    if (!(aq > 0 && aq < 1)) throw std::domain_error("circle_min_modulus_u: requires 0 < |q| < 1");
    const Real radius = pow(aq, -(Real(n) + Real(1) / 2));
    const Real two_pi = 2 * real_pi();
    Real best(0);
    for (long k = 0; k < samples; ++k) {
        const Real angle = two_pi * Real(k) / Real(samples);
        const Real m = abs(detail::u_product(qq, polar(radius, angle), ctx));
        if (k == 0 || m < best) best = m;
    }
    return best;
}

} // namespace theta
