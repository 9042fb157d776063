#pragma once

// Arbitrary-precision real/complex scaffolding shared by the evaluation and
// bound modules. Reals are MPFR-backed with runtime-selectable precision;
// complex values are a plain re/im pair so every operation stays inside the
// selected precision.

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>
#include <utility>

namespace theta {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

// Evaluation knobs. The mantissa width is honoured as a lower bound: the
// backend is sized in decimal digits, so the effective width is the smallest
// digit count covering mantissa_bits.
struct PrecisionContext {
    unsigned mantissa_bits = 256;
    double eval_tolerance = 1e-30; // relative target for series/product tails

    void validate() const {
        if (mantissa_bits < 64)
            throw std::domain_error("PrecisionContext: mantissa_bits must be >= 64");
        if (!(eval_tolerance > 0))
            throw std::domain_error("PrecisionContext: eval_tolerance must be positive");
    }

    PrecisionContext escalated() const {
        PrecisionContext c = *this;
        c.mantissa_bits *= 2;
        return c;
    }
};

inline unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(bits * 0.3010299956639812) + 3;
}

// RAII guard: sets the working precision for every Real constructed in scope.
class PrecisionScope {
public:
    explicit PrecisionScope(unsigned mantissa_bits) : saved_(Real::default_precision()) {
        Real::default_precision(digits10_for_bits(mantissa_bits));
    }
    explicit PrecisionScope(const PrecisionContext& ctx) : PrecisionScope(ctx.mantissa_bits) {
        ctx.validate();
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

// Re-rounds a value carried over from another precision scope into the
// current one, so mixed-precision operands cannot leak into a computation.
inline Real at_working_precision(Real v) {
    v.precision(Real::default_precision());
    return v;
}

inline Real real_pi() {
    return 4 * atan(Real(1));
}

struct Cx {
    Real re{0};
    Real im{0};

    Cx() = default;
    Cx(Real r) : re(std::move(r)) {}           // NOLINT: implicit real->complex
    Cx(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator*(const Cx& a, const Real& s) { return {a.re * s, a.im * s}; }
    friend Cx operator*(const Real& s, const Cx& a) { return a * s; }
    friend Cx operator/(const Cx& a, const Cx& b) {
        const Real d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend Cx operator/(const Cx& a, const Real& s) { return {a.re / s, a.im / s}; }
    friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
};

inline Real norm(const Cx& a) { return a.re * a.re + a.im * a.im; }
inline Real abs(const Cx& a) { return sqrt(norm(a)); }
inline Cx conj(const Cx& a) { return {a.re, -a.im}; }
inline Cx polar(const Real& radius, const Real& angle) {
    return {radius * cos(angle), radius * sin(angle)};
}

inline Cx at_working_precision(Cx v) {
    v.re.precision(Real::default_precision());
    v.im.precision(Real::default_precision());
    return v;
}

// Integer power by repeated squaring; e < 0 inverts afterwards.
inline Cx pow_int(const Cx& base, long e) {
    if (e < 0) return Cx(Real(1)) / pow_int(base, -e);
    Cx acc(Real(1));
    Cx b = base;
    for (unsigned long k = static_cast<unsigned long>(e); k != 0; k >>= 1) {
        if (k & 1) acc = acc * b;
        if (k > 1) b = b * b;
    }
    return acc;
}

} // namespace theta
