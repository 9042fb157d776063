#pragma once

// Exact truncated power-series arithmetic in q over arbitrary-size integers,
// plus the q-Pochhammer products, the majorant series
//
//   U        = (prod_{l>=1}(1+q^l) - 1) / (q;q)_inf,
//   U_{j,n}  = (1 - prod_{l=n+1}^{j}(1-q^l)) / (q;q)_j,
//   V_{j,n}  = (prod_{l=n+1}^{j}(1+q^l) - 1) / (q;q)_j,
//   Ut_{j,n} = (prod_{l=j+1}^{n}(1-q^l) - 1) / (q;q)_n,
//   S_r      = prod_{l>=r+1}(1+q^l) - 1,
//
// and machine verification of the coefficient majorization |u_{j,n;n+v}| <= u_v
// together with the product/sum identity
// prod_{v>=1}(1+q^v z) = sum_j q^{j(j+1)/2} z^j / (q;q)_j.
//
// Truncation at q-order N is exact: infinite products drop the factors
// (1 +- q^l) with l > N, each of which is 1 + O(q^{N+1}).

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace theta {

using Int = boost::multiprecision::cpp_int;

// Marker for the infinite extent of a product or index bound.
struct inf_t {};
inline constexpr inf_t inf{};

// Truncated formal power series in q. coefficient v is valid for
// 0 <= v <= order(); arithmetic never reports coefficients beyond the
// shorter operand's order (mismatches resolve to the minimum order).
class QSeries {
public:
    explicit QSeries(long order) : c_(checked_order(order) + 1) {}

    static QSeries one(long order) {
        QSeries s(order);
        s.c_[0] = 1;
        return s;
    }

    long order() const { return static_cast<long>(c_.size()) - 1; }
    const Int& operator[](long v) const { return c_.at(static_cast<size_t>(v)); }
    Int& coeff(long v) { return c_.at(static_cast<size_t>(v)); }
    const std::vector<Int>& coefficients() const { return c_; }

    QSeries truncated(long new_order) const {
        QSeries s(std::min(new_order, order()));
        for (long v = 0; v <= s.order(); ++v) s.c_[static_cast<size_t>(v)] = (*this)[v];
        return s;
    }

    friend bool operator==(const QSeries&, const QSeries&) = default;

private:
    static long checked_order(long order) {
        if (order < 0) throw std::invalid_argument("QSeries: order must be >= 0");
        return order;
    }
    std::vector<Int> c_;
};

inline QSeries mul(const QSeries& a, const QSeries& b) {
    const long n = std::min(a.order(), b.order());
    QSeries r(n);
    for (long i = 0; i <= n; ++i) {
        if (a[i] == 0) continue;
        for (long k = 0; i + k <= n; ++k) {
            if (b[k] == 0) continue;
            r.coeff(i + k) += a[i] * b[k];
        }
    }
    return r;
}

inline QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b); }

inline QSeries operator+(const QSeries& a, const QSeries& b) {
    QSeries r = a.truncated(std::min(a.order(), b.order()));
    for (long v = 0; v <= r.order(); ++v) r.coeff(v) += b[v];
    return r;
}

inline QSeries operator-(const QSeries& a, const QSeries& b) {
    QSeries r = a.truncated(std::min(a.order(), b.order()));
    for (long v = 0; v <= r.order(); ++v) r.coeff(v) -= b[v];
    return r;
}

// Multiplies by q^k, dropping what falls beyond the truncation order.
inline QSeries shifted(const QSeries& s, long k) {
    if (k < 0) throw std::invalid_argument("shifted: negative shift");
    QSeries r(s.order());
    for (long v = k; v <= s.order(); ++v) r.coeff(v) = s[v - k];
    return r;
}

// Reciprocal of a unit series. Requires constant term exactly 1, which keeps
// every coefficient an integer.
inline QSeries invert_unit(const QSeries& a) {
    if (a[0] != 1) throw std::invalid_argument("invert_unit: constant term must be exactly 1");
    const long n = a.order();
    QSeries r(n);
    r.coeff(0) = 1;
    for (long v = 1; v <= n; ++v) {
        Int acc = 0;
        for (long i = 1; i <= v; ++i) acc += a[i] * r[v - i];
        r.coeff(v) = -acc;
    }
    return r;
}

namespace detail {

// In-place multiply by (1 + sign*q^l).
inline void mul_one_pm_inplace(QSeries& s, long l, int sign) {
    for (long v = s.order(); v >= l; --v) {
        if (sign > 0)
            s.coeff(v) += s[v - l];
        else
            s.coeff(v) -= s[v - l];
    }
}

inline void check_sign(int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("product sign must be +1 or -1");
}

} // namespace detail

// prod_{l=p}^{r} (1 + sign*q^l), exact to the given order.
inline QSeries product_one_pm(long p, long r, int sign, long order) {
    detail::check_sign(sign);
    if (p < 1) throw std::invalid_argument("product_one_pm: start index must be >= 1");
    if (r < p) throw std::invalid_argument("product_one_pm: end index must be >= start index");
    QSeries s = QSeries::one(order);
    for (long l = p; l <= std::min(r, order); ++l) detail::mul_one_pm_inplace(s, l, sign);
    return s;
}

inline QSeries product_one_pm(long p, inf_t, int sign, long order) {
    detail::check_sign(sign);
    if (p < 1) throw std::invalid_argument("product_one_pm: start index must be >= 1");
    QSeries s = QSeries::one(order);
    for (long l = p; l <= order; ++l) detail::mul_one_pm_inplace(s, l, sign);
    return s;
}

// (q;q)_j = (1-q)(1-q^2)...(1-q^j); j = 0 is the empty product.
inline QSeries pochhammer(long j, long order) {
    if (j < 0) throw std::invalid_argument("pochhammer: index must be >= 0");
    if (j == 0) return QSeries::one(order);
    return product_one_pm(1, j, -1, order);
}

inline QSeries pochhammer(inf_t, long order) { return product_one_pm(1, inf, -1, order); }

inline QSeries series_U(long order) {
    if (order < 1) throw std::invalid_argument("series_U: order must be >= 1");
    QSeries num = product_one_pm(1, inf, +1, order);
    num.coeff(0) -= 1;
    return mul(num, invert_unit(pochhammer(inf, order)));
}

inline QSeries series_Ujn(long j, long n, long order) {
    if (n < 0 || j <= n) throw std::invalid_argument("series_Ujn: requires j > n >= 0");
    QSeries num = QSeries::one(order) - product_one_pm(n + 1, j, -1, order);
    return mul(num, invert_unit(pochhammer(j, order)));
}

inline QSeries series_Ujn(inf_t, long n, long order) {
    if (n < 0) throw std::invalid_argument("series_Ujn: requires n >= 0");
    QSeries num = QSeries::one(order) - product_one_pm(n + 1, inf, -1, order);
    return mul(num, invert_unit(pochhammer(inf, order)));
}

inline QSeries series_Vjn(long j, long n, long order) {
    if (n < 0 || j <= n) throw std::invalid_argument("series_Vjn: requires j > n >= 0");
    QSeries num = product_one_pm(n + 1, j, +1, order);
    num.coeff(0) -= 1;
    return mul(num, invert_unit(pochhammer(j, order)));
}

inline QSeries series_Vjn(inf_t, long n, long order) {
    if (n < 0) throw std::invalid_argument("series_Vjn: requires n >= 0");
    QSeries num = product_one_pm(n + 1, inf, +1, order);
    num.coeff(0) -= 1;
    return mul(num, invert_unit(pochhammer(inf, order)));
}

inline QSeries series_Sr(long r, long order) {
    if (r < 0) throw std::invalid_argument("series_Sr: requires r >= 0");
    QSeries s = product_one_pm(r + 1, inf, +1, order);
    s.coeff(0) -= 1;
    return s;
}

inline QSeries series_Utilde(long j, long n, long order) {
    if (j < 0 || j >= n) throw std::invalid_argument("series_Utilde: requires 0 <= j < n");
    QSeries num = product_one_pm(j + 1, n, -1, order);
    num.coeff(0) -= 1;
    return mul(num, invert_unit(pochhammer(n, order)));
}

// Number of ways to write v as a sum of distinct integers >= min_part
// (v = 0 counts the empty sum). Independent combinatorial cross-check for
// the S_r coefficients.
inline Int count_distinct_partitions(long v, long min_part) {
    if (v < 0) throw std::invalid_argument("count_distinct_partitions: requires v >= 0");
    if (min_part < 1) throw std::invalid_argument("count_distinct_partitions: requires min_part >= 1");
    if (v == 0) return 1;
    // f[w][m] = partitions of w into strictly increasing parts >= m;
    // m is clamped to v+1 since larger minimums behave identically.
    const long mcap = v + 1;
    std::vector<std::vector<Int>> f(static_cast<size_t>(v) + 1,
                                    std::vector<Int>(static_cast<size_t>(mcap) + 1));
    for (long m = mcap; m >= 1; --m) {
        for (long w = 0; w <= v; ++w) {
            if (w == 0) {
                f[0][static_cast<size_t>(m)] = 1;
                continue;
            }
            Int acc = (m < mcap) ? f[static_cast<size_t>(w)][static_cast<size_t>(m) + 1] : Int(0);
            if (m <= w) acc += f[static_cast<size_t>(w - m)][static_cast<size_t>(std::min(m + 1, mcap))];
            f[static_cast<size_t>(w)][static_cast<size_t>(m)] = acc;
        }
    }
    return f[static_cast<size_t>(v)][static_cast<size_t>(std::min(min_part, mcap))];
}

struct GammaDominationReport {
    long p = 0;
    long r = 0;
    long order = 0;
    long checked = 0;
    bool passed = false;
    struct Violation {
        long nu;
        Int gamma_plus;  // coefficient of prod(1+q^l) - 1
        Int gamma_minus; // coefficient of prod(1-q^l) - 1
    };
    std::optional<Violation> first_violation;
};

// Coefficient-wise |gamma^-_v| <= gamma^+_v for the two products over l = p..r.
inline GammaDominationReport verify_gamma_domination(long p, long r, long order) {
    if (p < 1 || r < p) throw std::invalid_argument("verify_gamma_domination: requires 1 <= p <= r");
    QSeries plus = product_one_pm(p, r, +1, order);
    QSeries minus = product_one_pm(p, r, -1, order);
    plus.coeff(0) -= 1;
    minus.coeff(0) -= 1;
    GammaDominationReport rep;
    rep.p = p;
    rep.r = r;
    rep.order = order;
    rep.passed = true;
    for (long v = 0; v <= order; ++v) {
        ++rep.checked;
        if (abs(minus[v]) <= plus[v]) continue;
        rep.passed = false;
        rep.first_violation = GammaDominationReport::Violation{v, plus[v], minus[v]};
        break;
    }
    return rep;
}

struct LemmaViolation {
    std::optional<long> j; // nullopt encodes the infinite-index series
    long n = 0;
    long nu = 0;
    Int lhs;
    Int rhs;
    const char* relation = "";
};

struct LemmaReport {
    long n_max = 0;
    long nu_max = 0;
    std::optional<long> j_max; // nullopt: every j up to the working order
    long working_order = 0;
    long checked = 0; // (j, n, nu) triples tested against u_nu
    std::vector<LemmaViolation> violations;

    bool passed() const { return violations.empty(); }
};

namespace detail {

inline LemmaReport verify_lemma1_impl(long n_max, std::optional<long> j_max, long nu_max) {
    if (n_max < 0) throw std::invalid_argument("verify_lemma1: requires n_max >= 0");
    if (nu_max < 1) throw std::invalid_argument("verify_lemma1: requires nu_max >= 1");
    const long N = n_max + nu_max;
    LemmaReport rep;
    rep.n_max = n_max;
    rep.nu_max = nu_max;
    rep.j_max = j_max;
    rep.working_order = N;

    const QSeries u = series_U(N);
    const QSeries v_inf_0 = series_Vjn(inf, 0, N);

    for (long n = 0; n <= n_max; ++n) {
        const QSeries v_inf_n = (n == 0) ? v_inf_0 : series_Vjn(inf, n, N);

        // v_{inf,n;n+nu} <= v_{inf,0;nu}
        for (long nu = 1; nu <= nu_max && n + nu <= N; ++nu) {
            if (v_inf_n[n + nu] > v_inf_0[nu])
                rep.violations.push_back(
                    {std::nullopt, n, nu, v_inf_n[n + nu], v_inf_0[nu], "v_inf_n(n+nu) <= v_inf_0(nu)"});
        }

        auto check_pair = [&](std::optional<long> jtag, const QSeries& ujn, const QSeries& vjn) {
            for (long v = 0; v <= N; ++v) {
                if (abs(ujn[v]) > vjn[v])
                    rep.violations.push_back({jtag, n, v, abs(ujn[v]), vjn[v], "|u_jn| <= v_jn"});
                if (vjn[v] > v_inf_n[v])
                    rep.violations.push_back({jtag, n, v, vjn[v], v_inf_n[v], "v_jn <= v_inf_n"});
            }
            for (long nu = 1; nu <= nu_max && n + nu <= N; ++nu) {
                ++rep.checked;
                if (abs(ujn[n + nu]) > u[nu])
                    rep.violations.push_back({jtag, n, nu, abs(ujn[n + nu]), u[nu], "|u_jn(n+nu)| <= u(nu)"});
            }
        };

        const long j_hi = j_max ? *j_max : N;
        for (long j = n + 1; j <= j_hi; ++j)
            check_pair(j, series_Ujn(j, n, N), series_Vjn(j, n, N));
        check_pair(std::nullopt, series_Ujn(inf, n, N), v_inf_n);
    }
    return rep;
}

} // namespace detail

// Sweeps 0 <= n <= n_max, n < j <= j_max plus the infinite-index case, and
// 1 <= nu <= nu_max, asserting |u_{j,n;n+nu}| <= u_nu exactly along with the
// intermediate chains |u_{j,n}| <= v_{j,n} <= v_{inf,n} and
// v_{inf,n;n+nu} <= v_{inf,0;nu}.
inline LemmaReport verify_lemma1(long n_max, long j_max, long nu_max) {
    return detail::verify_lemma1_impl(n_max, j_max, nu_max);
}

inline LemmaReport verify_lemma1(long n_max, inf_t, long nu_max) {
    return detail::verify_lemma1_impl(n_max, std::nullopt, nu_max);
}

// Series in q and z; entry j is the QSeries coefficient of z^j. All entries
// share one q-order.
class BivariateSeries {
public:
    BivariateSeries(long z_order, long q_order)
        : zc_(static_cast<size_t>(checked(z_order)) + 1, QSeries(q_order)) {}

    long z_order() const { return static_cast<long>(zc_.size()) - 1; }
    long q_order() const { return zc_[0].order(); }
    QSeries& z_coeff(long j) { return zc_.at(static_cast<size_t>(j)); }
    const QSeries& z_coeff(long j) const { return zc_.at(static_cast<size_t>(j)); }

    friend bool operator==(const BivariateSeries&, const BivariateSeries&) = default;

private:
    static long checked(long z_order) {
        if (z_order < 0) throw std::invalid_argument("BivariateSeries: z_order must be >= 0");
        return z_order;
    }
    std::vector<QSeries> zc_;
};

// prod_{v=1}^{inf}(1 + q^v z) truncated to z-degree z_order / q-order q_order.
inline BivariateSeries bivariate_product(long z_order, long q_order) {
    BivariateSeries b(z_order, q_order);
    b.z_coeff(0) = QSeries::one(q_order);
    for (long v = 1; v <= q_order; ++v) {
        // multiply in place by (1 + q^v z); z-degrees descend so the source
        // row is still the pre-update value
        for (long j = std::min(z_order, v); j >= 1; --j) {
            QSeries& dst = b.z_coeff(j);
            const QSeries& src = b.z_coeff(j - 1);
            for (long t = q_order; t >= v; --t) dst.coeff(t) += src[t - v];
        }
    }
    return b;
}

struct IdentityReport {
    long z_order = 0;
    long q_order = 0;
    long coefficients_checked = 0;
    bool match = false;
    struct Mismatch {
        long j;
        long nu;
        Int product_side;
        Int sum_side;
    };
    std::optional<Mismatch> first_mismatch;
};

// Compares prod_{v>=1}(1+q^v z) against sum_j q^{j(j+1)/2} z^j / (q;q)_j
// coefficient by coefficient; exact equality required.
inline IdentityReport verify_product_identity(long z_order, long q_order) {
    if (z_order < 1) throw std::invalid_argument("verify_product_identity: requires z_order >= 1");
    if (q_order < 0) throw std::invalid_argument("verify_product_identity: requires q_order >= 0");
    const BivariateSeries lhs = bivariate_product(z_order, q_order);

    IdentityReport rep;
    rep.z_order = z_order;
    rep.q_order = q_order;
    rep.match = true;
    for (long j = 0; j <= z_order; ++j) {
        const long tri = j * (j + 1) / 2;
        QSeries rhs(q_order);
        if (tri <= q_order) rhs = shifted(invert_unit(pochhammer(j, q_order)), tri);
        for (long nu = 0; nu <= q_order; ++nu) {
            ++rep.coefficients_checked;
            if (lhs.z_coeff(j)[nu] == rhs[nu]) continue;
            rep.match = false;
            if (!rep.first_mismatch)
                rep.first_mismatch = IdentityReport::Mismatch{j, nu, lhs.z_coeff(j)[nu], rhs[nu]};
        }
    }
    return rep;
}

} // namespace theta
