#pragma once

// JSON forms of the report types. Reals carry both a double approximation
// ("approx") and the full-precision decimal string ("value") so reports
// round-trip exactly and runs can be compared bit for bit.

#include <theta/analytic.hpp>
#include <theta/bounds.hpp>
#include <theta/qseries.hpp>
#include <theta/version.hpp>

#include <json.hpp>

#include <string>

namespace theta {

using Json = nlohmann::ordered_json;

inline std::string full_str(const Real& v) { return v.str(); }

inline Json json_real(const Real& v) {
    return Json{{"approx", static_cast<double>(v)}, {"value", full_str(v)}};
}

inline Json json_cx(const Cx& v) {
    return Json{{"re", json_real(v.re)}, {"im", json_real(v.im)}};
}

inline Json json_approx(const Approx& a) {
    return Json{{"approx", static_cast<double>(a.value)},
                {"value", full_str(a.value)},
                {"error", full_str(a.err)}};
}

inline Json json_of(const CountResult& r) {
    return Json{{"count", r.count},
                {"quadrature_points", r.quadrature_points},
                {"residual", r.residual}};
}

inline Json json_of(const ZeroReport& r) {
    Json zeros = Json::array();
    for (const auto& z : r.zeros) {
        zeros.push_back(Json{{"location", json_cx(z.location)},
                             {"multiplicity", z.multiplicity},
                             {"residual", json_real(z.residual)}});
    }
    return Json{{"q", json_cx(r.q)},
                {"disk_radius", json_real(r.disk_radius)},
                {"contour_count", r.contour_count},
                {"quadrature_points", r.quadrature_points},
                {"contour_residual", r.contour_residual},
                {"multiplicity_in_disk", r.multiplicity_in_disk()},
                {"cross_check_passed", r.cross_check_passed()},
                {"zeros", zeros}};
}

inline Json json_of(const BoundSuite& s) {
    return Json{{"x", json_real(s.x)},          {"P_inf", json_approx(s.P_inf)},
                {"U", json_approx(s.U_val)},    {"R", json_approx(s.R_val)},
                {"T", json_approx(s.T_val)},    {"M", json_approx(s.M_val)},
                {"precision_bits", s.precision_bits}};
}

inline Json json_of(const ThresholdCertificate& c) {
    return Json{{"schema", kSchema},
                {"library_version", kVersion},
                {"precision_bits", c.precision_bits},
                {"annulus", Json{{"delta0", json_real(c.annulus.delta0)},
                                 {"delta", json_real(c.annulus.delta)}}},
                {"m", c.m},
                {"n0", c.n0},
                {"suite_at_delta", json_of(c.suite_at_delta)},
                {"z1_bound", json_approx(c.z1_bound)},
                {"z2_bound", json_approx(c.z2_bound)},
                {"z3_bound", json_approx(c.z3_bound)},
                {"target", json_approx(c.target)}};
}

inline Json json_of(const GammaDominationReport& r) {
    Json j{{"p", r.p}, {"r", r.r}, {"order", r.order}, {"checked", r.checked},
           {"passed", r.passed}};
    if (r.first_violation) {
        j["first_violation"] = Json{{"nu", r.first_violation->nu},
                                    {"gamma_plus", r.first_violation->gamma_plus.str()},
                                    {"gamma_minus", r.first_violation->gamma_minus.str()}};
    }
    return j;
}

inline Json json_of(const LemmaReport& r) {
    Json violations = Json::array();
    for (const auto& v : r.violations) {
        Json item{{"n", v.n}, {"nu", v.nu},          {"lhs", v.lhs.str()},
                  {"rhs", v.rhs.str()}, {"relation", v.relation}};
        if (v.j)
            item["j"] = *v.j;
        else
            item["j"] = "inf";
        violations.push_back(item);
    }
    Json j{{"n_max", r.n_max},
           {"nu_max", r.nu_max},
           {"working_order", r.working_order},
           {"checked", r.checked},
           {"passed", r.passed()},
           {"violations", violations}};
    if (r.j_max)
        j["j_max"] = *r.j_max;
    else
        j["j_max"] = "inf";
    return j;
}

inline Json json_of(const IdentityReport& r) {
    Json j{{"z_order", r.z_order},
           {"q_order", r.q_order},
           {"coefficients_checked", r.coefficients_checked},
           {"match", r.match}};
    if (r.first_mismatch) {
        j["first_mismatch"] = Json{{"j", r.first_mismatch->j},
                                   {"nu", r.first_mismatch->nu},
                                   {"product_side", r.first_mismatch->product_side.str()},
                                   {"sum_side", r.first_mismatch->sum_side.str()}};
    }
    return j;
}

} // namespace theta
