#pragma once

// Static SVG rendering of a zero report: zeros as markers, counting circles,
// log-scaled radial axis (zero moduli grow geometrically, so a linear axis
// would collapse all but the outermost). Output is byte-identical for
// identical input.

#include <theta/analytic.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace theta {

namespace detail {

inline std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

} // namespace detail

inline std::string render_svg_string(const ZeroReport& report,
                                     const std::vector<Real>& circle_radii) {
    constexpr double kSize = 640.0;
    constexpr double kCenter = kSize / 2;
    constexpr double kRmax = kSize / 2 - 40.0;

    // radial range in log10, padded a quarter decade each side
    double lmin = 0.0, lmax = 1.0;
    bool have_any = false;
    auto widen = [&](double lv) {
        if (!have_any) {
            lmin = lmax = lv;
            have_any = true;
        } else {
            lmin = std::min(lmin, lv);
            lmax = std::max(lmax, lv);
        }
    };
    for (const auto& z : report.zeros)
        widen(static_cast<double>(log10(abs(z.location))));
    for (const auto& r : circle_radii) widen(static_cast<double>(log10(r)));
    lmin -= 0.25;
    lmax += 0.25;
    if (lmax - lmin < 0.5) lmax = lmin + 0.5;

    auto radial = [&](double lv) { return (lv - lmin) / (lmax - lmin) * kRmax; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" "
           "height=\"640\" viewBox=\"0 0 640 640\">\n";
    out += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
    out += "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    out += "<line x1=\"40\" y1=\"320\" x2=\"600\" y2=\"320\"/>\n";
    out += "<line x1=\"320\" y1=\"40\" x2=\"320\" y2=\"600\"/>\n";
    out += "</g>\n";

    // decade ticks along the positive real axis
    for (long d = static_cast<long>(std::ceil(lmin)); d <= static_cast<long>(std::floor(lmax));
         ++d) {
        const double r = radial(static_cast<double>(d));
        out += "<line x1=\"" + detail::fmt("%.2f", kCenter + r) + "\" y1=\"315\" x2=\"" +
               detail::fmt("%.2f", kCenter + r) + "\" y2=\"325\" stroke=\"#888888\"/>\n";
        out += "<text x=\"" + detail::fmt("%.2f", kCenter + r) +
               "\" y=\"336\" font-size=\"10\" text-anchor=\"middle\" fill=\"#555555\">1e" +
               std::to_string(d) + "</text>\n";
    }

    // counting circles
    long circle_index = 0;
    for (const auto& r : circle_radii) {
        ++circle_index;
        const double rr = radial(static_cast<double>(log10(r)));
        out += "<circle cx=\"320\" cy=\"320\" r=\"" + detail::fmt("%.2f", rr) +
               "\" fill=\"none\" stroke=\"#6688bb\" stroke-dasharray=\"6 4\"/>\n";
        out += "<text x=\"320\" y=\"" + detail::fmt("%.2f", kCenter - rr - 4) +
               "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#6688bb\">n=" +
               std::to_string(circle_index) + "</text>\n";
    }

    // zeros; angle preserved, radius log-scaled
    for (const auto& z : report.zeros) {
        const double m = static_cast<double>(abs(z.location));
        const double angle =
            std::atan2(static_cast<double>(z.location.im), static_cast<double>(z.location.re));
        const double rr = radial(std::log10(m));
        const double x = kCenter + rr * std::cos(angle);
        const double y = kCenter - rr * std::sin(angle);
        out += "<circle cx=\"" + detail::fmt("%.2f", x) + "\" cy=\"" + detail::fmt("%.2f", y) +
               "\" r=\"4\" fill=\"#cc3333\"/>\n";
        if (z.multiplicity > 1) {
            out += "<text x=\"" + detail::fmt("%.2f", x + 6) + "\" y=\"" +
                   detail::fmt("%.2f", y - 6) + "\" font-size=\"10\" fill=\"#cc3333\">x" +
                   std::to_string(z.multiplicity) + "</text>\n";
        }
    }

    out += "<text x=\"12\" y=\"20\" font-size=\"12\" fill=\"#333333\">q = " +
           detail::fmt("%.6g", static_cast<double>(report.q.re)) + " + " +
           detail::fmt("%.6g", static_cast<double>(report.q.im)) + "i, zeros: " +
           std::to_string(report.zeros.size()) + "</text>\n";
    out += "</svg>\n";
    return out;
}

inline void render_svg(const ZeroReport& report, const std::vector<Real>& circle_radii,
                       const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("render_svg: cannot open " + path);
    const std::string body = render_svg_string(report, circle_radii);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw std::runtime_error("render_svg: write failed for " + path);
}

} // namespace theta
