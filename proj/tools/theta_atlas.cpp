// theta-atlas: command-line front end for the partial theta zero-counting
// toolkit. Runs verifications and certifications, emits JSON reports to
// stdout and CSV/SVG files to --out. Exit codes: 0 success / all checks pass,
// 1 a verification failed, 2 numerical degeneracy, 3 bad arguments.

#include <theta/analytic.hpp>
#include <theta/bounds.hpp>
#include <theta/qseries.hpp>
#include <theta/report_json.hpp>
#include <theta/svg.hpp>
#include <theta/version.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using theta::Cx;
using theta::Json;
using theta::PrecisionContext;
using theta::Real;

struct GlobalOpts {
    unsigned prec_bits = 256;
    double tol = 1e-30;
    std::string out;
    std::string format = "json";
};

PrecisionContext make_ctx(const GlobalOpts& g) {
    PrecisionContext ctx;
    ctx.mantissa_bits = g.prec_bits;
    ctx.eval_tolerance = g.tol;
    ctx.validate();
    return ctx;
}

// "re,im" or a bare real
Cx parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return Cx(Real(text));
    return Cx(Real(text.substr(0, comma)), Real(text.substr(comma + 1)));
}

Json make_envelope(const std::string& command, const GlobalOpts& g) {
    return Json{{"schema", theta::kSchema}, {"tool", "theta-atlas"},
                {"version", theta::kVersion}, {"command", command},
                {"precision_bits", g.prec_bits}, {"eval_tolerance", g.tol}};
}

int exit_code_for_checks(const Json& checks) {
    for (const auto& item : checks.items())
        if (item.value().is_boolean() && !item.value().get<bool>()) return 1;
    return 0;
}

void write_out_file(const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw std::runtime_error("write failed for " + path);
}

// JSON goes to stdout; CSV (when requested) goes to --out.
int finish(Json& report, const GlobalOpts& g,
           const std::chrono::steady_clock::time_point& started, const std::string& csv_body) {
    report["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    if (g.format == "csv") {
        if (g.out.empty()) throw std::invalid_argument("--format csv requires --out");
        write_out_file(g.out, csv_body);
    }
    std::cout << report.dump(2) << "\n";
    return report.contains("checks") ? exit_code_for_checks(report["checks"]) : 0;
}

std::string csv_of_zeros(const theta::ZeroReport& rep) {
    std::ostringstream csv;
    csv << "index,re,im,modulus,multiplicity,residual\n";
    long idx = 0;
    for (const auto& z : rep.zeros) {
        csv << ++idx << "," << static_cast<double>(z.location.re) << ","
            << static_cast<double>(z.location.im) << ","
            << static_cast<double>(abs(z.location)) << "," << z.multiplicity << ","
            << static_cast<double>(z.residual) << "\n";
    }
    return csv.str();
}

// ---- subcommand runners ------------------------------------------------

struct EvalParams {
    std::string q, z = "0", fn = "theta", j = "0";
};

int run_eval(const EvalParams& p, const GlobalOpts& g) {
    const auto started = std::chrono::steady_clock::now();
    const PrecisionContext ctx = make_ctx(g);
    theta::PrecisionScope scope(ctx.mantissa_bits);
    const Cx q = parse_complex(p.q);
    const Cx z = parse_complex(p.z);

    Cx value;
    if (p.fn == "theta")
        value = theta::theta_eval(q, z, ctx);
    else if (p.fn == "theta-prime")
        value = theta::theta_prime_eval(q, z, ctx);
    else if (p.fn == "u")
        value = theta::u_eval(q, z, ctx);
    else if (p.fn == "poch")
        value = (p.j == "inf") ? theta::pochhammer_num(q, theta::inf, ctx)
                               : theta::pochhammer_num(q, std::stol(p.j), ctx);
    else
        throw std::invalid_argument("--fn must be theta, theta-prime, u or poch");

    Json report = make_envelope("eval", g);
    report["params"] = Json{{"q", p.q}, {"z", p.z}, {"fn", p.fn}, {"j", p.j}};
    report["result"] = Json{{"value", theta::json_cx(value)}};
    std::ostringstream csv;
    csv << "re,im\n"
        << static_cast<double>(value.re) << "," << static_cast<double>(value.im) << "\n";
    return finish(report, g, started, csv.str());
}

struct ZerosParams {
    std::string q;
    long count = 1;
};

int run_zeros(const ZerosParams& p, const GlobalOpts& g) {
    const auto started = std::chrono::steady_clock::now();
    const PrecisionContext ctx = make_ctx(g);
    theta::PrecisionScope scope(ctx.mantissa_bits);
    const Cx q = parse_complex(p.q);
    const auto rep = theta::find_zeros(q, p.count, ctx);

    bool residuals_ok = true;
    for (const auto& z : rep.zeros)
        if (!(z.residual <= Real(ctx.eval_tolerance))) residuals_ok = false;

    Json report = make_envelope("zeros", g);
    report["params"] = Json{{"q", p.q}, {"count", p.count}};
    report["result"] = theta::json_of(rep);
    report["checks"] = Json{{"contour_matches_multiplicity", rep.cross_check_passed()},
                            {"residuals_within_tolerance", residuals_ok}};
    return finish(report, g, started, csv_of_zeros(rep));
}

struct CountParams {
    std::string q;
    long n = 0;
    std::string radius; // overrides the |q|^{-n-1/2} default when set
};

int run_count(const CountParams& p, const GlobalOpts& g) {
    const auto started = std::chrono::steady_clock::now();
    const PrecisionContext ctx = make_ctx(g);
    theta::PrecisionScope scope(ctx.mantissa_bits);
    const Cx q = parse_complex(p.q);
    if (p.n <= 0 && p.radius.empty())
        throw std::invalid_argument("count: give --n or --radius");

    Real radius;
    if (!p.radius.empty())
        radius = Real(p.radius);
    else
        radius = pow(abs(q), -(Real(p.n) + Real(1) / 2));

    const auto res = theta::count_zeros(q, radius, ctx);

    Json report = make_envelope("count", g);
    report["params"] = Json{{"q", p.q}, {"n", p.n}, {"radius", theta::full_str(radius)}};
    report["result"] = theta::json_of(res);
    report["result"]["radius"] = theta::json_real(radius);
    if (p.n > 0) report["checks"] = Json{{"count_equals_n", res.count == p.n}};
    std::ostringstream csv;
    csv << "count,radius,quadrature_points,residual\n"
        << res.count << "," << static_cast<double>(radius) << "," << res.quadrature_points << ","
        << res.residual << "\n";
    return finish(report, g, started, csv.str());
}

struct CertifyParams {
    std::string delta0, delta;
    long grid_mod = 3, grid_phase = 4;
    bool skip_empirical = false;
};

Json empirical_scan(const theta::AnnulusSpec& annulus, long n0, long grid_mod, long grid_phase,
                    const PrecisionContext& ctx) {
    const Real two_pi = 2 * theta::real_pi();
    Json points = Json::array();
    long overall = 1;
    bool any_degenerate = false;
    for (long i = 0; i < grid_mod; ++i) {
        const Real frac = (grid_mod == 1) ? Real(1) : Real(i) / Real(grid_mod - 1);
        const Real mod = annulus.delta0 + (annulus.delta - annulus.delta0) * frac;
        for (long k = 0; k < grid_phase; ++k) {
            const Cx q = theta::polar(mod, two_pi * Real(k) / Real(grid_phase));
            Json entry{{"q", theta::json_cx(q)}};
            try {
                std::vector<long> counts(static_cast<size_t>(n0) + 1, -1);
                for (long n = 1; n <= n0; ++n) {
                    const Real radius = pow(mod, -(Real(n) + Real(1) / 2));
                    counts[static_cast<size_t>(n)] = theta::count_zeros(q, radius, ctx).count;
                }
                long min_n = n0 + 1;
                for (long n = n0; n >= 1; --n) {
                    if (counts[static_cast<size_t>(n)] != n) break;
                    min_n = n;
                }
                entry["empirical_min_n"] = min_n;
                overall = std::max(overall, min_n);
            } catch (const theta::numeric_error& e) {
                entry["degenerate"] = e.what();
                any_degenerate = true;
            }
            points.push_back(entry);
        }
    }
    return Json{{"note", "smallest n with exact count at each grid point; "
                         "independent of the certified n0 and usually far below it"},
                {"grid_mod", grid_mod},
                {"grid_phase", grid_phase},
                {"empirical_min_n", overall},
                {"any_degenerate", any_degenerate},
                {"points", points}};
}

int run_certify(const CertifyParams& p, const GlobalOpts& g) {
    const auto started = std::chrono::steady_clock::now();
    const PrecisionContext ctx = make_ctx(g);
    theta::PrecisionScope scope(ctx.mantissa_bits);
    const theta::AnnulusSpec annulus{Real(p.delta0), Real(p.delta)};
    annulus.validate();
    const auto cert = theta::certify_threshold(annulus, ctx);

    Json report = make_envelope("certify", g);
    report["params"] = Json{{"delta0", p.delta0}, {"delta", p.delta}};
    report["result"] = Json{{"certificate", theta::json_of(cert)}};
    if (!p.skip_empirical)
        report["result"]["empirical"] =
            empirical_scan(annulus, cert.n0, p.grid_mod, p.grid_phase, ctx);
    report["checks"] =
        Json{{"z1_below_target", cert.z1_bound.upper() < cert.target.lower()},
             {"z2_at_most_target", cert.z2_bound.upper() <= cert.target.lower()},
             {"z3_below_target", cert.z3_bound.upper() < cert.target.lower()}};

    std::ostringstream csv;
    csv << "key,value\n";
    csv << "delta0," << p.delta0 << "\n";
    csv << "delta," << p.delta << "\n";
    csv << "m," << cert.m << "\n";
    csv << "n0," << cert.n0 << "\n";
    csv << "z1," << static_cast<double>(cert.z1_bound.value) << "\n";
    csv << "z2," << static_cast<double>(cert.z2_bound.value) << "\n";
    csv << "z3," << static_cast<double>(cert.z3_bound.value) << "\n";
    csv << "target," << static_cast<double>(cert.target.value) << "\n";
    return finish(report, g, started, csv.str());
}

struct LemmaParams {
    long nmax = 6;
    std::string jmax = "18";
    long numax = 40;
};

int run_lemma(const LemmaParams& p, const GlobalOpts& g) {
    const auto started = std::chrono::steady_clock::now();
    const auto rep = (p.jmax == "inf") ? theta::verify_lemma1(p.nmax, theta::inf, p.numax)
                                       : theta::verify_lemma1(p.nmax, std::stol(p.jmax), p.numax);
    Json report = make_envelope("lemma", g);
    report["params"] = Json{{"nmax", p.nmax}, {"jmax", p.jmax}, {"numax", p.numax}};
    report["result"] = theta::json_of(rep);
    report["checks"] = Json{{"passed", rep.passed()}};
    std::ostringstream csv;
    csv << "checked,violations\n" << rep.checked << "," << rep.violations.size() << "\n";
    return finish(report, g, started, csv.str());
}

struct IdentityParams {
    long zorder = 10;
    long qorder = 30;
};

int run_identity(const IdentityParams& p, const GlobalOpts& g) {
    const auto started = std::chrono::steady_clock::now();
    const auto rep = theta::verify_product_identity(p.zorder, p.qorder);
    Json report = make_envelope("identity", g);
    report["params"] = Json{{"zorder", p.zorder}, {"qorder", p.qorder}};
    report["result"] = theta::json_of(rep);
    report["checks"] = Json{{"match", rep.match}};
    std::ostringstream csv;
    csv << "z_order,q_order,match\n"
        << rep.z_order << "," << rep.q_order << "," << (rep.match ? 1 : 0) << "\n";
    return finish(report, g, started, csv.str());
}

struct GammaParams {
    long p = 1, r = 12, order = 40;
    bool sweep = false;
};

int run_gamma(const GammaParams& p, const GlobalOpts& g) {
    const auto started = std::chrono::steady_clock::now();
    Json report = make_envelope("gamma", g);
    report["params"] =
        Json{{"p", p.p}, {"r", p.r}, {"order", p.order}, {"sweep", p.sweep}};
    bool all_passed = true;
    std::ostringstream csv;
    csv << "p,r,order,passed\n";
    if (p.sweep) {
        Json results = Json::array();
        for (long pp = p.p; pp <= p.r; ++pp) {
            for (long rr = pp; rr <= p.r; ++rr) {
                const auto rep = theta::verify_gamma_domination(pp, rr, p.order);
                all_passed = all_passed && rep.passed;
                results.push_back(theta::json_of(rep));
                csv << pp << "," << rr << "," << p.order << "," << (rep.passed ? 1 : 0) << "\n";
            }
        }
        report["result"] = Json{{"pairs", results}};
    } else {
        const auto rep = theta::verify_gamma_domination(p.p, p.r, p.order);
        all_passed = rep.passed;
        report["result"] = theta::json_of(rep);
        csv << p.p << "," << p.r << "," << p.order << "," << (rep.passed ? 1 : 0) << "\n";
    }
    report["checks"] = Json{{"passed", all_passed}};
    return finish(report, g, started, csv.str());
}

struct PlotParams {
    std::string q;
    long count = 5;
};

int run_plot(const PlotParams& p, const GlobalOpts& g) {
    const auto started = std::chrono::steady_clock::now();
    const PrecisionContext ctx = make_ctx(g);
    theta::PrecisionScope scope(ctx.mantissa_bits);
    if (g.out.empty()) throw std::invalid_argument("plot: --out is required");
    const Cx q = parse_complex(p.q);
    const auto rep = theta::find_zeros(q, p.count, ctx);
    std::vector<Real> circles;
    circles.reserve(static_cast<size_t>(p.count));
    const Real aq = abs(q);
    for (long n = 1; n <= p.count; ++n) circles.push_back(pow(aq, -(Real(n) + Real(1) / 2)));
    theta::render_svg(rep, circles, g.out);

    Json report = make_envelope("plot", g);
    report["params"] = Json{{"q", p.q}, {"count", p.count}, {"out", g.out}};
    report["result"] = Json{{"zeros", rep.zeros.size()}, {"svg", g.out}};
    report["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - started)
                            .count();
    std::cout << report.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"partial theta zero counting, certification and verification"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    app.set_version_flag("--version", theta::kVersion);

    GlobalOpts global;
    if (const char* env = std::getenv("THETA_ATLAS_PREC_BITS")) {
        const long bits = std::strtol(env, nullptr, 10);
        if (bits >= 64) global.prec_bits = static_cast<unsigned>(bits);
    }
    app.add_option("--prec-bits", global.prec_bits, "working precision in bits (>= 64)");
    app.add_option("--tol", global.tol, "relative truncation tolerance");
    app.add_option("--out", global.out, "output path for CSV/SVG");
    app.add_option("--format", global.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));

    EvalParams eval_params;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate theta, theta', u or (q;q)_j");
    eval_cmd->add_option("--q", eval_params.q, "q as re,im or a bare real")->required();
    eval_cmd->add_option("--z", eval_params.z, "z as re,im or a bare real");
    eval_cmd->add_option("--fn", eval_params.fn, "theta | theta-prime | u | poch");
    eval_cmd->add_option("--j", eval_params.j, "pochhammer index (integer or inf)");

    ZerosParams zeros_params;
    auto* zeros_cmd = app.add_subcommand("zeros", "locate the smallest zeros of theta(q,.)");
    zeros_cmd->add_option("--q", zeros_params.q)->required();
    zeros_cmd->add_option("--count", zeros_params.count)->check(CLI::PositiveNumber);

    CountParams count_params;
    auto* count_cmd = app.add_subcommand("count", "argument-principle count in a disk");
    count_cmd->add_option("--q", count_params.q)->required();
    count_cmd->add_option("--n", count_params.n, "use radius |q|^{-n-1/2} and expect n zeros");
    count_cmd->add_option("--radius", count_params.radius, "explicit disk radius");

    CertifyParams certify_params;
    auto* certify_cmd = app.add_subcommand("certify", "certified threshold n0 for an annulus");
    certify_cmd->add_option("--delta0", certify_params.delta0)->required();
    certify_cmd->add_option("--delta", certify_params.delta)->required();
    certify_cmd->add_option("--grid-mod", certify_params.grid_mod)->check(CLI::PositiveNumber);
    certify_cmd->add_option("--grid-phase", certify_params.grid_phase)
        ->check(CLI::PositiveNumber);
    certify_cmd->add_flag("--skip-empirical", certify_params.skip_empirical,
                          "skip the empirical minimal-n scan");

    LemmaParams lemma_params;
    auto* lemma_cmd = app.add_subcommand("lemma", "verify the coefficient majorization");
    lemma_cmd->add_option("--nmax", lemma_params.nmax);
    lemma_cmd->add_option("--jmax", lemma_params.jmax, "integer or inf");
    lemma_cmd->add_option("--numax", lemma_params.numax);

    IdentityParams identity_params;
    auto* identity_cmd = app.add_subcommand("identity", "verify the product/sum identity");
    identity_cmd->add_option("--zorder", identity_params.zorder);
    identity_cmd->add_option("--qorder", identity_params.qorder);

    GammaParams gamma_params;
    auto* gamma_cmd = app.add_subcommand("gamma", "verify gamma coefficient domination");
    gamma_cmd->add_option("--p", gamma_params.p);
    gamma_cmd->add_option("--r", gamma_params.r);
    gamma_cmd->add_option("--order", gamma_params.order);
    gamma_cmd->add_flag("--sweep", gamma_params.sweep, "all pairs p <= p' <= r' <= r");

    PlotParams plot_params;
    auto* plot_cmd = app.add_subcommand("plot", "SVG plot of zeros and counting circles");
    plot_cmd->add_option("--q", plot_params.q)->required();
    plot_cmd->add_option("--count", plot_params.count)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 3;
    }

    try {
        if (eval_cmd->parsed()) return run_eval(eval_params, global);
        if (zeros_cmd->parsed()) return run_zeros(zeros_params, global);
        if (count_cmd->parsed()) return run_count(count_params, global);
        if (certify_cmd->parsed()) return run_certify(certify_params, global);
        if (lemma_cmd->parsed()) return run_lemma(lemma_params, global);
        if (identity_cmd->parsed()) return run_identity(identity_params, global);
        if (gamma_cmd->parsed()) return run_gamma(gamma_params, global);
        if (plot_cmd->parsed()) return run_plot(plot_params, global);
    } catch (const theta::numeric_error& e) {
        std::cout << Json{{"schema", theta::kSchema}, {"error", e.what()}}.dump(2) << "\n";
        std::cerr << "numerical degeneracy: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bad arguments: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "bad arguments: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "I/O or numeric failure: " << e.what() << "\n";
        return 2;
    }
    return 3;
}
