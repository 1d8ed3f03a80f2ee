#pragma once

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "secantx/analysis.hpp"
#include "secantx/funcspec.hpp"
#include "secantx/iterate.hpp"
#include "secantx/real.hpp"

namespace secantx::cli {

// Exit codes: 0 converged, 1 usage/parse error, 2 iteration budget exhausted,
// 3 breakdown (zero derivative, duplicate node, non-finite values).
inline int exit_code(Termination t) {
    switch (t) {
        case Termination::Converged:
        case Termination::ResidualZero: return 0;
        case Termination::MaxIterations: return 2;
        default: return 3;
    }
}

inline std::string format_fixed(const Real& x, int decimals) {
    if (x.is_nan()) return "nan";
    if (x.is_inf()) return x.is_negative() ? "-inf" : "inf";
    char* out = nullptr;
    mpfr_asprintf(&out, "%.*RNf", decimals, x.raw());
    std::string s(out);
    mpfr_free_str(out);
    return s;
}

namespace detail {

struct ProblemSetup {
    ProblemSpec problem;
    int k = 2;
    std::vector<Real> initial_points;
    std::optional<Real> alpha;
};

inline mpfr_prec_t default_precision_bits() {
    if (const char* env = std::getenv("SECANTX_PRECISION_BITS")) {
        char* end = nullptr;
        long bits = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || bits < MPFR_PREC_MIN)
            throw std::invalid_argument(
                "SECANTX_PRECISION_BITS must be a positive integer, got \"" + std::string(env) +
                "\"");
        return static_cast<mpfr_prec_t>(bits);
    }
    return kDefaultPrecision;
}

inline std::vector<Real> parse_point_list(const std::string& text, mpfr_prec_t prec) {
    std::vector<Real> pts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) pts.push_back(Real::parse(item, prec));
    if (pts.empty()) throw std::invalid_argument("empty point list");
    return pts;
}

inline ProblemSetup make_setup(const std::string& function_arg, int k_flag,
                               const std::string& x0_flag, const std::string& alpha_flag,
                               mpfr_prec_t prec) {
    ProblemSetup s;
    if (!function_arg.empty() && function_arg.front() == '@') {
        const CorpusEntry& entry = corpus_lookup(function_arg.substr(1));
        s.problem = entry.problem(prec);
        s.k = k_flag > 0 ? k_flag : entry.suggested_k;
        s.initial_points = x0_flag.empty() ? entry.initial_points(prec)
                                           : parse_point_list(x0_flag, prec);
    } else {
        Expression f = Expression::parse(function_arg);
        s.problem.f = [f](const Real& x) { return f.eval(x); };
        s.problem.name = function_arg;
        s.k = k_flag > 0 ? k_flag : 2;
        if (x0_flag.empty())
            throw std::invalid_argument("--x0 is required for expression functions");
        s.initial_points = parse_point_list(x0_flag, prec);
    }
    if (!alpha_flag.empty()) s.problem.known_root = Real::parse(alpha_flag, prec);
    if (s.problem.known_root) s.alpha = s.problem.known_root->with_precision(prec);
    return s;
}

struct OutputRow {
    int n = 0;
    std::string x;
    std::string f;
    std::optional<std::string> epsilon;
    std::optional<std::string> sigma;
    std::optional<std::string> order_estimate;
};

inline std::vector<OutputRow> build_rows(const SolveReport& report, int k, int digits) {
    std::vector<OutputRow> rows;
    const bool with_error = !report.records.empty() && report.records.front().error.has_value();
    std::vector<std::optional<Real>> sigmas, orders;
    if (with_error) {
        std::vector<Real> errs = recorded_errors(report);
        sigmas = sigma_sequence(errs, k);
        orders = empirical_order(errs);
    }
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const auto& r = report.records[i];
        OutputRow row;
        row.n = r.n;
        row.x = format(r.x, digits);
        row.f = format(r.f, digits);
        if (r.error) row.epsilon = format(*r.error, digits);
        if (with_error && sigmas[i]) row.sigma = format(*sigmas[i], digits);
        if (with_error && orders[i]) row.order_estimate = format(*orders[i], digits);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void render_table(std::ostream& out, const std::vector<OutputRow>& rows,
                         const SolveReport& report, int digits) {
    const std::size_t wx = static_cast<std::size_t>(digits) + 8;
    out << std::left << std::setw(5) << "n" << std::setw(wx) << "x_n" << std::setw(wx)
        << "epsilon_n" << std::setw(wx) << "sigma" << "order_estimate" << "\n";
    for (const auto& r : rows) {
        out << std::left << std::setw(5) << r.n << std::setw(wx) << r.x << std::setw(wx)
            << r.epsilon.value_or("*") << std::setw(wx) << r.sigma.value_or("*")
            << r.order_estimate.value_or("*") << "\n";
    }
    out << "termination: " << to_string(report.termination) << "\n";
    out << "final_x: " << format(report.final_x, digits) << "\n";
    out << "evaluations: " << report.evaluations << "\n";
}

inline void render_csv(std::ostream& out, const std::vector<OutputRow>& rows) {
    out << "n,x_n,epsilon_n,sigma,order_estimate\n";
    for (const auto& r : rows) {
        out << r.n << ',' << r.x << ',' << r.epsilon.value_or("") << ','
            << r.sigma.value_or("") << ',' << r.order_estimate.value_or("") << "\n";
    }
}

inline nlohmann::json config_json(const std::string& function_arg, const ProblemSetup& s,
                                  const SolverConfig& config, int digits) {
    nlohmann::json cfg;
    cfg["function"] = function_arg;
    cfg["k"] = s.k;
    cfg["precision"] = static_cast<long>(config.precision);
    nlohmann::json x0 = nlohmann::json::array();
    for (const auto& p : config.initial_points) x0.push_back(format(p, digits));
    cfg["x0"] = x0;
    cfg["alpha"] = s.alpha ? nlohmann::json(format(*s.alpha, digits)) : nlohmann::json(nullptr);
    cfg["tol_residual"] = format(config.residual_tolerance(), 6);
    cfg["tol_step"] = format(config.step_tolerance(), 6);
    cfg["max_iterations"] = config.max_iterations;
    return cfg;
}

inline void render_json(std::ostream& out, const std::vector<OutputRow>& rows,
                        const SolveReport& report, nlohmann::json cfg) {
    nlohmann::json doc;
    doc["config"] = std::move(cfg);
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json rec;
        rec["n"] = r.n;
        rec["x"] = r.x;
        rec["f"] = r.f;
        rec["epsilon"] = r.epsilon ? nlohmann::json(*r.epsilon) : nlohmann::json(nullptr);
        rec["sigma"] = r.sigma ? nlohmann::json(*r.sigma) : nlohmann::json(nullptr);
        rec["order_estimate"] =
            r.order_estimate ? nlohmann::json(*r.order_estimate) : nlohmann::json(nullptr);
        records.push_back(std::move(rec));
    }
    doc["records"] = std::move(records);
    doc["termination"] = to_string(report.termination);
    out << doc.dump(2) << "\n";
}

struct MethodSpec {
    std::string label;
    bool newton = false;
    int k = 1;
    int evals_per_iteration = 1;
};

inline MethodSpec parse_method(const std::string& text) {
    MethodSpec m;
    m.label = text;
    if (text == "newton") {
        m.newton = true;
        m.evals_per_iteration = 2;
        return m;
    }
    if (text == "secant") {
        m.k = 1;
        return m;
    }
    if (text.rfind("gsec:", 0) == 0) {
        int k = std::stoi(text.substr(5));
        if (k < 1) throw std::invalid_argument("gsec order must be >= 1");
        m.k = k;
        return m;
    }
    throw std::invalid_argument("unknown method \"" + text + "\" (expected gsec:<k>, newton, or secant)");
}

}  // namespace detail

inline int cmd_solve(const std::string& function_arg, int k_flag, const std::string& x0_flag,
                     const std::string& alpha_flag, mpfr_prec_t prec,
                     const std::string& tol_step, const std::string& tol_residual, int max_iter,
                     const std::string& fmt, int digits_flag, std::ostream& out,
                     std::ostream& err) {
    try {
        detail::ProblemSetup setup =
            detail::make_setup(function_arg, k_flag, x0_flag, alpha_flag, prec);
        SolverConfig config;
        config.k = setup.k;
        config.initial_points = setup.initial_points;
        config.precision = prec;
        config.max_iterations = max_iter;
        if (!tol_step.empty()) config.tol_step = Real::parse(tol_step, prec);
        if (!tol_residual.empty()) config.tol_residual = Real::parse(tol_residual, prec);

        const int digits = digits_flag > 0 ? digits_flag
                          : (fmt == "json" ? roundtrip_digits(prec) : 17);
        SolveReport report = solve(setup.problem, config);
        auto rows = detail::build_rows(report, config.k, digits);
        if (fmt == "csv") {
            detail::render_csv(out, rows);
        } else if (fmt == "json") {
            detail::render_json(out, rows, report,
                                detail::config_json(function_arg, setup, config, digits));
        } else {
            detail::render_table(out, rows, report, digits);
        }
        return exit_code(report.termination);
    } catch (const ParseError& e) {
        err << "syntax error: " << e.what() << "\n";
        return 1;
    } catch (const NotFound& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

/// Re-runs the library's reference experiment: x^3 - 8 = 0 with k = 2, starts
/// (5, 4), 113-bit arithmetic. Prints the five canonical columns and checks the
/// two asymptotic limits (sigma -> -1/12 and order -> s_2).
inline int cmd_repro_table2(std::ostream& out) {
    const mpfr_prec_t prec = kQuadPrecision;
    const CorpusEntry& entry = corpus_lookup("paper-x3m8");
    SolverConfig config;
    config.k = 2;
    config.initial_points = entry.initial_points(prec);
    config.precision = prec;
    SolveReport report = solve(entry.problem(prec), config);

    std::vector<Real> errs = recorded_errors(report);
    auto sigmas = sigma_sequence(errs, config.k);
    auto orders = empirical_order(errs);

    out << std::left << std::setw(4) << "n" << std::setw(45) << "x_n" << std::setw(13)
        << "epsilon_n" << std::setw(10) << "sigma" << "order" << "\n";
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        out << std::left << std::setw(4) << i << std::setw(45) << format(report.records[i].x, 36)
            << std::setw(13) << format(errs[i], 4) << std::setw(10)
            << (sigmas[i] ? format_fixed(*sigmas[i], 4) : "*")
            << (orders[i] ? format_fixed(*orders[i], 3) : "*") << "\n";
    }

    // Limit checks, cf. the asymptotic error constant and the order estimate.
    const Real minus_l = Real(1, prec) / 12;  // |L| for this problem
    std::optional<Real> sigma_last;
    for (const auto& s : sigmas)
        if (s) sigma_last = *s;
    bool sigma_ok = sigma_last && abs(abs(*sigma_last) - minus_l) / minus_l < Real(0.01, prec) &&
                    sigma_last->is_negative();
    out << "sigma -> -1/12 (within 1%): " << (sigma_ok ? "PASS" : "FAIL");
    if (sigma_last) out << "  [last defined sigma = " << format_fixed(*sigma_last, 4) << "]";
    out << "\n";

    const Real s2 = order_of_convergence(2, prec).with_precision(prec);
    std::vector<Real> defined_orders;
    for (const auto& o : orders)
        if (o) defined_orders.push_back(*o);
    bool order_ok = defined_orders.size() >= 2;
    if (order_ok) {
        const Real tol(0.1, prec);
        for (std::size_t i = defined_orders.size() - 2; i < defined_orders.size(); ++i)
            order_ok = order_ok && abs(defined_orders[i] - s2) < tol;
    }
    out << "order -> s_2 = " << format_fixed(s2, 5)
        << " (last two estimates within 0.1): " << (order_ok ? "PASS" : "FAIL") << "\n";
    return (sigma_ok && order_ok && exit_code(report.termination) == 0) ? 0 : 1;
}

inline int cmd_order_table(int k_max, int digits, std::ostream& out) {
    if (k_max < 1) {
        out << "k_max must be >= 1\n";
        return 1;
    }
    const int decimals = digits > 0 ? digits - 1 : 3;
    out << std::left << std::setw(5) << "k" << std::setw(12 + decimals) << "s_k"
        << std::setw(12 + decimals) << "lower" << std::setw(12 + decimals) << "upper"
        << "EI_k" << "\n";
    for (int k = 1; k <= k_max; ++k) {
        OrderProfile p = make_order_profile(k);
        out << std::left << std::setw(5) << k << std::setw(12 + decimals)
            << format_fixed(p.s_k, decimals)
            << std::setw(12 + decimals)
            << (p.lower_bound ? format_fixed(*p.lower_bound, decimals) : "*")
            << std::setw(12 + decimals)
            << (p.upper_bound ? format_fixed(*p.upper_bound, decimals) : "*")
            << format_fixed(p.efficiency_index, decimals) << "\n";
    }
    return 0;
}

inline int cmd_compare(const std::string& function_arg, const std::string& x0_flag,
                       const std::string& methods_flag, const std::string& alpha_flag,
                       mpfr_prec_t prec, int max_iter, int digits, std::ostream& out,
                       std::ostream& err) {
    try {
        detail::ProblemSetup setup = detail::make_setup(function_arg, 0, x0_flag, alpha_flag, prec);
        std::vector<detail::MethodSpec> methods;
        {
            std::stringstream ss(methods_flag);
            std::string item;
            while (std::getline(ss, item, ',')) methods.push_back(detail::parse_method(item));
        }
        if (methods.size() < 2) throw std::invalid_argument("--methods needs at least two entries");
        for (const auto& m : methods) {
            if (m.newton && !setup.problem.fprime) {
                err << "error: newton requires derivative metadata (use a @corpus function)\n";
                return 3;
            }
        }

        int worst = 0;
        std::vector<SolveReport> reports;
        for (const auto& m : methods) {
            SolverConfig config;
            config.precision = prec;
            config.max_iterations = max_iter;
            if (m.newton) {
                reports.push_back(newton_solve(setup.problem, setup.initial_points.front(), config));
            } else {
                config.k = m.k;
                config.initial_points = setup.initial_points;
                reports.push_back(solve(setup.problem, config));
            }
            worst = std::max(worst, exit_code(reports.back().termination));
        }

        for (std::size_t i = 0; i < methods.size(); ++i) {
            for (std::size_t j = i + 1; j < methods.size(); ++j) {
                const auto& mi = methods[i];
                const auto& mj = methods[j];
                out << "== " << mi.label << " (p=" << mi.evals_per_iteration << ") vs "
                    << mj.label << " (p=" << mj.evals_per_iteration << ") ==\n";
                auto rows = equal_cost_compare(reports[i], mi.evals_per_iteration, reports[j],
                                               mj.evals_per_iteration);
                const std::size_t w = static_cast<std::size_t>(digits) + 8;
                out << std::left << std::setw(5) << "q" << std::setw(5) << "n1" << std::setw(w)
                    << ("x_" + mi.label) << std::setw(w) << "err1" << std::setw(5) << "n2"
                    << std::setw(w) << ("x_" + mj.label) << "err2" << "\n";
                for (const auto& r : rows) {
                    out << std::left << std::setw(5) << r.q << std::setw(5) << r.n1 << std::setw(w)
                        << format(r.x1, digits) << std::setw(w)
                        << (r.err1 ? format(*r.err1, 4) : "*") << std::setw(5) << r.n2
                        << std::setw(w) << format(r.x2, digits)
                        << (r.err2 ? format(*r.err2, 4) : "*") << "\n";
                }
            }
        }
        return worst;
    } catch (const ParseError& e) {
        err << "syntax error: " << e.what() << "\n";
        return 1;
    } catch (const NotFound& e) {
        err << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

/// Entry point shared by the binary and the tests. `args` excludes argv[0].
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized secant root finding at selectable precision"};
    app.require_subcommand(1);

    std::string function_arg, x0_flag, alpha_flag, tol_step_flag, tol_residual_flag;
    std::string methods_flag;
    std::string fmt = "table";
    int k_flag = 0;
    long precision_flag = 0;
    int max_iter = 100;
    int digits_flag = 0;
    int k_max = 10;

    auto* solve_cmd = app.add_subcommand("solve", "Run the generalized secant solver");
    solve_cmd->add_option("--function", function_arg,
                          "Expression in x (e.g. \"x^3 - 8\") or @corpus-name")->required();
    solve_cmd->add_option("--k", k_flag, "Interpolation degree k (default: corpus suggestion or 2)");
    solve_cmd->add_option("--x0", x0_flag, "Comma-separated initial points, oldest first");
    solve_cmd->add_option("--alpha", alpha_flag, "Known root for error diagnostics");
    solve_cmd->add_option("--precision", precision_flag, "Working precision in bits (default 256)");
    solve_cmd->add_option("--tol-step", tol_step_flag, "Step tolerance (scaled by 1+|x|)");
    solve_cmd->add_option("--tol-residual", tol_residual_flag, "Residual tolerance");
    solve_cmd->add_option("--max-iter", max_iter, "Iteration budget")->capture_default_str();
    solve_cmd->add_option("--format", fmt, "table|csv|json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    solve_cmd->add_option("--digits", digits_flag, "Significant digits for printed values");

    auto* repro_cmd = app.add_subcommand(
        "repro-table2", "Re-run the canonical x^3-8, k=2 experiment at 113-bit precision");

    auto* order_cmd = app.add_subcommand("order-table", "Print s_k, its bounds, and EI_k");
    order_cmd->add_option("--k-max", k_max, "Largest k to list")->capture_default_str();
    order_cmd->add_option("--digits", digits_flag, "Significant digits (default 4)");

    auto* compare_cmd = app.add_subcommand("compare", "Equal-cost comparison of methods");
    compare_cmd->add_option("--function", function_arg, "Expression in x or @corpus-name")
        ->required();
    compare_cmd->add_option("--x0", x0_flag, "Comma-separated initial points, oldest first");
    compare_cmd->add_option("--methods", methods_flag,
                            "Comma-separated list from gsec:<k>, newton, secant")->required();
    compare_cmd->add_option("--alpha", alpha_flag, "Known root for error diagnostics");
    compare_cmd->add_option("--precision", precision_flag, "Working precision in bits");
    compare_cmd->add_option("--max-iter", max_iter, "Iteration budget")->capture_default_str();
    compare_cmd->add_option("--digits", digits_flag, "Significant digits for printed values");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        mpfr_prec_t prec = precision_flag > 0 ? static_cast<mpfr_prec_t>(precision_flag)
                                              : detail::default_precision_bits();
        if (solve_cmd->parsed())
            return cmd_solve(function_arg, k_flag, x0_flag, alpha_flag, prec, tol_step_flag,
                             tol_residual_flag, max_iter, fmt, digits_flag, out, err);
        if (repro_cmd->parsed()) return cmd_repro_table2(out);
        if (order_cmd->parsed()) return cmd_order_table(k_max, digits_flag, out);
        if (compare_cmd->parsed())
            return cmd_compare(function_arg, x0_flag, methods_flag, alpha_flag, prec, max_iter,
                               digits_flag > 0 ? digits_flag : 17, out, err);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace secantx::cli
