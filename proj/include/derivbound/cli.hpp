#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end. `run` is the whole program minus main(), so
 *        tests can drive it with an argument vector and string streams.
 *
 * Exit codes: 0 success, 1 computation or domain error, 2 usage error.
 * Output is assembled in memory and only written once the command has
 * succeeded, so a failing invocation never emits partial results.
 */

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "derivbound/analysis.hpp"
#include "derivbound/bounds.hpp"
#include "derivbound/closed_forms.hpp"
#include "derivbound/error.hpp"
#include "derivbound/format.hpp"
#include "derivbound/lambda.hpp"
#include "derivbound/specfun.hpp"
#include "derivbound/transforms.hpp"

namespace derivbound::cli {

namespace detail {

inline std::string parity_note(const BoundResult& b) {
    if (!b.sharp_at || !b.parity_condition) return "not attained (asymptotically sharp)";
    std::string s = "sharp at t=" + format_shortest(*b.sharp_at);
    switch (*b.parity_condition) {
        case Parity::Even: return s + ", k even";
        case Parity::Odd: return s + ", k odd";
        case Parity::Always: return s + ", all k";
    }
    return s;
}

inline Family require_family(const std::string& name) {
    auto f = parse_family(name);
    if (!f || *f == Family::QIntegrand) throw CLI::ValidationError("--family", "unknown family '" + name + "'");
    return *f;
}

inline void write_ratio_table(std::ostream& os, const Table1& t) {
    os << "   x  |   n=10   n=100  n=1000\n";
    for (std::size_t i = 0; i < Table1::xs.size(); ++i) {
        os << ' ' << format_fixed(Table1::xs[i], 1);
        os << (Table1::xs[i] < 10 ? "  |" : " |");
        for (std::size_t j = 0; j < Table1::ns.size(); ++j) {
            const auto r = t.reports[i][j].ratio();
            std::string cell = r ? format_fixed(round_half_away(*r, 2), 2) : std::string("undef");
            os << std::string(8 - std::min<std::size_t>(8, cell.size()), ' ') << cell;
        }
        os << '\n';
    }
}

inline std::string real_str(Real v) { return format_g17(static_cast<double>(v)); }

} // namespace detail

/// Parses and executes one command line. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const std::string& program = "derivbound") {
    CLI::App app{"Derivative bounds via integral transforms and Simpson error certification", program};
    app.require_subcommand(1);
    std::ostringstream buf;
    std::string output_path;
    std::function<void()> action;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("-o,--output", output_path, "write result to this file instead of stdout");
    };

    // bound
    std::string family_name;
    int k = 0;
    double t = 0.0;
    auto* bound = app.add_subcommand("bound", "closed-form bound on the k-th derivative");
    bound->add_option("--family", family_name, "sinc|cin|cin2|ein|shi|cinh|atan|tan")->required();
    bound->add_option("--k", k, "derivative order (pairs of derivatives for tan)")->required()
        ->check(CLI::NonNegativeNumber);
    bound->add_option("--t", t, "evaluation point (default 0)");
    add_output(bound);
    bound->callback([&] {
        action = [&] {
            const auto b = family_bound(detail::require_family(family_name), k, t);
            buf << format_shortest(b.value) << '\n' << detail::parity_note(b) << '\n';
        };
    });

    // deriv
    std::string check;
    auto* deriv = app.add_subcommand("deriv", "k-th derivative via the integral representation");
    deriv->add_option("--family", family_name, "sinc|cin|cin2|ein|shi|cinh|atan|tan")->required();
    deriv->add_option("--k", k, "derivative order")->required()->check(CLI::NonNegativeNumber);
    deriv->add_option("--t", t, "evaluation point")->required();
    deriv->add_option("--check", check, "cross-check: fd or closed")->check(CLI::IsMember({"fd", "closed"}));
    add_output(deriv);
    deriv->callback([&] {
        action = [&] {
            const Family fam = detail::require_family(family_name);
            const auto spec = TaylorKernelSpec::canonical(fam);
            const double value = transform_derivative(spec, k, t);
            buf << "value " << format_g17(value) << '\n';
            const auto bnd = family_bound(fam, k, t);
            buf << "bound " << format_g17(bnd.value) << '\n';
            if (check == "fd") {
                const int order = fam == Family::TanEven ? 2 * k : k;
                const double fd = finite_difference_derivative(
                    [&](double x) { return ratio_value(spec, x); }, order, t);
                buf << "fd " << format_g17(fd) << '\n' << "difference " << format_g17(value - fd) << '\n';
            } else if (check == "closed") {
                const double closed = closed_form_derivative(fam, k, t);
                buf << "closed " << format_g17(closed) << '\n'
                    << "difference " << format_g17(value - closed) << '\n';
            }
        };
    });

    // specfun
    std::string fn_name;
    double x = 0.0;
    auto* spec_cmd = app.add_subcommand("specfun", "evaluate a special function");
    spec_cmd->add_option("--fn", fn_name, "si|cin|ci|ein|e1|shi|cinh|chi|ti2")->required();
    spec_cmd->add_option("--x", x, "argument")->required();
    add_output(spec_cmd);
    spec_cmd->callback([&] {
        action = [&] {
            const auto id = parse_special_fn(fn_name);
            if (!id) throw CLI::ValidationError("--fn", "unknown function '" + fn_name + "'");
            buf << format_g17(eval_special(*id, x)) << '\n';
        };
    });

    // table1
    std::string format = "text";
    auto* table = app.add_subcommand("table1", "R_n(x) for x = 1..10, n = 10, 100, 1000");
    table->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
    add_output(table);
    table->callback([&] {
        action = [&] {
            const auto tab = table1();
            if (format == "csv") {
                write_csv(buf, tab.rows());
            } else {
                detail::write_ratio_table(buf, tab);
            }
        };
    });

    // scan
    int n = 10;
    double xmin = 0.0, xmax = 0.0, step = 0.0;
    std::string scan_format = "csv";
    auto* scan = app.add_subcommand("scan", "R_n(x) on a uniform x grid");
    scan->add_option("--n", n, "even number of subintervals")->required();
    scan->add_option("--xmin", xmin)->required();
    scan->add_option("--xmax", xmax)->required();
    scan->add_option("--step", step)->required();
    scan->add_option("--format", scan_format, "csv")->check(CLI::IsMember({"csv"}));
    add_output(scan);
    scan->callback([&] { action = [&] { write_csv(buf, scan_ratio(n, xmin, xmax, step)); }; });

    // zero
    double lo = 0.0, hi = 0.0, tol = 1e-6;
    auto* zero = app.add_subcommand("zero", "bracket a sign change of E_n(x) by bisection");
    zero->add_option("--n", n)->required();
    zero->add_option("--lo", lo)->required();
    zero->add_option("--hi", hi)->required();
    zero->add_option("--tol", tol, "bracket width (default 1e-6)");
    add_output(zero);
    zero->callback([&] {
        action = [&] {
            const auto z = locate_error_zero(n, lo, hi, tol);
            buf << "E_" << n << "(" << format_shortest(z.initial.lo) << ") = " << detail::real_str(z.initial.e_lo)
                << '\n'
                << "E_" << n << "(" << format_shortest(z.initial.hi) << ") = " << detail::real_str(z.initial.e_hi)
                << '\n'
                << "bracket [" << format_g17(z.refined.lo) << ", " << format_g17(z.refined.hi) << "]\n"
                << "width " << format_g17(z.refined.hi - z.refined.lo) << '\n'
                << "E at ends " << detail::real_str(z.refined.e_lo) << ' ' << detail::real_str(z.refined.e_hi)
                << '\n'
                << "iterations " << z.iterations << '\n';
        };
    });

    // frullani
    FrullaniSpec fr;
    auto* frul = app.add_subcommand("frullani", "truncated int_0^T (cos at - cos bt)/t^2 dt");
    frul->add_option("--alpha", fr.alpha)->required();
    frul->add_option("--beta", fr.beta)->required();
    frul->add_option("--T", fr.truncation)->required();
    add_output(frul);
    frul->callback([&] {
        action = [&] {
            const auto r = frullani_check(fr);
            buf << "truncated " << format_g17(r.truncated) << '\n'
                << "target " << format_g17(r.target) << '\n'
                << "tail_bound " << format_g17(r.tail_bound) << '\n'
                << "difference " << format_g17(r.truncated - r.target) << '\n'
                << "consistent " << (r.consistent() ? "yes" : "no") << '\n';
        };
    });

    // lambda
    double kappa = 2.0;
    int vmax = 40;
    int step_exp = 10;
    std::optional<double> laplace_t;
    auto* lam = app.add_subcommand("lambda", "tabulate lambda_kappa by the method of steps");
    lam->add_option("--kappa", kappa)->required();
    lam->add_option("--vmax", vmax)->required();
    lam->add_option("--step-exp", step_exp, "grid step 2^-p (default p = 10)");
    lam->add_option("--laplace-t", laplace_t, "also check the Laplace identity at this t");
    add_output(lam);
    lam->callback([&] {
        action = [&] {
            const auto g = build_lambda_grid_pow2(kappa, vmax, step_exp);
            double min_value = 0.0;
            for (double v : g.values()) min_value = std::min(min_value, v);
            buf << "# kappa=" << format_shortest(kappa) << " vmax=" << vmax << " step=2^-" << step_exp << '\n'
                << "# lambda(1)=" << format_g17(g.value_at(1.0)) << '\n'
                << "# min_value=" << format_g17(min_value) << '\n';
            if (laplace_t) {
                const auto c = laplace_check(g, *laplace_t);
                buf << "# laplace_t=" << format_shortest(*laplace_t) << " lhs=" << format_g17(c.lhs)
                    << " rhs=" << format_g17(c.rhs) << " defect=" << format_g17(c.defect)
                    << " tail_bound=" << format_g17(c.tail_bound) << '\n';
            }
            buf << "v,lambda\n";
            for (std::size_t j = 0; j < g.values().size(); ++j) {
                buf << format_g17(g.node(j)) << ',' << format_g17(g.values()[j]) << '\n';
            }
        };
    });

    // qint
    QIntSpec q;
    auto* qint = app.add_subcommand("qint", "Simpson value and certified error bound for the sieve integral");
    qint->add_option("--kappa", q.kappa)->required();
    qint->add_option("--u", q.u)->required();
    qint->add_option("--a", q.a)->required();
    qint->add_option("--b", q.b)->required();
    qint->add_option("--n", n)->required();
    add_output(qint);
    qint->callback([&] {
        action = [&] {
            const auto g = build_lambda_grid(q.kappa, kCertifiedVMax, 1.0 / 1024.0);
            const auto r = qint_eval(q, n, g);
            buf << "value " << format_g17(r.value) << '\n'
                << "f4(a) " << format_g17(r.f4_at_a) << '\n'
                << "f4_uncertainty " << format_g17(r.f4_uncertainty) << '\n'
                << "bound " << format_g17(r.bound) << '\n';
        };
    });

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.push_back(program);
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
        if (action) action();
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << program << ": " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << program << ": " << e.what() << '\n';
        return 1;
    }

    if (!output_path.empty()) {
        std::ofstream file(output_path, std::ios::binary);
        if (!file) {
            err << program << ": cannot open " << output_path << '\n';
            return 1;
        }
        file << buf.str();
    } else {
        out << buf.str();
    }
    return 0;
}

} // namespace derivbound::cli
