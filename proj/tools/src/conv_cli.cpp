#include "ldgbem_cli/conv_cli.hpp"

#include "ldgbem/errors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace ldgbem::cli {

namespace {

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string format_fixed(double v, int digits)
{
    if (!std::isfinite(v))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

Scheme parse_scheme(const std::string& s)
{
    if (s == "dg-bem")
        return Scheme::dg_bem;
    if (s == "conforming-bem")
        return Scheme::conforming_bem;
    throw UsageError("unknown scheme '" + s + "' (dg-bem or conforming-bem)");
}

BetaMode parse_beta(const std::string& s)
{
    if (s == "normal")
        return BetaMode::normal;
    if (s == "zero")
        return BetaMode::zero;
    throw UsageError("unknown beta mode '" + s + "' (normal or zero)");
}

int parse_int(const std::string& s, const std::string& what)
{
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw UsageError("malformed " + what + " '" + s + "'");
    }
    if (pos != s.size())
        throw UsageError("malformed " + what + " '" + s + "'");
    return v;
}

void validate(const RunConfig& c)
{
    if (c.refine_factor != 1 && c.refine_factor != 2 && c.refine_factor != 4)
        throw UsageError("--boundary-refine must be 1, 2 or 4");
    if (!(c.c_alpha > 0.0) || !std::isfinite(c.c_alpha))
        throw UsageError("--alpha-scale must be positive");
    if (!(c.nu > 0.0) || !std::isfinite(c.nu))
        throw UsageError("--nu must be positive");
    if (!(c.tolerance > 0.0) || c.tolerance > 1e-6)
        throw UsageError("--tolerance must lie in (0, 1e-6]");
    if (c.volume_order < 1 || c.volume_order > 12)
        throw UsageError("--volume-order must lie in [1, 12]");
    if (c.boundary_points < 1 || c.boundary_points > 20)
        throw UsageError("--boundary-points must lie in [1, 20]");
    if (c.data_subdivisions < 1 || c.data_subdivisions > 64)
        throw UsageError("--data-subdivisions must lie in [1, 64]");
}

void write_plot(const std::filesystem::path& plot, const std::filesystem::path& csv, Scheme scheme)
{
    std::ofstream gp(plot);
    const std::string name = csv.filename().string();
    gp << "# gnuplot " << plot.filename().string() << "\n"
       << "set datafile separator ','\n"
       << "set logscale xy\n"
       << "set key bottom left\n"
       << "set xlabel 'number of unknowns'\n"
       << "set ylabel 'error'\n"
       << "set terminal pngcairo size 900,700\n"
       << "set output '" << plot.stem().string() << ".png'\n"
       << "stats '" << name << "' using 3 nooutput\n"
       << "n0 = STATS_min\n"
       << "stats '" << name << "' using 4 nooutput\n"
       << "e0 = STATS_max\n"
       << "ref(n, p) = e0 * (n / n0)**(-p / 2.0)\n"
       << "plot '" << name << "' using 3:4 skip 1 with linespoints title 'sigma', \\\n"
       << "     '' using 3:5 skip 1 with linespoints title 'u', \\\n"
       << "     '' using 3:6 skip 1 with linespoints title 'jump', \\\n";
    if (scheme == Scheme::conforming_bem)
        gp << "     '' using 3:8 skip 1 with linespoints title 'psi (global)', \\\n";
    else
        gp << "     '' using 3:7 skip 1 with linespoints title 'psi (broken)', \\\n";
    gp << "     '' using 3:9 skip 1 with linespoints title 'flux', \\\n"
       << "     ref(x, 1.0) with lines dt 2 title 'O(h)', \\\n"
       << "     ref(x, 1.5) with lines dt 3 title 'O(h^{3/2})', \\\n"
       << "     ref(x, 2.0) with lines dt 4 title 'O(h^2)'\n";
}

void write_summary(std::ostream& out, const RunConfig& c, const EocTable& t)
{
    out << "scheme " << scheme_name(c.scheme) << ", levels";
    for (const auto& r : t.rows)
        out << ' ' << r.level;
    out << ", boundary refine " << c.refine_factor << ", alpha scale " << c.c_alpha << ", nu " << c.nu << "\n";
    out << std::left << std::setw(14) << "column" << std::setw(10) << "slope" << std::setw(12) << "fit rms"
        << "pairwise\n";
    for (const auto& col : t.columns) {
        out << std::setw(14) << col.name << std::setw(10) << format_fixed(col.slope, 3) << std::setw(12)
            << format_fixed(col.residual, 4);
        for (std::size_t i = 0; i < col.pairwise.size(); ++i)
            out << (i ? " " : "") << format_fixed(col.pairwise[i], 3);
        out << "\n";
        for (const auto& w : col.warnings)
            out << "  warning: " << w << "\n";
    }
    if (c.scheme == Scheme::dg_bem)
        out << "note: e_psi_global repeats the broken norm for the discontinuous boundary space\n";
    out << std::right;
}

} // namespace

std::string scheme_name(Scheme s) { return s == Scheme::dg_bem ? "dg-bem" : "conforming-bem"; }

std::vector<int> parse_levels(const std::string& text)
{
    int lo = 0, hi = 0;
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        lo = hi = parse_int(text, "level range");
    } else {
        lo = parse_int(text.substr(0, colon), "level range");
        hi = parse_int(text.substr(colon + 1), "level range");
    }
    if (lo < 1 || hi > 6 || lo > hi)
        throw UsageError("levels must form an ascending range within [1, 6], got '" + text + "'");
    std::vector<int> levels;
    for (int l = lo; l <= hi; ++l)
        levels.push_back(l);
    return levels;
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& help)
{
    RunConfig c;
    std::string scheme = "dg-bem", levels = "2:6", beta = "normal", out = c.out_dir.string();
    bool no_timings = false;

    CLI::App app{"Convergence study for the LDG-FEM / BEM transmission problem", "conv_cli"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.add_option("--scheme", scheme, "dg-bem or conforming-bem")->capture_default_str();
    app.add_option("--levels", levels, "level range a:b within [1, 6]")->capture_default_str();
    app.add_option("--boundary-refine", c.refine_factor, "boundary segments per mesh face (1, 2, 4)")
        ->capture_default_str();
    app.add_option("--alpha-scale", c.c_alpha, "penalty scale, alpha = c / h_F")->capture_default_str();
    app.add_option("--beta-mode", beta, "normal or zero")->capture_default_str();
    app.add_option("--nu", c.nu, "node jump penalty of the boundary form")->capture_default_str();
    app.add_option("--tolerance", c.tolerance, "relative residual bound of the solver")->capture_default_str();
    app.add_option("--out", out, "output directory")->capture_default_str();
    app.add_option("--volume-order", c.volume_order, "triangle rule degree for the error norms")
        ->capture_default_str();
    app.add_option("--boundary-points", c.boundary_points, "Gauss points per segment for boundary norms")
        ->capture_default_str();
    app.add_option("--data-subdivisions", c.data_subdivisions, "extra splits of each panel for the data terms")
        ->capture_default_str();
    app.add_flag("--check", c.check, "run the invariant suite at every level");
    app.add_flag("--dump-mesh", c.dump_mesh, "write the triangulation of every level");
    app.add_flag("--zero-data", c.zero_data, "solve with f = g0 = g1 = 0");
    app.add_flag("--no-timings", no_timings, "write zero timing columns");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        help << app.help();
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    c.scheme = parse_scheme(scheme);
    c.levels = parse_levels(levels);
    c.beta_mode = parse_beta(beta);
    c.out_dir = out;
    c.timings = !no_timings;
    validate(c);
    return c;
}

std::string csv_header()
{
    return "level,h,ndof,e_sigma,e_u,e_jump,e_psi_broken,e_psi_global,e_flux,assembly_s,solve_s";
}

std::string csv_row(const ErrorRow& r)
{
    std::ostringstream s;
    s << r.level << ',' << format_double(r.h) << ',' << r.ndof;
    for (const auto& name : error_column_names())
        s << ',' << format_double(error_value(r, name));
    s << ',' << format_fixed(r.assembly_s, 3) << ',' << format_fixed(r.solve_s, 3);
    return s.str();
}

StudyResult run_study(const RunConfig& config, std::ostream& log)
{
    validate(config);
    using clock = std::chrono::steady_clock;
    std::filesystem::create_directories(config.out_dir);
    StudyResult res;
    const std::string stem = scheme_name(config.scheme);
    res.csv = config.out_dir / ("convergence_" + stem + ".csv");
    res.summary = config.out_dir / ("eoc_" + stem + ".txt");
    res.plot = config.out_dir / ("plot_" + stem + ".gp");
    write_plot(res.plot, res.csv, config.scheme);

    std::ofstream csv(res.csv);
    csv << csv_header() << "\n" << std::flush;

    const ExactSolution exact = exact_fields();
    ProblemData data = exact.data();
    if (config.zero_data)
        data = {[](const Vec2&) { return 0.0; }, [](const Vec2&, const Vec2&) { return 0.0; },
                [](const Vec2&, const Vec2&) { return 0.0; }};
    const ErrorOptions opts{config.volume_order, config.boundary_points};
    std::vector<std::string> violations;

    for (int level : config.levels) {
        SchemeConfig sc;
        sc.scheme = config.scheme;
        sc.level = level;
        sc.refine_factor = config.refine_factor;
        sc.c_alpha = config.c_alpha;
        sc.beta_mode = config.beta_mode;
        sc.nu = config.nu;
        sc.tolerance = config.tolerance;
        sc.data_subdivisions = config.data_subdivisions;

        const auto t0 = clock::now();
        const auto disc = discretize(sc);
        const BlockSystem system = build_system(disc, data);
        const auto t1 = clock::now();
        const DiscreteSolution sol = solve(system);
        const auto t2 = clock::now();

        if (config.dump_mesh) {
            std::ofstream m(config.out_dir / ("mesh_level" + std::to_string(level) + ".txt"));
            write_mesh(m, disc->mesh);
        }

        ErrorRow row = compute_errors(sol, exact, opts);
        if (config.timings) {
            row.assembly_s = std::chrono::duration<double>(t1 - t0).count();
            row.solve_s = std::chrono::duration<double>(t2 - t1).count();
        }
        csv << csv_row(row) << "\n" << std::flush;
        res.rows.push_back(row);
        log << "level " << level << ": ndof " << row.ndof << ", e_sigma " << format_double(row.e_sigma)
            << ", e_u " << format_double(row.e_u) << ", residual " << format_double(sol.residual) << "\n";

        if (config.check) {
            for (const auto& chk : check_invariants(system, &sol)) {
                log << "  [" << (chk.pass ? "ok" : "FAILED") << "] " << chk.name << ": " << format_double(chk.value)
                    << " (bound " << format_double(chk.bound) << ")\n";
                if (!chk.pass)
                    violations.push_back("level " + std::to_string(level) + ": " + chk.name);
            }
        }
    }

    if (res.rows.size() >= 2) {
        res.table = fit_eoc(res.rows);
        std::ofstream summary(res.summary);
        write_summary(summary, config, res.table);
        write_summary(log, config, res.table);
    } else {
        res.table.rows = res.rows;
        std::ofstream summary(res.summary);
        summary << "fewer than two levels, no convergence rates\n";
        log << "fewer than two levels, no convergence rates\n";
    }
    res.invariants_passed = violations.empty();
    if (!violations.empty()) {
        std::string msg = "invariant suite failed:";
        for (const auto& v : violations)
            msg += "\n  " + v;
        throw InvariantFailure(msg);
    }
    return res;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::optional<RunConfig> config;
    try {
        config = parse_config(args, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\nrun with --help for the list of options\n";
        return usage;
    }
    if (!config)
        return ok;
    try {
        const StudyResult res = run_study(*config, out);
        out << "wrote " << res.csv.string() << ", " << res.summary.string() << ", " << res.plot.string() << "\n";
        return ok;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return usage;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << "\n";
        return solver;
    } catch (const InvariantFailure& e) {
        err << e.what() << "\n";
        return invariants;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return failure;
    }
}

} // namespace ldgbem::cli
