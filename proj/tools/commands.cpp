#include "commands.hpp"

#include "sbp/construct.hpp"
#include "sbp/error.hpp"
#include "sbp/euler_experiments.hpp"
#include "sbp/operator_io.hpp"
#include "sbp/solver1d.hpp"
#include "sbp/table.hpp"
#include "sbp/verify.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace sbpctl {

namespace fs = std::filesystem;

namespace {

std::string default_output_dir()
{
    if (const char* env = std::getenv("SBP_OUTPUT_DIR"); env && *env)
        return env;
    return "sbp-output";
}

KeySpec output_key() { return {"output", KeyKind::text, default_output_dir(), 0, 0, {}, "output directory (default $SBP_OUTPUT_DIR or ./sbp-output)"}; }
KeySpec format_key() { return {"format", KeyKind::choice, "aligned", 0, 0, {"aligned", "csv"}, "format of the .txt table next to the CSV"}; }
KeySpec seed_key() { return {"seed", KeyKind::integer, "1", 0, 2147483647.0, {}, "seed for the multistart search"}; }
KeySpec restarts_key() { return {"restarts", KeyKind::integer, "64", 1, 100000, {}, "multistart count when an operator has to be derived"}; }
KeySpec threads_key() { return {"threads", KeyKind::integer, "0", 0, 1024, {}, "worker threads (0: all cores)"}; }
KeySpec operator_key(const std::string& fallback)
{
    return {"operator", KeyKind::source_list, fallback, 0, 0, {}, "operator sources, derive:<p> or file:<path>, comma separated"};
}

std::vector<CommandSpec> build_specs()
{
    const std::string all = "derive:2,derive:3,derive:4,derive:5,derive:6,derive:7,derive:8,derive:9";
    std::vector<CommandSpec> v;
    v.push_back({"derive", "derive and certify a boundary-optimized upwind pair",
                 {{"order", KeyKind::integer, "4", 2, 9, {}, "interior order p"},
                  restarts_key(), seed_key(), threads_key(),
                  {"objective", KeyKind::choice, "combined", 0, 0, {"combined", "single"}, "leading-error objective"},
                  {"equispaced", KeyKind::flag, "false", 0, 0, {}, "hold d1 = d2 = 1"},
                  output_key()}});
    v.push_back({"verify", "certify operators at several sizes",
                 {operator_key("derive:4"),
                  {"sizes", KeyKind::text, "default", 0, 0, {}, "comma separated sizes or 'default' for m_min, m_min+7, 101"},
                  restarts_key(), seed_key(), threads_key(), output_key()}});
    v.push_back({"spectral", "spectral radius of h M for the 1D projection system",
                 {operator_key("derive:4,derive:5,derive:6,derive:7,derive:8,derive:9"),
                  {"m", KeyKind::int_list, "101,201", 9, 5000, {}, "grid sizes"},
                  restarts_key(), seed_key(), threads_key(), output_key(), format_key()}});
    v.push_back({"convergence1d", "1D projection-method convergence study",
                 {operator_key("derive:5"),
                  {"m", KeyKind::int_list, "51,101,201,401", 9, 100000, {}, "grid sizes"},
                  {"cfl", KeyKind::real, "0.05", 1e-6, 2.0, {}, "k = cfl h"},
                  {"tend", KeyKind::real, "1.8", 0.0, 1.8, {}, "final time (exact solution valid up to 1.8)"},
                  {"rstar", KeyKind::real, "0.1", 0.01, 1.0, {}, "Gaussian width"},
                  {"alpha", KeyKind::real, "0", 0.0, 100.0, {}, "coupling alpha"},
                  {"kind", KeyKind::choice, "upwind", 0, 0, {"upwind", "central"}, "use D+- or their average"},
                  restarts_key(), seed_key(), threads_key(), output_key(), format_key()}});
    v.push_back({"interaction1d", "1D boundary interaction with alpha > 0",
                 {operator_key("derive:9"),
                  {"m", KeyKind::int_list, "201,401", 9, 100000, {}, "grid sizes"},
                  {"alpha", KeyKind::real, "3", 0.0, 100.0, {}, "coupling alpha"},
                  {"cfl", KeyKind::real, "0.05", 1e-6, 2.0, {}, "k = cfl h"},
                  {"tend", KeyKind::real, "1.8", 0.0, 100.0, {}, "final time"},
                  {"rstar", KeyKind::real, "0.1", 0.01, 1.0, {}, "Gaussian width"},
                  restarts_key(), seed_key(), threads_key(), output_key()}});
    v.push_back({"vortex2d", "isentropic vortex on the two-block chevron",
                 {operator_key("derive:3,derive:5"),
                  {"m", KeyKind::int_list, "34,68", 9, 5000, {}, "nodes per direction per block"},
                  {"tend", KeyKind::real, "1", 0.0, 1000.0, {}, "final time"},
                  {"tol", KeyKind::real, "1e-12", 1e-15, 1e-1, {}, "absolute and relative tolerance"},
                  {"method", KeyKind::choice, "ssp43", 0, 0, {"ssp43", "rk4"}, "time integrator"},
                  {"cfl", KeyKind::real, "1", 1e-4, 10.0, {}, "CFL bound (fixed rk4 step, first adaptive step)"},
                  {"splitting", KeyKind::choice, "llf", 0, 0, {"llf", "sw"}, "flux vector splitting"},
                  {"interface", KeyKind::choice, "llf", 0, 0, {"llf", "splitting"}, "interface numerical flux"},
                  {"chevron_scale", KeyKind::real, "5", 0.1, 100.0, {}, "scale of the chevron shape"},
                  {"chevron_shift", KeyKind::real, "-3", -1000.0, 1000.0, {}, "vertical shift after scaling"},
                  {"mach", KeyKind::real, "0.5", 1e-3, 10.0, {}, "vortex Mach number"},
                  {"eps", KeyKind::real, "5", 0.0, 100.0, {}, "vortex strength"},
                  {"snapshot", KeyKind::choice, "none", 0, 0, {"none", "text", "binary"}, "write final fields"},
                  restarts_key(), seed_key(), threads_key(), output_key(), format_key()}});
    v.push_back({"khi2d", "Kelvin-Helmholtz robustness runs",
                 {operator_key(all),
                  {"K", KeyKind::int_list, "1,4", 1, 65536, {}, "element counts (perfect squares)"},
                  {"nodes", KeyKind::integer, "17", 7, 1000, {}, "nodes per direction per element"},
                  {"tend", KeyKind::real, "15", 0.0, 1000.0, {}, "final time"},
                  {"tol", KeyKind::real, "1e-6", 1e-15, 1e-1, {}, "absolute and relative tolerance"},
                  {"method", KeyKind::choice, "ssp43", 0, 0, {"ssp43", "rk4"}, "time integrator"},
                  {"cfl", KeyKind::real, "1", 1e-4, 10.0, {}, "CFL bound"},
                  {"splitting", KeyKind::choice, "sw", 0, 0, {"llf", "sw"}, "flux vector splitting"},
                  {"interface", KeyKind::choice, "llf", 0, 0, {"llf", "splitting"}, "interface numerical flux"},
                  {"snapshot", KeyKind::choice, "none", 0, 0, {"none", "text", "binary"}, "write final fields"},
                  restarts_key(), seed_key(), threads_key(), output_key(), format_key()}});
    return v;
}

std::string fmt(double v, int prec = 6)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

void ensure_dir(const std::string& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw sbp::Error("cannot create output directory " + dir + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream os(path);
    os << text;
    if (!os)
        throw sbp::Error("cannot write " + path);
    std::cerr << "wrote " << path << "\n";
}

sbp::OptimizationConfig derive_config(const Settings& s)
{
    sbp::OptimizationConfig c;
    c.restarts = s.integer("restarts");
    c.seed = static_cast<std::uint64_t>(s.integer("seed"));
    c.threads = s.integer("threads");
    return c;
}

std::string meta(const sbp::OperatorPair& p, const std::string& key)
{
    for (const auto& [k, v] : p.metadata)
        if (k == key)
            return v;
    return "";
}

// derive:p reuses the shipped file when it was produced with the same search
// settings (the derivation is deterministic); otherwise it derives now.
sbp::NamedOperator load_source(const std::string& src, const Settings& s)
{
    if (src.rfind("file:", 0) == 0) {
        const std::string path = src.substr(5);
        sbp::OperatorPair pair = sbp::load_operator(path);
        return {fs::path(path).stem().string(), pair, sbp::DerivativeKind::upwind};
    }
    const int p = std::stoi(src.substr(7));
    const std::string name = "upwind_p" + std::to_string(p);
    const sbp::OptimizationConfig cfg = derive_config(s);
    const fs::path shipped = fs::path(SBP_DATA_DIR) / "operators" / (name + ".txt");
    if (fs::is_regular_file(shipped)) {
        sbp::OperatorPair pair = sbp::load_operator(shipped.string());
        if (meta(pair, "seed") == std::to_string(cfg.seed) && meta(pair, "restarts") == std::to_string(cfg.restarts) &&
            meta(pair, "objective_mode") == "combined")
            return {name, pair, sbp::DerivativeKind::upwind};
    }
    std::cerr << "deriving p = " << p << " (" << cfg.restarts << " restarts, seed " << cfg.seed << ")\n";
    return {name, sbp::derive(p, cfg).pair, sbp::DerivativeKind::upwind};
}

std::vector<sbp::NamedOperator> load_sources(const Settings& s)
{
    std::vector<sbp::NamedOperator> ops;
    for (const auto& src : s.list("operator"))
        ops.push_back(load_source(src, s));
    return ops;
}

sbp::TableFormat table_format(const Settings& s)
{
    return s.raw("format") == "csv" ? sbp::TableFormat::csv : sbp::TableFormat::aligned;
}

sbp::Cell num(double v) { return {v, ""}; }
sbp::Cell txt(const std::string& t) { return {0.0, t}; }

int cmd_derive(const Settings& s)
{
    const std::string out = s.raw("output");
    ensure_dir(out);
    sbp::OptimizationConfig cfg = derive_config(s);
    cfg.mode = s.raw("objective") == "single" ? sbp::ObjectiveMode::single_term : sbp::ObjectiveMode::combined_term;
    cfg.equispaced = s.flag("equispaced");
    const int p = s.integer("order");
    sbp::DerivationResult r = sbp::derive(p, cfg);
    const std::string stem = (fs::path(out) / ("upwind_p" + std::to_string(p))).string();
    sbp::save_operator(r.pair, stem + ".txt");
    std::cerr << "wrote " << stem << ".txt\n";
    write_text(stem + ".report.txt", r.report_text());
    std::cout << r.report_text();
    return r.report.pass ? kOk : kExperimentFailed;
}

int cmd_verify(const Settings& s)
{
    const std::string out = s.raw("output");
    ensure_dir(out);
    bool ok = true;
    for (const auto& op : load_sources(s)) {
        std::vector<int> sizes;
        if (s.raw("sizes") == "default") {
            sizes = sbp::default_verify_sizes(op.pair);
        } else {
            for (const auto& item : split_list(s.raw("sizes")))
                sizes.push_back(std::stoi(item));
        }
        const sbp::SbpReport rep = sbp::verify_sbp(op.pair, sizes);
        const std::string text = "operator: " + op.name + "\norder: " + std::to_string(op.pair.order) + "\n" + rep.summary();
        write_text((fs::path(out) / ("verify_" + op.name + ".txt")).string(), text);
        std::cout << text;
        ok = ok && rep.pass;
    }
    return ok ? kOk : kExperimentFailed;
}

int cmd_spectral(const Settings& s)
{
    const std::string out = s.raw("output");
    ensure_dir(out);
    const auto ms = s.ints("m");
    const auto rows = sbp::spectral_study(load_sources(s), ms);
    sbp::Table longt{{{"operator", 0}, {"order", -1}, {"m", -1}, {"rho_hM", 4}}, {}};
    for (const auto& r : rows)
        longt.add_row({txt(r.name), num(r.order), num(r.m), num(r.rho_hM)});
    sbp::write_table(longt, sbp::TableFormat::csv, (fs::path(out) / "spectral.csv").string());
    // One row per operator, one column per m.
    sbp::Table wide;
    wide.columns.push_back({"operator", 0});
    for (int m : ms)
        wide.columns.push_back({"m=" + std::to_string(m), 4});
    for (size_t k = 0; k < rows.size(); k += ms.size()) {
        std::vector<sbp::Cell> row{txt(rows[k].name)};
        for (size_t j = 0; j < ms.size(); ++j)
            row.push_back(num(rows[k + j].rho_hM));
        wide.add_row(row);
    }
    const std::string text = sbp::emit_table(wide, table_format(s));
    write_text((fs::path(out) / "spectral.txt").string(), text);
    std::cout << text;
    for (const auto& r : rows)
        if (!std::isfinite(r.rho_hM))
            return kExperimentFailed;
    return kOk;
}

// m, then (log, q) per operator, the layout of the convergence tables.
template <class Row>
sbp::Table wide_convergence(const std::vector<Row>& rows, const std::vector<std::string>& names,
                            const std::vector<int>& ms)
{
    sbp::Table t;
    t.columns.push_back({"m", -1});
    for (const auto& n : names) {
        t.columns.push_back({"log_l2(" + n + ")", 2});
        t.columns.push_back({"q(" + n + ")", 2});
    }
    for (size_t j = 0; j < ms.size(); ++j) {
        std::vector<sbp::Cell> row{num(ms[j])};
        for (size_t k = 0; k < names.size(); ++k) {
            const auto& r = rows[k * ms.size() + j];
            row.push_back(num(r.log10_error));
            row.push_back(num(r.rate));
        }
        t.add_row(row);
    }
    return t;
}

int cmd_convergence1d(const Settings& s)
{
    const std::string out = s.raw("output");
    ensure_dir(out);
    auto ops = load_sources(s);
    const auto kind = s.raw("kind") == "central" ? sbp::DerivativeKind::central : sbp::DerivativeKind::upwind;
    std::vector<std::string> names;
    for (auto& op : ops) {
        op.kind = kind;
        if (kind == sbp::DerivativeKind::central)
            op.name += "_central";
        names.push_back(op.name);
    }
    sbp::ConvergenceOptions o;
    o.cfl = s.real("cfl");
    o.t_end = s.real("tend");
    o.r_star = s.real("rstar");
    o.alpha = s.real("alpha");
    o.threads = s.integer("threads");
    const auto ms = s.ints("m");
    const auto rows = sbp::convergence_study(ops, ms, o);
    sbp::Table longt{{{"operator", 0}, {"order", -1}, {"m", -1}, {"log10_error", 4}, {"rate", 4}}, {}};
    for (const auto& r : rows)
        longt.add_row({txt(r.name), num(r.order), num(r.m), num(r.log10_error), num(r.rate)});
    sbp::write_table(longt, sbp::TableFormat::csv, (fs::path(out) / "convergence1d.csv").string());
    const std::string text = sbp::emit_table(wide_convergence(rows, names, ms), table_format(s));
    write_text((fs::path(out) / "convergence1d.txt").string(), text);
    std::cout << text;
    for (const auto& r : rows)
        if (!std::isfinite(r.log10_error))
            return kExperimentFailed;
    return kOk;
}

int cmd_interaction1d(const Settings& s)
{
    const std::string out = s.raw("output");
    ensure_dir(out);
    bool ok = true;
    for (const auto& op : load_sources(s)) {
        for (int m : s.ints("m")) {
            const auto r = sbp::interaction_experiment(op, m, s.real("alpha"), s.real("tend"), s.real("cfl"),
                                                       s.real("rstar"));
            const std::string stem = (fs::path(out) / ("interaction1d_" + op.name + "_m" + std::to_string(m))).string();
            sbp::Table t{{{"x", 17}, {"u1", 17}, {"u2", 17}}, {}};
            for (size_t i = 0; i < r.x.size(); ++i)
                t.add_row({num(r.x[i]), num(r.u1[i]), num(r.u2[i])});
            sbp::write_table(t, sbp::TableFormat::csv, stem + ".csv");
            sbp::Table e{{{"t", 17}, {"energy", 17}}, {}};
            for (size_t i = 0; i < r.trace.times.size(); ++i)
                e.add_row({num(r.trace.times[i]), num(r.trace.energies[i])});
            sbp::write_table(e, sbp::TableFormat::csv, stem + "_energy.csv");
            std::ostringstream os;
            os.precision(10);
            os << "operator: " << op.name << "\nm: " << m << "\nsteps: " << r.trace.steps
               << "\nmin_u1: " << r.min_u1 << "\nmax_u1: " << r.max_u1 << "\nmin_u2: " << r.min_u2
               << "\nmax_u2: " << r.max_u2 << "\ntotal_variation: " << r.total_variation
               << "\nboundary_overshoot: " << r.boundary_overshoot
               << "\nmax_energy_increase: " << r.trace.max_energy_increase << "\n";
            write_text(stem + ".txt", os.str());
            std::cout << os.str();
            ok = ok && std::isfinite(r.total_variation);
        }
    }
    return ok ? kOk : kExperimentFailed;
}

sbp::euler::SplittingKind splitting(const Settings& s)
{
    return s.raw("splitting") == "sw" ? sbp::euler::SplittingKind::steger_warming
                                      : sbp::euler::SplittingKind::lax_friedrichs;
}

sbp::euler::InterfaceFlux interface_flux(const Settings& s)
{
    return s.raw("interface") == "splitting" ? sbp::euler::InterfaceFlux::splitting
                                             : sbp::euler::InterfaceFlux::lax_friedrichs;
}

sbp::euler::TimeMethod method(const Settings& s)
{
    return s.raw("method") == "rk4" ? sbp::euler::TimeMethod::rk4 : sbp::euler::TimeMethod::ssp43;
}

int cmd_vortex2d(const Settings& s)
{
    using namespace sbp::euler;
    const std::string out = s.raw("output");
    ensure_dir(out);
    VortexConfig cfg;
    cfg.t_end = s.real("tend");
    cfg.tol = s.real("tol");
    cfg.method = method(s);
    cfg.cfl = s.real("cfl");
    cfg.splitting = splitting(s);
    cfg.interface_flux = interface_flux(s);
    cfg.geometry = {s.real("chevron_scale"), s.real("chevron_shift")};
    cfg.vortex.mach = s.real("mach");
    cfg.vortex.eps = s.real("eps");
    const auto ms = s.ints("m");
    const auto ops = load_sources(s);
    std::vector<VortexRow> rows;
    std::vector<std::string> names;
    bool ok = true;
    for (const auto& op : ops) {
        names.push_back(op.name);
        for (size_t j = 0; j < ms.size(); ++j) {
            const int m = ms[j];
            EulerSolver solver(chevron_mesh(m, op.pair, cfg.geometry), cfg.splitting, cfg.interface_flux);
            const State u0 = solver.sample([&](double x, double y) { return isentropic_vortex(x, y, 0.0, cfg.vortex); });
            IntegratorOptions io;
            io.method = cfg.method;
            io.atol = io.rtol = cfg.tol;
            io.cfl = cfg.cfl;
            RunResult res = integrate(solver, u0, cfg.t_end, io);
            VortexRow row;
            row.m = m;
            row.report = res.report;
            row.rate = std::numeric_limits<double>::quiet_NaN();
            if (res.report.crashed) {
                row.error = row.log10_error = std::numeric_limits<double>::infinity();
                ok = false;
            } else {
                row.error = density_error(solver, res.state, [&](double x, double y) {
                    return isentropic_vortex(x, y, cfg.t_end, cfg.vortex);
                });
                row.log10_error = std::log10(row.error);
            }
            if (j > 0)
                row.rate = std::log(rows.back().error / row.error) / std::log(static_cast<double>(m) / ms[j - 1]);
            const std::string stem = (fs::path(out) / ("vortex2d_" + op.name + "_m" + std::to_string(m))).string();
            write_text(stem + ".report.txt", "operator: " + op.name + "\nm: " + std::to_string(m) + "\n" +
                                                 res.report.to_text() + "log10_density_error: " + fmt(row.log10_error, 10) + "\n");
            if (s.raw("snapshot") != "none")
                write_snapshot(stem + ".snapshot", solver, res.state, s.raw("snapshot") == "binary");
            std::cerr << op.name << " m=" << m << " log10 error " << fmt(row.log10_error, 4) << " ("
                      << res.report.steps << " steps, " << fmt(res.report.wall_seconds, 3) << " s)\n";
            rows.push_back(row);
        }
    }
    sbp::Table longt{{{"operator", 0}, {"order", -1}, {"m", -1}, {"log10_error", 4}, {"rate", 4}}, {}};
    for (size_t k = 0; k < rows.size(); ++k)
        longt.add_row({txt(ops[k / ms.size()].name), num(ops[k / ms.size()].pair.order), num(rows[k].m),
                       num(rows[k].log10_error), num(rows[k].rate)});
    sbp::write_table(longt, sbp::TableFormat::csv, (fs::path(out) / "vortex2d.csv").string());
    const std::string text = sbp::emit_table(wide_convergence(rows, names, ms), table_format(s));
    write_text((fs::path(out) / "vortex2d.txt").string(), text);
    std::cout << text;
    return ok ? kOk : kExperimentFailed;
}

int cmd_khi2d(const Settings& s)
{
    using namespace sbp::euler;
    const std::string out = s.raw("output");
    ensure_dir(out);
    const auto Ks = s.ints("K");
    for (int K : Ks) {
        const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(K))));
        if (r * r != K)
            throw ConfigError("K: " + std::to_string(K) + " is not a perfect square");
    }
    const auto ops = load_sources(s);
    KhiConfig cfg;
    cfg.nodes = s.integer("nodes");
    cfg.t_end = s.real("tend");
    cfg.tol = s.real("tol");
    cfg.splitting = splitting(s);
    cfg.interface_flux = interface_flux(s);
    cfg.method = method(s);
    cfg.cfl = s.real("cfl");
    sbp::Table longt{{{"K", -1}, {"operator", 0}, {"order", -1}, {"final_time", 2}}, {}};
    sbp::Table matrix;
    matrix.columns.push_back({"K", -1});
    for (const auto& op : ops)
        matrix.columns.push_back({op.name, 2});
    bool crashed = false;
    for (int K : Ks) {
        std::vector<sbp::Cell> mrow{num(K)};
        for (const auto& op : ops) {
            cfg.K = K;
            const KhiRun run = run_khi(op.pair, cfg);
            const std::string stem = (fs::path(out) / ("khi2d_" + op.name + "_K" + std::to_string(K))).string();
            write_text(stem + ".report.txt", "operator: " + op.name + "\nK: " + std::to_string(K) + "\n" + run.report.to_text());
            if (s.raw("snapshot") != "none") {
                EulerSolver solver(khi_mesh(K, cfg.nodes, op.pair), cfg.splitting, cfg.interface_flux);
                write_snapshot(stem + ".snapshot", solver, run.state, s.raw("snapshot") == "binary");
            }
            std::cerr << op.name << " K=" << K << " final time " << fmt(run.report.final_time, 6) << " ("
                      << fmt(run.report.wall_seconds, 3) << " s)\n";
            crashed = crashed || run.report.crashed;
            longt.add_row({txt(op.name), num(op.pair.order), num(K), num(run.report.final_time)});
            mrow.push_back(num(run.report.final_time));
        }
        matrix.add_row(mrow);
    }
    // CSV columns in the documented order.
    sbp::Table csv{{{"K", -1}, {"order", -1}, {"operator", 0}, {"final_time", 17}}, {}};
    for (const auto& r : longt.rows)
        csv.add_row({r[2], r[1], r[0], r[3]});
    sbp::write_table(csv, sbp::TableFormat::csv, (fs::path(out) / "khi2d.csv").string());
    const std::string text = sbp::emit_table(matrix, table_format(s));
    write_text((fs::path(out) / "khi2d.txt").string(), text);
    std::cout << text;
    return crashed ? kExperimentFailed : kOk;
}

} // namespace

const std::vector<CommandSpec>& command_specs()
{
    static const std::vector<CommandSpec> specs = build_specs();
    return specs;
}

const CommandSpec& command_spec(const std::string& name)
{
    for (const auto& c : command_specs())
        if (c.name == name)
            return c;
    throw ConfigError("unknown command " + name);
}

std::vector<std::string> command_names()
{
    std::vector<std::string> n;
    for (const auto& c : command_specs())
        n.push_back(c.name);
    return n;
}

int run_command(const std::string& name, const Settings& s)
{
    if (name == "derive")
        return cmd_derive(s);
    if (name == "verify")
        return cmd_verify(s);
    if (name == "spectral")
        return cmd_spectral(s);
    if (name == "convergence1d")
        return cmd_convergence1d(s);
    if (name == "interaction1d")
        return cmd_interaction1d(s);
    if (name == "vortex2d")
        return cmd_vortex2d(s);
    if (name == "khi2d")
        return cmd_khi2d(s);
    throw ConfigError("unknown command " + name);
}

const std::vector<Preset>& presets()
{
    static const std::vector<Preset> p = {
        {"table1", "spectral", {{"operator", "derive:4,derive:5,derive:6,derive:7,derive:8,derive:9"}, {"m", "101,201"}},
         "spectral radius of h M, orders 4..9"},
        {"table5", "convergence1d", {{"operator", "derive:5,derive:7,derive:9"}, {"m", "51,101,201,401"}, {"cfl", "0.05"}},
         "1D convergence, odd orders 5, 7, 9"},
        {"convergence1d-even", "convergence1d",
         {{"operator", "derive:4,derive:6,derive:8"}, {"m", "51,101,201,401"}, {"cfl", "0.05"}},
         "1D convergence, even orders 4, 6, 8"},
        {"interaction", "interaction1d", {{"operator", "derive:9"}, {"m", "201,401"}, {"alpha", "3"}},
         "boundary interaction, alpha = 3, order 9"},
        {"vortex-odd", "vortex2d",
         {{"operator", "derive:3,derive:5,derive:7,derive:9"}, {"m", "34,68,136,272,544"}, {"tol", "1e-12"}},
         "vortex convergence, odd orders (long)"},
        {"vortex-even", "vortex2d",
         {{"operator", "derive:2,derive:4,derive:6,derive:8"}, {"m", "34,68,136,272,544"}, {"tol", "1e-12"}},
         "vortex convergence, even orders (long)"},
        {"vortex-desk", "vortex2d", {{"operator", "derive:3,derive:5"}, {"m", "34,68"}, {"tol", "1e-12"}},
         "two-grid vortex check, orders 3 and 5"},
        {"khi-matrix", "khi2d",
         {{"operator", "derive:2,derive:3,derive:4,derive:5,derive:6,derive:7,derive:8,derive:9"},
          {"K", "1,4,16,64,256"}, {"nodes", "17"}, {"tend", "15"}, {"tol", "1e-6"}, {"splitting", "sw"}},
         "KHI final-time matrix (long for large K)"},
    };
    return p;
}

const Preset* find_preset(const std::string& name)
{
    for (const auto& p : presets())
        if (p.name == name)
            return &p;
    return nullptr;
}

} // namespace sbpctl
