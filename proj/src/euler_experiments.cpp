#include "sbp/euler_experiments.hpp"

#include "sbp/error.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>

namespace sbp::euler {

Primitive isentropic_vortex(double x, double y, double t, const VortexParams& vp)
{
    const double pi = std::numbers::pi;
    const double dx = x - vp.x0 - t, dy = y - vp.y0;
    const double f = 1.0 - (dx * dx + dy * dy);
    const double base = 1.0 - vp.eps * vp.eps * (kGamma - 1.0) * vp.mach * vp.mach / (8.0 * pi * pi) * std::exp(f);
    if (!(base > 0.0) || !(vp.mach > 0.0))
        throw ParameterError("isentropic_vortex: vortex too strong for this Mach number (density base <= 0)");
    Primitive w;
    w.rho = std::pow(base, 1.0 / (kGamma - 1.0));
    w.p = std::pow(w.rho, kGamma) / (kGamma * vp.mach * vp.mach);
    const double g = vp.eps / (2.0 * pi) * std::exp(0.5 * f);
    w.v1 = 1.0 - g * dy;
    w.v2 = g * dx;
    return w;
}

Primitive khi_initial(double x, double y)
{
    const double B = std::tanh(15.0 * y + 7.5) - std::tanh(15.0 * y - 7.5);
    return {0.5 + 0.75 * B, 0.5 * (B - 1.0), 0.1 * std::sin(2.0 * std::numbers::pi * x), 1.0};
}

double density_error(const EulerSolver& solver, const State& u,
                     const std::function<Primitive(double, double)>& exact)
{
    const auto& mesh = solver.mesh();
    double s = 0.0;
    for (size_t bi = 0; bi < mesh.blocks.size(); ++bi) {
        const Block& b = mesh.blocks[bi];
        for (int j = 0; j < b.my; ++j)
            for (int i = 0; i < b.mx; ++i) {
                const Point p = b.node(i, j);
                const double d = u[solver.offset(static_cast<int>(bi)) + 4 * b.index(i, j)] - exact(p.x, p.y).rho;
                s += b.weight(i, j) * d * d;
            }
    }
    return std::sqrt(s);
}

namespace {

IntegratorOptions options(TimeMethod method, double tol, double cfl)
{
    IntegratorOptions o;
    o.method = method;
    o.atol = tol;
    o.rtol = tol;
    o.cfl = cfl;
    return o;
}

} // namespace

VortexRow run_vortex(const OperatorPair& pair, int m, const VortexConfig& cfg)
{
    EulerSolver solver(chevron_mesh(m, pair, cfg.geometry), cfg.splitting, cfg.interface_flux);
    const auto& vp = cfg.vortex;
    const State u0 = solver.sample([&](double x, double y) { return isentropic_vortex(x, y, 0.0, vp); });
    RunResult res = integrate(solver, u0, cfg.t_end, options(cfg.method, cfg.tol, cfg.cfl));
    VortexRow row;
    row.m = m;
    row.report = res.report;
    row.rate = std::numeric_limits<double>::quiet_NaN();
    if (res.report.crashed) {
        row.error = std::numeric_limits<double>::infinity();
        row.log10_error = row.error;
        return row;
    }
    row.error = density_error(solver, res.state,
                              [&](double x, double y) { return isentropic_vortex(x, y, cfg.t_end, vp); });
    row.log10_error = std::log10(row.error);
    return row;
}

std::vector<VortexRow> vortex_convergence(const OperatorPair& pair, const std::vector<int>& ms,
                                          const VortexConfig& cfg)
{
    std::vector<VortexRow> rows;
    for (size_t k = 0; k < ms.size(); ++k) {
        rows.push_back(run_vortex(pair, ms[k], cfg));
        if (k > 0)
            rows[k].rate = std::log(rows[k - 1].error / rows[k].error) /
                           std::log(static_cast<double>(ms[k]) / ms[k - 1]);
    }
    return rows;
}

KhiRun run_khi(const OperatorPair& pair, const KhiConfig& cfg)
{
    EulerSolver solver(khi_mesh(cfg.K, cfg.nodes, pair), cfg.splitting, cfg.interface_flux);
    const State u0 = solver.sample(khi_initial);
    IntegratorOptions o = options(cfg.method, cfg.tol, cfg.cfl);
    o.throw_on_underflow = false;
    RunResult res = integrate(solver, u0, cfg.t_end, o);
    return {res.report, std::move(res.state)};
}

void write_snapshot(const std::string& path, const EulerSolver& solver, const State& u, bool binary)
{
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os)
        throw Error("write_snapshot: cannot open " + path);
    const auto& mesh = solver.mesh();
    os << "# fields: x y rho v1 v2 p\n";
    for (size_t bi = 0; bi < mesh.blocks.size(); ++bi) {
        const Block& b = mesh.blocks[bi];
        os << "block " << bi << " mx " << b.mx << " my " << b.my << (binary ? " binary" : " text") << "\n";
        os << std::setprecision(17);
        for (int j = 0; j < b.my; ++j)
            for (int i = 0; i < b.mx; ++i) {
                const Point p = b.node(i, j);
                const double* q = u.data() + solver.offset(static_cast<int>(bi)) + 4 * b.index(i, j);
                const Primitive w = to_primitive({q[0], q[1], q[2], q[3]});
                const double rec[6] = {p.x, p.y, w.rho, w.v1, w.v2, w.p};
                if (binary) {
                    os.write(reinterpret_cast<const char*>(rec), sizeof rec);
                } else {
                    for (int k = 0; k < 6; ++k)
                        os << rec[k] << (k == 5 ? '\n' : ' ');
                }
            }
        if (binary)
            os << "\n";
    }
    if (!os)
        throw Error("write_snapshot: write failed for " + path);
}

} // namespace sbp::euler
