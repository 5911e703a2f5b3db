#pragma once

#include "sbp/euler_integrate.hpp"

#include <string>
#include <vector>

namespace sbp::euler {

struct VortexParams {
    double mach = 0.5;
    double eps = 5.0;
    double x0 = 0.0;
    double y0 = -0.5;
};

// Shu's isentropic vortex translating with unit speed in x.
Primitive isentropic_vortex(double x, double y, double t, const VortexParams& vp = {});

// Double shear layer on [-1,1]^2 with p = 1.
Primitive khi_initial(double x, double y);

// sqrt(sum_nodes J Hx Hy (rho - rho_exact)^2), not logged.
double density_error(const EulerSolver& solver, const State& u,
                     const std::function<Primitive(double, double)>& exact);

struct VortexConfig {
    double t_end = 1.0;
    double tol = 1e-12;
    // Scaled so the vortex sits mid-block, about five core radii from every
    // periodic edge, where its perturbation is below 1e-4.
    ChevronGeometry geometry{5.0, -3.0};
    SplittingKind splitting = SplittingKind::lax_friedrichs;
    InterfaceFlux interface_flux = InterfaceFlux::lax_friedrichs;
    TimeMethod method = TimeMethod::ssp43;
    double cfl = 1.0;
    VortexParams vortex;
};

struct VortexRow {
    int m = 0;
    double error = 0.0;
    double log10_error = 0.0;
    double rate = 0.0;   // NaN on the coarsest grid
    RunReport report;
};

VortexRow run_vortex(const OperatorPair& pair, int m, const VortexConfig& cfg);
// Rates from consecutive grids, log(e_prev / e) / log(m / m_prev).
std::vector<VortexRow> vortex_convergence(const OperatorPair& pair, const std::vector<int>& ms,
                                          const VortexConfig& cfg);

struct KhiConfig {
    int K = 1;
    int nodes = 17;
    double t_end = 15.0;
    double tol = 1e-6;
    SplittingKind splitting = SplittingKind::steger_warming;
    InterfaceFlux interface_flux = InterfaceFlux::lax_friedrichs;
    TimeMethod method = TimeMethod::ssp43;
    double cfl = 1.0;
};

struct KhiRun {
    RunReport report;
    State state;
};

// Crashes are reported, not thrown.
KhiRun run_khi(const OperatorPair& pair, const KhiConfig& cfg);

// Per block: header line then one "x y rho v1 v2 p" record per node, either as
// text or as raw little-endian doubles.
void write_snapshot(const std::string& path, const EulerSolver& solver, const State& u, bool binary = false);

} // namespace sbp::euler
