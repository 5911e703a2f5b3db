#include "sbp/error.hpp"
#include "sbp/euler_experiments.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace sbp;
using namespace sbp::euler;

namespace {

constexpr double pi = std::numbers::pi;

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

Cons random_state(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> rho(0.1, 5.0), vel(-3.0, 3.0), p(0.05, 10.0);
    return to_conservative({rho(rng), vel(rng), vel(rng), p(rng)});
}

} // namespace

TEST_CASE("pressure examples")
{
    CHECK(pressure({1.0, 0.0, 0.0, 1.0 / (kGamma - 1.0)}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pressure({2.0, 2.0, 0.0, 3.0}) == doctest::Approx(0.8).epsilon(1e-15));
    // Negative pressure is reported, not raised.
    CHECK(pressure({1.0, 3.0, 0.0, 1.0}) < 0.0);
    CHECK_FALSE(is_valid({1.0, 3.0, 0.0, 1.0}));
    CHECK_FALSE(is_valid({-1.0, 0.0, 0.0, 1.0}));
}

TEST_CASE("primitive round trip")
{
    std::mt19937_64 rng(1);
    for (int k = 0; k < 100; ++k) {
        const Cons u = random_state(rng);
        const Cons back = to_conservative(to_primitive(u));
        for (int v = 0; v < 4; ++v)
            CHECK(std::abs(back[v] - u[v]) <= 1e-13 * std::abs(u[v]) + 1e-15);
    }
}

TEST_CASE("splittings are consistent on random states")
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dir(-2.0, 2.0);
    for (auto kind : {SplittingKind::lax_friedrichs, SplittingKind::steger_warming}) {
        double worst = 0.0;
        for (int k = 0; k < 10000; ++k) {
            const Cons u = random_state(rng);
            const double nx = dir(rng), ny = dir(rng);
            for (auto [ax, ay] : {std::pair{nx, 0.0}, std::pair{0.0, ny}, std::pair{nx, ny}}) {
                Cons fp, fm;
                split_flux(u, ax, ay, kind, fp, fm);
                const Cons f = flux(u, ax, ay);
                double fmax = 0.0, err = 0.0;
                for (int v = 0; v < 4; ++v) {
                    fmax = std::max(fmax, std::abs(f[v]));
                    err = std::max(err, std::abs(fp[v] + fm[v] - f[v]));
                }
                worst = std::max(worst, err / std::max(fmax, 1e-300));
            }
        }
        CHECK(worst <= 1e-14);
    }
}

TEST_CASE("Steger-Warming in supersonic flow is fully upwind")
{
    const Cons u = to_conservative({1.0, 3.0, 0.0, 1.0});   // c = sqrt(1.4) < 3
    Cons fp, fm;
    split_flux(u, 1.0, 0.0, SplittingKind::steger_warming, fp, fm);
    const Cons f = flux(u, 1.0, 0.0);
    for (int v = 0; v < 4; ++v) {
        CHECK(std::abs(fm[v]) <= 1e-14 * std::abs(f[0]) * 10);
        CHECK(fp[v] == doctest::Approx(f[v]).epsilon(1e-14));
    }
    // and the reverse direction puts everything into f-
    split_flux(u, -1.0, 0.0, SplittingKind::steger_warming, fp, fm);
    for (int v = 0; v < 4; ++v)
        CHECK(std::abs(fp[v]) <= 1e-13);
}

TEST_CASE("Steger-Warming split Jacobians have signed spectra")
{
    std::mt19937_64 rng(4);
    for (int k = 0; k < 50; ++k) {
        const Cons u = random_state(rng);
        const double nx = 0.6, ny = -0.8;
        Eigen::Matrix4d Ap, Am;
        for (int c = 0; c < 4; ++c) {
            const double d = 1e-6 * std::max(1.0, std::abs(u[c]));
            Cons a = u, b = u;
            a[c] += d;
            b[c] -= d;
            Cons pa, ma, pb, mb;
            split_flux(a, nx, ny, SplittingKind::steger_warming, pa, ma);
            split_flux(b, nx, ny, SplittingKind::steger_warming, pb, mb);
            for (int r = 0; r < 4; ++r) {
                Ap(r, c) = (pa[r] - pb[r]) / (2 * d);
                Am(r, c) = (ma[r] - mb[r]) / (2 * d);
            }
        }
        const double scale = Ap.cwiseAbs().maxCoeff() + Am.cwiseAbs().maxCoeff();
        for (auto ev : Ap.eigenvalues())
            CHECK(ev.real() >= -1e-6 * scale);
        for (auto ev : Am.eigenvalues())
            CHECK(ev.real() <= 1e-6 * scale);
    }
}

TEST_CASE("Lax-Friedrichs splitting at rest")
{
    const Primitive w{1.3, 0.0, 0.0, 2.0};
    const Cons u = to_conservative(w);
    const double c = std::sqrt(kGamma * w.p / w.rho);
    Cons fp, fm;
    split_flux(u, 1.0, 0.0, SplittingKind::lax_friedrichs, fp, fm);
    for (int v = 0; v < 4; ++v)
        CHECK(fp[v] - fm[v] == doctest::Approx(c * u[v]).epsilon(1e-14));
    CHECK(max_wave_speed(u, 3.0, 4.0) == doctest::Approx(5.0 * c));
}

TEST_CASE("split_flux rejects invalid states")
{
    Cons fp, fm;
    CHECK_THROWS_AS(split_flux({-1.0, 0.0, 0.0, 1.0}, 1.0, 0.0, SplittingKind::lax_friedrichs, fp, fm),
                    InvalidStateError);
    CHECK_THROWS_AS(split_flux({1.0, 3.0, 0.0, 1.0}, 1.0, 0.0, SplittingKind::steger_warming, fp, fm),
                    InvalidStateError);
}

TEST_CASE("interface fluxes are consistent")
{
    std::mt19937_64 rng(6);
    for (int k = 0; k < 100; ++k) {
        const Cons u = random_state(rng);
        const Cons f = flux(u, 0.3, 1.1);
        const Cons a = llf_flux(u, u, 0.3, 1.1);
        const Cons b = splitting_flux(u, u, 0.3, 1.1, SplittingKind::steger_warming);
        for (int v = 0; v < 4; ++v) {
            CHECK(a[v] == doctest::Approx(f[v]).epsilon(1e-13));
            CHECK(b[v] == doctest::Approx(f[v]).epsilon(1e-13));
        }
    }
}

TEST_CASE("isentropic vortex values")
{
    const Primitive c = isentropic_vortex(0.0, -0.5, 0.0);
    CHECK(std::abs(c.rho - 0.79855) <= 1e-4);
    CHECK(c.rho == doctest::Approx(std::pow(1.0 - 2.5 * std::exp(1.0) / (8.0 * pi * pi), 2.5)).epsilon(1e-14));
    CHECK(c.p == doctest::Approx(std::pow(c.rho, kGamma) / (kGamma * 0.25)).epsilon(1e-14));
    CHECK(c.v1 == doctest::Approx(1.0));
    CHECK(c.v2 == 0.0);
    const Primitive far = isentropic_vortex(40.0, -0.5, 0.0);
    CHECK(far.rho == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(far.v1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(far.v2) <= 1e-14);
    CHECK(far.p == doctest::Approx(1.0 / (kGamma * 0.25)).epsilon(1e-14));
    for (double t : {0.3, 1.0, 7.0})
        CHECK(isentropic_vortex(t, -0.5, t).v2 == 0.0);
    VortexParams strong;
    strong.eps = 50.0;
    CHECK_THROWS_AS(isentropic_vortex(0.0, -0.5, 0.0, strong), ParameterError);
}

TEST_CASE("shear layer values")
{
    const Primitive mid = khi_initial(0.25, 0.0);
    CHECK(mid.rho == doctest::Approx(0.5 + 1.5 * std::tanh(7.5)).epsilon(1e-15));
    CHECK(std::abs(mid.rho - 2.0) <= 3e-6);
    CHECK(std::abs(mid.v1 - 0.5) <= 2e-6);
    CHECK(mid.v2 == doctest::Approx(0.1));
    CHECK(mid.p == 1.0);
    for (double y : {-1.0, 1.0}) {
        const Primitive e = khi_initial(0.0, y);
        CHECK(std::abs(e.rho - 0.5) <= 1e-6);
        CHECK(std::abs(e.v1 + 0.5) <= 1e-6);
    }
    for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0})
        CHECK(std::abs(khi_initial(x, 0.3).v2) <= 1e-16);
}

TEST_CASE("mesh geometry")
{
    const OperatorPair& pair = sbptest::shipped(4);
    for (double scale : {1.0, 5.0}) {
        const BlockMesh2D mesh = chevron_mesh(20, pair, {scale, -0.5 - 0.5 * scale});
        CHECK(mesh.blocks.size() == 2);
        CHECK(mesh.area() == doctest::Approx(8.0 * scale * scale).epsilon(1e-12));
        CHECK(mesh.total_nodes() == 800);
        const Block& a = mesh.blocks[0];
        const Block& b = mesh.blocks[1];
        for (int j = 0; j < 20; ++j) {
            const Point p = a.node(19, j), q = b.node(0, j);
            CHECK(std::hypot(p.x - q.x, p.y - q.y) <= 1e-13 * scale);
        }
        CHECK(a.jac > 0.0);
        CHECK(b.jac > 0.0);
    }
    for (int K : {1, 4, 16}) {
        const BlockMesh2D mesh = khi_mesh(K, 17, pair);
        CHECK(mesh.total_nodes() == K * 17 * 17);
        CHECK(mesh.area() == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(mesh.connections.size() == 2 * static_cast<size_t>(K));
    }
    CHECK_THROWS_AS(khi_mesh(3, 17, pair), ParameterError);
    CHECK_THROWS_AS(chevron_mesh(20, pair, {-1.0, 0.0}), ParameterError);
}

TEST_CASE("mismatched interfaces are rejected")
{
    const OperatorPair& pair = sbptest::shipped(2);
    BlockMesh2D mesh;
    mesh.blocks.push_back(make_block({Point{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 10, 10, pair));
    mesh.blocks.push_back(make_block({Point{1, 0}, {2, 0}, {2, 1}, {1, 1}}, 10, 12, pair));
    mesh.connections = {{0, Side::east, 1, Side::west}};
    CHECK_THROWS(mesh.validate());
    BlockMesh2D moved;
    moved.blocks.push_back(make_block({Point{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 10, 10, pair));
    moved.blocks.push_back(make_block({Point{1, 0}, {2, 0}, {2, 1.2}, {1, 1.2}}, 10, 10, pair));
    moved.connections = {{0, Side::east, 1, Side::west}};
    CHECK_THROWS(moved.validate());
}

TEST_CASE("free stream is preserved on both meshes")
{
    const Primitive w{1.3, 0.4, -0.7, 2.1};
    for (int p = 2; p <= 9; ++p) {
        CAPTURE(p);
        const OperatorPair& pair = sbptest::shipped(p);
        for (auto kind : {SplittingKind::lax_friedrichs, SplittingKind::steger_warming}) {
            for (const BlockMesh2D& mesh : {chevron_mesh(pair.min_size() + 3, pair, {5.0, -3.0}),
                                            chevron_mesh(34, pair), khi_mesh(4, 17, pair)}) {
                const EulerSolver s(mesh, kind);
                const State u = s.sample([&](double, double) { return w; });
                CHECK(max_abs(s.rhs(u)) <= 1e-12 * max_abs(u));
            }
        }
    }
}

TEST_CASE("periodic coupling conserves the totals")
{
    for (int p : {3, 6}) {
        const OperatorPair& pair = sbptest::shipped(p);
        for (const BlockMesh2D& mesh : {chevron_mesh(24, pair, {2.0, -1.5}), khi_mesh(4, 17, pair)}) {
            for (auto iface : {InterfaceFlux::lax_friedrichs, InterfaceFlux::splitting}) {
                const EulerSolver s(mesh, SplittingKind::steger_warming, iface);
                const State u = s.sample(khi_initial);
                const Cons tot = s.totals(s.rhs(u));
                const Cons mass = s.totals(u);
                for (int v = 0; v < 4; ++v)
                    CHECK(std::abs(tot[v]) <= 1e-11 * std::abs(mass[v] == 0.0 ? 1.0 : mass[v]) + 1e-12);
            }
        }
    }
}

TEST_CASE("single-block periodic RHS matches a dense assembly")
{
    const int m = 17;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi), amp(0.05, 0.2);
    for (int p : {3, 4, 7}) {
        CAPTURE(p);
        const OperatorPair& pair = sbptest::shipped(p);
        const BlockMesh2D mesh = sbptest::skew_block(m, pair);
        for (auto kind : {SplittingKind::lax_friedrichs, SplittingKind::steger_warming}) {
            const EulerSolver s(mesh, kind);
            for (int trial = 0; trial < 10; ++trial) {
                double a[4], ph[4];
                for (int k = 0; k < 4; ++k) {
                    a[k] = amp(rng);
                    ph[k] = phase(rng);
                }
                const State u = s.sample([&](double x, double y) {
                    return Primitive{1.0 + a[0] * std::sin(x + 2 * y + ph[0]), 0.5 + a[1] * std::cos(2 * x - y + ph[1]),
                                     -0.3 + a[2] * std::sin(x - y + ph[2]), 1.0 + a[3] * std::cos(x + y + ph[3])};
                });
                const State ref = sbptest::dense_periodic_rhs(s, pair, u);
                const State du = s.rhs(u);
                double err = 0.0;
                for (size_t k = 0; k < du.size(); ++k)
                    err = std::max(err, std::abs(du[k] - ref[k]));
                CHECK(err <= 1e-12 * max_abs(ref));
            }
        }
    }
}

TEST_CASE("vortex right-hand side converges in the interior")
{
    const OperatorPair& pair = sbptest::shipped(4);
    double prev = 0.0;
    for (int m : {80, 160}) {
        // Cartesian two-block periodic box around the vortex.
        BlockMesh2D mesh;
        mesh.blocks.push_back(make_block({Point{-10, -5.5}, {0, -5.5}, {0, 4.5}, {-10, 4.5}}, m, m, pair));
        mesh.blocks.push_back(make_block({Point{0, -5.5}, {10, -5.5}, {10, 4.5}, {0, 4.5}}, m, m, pair));
        mesh.connections = {{0, Side::east, 1, Side::west}, {1, Side::east, 0, Side::west},
                            {0, Side::north, 0, Side::south}, {1, Side::north, 1, Side::south}};
        const EulerSolver s(mesh, SplittingKind::lax_friedrichs);
        const double dt = 1e-3;
        auto at = [&](double t) { return s.sample([&](double x, double y) { return isentropic_vortex(x, y, t); }); };
        const State u = at(0.0), up = at(dt), um = at(-dt), up2 = at(2 * dt), um2 = at(-2 * dt);
        const State du = s.rhs(u);
        double err = 0.0;
        const auto interior = interior_rows(pair, *mesh.blocks[0].ops_x);
        for (int bi = 0; bi < 2; ++bi)
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < m; ++i) {
                    if (!interior[i] || !interior[j])
                        continue;
                    const int k = s.offset(bi) + 4 * mesh.blocks[bi].index(i, j);
                    for (int v = 0; v < 4; ++v) {
                        const double exact = (-up2[k + v] + 8 * up[k + v] - 8 * um[k + v] + um2[k + v]) / (12 * dt);
                        err = std::max(err, std::abs(du[k + v] - exact));
                    }
                }
        if (prev > 0.0)
            CHECK(std::log2(prev / err) >= 3.0);
        prev = err;
    }
}

TEST_CASE("density error of a constant offset")
{
    const OperatorPair& pair = sbptest::shipped(5);
    const EulerSolver s(chevron_mesh(20, pair, {2.0, -1.5}), SplittingKind::lax_friedrichs);
    auto exact = [](double x, double y) { return isentropic_vortex(x, y, 0.0); };
    State u = s.sample(exact);
    CHECK(density_error(s, u, exact) == 0.0);
    for (size_t k = 0; k < u.size(); k += 4)
        u[k] += 1e-3;
    CHECK(density_error(s, u, exact) == doctest::Approx(1e-3 * std::sqrt(32.0)).epsilon(1e-12));
}

TEST_CASE("free stream stays put under time integration")
{
    const OperatorPair& pair = sbptest::shipped(4);
    const EulerSolver s(khi_mesh(4, 17, pair), SplittingKind::steger_warming);
    const State u0 = s.sample([](double, double) { return Primitive{0.9, 0.3, 0.2, 1.5}; });
    for (auto method : {TimeMethod::ssp43, TimeMethod::rk4}) {
        IntegratorOptions o;
        o.method = method;
        const RunResult r = integrate(s, u0, 0.5, o);
        CHECK_FALSE(r.report.crashed);
        CHECK(r.report.final_time == 0.5);
        for (size_t k = 0; k < u0.size(); ++k)
            CHECK(std::abs(r.state[k] - u0[k]) <= 1e-11);
    }
}

TEST_CASE("a seeded negative density is caught within one step")
{
    const OperatorPair& pair = sbptest::shipped(4);
    const EulerSolver s(khi_mesh(1, 17, pair), SplittingKind::steger_warming);
    State u = s.sample(khi_initial);
    const int k = 4 * s.mesh().blocks[0].index(5, 7);
    u[k] = -0.1;
    IntegratorOptions o;
    o.throw_on_underflow = false;
    const RunResult r = integrate(s, u, 1.0, o);
    CHECK(r.report.crashed);
    CHECK(r.report.steps <= 1);
    CHECK(r.report.final_time < 1.0);
    REQUIRE_FALSE(r.report.crash_sites.empty());
    CHECK(r.report.crash_sites.front().i == 5);
    CHECK(r.report.crash_sites.front().j == 7);
    const auto sites = s.invalid_sites(u);
    REQUIRE(sites.size() == 1);
}

TEST_CASE("a state that turns invalid mid-run is reported as a crash")
{
    const OperatorPair& pair = sbptest::shipped(4);
    const EulerSolver s(khi_mesh(1, 17, pair), SplittingKind::steger_warming);
    // Near-vacuum next to a strong compression: pressure goes negative quickly.
    const State u = s.sample([](double x, double) {
        return Primitive{x < 0.0 ? 1.0 : 1e-3, x < 0.0 ? 3.0 : -3.0, 0.0, x < 0.0 ? 1.0 : 1e-4};
    });
    IntegratorOptions o;
    o.throw_on_underflow = false;
    const RunResult r = integrate(s, u, 2.0, o);
    if (r.report.crashed) {
        CHECK(r.report.final_time < 2.0);
        CHECK(r.report.crash_time == r.report.final_time);
    } else {
        CHECK(r.report.final_time == 2.0);
    }
    CHECK(r.report.to_text().find("crashed") != std::string::npos);
}
