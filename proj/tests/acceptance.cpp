// Acceptance run: one PASS / FAIL / NOT RUN line per criterion.
// Exit status is 0 once every criterion has been evaluated; --strict turns any
// FAIL into exit status 1. --report <path> also writes the lines to a file,
// since ctest hides the output of passing tests.
#include "oracles.hpp"
#include "support.hpp"

#include "sbp/euler_experiments.hpp"
#include "sbp/solver1d.hpp"
#include "sbp/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace sbp;

namespace {

enum class Verdict { pass, fail, not_run };

struct Outcome {
    Verdict verdict = Verdict::fail;
    std::string detail;
};

int failures = 0;
std::FILE* report_file = nullptr;

void report(int n, const std::string& what, const std::function<Outcome()>& body)
{
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {Verdict::fail, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "NOT RUN";
    if (o.verdict == Verdict::fail)
        ++failures;
    std::printf("criterion %2d  %-7s  %s | %s [%.0f s]\n", n, tag, what.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
    if (report_file) {
        std::fprintf(report_file, "criterion %2d  %-7s  %s | %s\n", n, tag, what.c_str(), o.detail.c_str());
        std::fflush(report_file);
    }
}

std::string fmt(double v, int prec = 3)
{
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

Outcome certification()
{
    std::string bad;
    double skew = 0.0, psd = 0.0;
    for (int p = 2; p <= 9; ++p) {
        const OperatorPair& pair = sbptest::shipped(p);
        const SbpReport r = verify_sbp(pair, default_verify_sizes(pair));
        skew = std::max(skew, r.skew_identity_residual);
        psd = std::max(psd, r.psd_max_eigenvalue);
        if (!r.pass)
            bad += " p" + std::to_string(p);
    }
    return {bad.empty() ? Verdict::pass : Verdict::fail,
            (bad.empty() ? "p=2..9 certified" : "failed:" + bad) + ", worst skew " + fmt(skew) +
                ", worst lambda_max(S)/max|S| " + fmt(psd)};
}

Outcome derivation()
{
    std::string detail, bad;
    for (int p = 2; p <= 5; ++p) {
        OptimizationConfig cfg;   // 64 restarts, seed 1
        const DerivationResult r = derive(p, cfg);
        const bool box = r.pair.d1 >= 0.3 && r.pair.d1 <= 1.7 && r.pair.d2 >= 0.3 && r.pair.d2 <= 1.7;
        const bool params = p < 4 || r.free_parameters == 4;
        const bool same = r.pair == sbptest::shipped(p);
        if (!r.report.pass || !box || !params)
            bad += " p" + std::to_string(p);
        detail += " p" + std::to_string(p) + ": d=(" + fmt(r.pair.d1, 4) + "," + fmt(r.pair.d2, 4) + ") free=" +
                  std::to_string(r.free_parameters) + (same ? " (=shipped)" : " (differs from shipped)") + ";";
    }
    return {bad.empty() ? Verdict::pass : Verdict::fail, (bad.empty() ? "" : "failed:" + bad + ";") + detail};
}

Outcome projection()
{
    double ident = 0.0, energy = 0.0, growth = -1e300;
    std::mt19937_64 rng(42);
    for (int p = 2; p <= 9; ++p)
        for (auto kind : {DerivativeKind::upwind, DerivativeKind::central})
            for (double alpha : {0.0, 3.0}) {
                HyperbolicSystem sys;
                sys.alpha = alpha;
                const ProjectionSystem ps(sbptest::shipped(p), 51, sys, kind);
                const Eigen::MatrixXd P = ps.P();
                const Eigen::VectorXd hb = Eigen::Map<const Eigen::VectorXd>(ps.hbar().data(), ps.size());
                const Eigen::MatrixXd HP = hb.asDiagonal() * P;
                ident = std::max({ident, (P * P - P).cwiseAbs().maxCoeff(), (ps.L() * P).cwiseAbs().maxCoeff(),
                                  (HP - HP.transpose()).cwiseAbs().maxCoeff()});
                for (int k = 0; k < 10; ++k) {
                    const auto v = sbptest::random_vector(ps.size(), rng);
                    const auto [rate, diss] = ps.energy_rate(v);
                    energy = std::max(energy, std::abs(rate - diss) / std::max(1.0, std::abs(diss)));
                }
            }
    for (int p = 2; p <= 9; ++p) {
        const InteractionResult r = interaction_experiment({"p" + std::to_string(p), sbptest::shipped(p)}, 101, 3.0);
        growth = std::max(growth, r.trace.max_energy_increase);
    }
    const bool ok = ident <= 1e-12 && energy <= 1e-11 && growth <= 0.0;
    return {ok ? Verdict::pass : Verdict::fail, "identities " + fmt(ident) + " (<= 1e-12), energy rate " +
                                                    fmt(energy) + " (<= 1e-11), largest RK4 energy step change " +
                                                    fmt(growth) + " (<= 0)"};
}

Outcome imported_convergence()
{
    const fs::path ref = fs::path(SBP_DATA_DIR) / "reference";
    if (!fs::exists(ref / "upwind_p5.txt"))
        return {Verdict::not_run, "no reference coefficients under data/reference"};
    const OperatorPair pair = load_operator((ref / "upwind_p5.txt").string());
    const auto rows = convergence_study({{"reference p5", pair}}, {51, 101, 201, 401});
    const double logs[] = {-1.22, -2.88, -4.69, -6.50}, rates[] = {5.50, 6.00, 6.03};
    bool ok = rows.size() == 4;
    std::string d;
    for (size_t i = 0; ok && i < 4; ++i) {
        ok = ok && std::abs(rows[i].log10_error - logs[i]) <= 0.05;
        if (i > 0)
            ok = ok && std::abs(rows[i].rate - rates[i - 1]) <= 0.1;
        d += " " + fmt(rows[i].log10_error, 4);
    }
    return {ok ? Verdict::pass : Verdict::fail, "log10 errors" + d};
}

Outcome self_convergence()
{
    std::string d;
    bool ok = true;
    for (int p : {4, 5}) {
        const auto rows = convergence_study({{"p" + std::to_string(p), sbptest::shipped(p)}}, {51, 101, 201, 401});
        const double last = rows.back().rate;
        const double need = p == 5 ? 5.0 : 3.0;
        ok = ok && last >= need;
        d += " p" + std::to_string(p) + " last rate " + fmt(last, 3) + " (>= " + fmt(need, 2) + ");";
    }
    return {ok ? Verdict::pass : Verdict::fail, d};
}

Outcome spectral()
{
    std::vector<NamedOperator> ops;
    for (int p = 2; p <= 9; ++p) {
        ops.push_back({"upwind p" + std::to_string(p), sbptest::shipped(p), DerivativeKind::upwind});
        ops.push_back({"central p" + std::to_string(p), sbptest::shipped(p), DerivativeKind::central});
    }
    const auto rows = spectral_study(ops, {101, 201});
    bool ok = true;
    double worst = 0.0;
    for (size_t k = 0; k + 1 < rows.size(); k += 2) {
        const double a = rows[k].rho_hM, b = rows[k + 1].rho_hM;
        const double change = std::abs(b - a) / a;
        ok = ok && std::isfinite(a) && std::isfinite(b) && change <= 0.02;
        worst = std::max(worst, change);
    }
    return {ok ? Verdict::pass : Verdict::fail,
            "self-derived operators (no reference table values): finite, largest change 101->201 " +
                fmt(100 * worst, 3) + "% (<= 2%)"};
}

Outcome free_stream()
{
    using namespace sbp::euler;
    double worst = 0.0;
    const Primitive w{1.3, 0.4, -0.7, 2.1};
    for (int p = 2; p <= 9; ++p) {
        const OperatorPair& pair = sbptest::shipped(p);
        for (auto kind : {SplittingKind::lax_friedrichs, SplittingKind::steger_warming})
            for (const BlockMesh2D& mesh : {chevron_mesh(34, pair, VortexConfig{}.geometry), khi_mesh(1, 17, pair),
                                            khi_mesh(4, 17, pair)}) {
                const EulerSolver s(mesh, kind);
                const State u = s.sample([&](double, double) { return w; });
                worst = std::max(worst, max_abs(s.rhs(u)) / max_abs(u));
            }
    }
    return {worst <= 1e-12 ? Verdict::pass : Verdict::fail,
            "max |RHS| / |state| = " + fmt(worst) + " (<= 1e-12), p=2..9, both splittings, chevron and K=1,4"};
}

Outcome vortex()
{
    using namespace sbp::euler;
    if (fs::exists(fs::path(SBP_DATA_DIR) / "reference" / "upwind_p5.txt"))
        std::printf("             note: reference coefficients found but the vortex table comparison is not wired\n");
    bool ok = true;
    std::string d;
    for (int p : {3, 5}) {
        const auto rows = vortex_convergence(sbptest::shipped(p), {34, 68}, VortexConfig{});
        const double need = p - 2;
        ok = ok && rows[1].rate >= need;
        d += " p" + std::to_string(p) + ": log10 " + fmt(rows[0].log10_error, 3) + ", " + fmt(rows[1].log10_error, 3) +
             ", rate " + fmt(rows[1].rate, 3) + " (>= " + fmt(need, 1) + ");";
    }
    return {ok ? Verdict::pass : Verdict::fail, "self-derived operators, tol 1e-12," + d};
}

Outcome khi()
{
    using namespace sbp::euler;
    std::string crashed;
    for (int K : {1, 4})
        for (int p = 2; p <= 9; ++p) {
            KhiConfig cfg;
            cfg.K = K;
            const KhiRun r = run_khi(sbptest::shipped(p), cfg);
            if (r.report.crashed || r.report.final_time != 15.0)
                crashed += " K=" + std::to_string(K) + "/p" + std::to_string(p) + " at t=" + fmt(r.report.final_time, 4);
        }
    // seeded negative density
    const EulerSolver s(khi_mesh(1, 17, sbptest::shipped(4)), SplittingKind::steger_warming);
    State u = s.sample(khi_initial);
    u[4 * s.mesh().blocks[0].index(8, 8)] = -0.05;
    IntegratorOptions o;
    o.throw_on_underflow = false;
    const RunResult r = integrate(s, u, 15.0, o);
    const bool caught = r.report.crashed && r.report.steps <= 1 && !r.report.crash_sites.empty();
    const bool ok = crashed.empty() && caught;
    return {ok ? Verdict::pass : Verdict::fail,
            (crashed.empty() ? std::string("all orders reach t = 15 at K = 1, 4") : "crashed:" + crashed) +
                "; seeded negative density " + (caught ? "caught in the first step" : "NOT caught")};
}

Outcome oracles()
{
    std::mt19937_64 rng(10);
    double e1 = 0.0;
    for (int p : {3, 6, 9}) {
        HyperbolicSystem sys;
        sys.alpha = 3.0;
        const ProjectionSystem ps(sbptest::shipped(p), 60, sys);
        const Eigen::MatrixXd M = ps.M();
        for (int k = 0; k < 100; ++k) {
            const auto v = sbptest::random_vector(ps.size(), rng);
            const Eigen::VectorXd ref = M * Eigen::Map<const Eigen::VectorXd>(v.data(), ps.size());
            const auto got = ps.rhs(v);
            double err = 0.0;
            for (int i = 0; i < ps.size(); ++i)
                err = std::max(err, std::abs(got[i] - ref[i]));
            e1 = std::max(e1, err / std::max(1.0, ref.cwiseAbs().maxCoeff()));
        }
    }
    using namespace sbp::euler;
    double e2 = 0.0;
    std::uniform_real_distribution<double> ph(0.0, 6.283185307179586), amp(0.05, 0.2);
    for (int p : {3, 6, 9}) {
        const OperatorPair& pair = sbptest::shipped(p);
        const EulerSolver s(sbptest::skew_block(17, pair), SplittingKind::lax_friedrichs);
        for (int k = 0; k < 10; ++k) {
            const double a = amp(rng), b = ph(rng), c = ph(rng);
            const State u = s.sample([&](double x, double y) {
                return Primitive{1.0 + a * std::sin(x + 2 * y + b), 0.4 + a * std::cos(2 * x - y + c),
                                 -0.2 + a * std::sin(x - y + b), 1.0 + a * std::cos(x + y + c)};
            });
            const State ref = sbptest::dense_periodic_rhs(s, pair, u);
            const State du = s.rhs(u);
            double err = 0.0;
            for (size_t i = 0; i < du.size(); ++i)
                err = std::max(err, std::abs(du[i] - ref[i]));
            e2 = std::max(e2, err / max_abs(ref));
        }
    }
    const bool ok = e1 <= 1e-13 && e2 <= 1e-12;
    return {ok ? Verdict::pass : Verdict::fail,
            "1D matrix-free vs assembled " + fmt(e1) + " (<= 1e-13), 2D periodic block vs dense " + fmt(e2) +
                " (<= 1e-12)"};
}

} // namespace

int main(int argc, char** argv)
{
    bool strict = false;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--strict") == 0) {
            strict = true;
        } else if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc) {
            report_file = std::fopen(argv[++i], "w");
            if (!report_file) {
                std::fprintf(stderr, "cannot write %s\n", argv[i]);
                return 2;
            }
        } else {
            std::fprintf(stderr, "usage: acceptance [--strict] [--report <path>]\n");
            return 2;
        }
    }
    report(1, "SBP certification of every shipped pair", certification);
    report(2, "derivation p=2..5, 64 restarts", derivation);
    report(3, "projection identities and discrete energy estimate", projection);
    report(4, "1D convergence with imported coefficients", imported_convergence);
    report(5, "1D convergence with self-derived pairs", self_convergence);
    report(6, "spectral radius", spectral);
    report(7, "2D free-stream preservation", free_stream);
    report(8, "2D vortex convergence m=34,68", vortex);
    report(9, "KHI robustness K=1,4", khi);
    report(10, "oracle equivalence", oracles);
    std::printf("%d criterion(s) failed\n", failures);
    if (report_file) {
        std::fprintf(report_file, "%d criterion(s) failed\n", failures);
        std::fclose(report_file);
    }
    return strict && failures > 0 ? 1 : 0;
}
