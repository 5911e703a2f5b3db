#include "sbp/euler_integrate.hpp"

#include "sbp/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace sbp::euler {

std::string RunReport::to_text() const
{
    std::ostringstream os;
    os.precision(10);
    os << "t_end: " << t_end << "\n";
    os << "final_time: " << final_time << "\n";
    os << "crashed: " << (crashed ? "true" : "false") << "\n";
    if (crashed) {
        os << "crash_time: " << crash_time << "\n";
        os << "crash_reason: " << crash_reason << "\n";
        os << "crash_sites: " << crash_sites.size() << "\n";
        const size_t shown = std::min<size_t>(crash_sites.size(), 20);
        for (size_t k = 0; k < shown; ++k) {
            const auto& s = crash_sites[k];
            os << "crash_site: block=" << s.block << " i=" << s.i << " j=" << s.j << " x=" << s.x.x
               << " y=" << s.x.y << "\n";
        }
    }
    os << "steps: " << steps << "\n";
    os << "rejected_steps: " << rejected << "\n";
    return os.str();
}

namespace {

bool all_valid(const State& u)
{
    for (size_t k = 0; k < u.size(); k += 4) {
        const double r = u[k];
        if (!(r > 0.0) || !std::isfinite(r))
            return false;
        const double e = u[k + 3];
        const double p = (kGamma - 1.0) * (e - 0.5 * (u[k + 1] * u[k + 1] + u[k + 2] * u[k + 2]) / r);
        if (!(p > 0.0) || !std::isfinite(p))
            return false;
    }
    return true;
}

double scaled_rms(const State& e, const State& a, const State& b, double atol, double rtol)
{
    double s = 0.0;
    for (size_t k = 0; k < e.size(); ++k) {
        const double w = atol + rtol * std::max(std::abs(a[k]), std::abs(b[k]));
        const double r = e[k] / w;
        s += r * r;
    }
    return std::sqrt(s / static_cast<double>(e.size()));
}

class Clock {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void mark_crash(RunReport& rep, const EulerSolver& solver, double t, const State& bad, std::string why)
{
    rep.crashed = true;
    rep.crash_time = t;
    rep.final_time = t;
    rep.crash_reason = std::move(why);
    rep.crash_sites = solver.invalid_sites(bad);
}

// Hairer-Wanner starting step for an order-3 method.
double initial_step(const EulerSolver& solver, const State& u, const State& f, const IntegratorOptions& o)
{
    State zero(u.size(), 0.0);
    const double d0 = scaled_rms(u, u, zero, o.atol, o.rtol);
    const double d1 = scaled_rms(f, u, zero, o.atol, o.rtol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    const double cap = solver.cfl_step(u, o.cfl);
    h0 = std::min(h0, cap);
    State u1(u.size());
    for (size_t k = 0; k < u.size(); ++k)
        u1[k] = u[k] + h0 * f[k];
    State f1 = solver.rhs(u1);
    for (size_t k = 0; k < u.size(); ++k)
        f1[k] -= f[k];
    const double d2 = scaled_rms(f1, u, zero, o.atol, o.rtol) / h0;
    const double m = std::max(d1, d2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, 1e-3 * h0) : std::pow(0.01 / m, 1.0 / 4.0);
    return std::min({100.0 * h0, h1, cap});
}

RunResult run_ssp43(const EulerSolver& solver, const State& u0, double t_end, const IntegratorOptions& o,
                    const StepObserver& observe, RunReport rep, const Clock& clock)
{
    const size_t n = u0.size();
    State u = u0, k1(n), k2(n), k3(n), k4(n), s(n), unew(n), err(n);
    double t = 0.0;
    solver.rhs(u, k1);
    double dt = initial_step(solver, u, k1, o);
    double err_prev = 1.0;
    int retries = 0;
    bool have_k1 = true;
    while (t < t_end) {
        if (rep.steps >= o.max_steps)
            throw StiffnessError("integrate: step limit reached at t = " + std::to_string(t));
        const bool last = t + dt >= t_end * (1.0 - 1e-14);
        const double h = last ? t_end - t : dt;
        if (!have_k1) {
            solver.rhs(u, k1);
            have_k1 = true;
        }
        bool valid = true;
        const State* failed = nullptr;
        for (size_t k = 0; k < n; ++k)
            s[k] = u[k] + 0.5 * h * k1[k];
        if (!all_valid(s)) {
            valid = false;
            failed = &s;
        }
        if (valid) {
            solver.rhs(s, k2);
            for (size_t k = 0; k < n; ++k)
                s[k] = u[k] + 0.5 * h * (k1[k] + k2[k]);
            if (!all_valid(s)) {
                valid = false;
                failed = &s;
            }
        }
        if (valid) {
            solver.rhs(s, k3);
            for (size_t k = 0; k < n; ++k)
                s[k] = u[k] + h / 6.0 * (k1[k] + k2[k] + k3[k]);
            if (!all_valid(s)) {
                valid = false;
                failed = &s;
            }
        }
        double e = 0.0;
        if (valid) {
            solver.rhs(s, k4);
            for (size_t k = 0; k < n; ++k) {
                unew[k] = s[k] + 0.5 * h * k4[k];
                err[k] = h * (-(k1[k] + k2[k] + k3[k]) / 12.0 + 0.25 * k4[k]);
            }
            if (!all_valid(unew)) {
                valid = false;
                failed = &unew;
            } else {
                e = scaled_rms(err, u, unew, o.atol, o.rtol);
                if (!std::isfinite(e)) {
                    valid = false;
                    failed = &unew;
                }
            }
        }
        if (!valid) {
            ++rep.rejected;
            if (++retries > o.max_retries) {
                mark_crash(rep, solver, t, *failed, "invalid state (rho <= 0, p <= 0 or non-finite) in every retry");
                RunResult r{u, rep};
                r.report.wall_seconds = clock.seconds();
                return r;
            }
            dt = h * o.retry_factor;
        } else if (e <= 1.0) {
            retries = 0;
            t = last ? t_end : t + h;
            u.swap(unew);
            have_k1 = false;
            ++rep.steps;
            const double ec = std::max(e, 1e-10);
            double fac = o.safety * std::pow(ec, -o.beta1) * std::pow(err_prev, o.beta2);
            fac = std::clamp(fac, o.factor_min, o.factor_max);
            err_prev = ec;
            // A shortened final step says nothing about the natural step size.
            dt = last ? dt : h * fac;
            if (t < t_end)
                dt = std::min(dt, solver.cfl_step(u, o.stability_cfl));
            if (observe)
                observe(t, u);
        } else {
            ++rep.rejected;
            dt = h * std::clamp(o.safety * std::pow(e, -1.0 / 3.0), o.factor_min, 1.0);
        }
        if (t < t_end && dt < o.min_dt) {
            if (o.throw_on_underflow)
                throw StiffnessError("integrate: step size " + std::to_string(dt) + " below " +
                                     std::to_string(o.min_dt) + " at t = " + std::to_string(t) +
                                     " after " + std::to_string(rep.steps) + " steps");
            mark_crash(rep, solver, t, u, "step size underflow");
            RunResult r{u, rep};
            r.report.wall_seconds = clock.seconds();
            return r;
        }
    }
    rep.final_time = t_end;
    rep.wall_seconds = clock.seconds();
    return {u, rep};
}

RunResult run_rk4(const EulerSolver& solver, const State& u0, double t_end, const IntegratorOptions& o,
                  const StepObserver& observe, RunReport rep, const Clock& clock)
{
    const size_t n = u0.size();
    State u = u0, k1(n), k2(n), k3(n), k4(n), s(n);
    double t = 0.0;
    while (t < t_end) {
        if (rep.steps >= o.max_steps)
            throw StiffnessError("integrate: step limit reached at t = " + std::to_string(t));
        double h = solver.cfl_step(u, o.cfl);
        const bool last = t + h >= t_end * (1.0 - 1e-14);
        if (last)
            h = t_end - t;
        solver.rhs(u, k1);
        for (size_t k = 0; k < n; ++k)
            s[k] = u[k] + 0.5 * h * k1[k];
        solver.rhs(s, k2);
        for (size_t k = 0; k < n; ++k)
            s[k] = u[k] + 0.5 * h * k2[k];
        solver.rhs(s, k3);
        for (size_t k = 0; k < n; ++k)
            s[k] = u[k] + h * k3[k];
        solver.rhs(s, k4);
        for (size_t k = 0; k < n; ++k)
            s[k] = u[k] + h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        if (!all_valid(s)) {
            mark_crash(rep, solver, t, s, "invalid state (rho <= 0, p <= 0 or non-finite)");
            RunResult r{u, rep};
            r.report.wall_seconds = clock.seconds();
            return r;
        }
        u.swap(s);
        t = last ? t_end : t + h;
        ++rep.steps;
        if (observe)
            observe(t, u);
    }
    rep.final_time = t_end;
    rep.wall_seconds = clock.seconds();
    return {u, rep};
}

} // namespace

RunResult integrate(const EulerSolver& solver, const State& u0, double t_end, const IntegratorOptions& opts,
                    const StepObserver& observe)
{
    if (static_cast<int>(u0.size()) != solver.size())
        throw SizeError("integrate: initial state has wrong length");
    if (!(t_end >= 0.0))
        throw ParameterError("integrate: t_end must be nonnegative");
    if (!(opts.atol > 0.0) || !(opts.rtol >= 0.0) || !(opts.cfl > 0.0) || !(opts.stability_cfl > 0.0))
        throw ParameterError("integrate: tolerances and cfl must be positive");
    Clock clock;
    RunReport rep;
    rep.t_end = t_end;
    if (!all_valid(u0)) {
        mark_crash(rep, solver, 0.0, u0, "invalid initial state");
        rep.wall_seconds = clock.seconds();
        return {u0, rep};
    }
    if (t_end == 0.0) {
        rep.final_time = 0.0;
        return {u0, rep};
    }
    if (opts.method == TimeMethod::rk4)
        return run_rk4(solver, u0, t_end, opts, observe, rep, clock);
    return run_ssp43(solver, u0, t_end, opts, observe, rep, clock);
}

} // namespace sbp::euler
