#pragma once

#include "sbp/euler_solver.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sbp::euler {

enum class TimeMethod { ssp43, rk4 };

struct IntegratorOptions {
    TimeMethod method = TimeMethod::ssp43;
    double atol = 1e-6;
    double rtol = 1e-6;
    // PI controller dt_new = dt * safety * err_n^-beta1 * err_{n-1}^beta2.
    double beta1 = 0.7 / 3.0;
    double beta2 = 0.4 / 3.0;
    double safety = 0.9;
    double factor_min = 0.2;
    double factor_max = 5.0;
    // Upper bound for the first adaptive step and the fixed RK4 step, as a CFL number.
    double cfl = 1.0;
    // Adaptive steps never exceed this CFL number. Without it a near-steady
    // solution lets the controller grow dt past linear stability, since both
    // members of the embedded pair then amplify the same round-off.
    double stability_cfl = 2.0;
    // Invalid stage states shrink dt by this factor, at most max_retries times in a row.
    double retry_factor = 0.25;
    int max_retries = 8;
    double min_dt = 1e-14;
    long max_steps = 50'000'000;
    // With false, a step-size underflow is reported as a crash instead of thrown.
    bool throw_on_underflow = true;
};

struct RunReport {
    double t_end = 0.0;
    double final_time = 0.0;
    bool crashed = false;
    double crash_time = 0.0;
    std::string crash_reason;
    std::vector<NodeSite> crash_sites;
    long steps = 0;
    long rejected = 0;
    double wall_seconds = 0.0;

    // key: value lines. Wall time is left out so reports are reproducible.
    std::string to_text() const;
};

struct RunResult {
    State state;
    RunReport report;
};

// Called after every accepted step with (t, state).
using StepObserver = std::function<void(double, const State&)>;

RunResult integrate(const EulerSolver& solver, const State& u0, double t_end,
                    const IntegratorOptions& opts = {}, const StepObserver& observe = {});

} // namespace sbp::euler
