#pragma once

#include "sbp/operator.hpp"
#include "sbp/verify.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sbp {

struct InteriorStencil {
    int order = 0;
    std::vector<int> offsets;
    std::vector<double> coefficients;
    double alpha = 0.0;   // weight of the last difference operator subtracted

    Stencil as_stencil() const;
};

// Antisymmetric central first-derivative stencil of the given even order.
InteriorStencil central_stencil(int order);

// Interior row of Q+ for the order-p upwind pair.
InteriorStencil upwind_interior(int p);

// Which entries of the left closure of Q+ are unknown.
struct ClosureLayout {
    int s = 0;                 // boundary accuracy s/2
    int block = 0;             // size of the dense upper-left block (= boundary_width)
    int transition_reach = -1; // block rows also own columns j >= block with j - i <= reach
    bool d2_fixed = false;     // accuracy conditions force d2 = 1
};

ClosureLayout closure_layout(int p);

struct ClosureProblem {
    int p = 0;
    double d1 = 1.0;
    double d2 = 1.0;
    ClosureLayout layout;
    InteriorStencil interior;
    std::vector<std::pair<int, int>> q_unknowns;   // (row, col) of Q+; h unknowns follow
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    int rank = 0;
    int null_dim = 0;
    int free_grid_parameters = 0;
    double residual = 0.0;    // inf-norm of A u_p - b
    bool consistent = false;
    Eigen::VectorXd particular;   // minimum-norm solution
    Eigen::MatrixXd null_basis;   // orthonormal, columns span ker A

    int unknown_count() const { return static_cast<int>(q_unknowns.size()) + layout.block; }
    int free_parameters() const { return null_dim + free_grid_parameters; }
};

// Accuracy conditions of the left closure for fixed (d1, d2). Throws
// InfeasibleError when the system has no solution and `require_consistent` is set.
ClosureProblem assemble_accuracy_system(int p, double d1, double d2, bool require_consistent = true);

// Particular solution plus null-space combination, packed as an operator pair.
OperatorPair solve_closure(const ClosureProblem& problem, const Eigen::VectorXd& free);

// inf-norm residual of the accuracy conditions for an assembled candidate.
double accuracy_residual(const ClosureProblem& problem, const OperatorPair& pair);

enum class ObjectiveMode { single_term, combined_term };

int objective_reference_size(const OperatorPair& pair);

// ||e_(s/2+1)||_h^2 or ||e_(s/2+1) + e_(s/2+2)||_h^2 summed over both members
// of the pair, on the unit grid with m = 4*boundary_width + 1.
double objective(const OperatorPair& candidate, ObjectiveMode mode);

// Largest eigenvalue of S once the constant null vector is deflated away.
double deflated_psd_eigenvalue(const OperatorPair& candidate, int m);

struct OptimizationConfig {
    double d_min = 0.3;
    double d_max = 1.7;
    int restarts = 64;
    double psd_penalty_weight = 1e6;
    double h_penalty_weight = 1e6;
    double h_margin = 1e-3;
    double z_range = 2.5;          // start box for free parameters
    int max_evaluations = 20000;   // per simplex pass
    int passes = 2;                // simplex restarts from the previous optimum
    double simplex_tolerance = 1e-10;
    ObjectiveMode mode = ObjectiveMode::combined_term;
    std::uint64_t seed = 1;
    int threads = 0;               // 0: hardware concurrency
    bool equispaced = false;       // hold d1 = d2 = 1
};

struct RestartResult {
    int index = 0;
    double value = 0.0;        // penalized objective
    double objective = 0.0;
    double penalty = 0.0;
    bool feasible = false;
    std::vector<double> params;   // d1, d2, free parameters
    std::vector<double> search_point;
};

struct DerivationResult {
    OperatorPair pair;
    double objective = 0.0;
    double penalty = 0.0;
    double psd_eigenvalue = 0.0;
    double min_h = 0.0;
    double accuracy_residual = 0.0;
    int null_dim = 0;
    int free_parameters = 0;
    std::vector<double> free;
    std::vector<RestartResult> restarts;
    int chosen_restart = -1;
    SbpReport report;

    std::string report_text() const;
};

DerivationResult derive(int p, const OptimizationConfig& config = {});

} // namespace sbp
