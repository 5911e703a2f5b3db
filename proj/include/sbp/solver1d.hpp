#pragma once

#include "sbp/operator.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace sbp {

// C u_t + A u_x = 0 with A = [[alpha, 1], [1, 0]], u1 = 0 at both ends.
struct HyperbolicSystem {
    double alpha = 0.0;
    double c1 = 1.0;
    double c2 = 1.0;
    double x_l = -1.0;
    double x_r = 1.0;
};

// upwind: D+- as in the pair; central: both replaced by D1 = (D+ + D-)/2.
enum class DerivativeKind { upwind, central };

// P = I - Hbar^{-1} L^T (L Hbar^{-1} L^T)^{-1} L for dense L (k x n).
Eigen::MatrixXd projection_operator(const Eigen::MatrixXd& L, const Eigen::VectorXd& hbar);

class ProjectionSystem {
public:
    ProjectionSystem(const OperatorPair& pair, int m, const HyperbolicSystem& sys,
                     DerivativeKind kind = DerivativeKind::upwind);

    int m() const { return m_; }
    int size() const { return 2 * m_; }
    const AssembledOperators& ops() const { return ops_; }
    const HyperbolicSystem& system() const { return sys_; }
    const std::vector<double>& hbar() const { return hbar_; }
    double h() const { return ops_.h(); }
    const std::vector<double>& nodes() const { return ops_.grid.nodes; }

    Eigen::MatrixXd L() const;
    Eigen::MatrixXd Dx() const;
    Eigen::MatrixXd P() const;
    // M = -P C^{-1} Dx P
    Eigen::MatrixXd M() const;

    void project(const std::vector<double>& v, std::vector<double>& out) const;
    // -P C^{-1} Dx P v without forming matrices.
    void rhs(const std::vector<double>& v, std::vector<double>& out) const;
    std::vector<double> rhs(const std::vector<double>& v) const;

    double energy(const std::vector<double>& v) const;
    // d/dt ||v||^2_Hbar from the RHS, and 2 alpha (w1)^T S w1 with w = P v.
    std::pair<double, double> energy_rate(const std::vector<double>& v) const;

private:
    int m_;
    HyperbolicSystem sys_;
    DerivativeKind kind_;
    AssembledOperators ops_;
    std::vector<double> hbar_;
    // P v = v - G (L v); L picks u1 at both ends, so G has two columns.
    std::vector<int> constrained_;
    Eigen::MatrixXd G_;
    mutable std::vector<double> w_, y_;
};

struct SolutionTrace {
    std::vector<double> times;
    std::vector<double> energies;
    std::vector<double> final_state;
    int steps = 0;
    double max_energy_increase = 0.0;   // largest single-step increase of E
};

struct Rk4Options {
    bool record_energy = true;
};

SolutionTrace rk4_integrate(const ProjectionSystem& sys, const std::vector<double>& v0, double t_end,
                            double cfl, const Rk4Options& opt = {});

enum class GaussianForm { initial, reflected };

struct GaussianFields {
    std::vector<double> u1;
    std::vector<double> u2;
};

// theta1 = exp(-((x-t)/r)^2), theta2 = -exp(-((x+t)/r)^2).
// initial:   u1 = theta1(x,t) - theta2(x,t), u2 = theta1 + theta2
// reflected: u1 = theta2(x,L-t) - theta1(x,L-t), u2 = theta1(x,L-t) + theta2(x,L-t), L = 2
GaussianFields gaussian_solution(const std::vector<double>& x, double r_star, double t, GaussianForm form);

std::vector<double> concat(const GaussianFields& f);

struct NamedOperator {
    std::string name;
    OperatorPair pair;
    DerivativeKind kind = DerivativeKind::upwind;
};

struct ConvergenceRow {
    std::string name;
    int order = 0;
    int m = 0;
    double log10_error = 0.0;
    double rate = 0.0;   // NaN for the coarsest grid
};

struct ConvergenceOptions {
    double cfl = 0.05;
    double t_end = 1.8;
    double r_star = 0.1;
    double alpha = 0.0;
    int threads = 1;
};

double observed_rate(double err_m, double err_n, int m, int n);

std::vector<ConvergenceRow> convergence_study(const std::vector<NamedOperator>& ops,
                                              const std::vector<int>& m_list,
                                              const ConvergenceOptions& opt = {});

struct SpectralRow {
    std::string name;
    int order = 0;
    int m = 0;
    double rho_hM = 0.0;
};

// rho(h M) with alpha = 0 and h the nominal interior spacing.
std::vector<SpectralRow> spectral_study(const std::vector<NamedOperator>& ops, const std::vector<int>& m_list);

struct InteractionResult {
    std::vector<double> x;
    std::vector<double> u1;
    std::vector<double> u2;
    SolutionTrace trace;
    double max_u1 = 0.0;
    double min_u1 = 0.0;
    double max_u2 = 0.0;
    double min_u2 = 0.0;
    double total_variation = 0.0;     // of u1 and u2 at the final time
    double boundary_overshoot = 0.0;  // max |u| over the last 10% of the domain at each end
};

InteractionResult interaction_experiment(const NamedOperator& op, int m, double alpha = 3.0,
                                         double t_end = 1.8, double cfl = 0.05, double r_star = 0.1);

} // namespace sbp
