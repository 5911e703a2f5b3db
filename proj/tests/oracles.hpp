#pragma once

#include "sbp/euler_solver.hpp"

#include <Eigen/Dense>

#include <array>

namespace sbptest {

// du/dt on a single block whose east/west and north/south edges are glued to
// each other, built from dense D+- and written out term by term.
inline sbp::euler::State dense_periodic_rhs(const sbp::euler::EulerSolver& s, const sbp::OperatorPair& pair,
                                            const sbp::euler::State& u)
{
    using namespace sbp::euler;
    const Block& b = s.mesh().blocks.at(0);
    const int m = b.mx;
    const sbp::AssembledOperators ops = sbp::assemble(pair, m);
    const Eigen::MatrixXd Dp = ops.Dplus.to_dense(), Dm = ops.Dminus.to_dense();
    const auto nxi = b.n_xi(), neta = b.n_eta();
    auto at = [&](int i, int j) {
        const int k = 4 * b.index(i, j);
        return Cons{u[k], u[k + 1], u[k + 2], u[k + 3]};
    };
    std::array<Eigen::MatrixXd, 4> Fp, Fm, Gp, Gm;
    for (int v = 0; v < 4; ++v)
        Fp[v] = Fm[v] = Gp[v] = Gm[v] = Eigen::MatrixXd(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            Cons fp, fm, gp, gm;
            split_flux(at(i, j), nxi[0], nxi[1], s.splitting(), fp, fm);
            split_flux(at(i, j), neta[0], neta[1], s.splitting(), gp, gm);
            for (int v = 0; v < 4; ++v) {
                Fp[v](i, j) = fp[v];
                Fm[v](i, j) = fm[v];
                Gp[v](i, j) = gp[v];
                Gm[v](i, j) = gm[v];
            }
        }
    std::array<Eigen::MatrixXd, 4> r;
    for (int v = 0; v < 4; ++v)
        r[v] = -(Dm * Fp[v] + Dp * Fm[v] + Gp[v] * Dm.transpose() + Gm[v] * Dp.transpose()) / b.jac;
    // The east edge is the left state across the west edge, likewise north over south.
    for (int l = 0; l < m; ++l) {
        const Cons ue = at(m - 1, l), uw = at(0, l), un = at(l, m - 1), us = at(l, 0);
        const Cons fx = llf_flux(ue, uw, nxi[0], nxi[1]);
        const Cons fy = llf_flux(un, us, neta[0], neta[1]);
        const Cons fe = flux(ue, nxi[0], nxi[1]), fw = flux(uw, nxi[0], nxi[1]);
        const Cons gn = flux(un, neta[0], neta[1]), gs = flux(us, neta[0], neta[1]);
        for (int v = 0; v < 4; ++v) {
            r[v](m - 1, l) -= (fx[v] - fe[v]) / (b.jac * ops.H[m - 1]);
            r[v](0, l) += (fx[v] - fw[v]) / (b.jac * ops.H[0]);
            r[v](l, m - 1) -= (fy[v] - gn[v]) / (b.jac * ops.H[m - 1]);
            r[v](l, 0) += (fy[v] - gs[v]) / (b.jac * ops.H[0]);
        }
    }
    State du(u.size());
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            for (int v = 0; v < 4; ++v)
                du[4 * b.index(i, j) + v] = r[v](i, j);
    return du;
}

// One periodic parallelogram with generic metrics.
inline sbp::euler::BlockMesh2D skew_block(int m, const sbp::OperatorPair& pair)
{
    using namespace sbp::euler;
    BlockMesh2D mesh;
    mesh.blocks.push_back(make_block({Point{0.0, 0.0}, {2.0, 0.5}, {2.3, 2.5}, {0.3, 2.0}}, m, m, pair));
    mesh.connections = {{0, Side::east, 0, Side::west}, {0, Side::north, 0, Side::south}};
    mesh.validate();
    return mesh;
}

} // namespace sbptest
