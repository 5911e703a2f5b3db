#pragma once

#include "sbp/euler_mesh.hpp"
#include "sbp/euler_physics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sbp::euler {

enum class InterfaceFlux { lax_friedrichs, splitting };

// Conservative variables of all blocks, node-major: ((offset_b + i + mx j) * 4 + var).
using State = std::vector<double>;

struct NodeSite {
    int block = 0;
    int i = 0;
    int j = 0;
    Point x;
};

class EulerSolver {
public:
    EulerSolver(BlockMesh2D mesh, SplittingKind kind,
                InterfaceFlux iface = InterfaceFlux::lax_friedrichs);

    const BlockMesh2D& mesh() const { return mesh_; }
    SplittingKind splitting() const { return kind_; }
    int size() const { return 4 * mesh_.total_nodes(); }
    int offset(int block) const { return offsets_[block]; }

    // du/dt. Invalid states give non-finite output rather than an exception.
    void rhs(const State& u, State& du) const;
    State rhs(const State& u) const;

    State sample(const std::function<Primitive(double, double)>& f) const;
    // Nodes with rho <= 0, p <= 0 or non-finite values.
    std::vector<NodeSite> invalid_sites(const State& u) const;
    // H-weighted totals of the four conserved variables.
    Cons totals(const State& u) const;
    // Explicit step estimate cfl / max_node(sum over directions of speed * |D|_inf / J).
    // The row-sum norm bounds the spectral radius of the difference operators,
    // closures included.
    double cfl_step(const State& u, double cfl) const;

private:
    void block_volume(int b, const State& u, State& du) const;
    void apply_connection(const Connection& c, const State& u, State& du) const;

    BlockMesh2D mesh_;
    SplittingKind kind_;
    InterfaceFlux iface_;
    std::vector<int> offsets_;
    mutable std::vector<double> fp_, fm_, gp_, gm_;
};

} // namespace sbp::euler
