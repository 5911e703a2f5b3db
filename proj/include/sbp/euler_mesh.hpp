#pragma once

#include "sbp/grid.hpp"
#include "sbp/operator.hpp"

#include <array>
#include <memory>
#include <vector>

namespace sbp::euler {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class Side { west, east, south, north };

// Parallelogram block: X(xi, eta) = c0 + (c1 - c0) xi + (c3 - c0) eta on the
// reference square, so the metrics are constant.
struct Block {
    std::array<Point, 4> corners;   // (0,0), (1,0), (1,1), (0,1) in reference coordinates
    int mx = 0;
    int my = 0;
    std::shared_ptr<const AssembledOperators> ops_x;   // on [0,1]
    std::shared_ptr<const AssembledOperators> ops_y;

    // x_xi, x_eta, y_xi, y_eta and J.
    double x_xi = 0.0, x_eta = 0.0, y_xi = 0.0, y_eta = 0.0, jac = 0.0;

    int nodes() const { return mx * my; }
    int index(int i, int j) const { return i + mx * j; }
    Point node(int i, int j) const;
    // Contravariant directions J grad(xi) and J grad(eta).
    std::array<double, 2> n_xi() const { return {y_eta, -x_eta}; }
    std::array<double, 2> n_eta() const { return {-y_xi, x_xi}; }
    // Quadrature weight of node (i, j) in physical space.
    double weight(int i, int j) const { return jac * ops_x->H[i] * ops_y->H[j]; }
};

// Edge `side_a` of block a is glued to edge `side_b` of block b. Only
// east-west and north-south pairings with matching orientation are supported;
// a == b gives a periodic identification.
struct Connection {
    int a = 0;
    Side side_a = Side::east;
    int b = 0;
    Side side_b = Side::west;
};

struct BlockMesh2D {
    std::vector<Block> blocks;
    std::vector<Connection> connections;

    int total_nodes() const;
    double area() const;
    // Throws on J <= 0, mismatched counts or non-coincident paired edges
    // (up to a constant periodic shift).
    void validate(double tol = 1e-13) const;
};

Block make_block(const std::array<Point, 4>& corners, int mx, int my, const OperatorPair& pair);

// Two slanted blocks meeting along a kinked interface at x = 0, periodic in
// both directions. The unit shape has corners (-2,-1), (0,-0.5), (0,1.5),
// (-2,1) and (0,-0.5), (2,-1), (2,1), (0,1.5); it is scaled about the origin
// and then shifted vertically.
struct ChevronGeometry {
    double scale = 1.0;
    double y_shift = 0.0;
};

BlockMesh2D chevron_mesh(int m, const OperatorPair& pair, const ChevronGeometry& geo = {});

// sqrt(K) x sqrt(K) Cartesian blocks tiling [-1,1]^2, fully periodic.
BlockMesh2D khi_mesh(int K, int m, const OperatorPair& pair);

} // namespace sbp::euler
