#pragma once

#include "sbp/banded.hpp"
#include "sbp/grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace sbp {

enum class Provenance { derived, imported };

std::string to_string(Provenance p);

// Row segment of Q+ near the left boundary that overrides the interior stencil.
struct TransitionRow {
    int row = 0;
    int first_col = 0;
    std::vector<double> coeffs;

    bool operator==(const TransitionRow&) const = default;
};

// Interior row of Q+ (equal to the interior row of h*D+).
struct Stencil {
    int first_offset = 0;
    std::vector<double> coeffs;

    int last_offset() const { return first_offset + static_cast<int>(coeffs.size()) - 1; }
    double at(int offset) const;
    bool operator==(const Stencil&) const = default;
};

// Upwind pair D+- = H^{-1}(Q+- + B/2), Q- = -Q+^T. Only the left closure is
// stored; the right closure follows from Q+[m-1-j][m-1-i] = Q+[i][j].
struct OperatorPair {
    int order = 0;
    int boundary_width = 0;
    double d1 = 1.0;
    double d2 = 1.0;
    Provenance provenance = Provenance::derived;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<double> h_boundary;   // first boundary_width entries of H/h
    std::vector<double> q_boundary;   // boundary_width^2, row major
    std::vector<TransitionRow> q_transition;
    Stencil interior;

    double q_block(int i, int j) const { return q_boundary[i * boundary_width + j]; }
    // Smallest m for which both closures fit without overlapping.
    int min_size() const;
    bool operator==(const OperatorPair&) const = default;
};

// Explicit left-closure entries of Q+ (block plus transition rows).
std::vector<std::pair<std::pair<int, int>, double>> closure_entries(const OperatorPair& pair);

struct AssembledOperators {
    int m = 0;
    Grid1D grid;
    std::vector<double> H;
    BandedMatrix Qplus;
    BandedMatrix Qminus;
    BandedMatrix Dplus;
    BandedMatrix Dminus;
    BandedMatrix D1;
    BandedMatrix S;

    double h() const { return grid.h; }
};

// Q+ on m nodes; it does not depend on h or the domain.
BandedMatrix assemble_qplus(const OperatorPair& pair, int m);

AssembledOperators assemble(const OperatorPair& pair, int m, double x_l = 0.0, double x_r = 1.0);

// B = e_m e_m^T - e_1 e_1^T applied to v.
std::vector<double> apply_boundary(const std::vector<double>& v);

enum class Branch { plus, minus };

// e_(q) = H x^(q-1) - (Q + B/2) x^(q) with x^(q) = x^q/q! on the unit-domain grid.
std::vector<double> error_vector(const OperatorPair& pair, int m, int q, Branch branch);
std::vector<double> error_vector(const AssembledOperators& ops, int q, Branch branch);

double error_norm(const std::vector<double>& e, double h);

} // namespace sbp
