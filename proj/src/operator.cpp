#include "sbp/operator.hpp"

#include "sbp/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sbp {

std::string to_string(Provenance p)
{
    return p == Provenance::derived ? "derived" : "imported";
}

double Stencil::at(int offset) const
{
    const int k = offset - first_offset;
    if (k < 0 || k >= static_cast<int>(coeffs.size()))
        return 0.0;
    return coeffs[k];
}

std::vector<std::pair<std::pair<int, int>, double>> closure_entries(const OperatorPair& pair)
{
    std::map<std::pair<int, int>, double> e;
    const int s = pair.boundary_width;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            e[{i, j}] = pair.q_block(i, j);
    for (const auto& t : pair.q_transition)
        for (size_t k = 0; k < t.coeffs.size(); ++k)
            e[{t.row, t.first_col + static_cast<int>(k)}] = t.coeffs[k];
    return {e.begin(), e.end()};
}

int OperatorPair::min_size() const
{
    const auto entries = closure_entries(*this);
    int reach = 0;
    for (const auto& [ij, v] : entries)
        reach = std::max({reach, ij.first, ij.second});
    // Left closure occupies rows/cols <= reach; its mirror starts at m-1-reach.
    int m = std::max(7, 2 * boundary_width + 1);
    while (m - 1 - reach <= reach)
        ++m;
    return m;
}

namespace {

struct ClosureMap {
    std::map<std::pair<int, int>, double> left;
    std::vector<int> row_lo, row_hi;   // explicit column range per row (both ends)
};

ClosureMap make_closure_map(const OperatorPair& pair, int m)
{
    ClosureMap c;
    c.row_lo.assign(m, m);
    c.row_hi.assign(m, -1);
    for (const auto& [ij, v] : closure_entries(pair)) {
        c.left[ij] = v;
        const auto [i, j] = ij;
        c.row_lo[i] = std::min(c.row_lo[i], j);
        c.row_hi[i] = std::max(c.row_hi[i], j);
        const int ri = m - 1 - j, rj = m - 1 - i;
        c.row_lo[ri] = std::min(c.row_lo[ri], rj);
        c.row_hi[ri] = std::max(c.row_hi[ri], rj);
    }
    return c;
}

} // namespace

BandedMatrix assemble_qplus(const OperatorPair& pair, int m)
{
    if (pair.boundary_width < 1 || static_cast<int>(pair.h_boundary.size()) != pair.boundary_width ||
        static_cast<int>(pair.q_boundary.size()) != pair.boundary_width * pair.boundary_width)
        throw ParameterError("assemble: inconsistent closure dimensions");
    const int mmin = pair.min_size();
    if (m < mmin)
        throw SizeError("assemble: m = " + std::to_string(m) + " below minimum " +
                        std::to_string(mmin));
    const ClosureMap c = make_closure_map(pair, m);
    const int lo_off = pair.interior.first_offset;
    const int hi_off = pair.interior.last_offset();
    auto lo = [&](int i) { return std::min(i + lo_off, c.row_lo[i]); };
    auto hi = [&](int i) { return std::max(i + hi_off, c.row_hi[i]); };
    auto entry = [&](int i, int j) {
        if (auto it = c.left.find({i, j}); it != c.left.end())
            return it->second;
        if (auto it = c.left.find({m - 1 - j, m - 1 - i}); it != c.left.end())
            return it->second;
        return pair.interior.at(j - i);
    };
    return BandedMatrix::from_entries(m, lo, hi, entry);
}

AssembledOperators assemble(const OperatorPair& pair, int m, double x_l, double x_r)
{
    AssembledOperators ops;
    ops.m = m;
    ops.Qplus = assemble_qplus(pair, m);
    ops.grid = build_grid(m, pair.d1, pair.d2, x_l, x_r);
    const double h = ops.grid.h;
    const int s = pair.boundary_width;
    ops.H.assign(m, h);
    for (int i = 0; i < s; ++i) {
        ops.H[i] = h * pair.h_boundary[i];
        ops.H[m - 1 - i] = h * pair.h_boundary[i];
    }
    ops.Qminus = ops.Qplus.transpose().scaled_rows(std::vector<double>(m, -1.0));

    // Q + B/2 only touches the two corners.
    auto add_b = [m](const BandedMatrix& q) {
        BandedMatrix b = BandedMatrix::from_entries(
            m, [](int i) { return i; }, [](int i) { return i; },
            [m](int i, int) { return i == 0 ? -0.5 : (i == m - 1 ? 0.5 : 0.0); });
        return q.combine(1.0, b, 1.0);
    };
    std::vector<double> hinv(m);
    for (int i = 0; i < m; ++i)
        hinv[i] = 1.0 / ops.H[i];
    // D 1 = 0 holds exactly in theory; restoring it after rounding keeps
    // constant states steady to round-off even where 1/H is large.
    ops.Dplus = add_b(ops.Qplus).scaled_rows(hinv).with_zero_row_sums();
    ops.Dminus = add_b(ops.Qminus).scaled_rows(hinv).with_zero_row_sums();
    ops.D1 = ops.Dplus.combine(0.5, ops.Dminus, 0.5);
    ops.S = ops.Qplus.combine(0.5, ops.Qplus.transpose(), 0.5);
    return ops;
}

std::vector<double> apply_boundary(const std::vector<double>& v)
{
    std::vector<double> out(v.size(), 0.0);
    if (!v.empty()) {
        out.front() = -v.front();
        out.back() += v.back();
    }
    return out;
}

std::vector<double> error_vector(const AssembledOperators& ops, int q, Branch branch)
{
    if (q < 0)
        throw ParameterError("error_vector: q must be nonnegative");
    const int m = ops.m;
    const auto& x = ops.grid.nodes;
    std::vector<double> xq(m), xq1(m, 0.0);
    const double fq = std::tgamma(q + 1.0);
    for (int i = 0; i < m; ++i) {
        xq[i] = std::pow(x[i], q) / fq;
        if (q >= 1)
            xq1[i] = std::pow(x[i], q - 1) / std::tgamma(q);
    }
    const BandedMatrix& Q = branch == Branch::plus ? ops.Qplus : ops.Qminus;
    std::vector<double> qx = Q.apply(xq);
    std::vector<double> e(m);
    for (int i = 0; i < m; ++i)
        e[i] = ops.H[i] * xq1[i] - qx[i];
    e.front() += 0.5 * xq.front();
    e.back() -= 0.5 * xq.back();
    return e;
}

std::vector<double> error_vector(const OperatorPair& pair, int m, int q, Branch branch)
{
    return error_vector(assemble(pair, m), q, branch);
}

double error_norm(const std::vector<double>& e, double h)
{
    double s = 0.0;
    for (double v : e)
        s += v * v;
    return std::sqrt(h * s);
}

} // namespace sbp
