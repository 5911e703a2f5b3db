#include "sbp/euler_solver.hpp"

#include "sbp/error.hpp"

#include <algorithm>
#include <cmath>

namespace sbp::euler {

namespace {

Cons load(const double* p) { return {p[0], p[1], p[2], p[3]}; }

// max-row-sum norm of D+ and D-, an upper bound on their spectral radii
double row_sum_norm(const AssembledOperators& ops)
{
    double r = 0.0;
    for (const BandedMatrix* d : {&ops.Dplus, &ops.Dminus})
        for (int i = 0; i < d->size(); ++i) {
            double s = 0.0;
            for (double v : d->row(i))
                s += std::abs(v);
            r = std::max(r, s);
        }
    return r;
}

} // namespace

EulerSolver::EulerSolver(BlockMesh2D mesh, SplittingKind kind, InterfaceFlux iface)
    : mesh_(std::move(mesh)), kind_(kind), iface_(iface)
{
    mesh_.validate();
    int off = 0;
    size_t biggest = 0;
    for (const auto& b : mesh_.blocks) {
        offsets_.push_back(off);
        off += 4 * b.nodes();
        biggest = std::max(biggest, static_cast<size_t>(4 * b.nodes()));
    }
    fp_.resize(biggest);
    fm_.resize(biggest);
    gp_.resize(biggest);
    gm_.resize(biggest);
}

void EulerSolver::block_volume(int bi, const State& u, State& du) const
{
    const Block& b = mesh_.blocks[bi];
    const double* ub = u.data() + offsets_[bi];
    double* db = du.data() + offsets_[bi];
    const auto nx = b.n_xi();
    const auto ny = b.n_eta();
    const int n = b.nodes();
    for (int k = 0; k < n; ++k) {
        const Cons q = load(ub + 4 * k);
        Cons a, c;
        split_flux_unchecked(q, nx[0], nx[1], kind_, a, c);
        std::copy(a.begin(), a.end(), fp_.begin() + 4 * k);
        std::copy(c.begin(), c.end(), fm_.begin() + 4 * k);
        split_flux_unchecked(q, ny[0], ny[1], kind_, a, c);
        std::copy(a.begin(), a.end(), gp_.begin() + 4 * k);
        std::copy(c.begin(), c.end(), gm_.begin() + 4 * k);
    }
    std::fill(db, db + 4 * n, 0.0);
    const double s = -1.0 / b.jac;
    // f+ goes with D-, f- with D+.
    for (int j = 0; j < b.my; ++j) {
        const int o = 4 * b.index(0, j);
        b.ops_x->Dminus.apply_add_strided(fp_.data() + o, db + o, 4, 4, s);
        b.ops_x->Dplus.apply_add_strided(fm_.data() + o, db + o, 4, 4, s);
    }
    for (int i = 0; i < b.mx; ++i) {
        const int o = 4 * i;
        b.ops_y->Dminus.apply_add_strided(gp_.data() + o, db + o, 4 * b.mx, 4, s);
        b.ops_y->Dplus.apply_add_strided(gm_.data() + o, db + o, 4 * b.mx, 4, s);
    }
}

void EulerSolver::apply_connection(const Connection& c, const State& u, State& du) const
{
    const Block& A = mesh_.blocks[c.a];
    const Block& B = mesh_.blocks[c.b];
    const bool ew = c.side_a == Side::east;
    const int count = ew ? A.my : A.mx;
    const auto na = ew ? A.n_xi() : A.n_eta();
    const auto nb = ew ? B.n_xi() : B.n_eta();
    const auto& opa = ew ? *A.ops_x : *A.ops_y;
    const auto& opb = ew ? *B.ops_x : *B.ops_y;
    const double wa = 1.0 / (A.jac * opa.H.back());
    const double wb = 1.0 / (B.jac * opb.H.front());
    for (int k = 0; k < count; ++k) {
        const int ka = ew ? A.index(A.mx - 1, k) : A.index(k, A.my - 1);
        const int kb = ew ? B.index(0, k) : B.index(k, 0);
        const double* pa = u.data() + offsets_[c.a] + 4 * ka;
        const double* pb = u.data() + offsets_[c.b] + 4 * kb;
        const Cons ua = load(pa), ub = load(pb);
        auto numerical = [&](const std::array<double, 2>& n) {
            return iface_ == InterfaceFlux::lax_friedrichs ? llf_flux(ua, ub, n[0], n[1])
                                                           : splitting_flux(ua, ub, n[0], n[1], kind_);
        };
        // Each side uses its own normal so constant states cancel exactly.
        const Cons fsa = numerical(na), fsb = numerical(nb);
        const Cons fa = flux(ua, na[0], na[1]), fb = flux(ub, nb[0], nb[1]);
        double* da = du.data() + offsets_[c.a] + 4 * ka;
        double* dbp = du.data() + offsets_[c.b] + 4 * kb;
        for (int v = 0; v < 4; ++v) {
            da[v] -= wa * (fsa[v] - fa[v]);
            dbp[v] += wb * (fsb[v] - fb[v]);
        }
    }
}

void EulerSolver::rhs(const State& u, State& du) const
{
    if (static_cast<int>(u.size()) != size())
        throw SizeError("EulerSolver::rhs: state has wrong length");
    du.resize(u.size());
    for (int b = 0; b < static_cast<int>(mesh_.blocks.size()); ++b)
        block_volume(b, u, du);
    // Connections in mesh order, so the result does not depend on scheduling.
    for (const auto& c : mesh_.connections)
        apply_connection(c, u, du);
}

State EulerSolver::rhs(const State& u) const
{
    State du;
    rhs(u, du);
    return du;
}

State EulerSolver::sample(const std::function<Primitive(double, double)>& f) const
{
    State u(size());
    for (size_t bi = 0; bi < mesh_.blocks.size(); ++bi) {
        const Block& b = mesh_.blocks[bi];
        for (int j = 0; j < b.my; ++j)
            for (int i = 0; i < b.mx; ++i) {
                const Point p = b.node(i, j);
                const Cons q = to_conservative(f(p.x, p.y));
                std::copy(q.begin(), q.end(), u.begin() + offsets_[bi] + 4 * b.index(i, j));
            }
    }
    return u;
}

std::vector<NodeSite> EulerSolver::invalid_sites(const State& u) const
{
    std::vector<NodeSite> bad;
    for (size_t bi = 0; bi < mesh_.blocks.size(); ++bi) {
        const Block& b = mesh_.blocks[bi];
        for (int j = 0; j < b.my; ++j)
            for (int i = 0; i < b.mx; ++i)
                if (!is_valid(load(u.data() + offsets_[bi] + 4 * b.index(i, j))))
                    bad.push_back({static_cast<int>(bi), i, j, b.node(i, j)});
    }
    return bad;
}

Cons EulerSolver::totals(const State& u) const
{
    Cons t{0.0, 0.0, 0.0, 0.0};
    for (size_t bi = 0; bi < mesh_.blocks.size(); ++bi) {
        const Block& b = mesh_.blocks[bi];
        for (int j = 0; j < b.my; ++j)
            for (int i = 0; i < b.mx; ++i) {
                const double w = b.weight(i, j);
                const double* p = u.data() + offsets_[bi] + 4 * b.index(i, j);
                for (int v = 0; v < 4; ++v)
                    t[v] += w * p[v];
            }
    }
    return t;
}

double EulerSolver::cfl_step(const State& u, double cfl) const
{
    double rate = 0.0;
    for (size_t bi = 0; bi < mesh_.blocks.size(); ++bi) {
        const Block& b = mesh_.blocks[bi];
        const auto nx = b.n_xi();
        const auto ny = b.n_eta();
        const double rx = row_sum_norm(*b.ops_x), ry = row_sum_norm(*b.ops_y);
        for (int k = 0; k < b.nodes(); ++k) {
            const Cons q = load(u.data() + offsets_[bi] + 4 * k);
            const double r = (max_wave_speed(q, nx[0], nx[1]) * rx + max_wave_speed(q, ny[0], ny[1]) * ry) / b.jac;
            if (!std::isfinite(r))
                throw InvalidStateError("cfl_step: invalid state");
            rate = std::max(rate, r);
        }
    }
    return cfl / rate;
}

} // namespace sbp::euler
