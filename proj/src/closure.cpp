#include "sbp/construct.hpp"

#include "sbp/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace sbp {

ClosureLayout closure_layout(int p)
{
    if (p < 2 || p > 9)
        throw ParameterError("closure_layout: unsupported order " + std::to_string(p));
    ClosureLayout l;
    l.s = p % 2 == 0 ? p : p - 1;
    l.block = l.s;
    const int reach = upwind_interior(p).offsets.back();
    if (p <= 3) {
        // Block rows own the upper band as well; the block alone only admits
        // the uniform grid.
        l.transition_reach = reach;
        l.d2_fixed = true;
    } else if (p <= 5) {
        l.transition_reach = reach + 1;
    }
    return l;
}

namespace {

double poly_term(double x, int q)
{
    if (q < 0)
        return 0.0;
    return std::pow(x, q) / std::tgamma(q + 1.0);
}

struct SystemShape {
    std::vector<std::pair<int, int>> q_unknowns;
    std::map<std::pair<int, int>, int> index;
    int rows = 0;    // closure rows that carry conditions
    int m = 0;       // size of the grid the conditions are written on
};

SystemShape system_shape(const ClosureLayout& l, const InteriorStencil& st)
{
    SystemShape sh;
    const int nb = l.block;
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb + std::max(l.transition_reach, 0) + 1; ++j)
            if (j < nb || j - i <= l.transition_reach) {
                sh.index[{i, j}] = static_cast<int>(sh.q_unknowns.size());
                sh.q_unknowns.emplace_back(i, j);
            }
    const int lw = -st.offsets.front(), rw = st.offsets.back();
    sh.rows = nb + std::max({lw, rw, l.transition_reach}) + lw + rw + 3;
    sh.m = 4 * sh.rows + 40;
    return sh;
}

// Dense accuracy conditions for rows [0, rows) of D+ and D- on a long grid.
void build_equations(const ClosureLayout& l, const InteriorStencil& st, const SystemShape& sh,
                     double d1, double d2, Eigen::MatrixXd& A, Eigen::VectorXd& b)
{
    const int m = sh.m;
    const Grid1D g = build_grid(m, d1, d2);
    const double h = g.h;
    const int nq = static_cast<int>(sh.q_unknowns.size());
    const int nu = nq + l.block;
    const Stencil stencil = st.as_stencil();
    const int width = st.offsets.back() - st.offsets.front() + l.block + std::max(l.transition_reach, 0) + 4;

    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    for (int branch = 0; branch < 2; ++branch) {
        const double sign = branch == 0 ? 1.0 : -1.0;
        for (int r = 0; r < sh.rows; ++r) {
            for (int q = 0; q <= l.s / 2; ++q) {
                Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(nu);
                double c = 0.0;
                // H x^(q-1)
                const double hx = h * poly_term(g.nodes[r], q - 1);
                if (r < l.block)
                    a[nq + r] += hx;
                else
                    c += hx;
                // -(Qhat x^(q)), Qhat = Q+ or -Q+^T
                for (int j = std::max(0, r - width); j <= std::min(m - 1, r + width); ++j) {
                    const std::pair<int, int> key = branch == 0 ? std::make_pair(r, j) : std::make_pair(j, r);
                    const double xq = poly_term(g.nodes[j], q);
                    if (auto it = sh.index.find(key); it != sh.index.end())
                        a[it->second] -= sign * xq;
                    else
                        c -= sign * stencil.at(key.second - key.first) * xq;
                }
                // -(B/2 x^(q)) at the left end
                if (r == 0)
                    c += 0.5 * poly_term(g.nodes[0], q);
                if (a.cwiseAbs().maxCoeff() == 0.0 && std::abs(c) <= 1e-14)
                    continue;
                rows.push_back(a);
                rhs.push_back(-c);
            }
        }
    }
    A.resize(static_cast<int>(rows.size()), nu);
    b.resize(static_cast<int>(rows.size()));
    for (size_t k = 0; k < rows.size(); ++k) {
        A.row(static_cast<int>(k)) = rows[k];
        b[static_cast<int>(k)] = rhs[k];
    }
}

struct Factor {
    int rank = 0;
    Eigen::VectorXd particular;
    Eigen::MatrixXd null_space;
};

Factor factor(const Eigen::MatrixXd& A, const Eigen::VectorXd& b)
{
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Factor f;
    const double tol = 1e-10 * (sv.size() > 0 ? sv[0] : 0.0);
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > tol)
            ++f.rank;
    const int n = static_cast<int>(A.cols());
    f.particular = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < f.rank; ++i)
        f.particular += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(b) / sv[i]);
    f.null_space = svd.matrixV().rightCols(n - f.rank);
    return f;
}

// Null basis at d1 = d2 = 1, used to fix the orientation of the basis elsewhere.
const Eigen::MatrixXd& reference_null_basis(int p)
{
    static std::mutex mu;
    static std::map<int, Eigen::MatrixXd> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it == cache.end()) {
        const ClosureLayout l = closure_layout(p);
        const InteriorStencil st = upwind_interior(p);
        const SystemShape sh = system_shape(l, st);
        Eigen::MatrixXd A;
        Eigen::VectorXd b;
        build_equations(l, st, sh, 1.0, 1.0, A, b);
        it = cache.emplace(p, factor(A, b).null_space).first;
    }
    return it->second;
}

} // namespace

ClosureProblem assemble_accuracy_system(int p, double d1, double d2, bool require_consistent)
{
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw ParameterError("assemble_accuracy_system: d1 and d2 must be positive");
    ClosureProblem pr;
    pr.p = p;
    pr.d1 = d1;
    pr.d2 = d2;
    pr.layout = closure_layout(p);
    pr.interior = upwind_interior(p);
    const SystemShape sh = system_shape(pr.layout, pr.interior);
    pr.q_unknowns = sh.q_unknowns;
    build_equations(pr.layout, pr.interior, sh, d1, d2, pr.A, pr.b);

    const Factor f = factor(pr.A, pr.b);
    pr.rank = f.rank;
    pr.null_dim = static_cast<int>(f.null_space.cols());
    pr.free_grid_parameters = pr.layout.d2_fixed ? 1 : 2;
    pr.particular = f.particular;
    pr.residual = pr.A.rows() ? (pr.A * f.particular - pr.b).cwiseAbs().maxCoeff() : 0.0;
    pr.consistent = pr.residual <= 1e-10 * std::max(1.0, pr.b.cwiseAbs().maxCoeff());

    // Project the reference basis so the parameterization varies smoothly with d.
    const Eigen::MatrixXd& ref = reference_null_basis(p);
    if (ref.cols() == f.null_space.cols() && ref.cols() > 0) {
        const Eigen::MatrixXd y = f.null_space * (f.null_space.transpose() * ref);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
        const Eigen::MatrixXd r = qr.matrixQR().topRows(y.cols()).triangularView<Eigen::Upper>();
        bool ok = true;
        for (int k = 0; k < r.cols(); ++k) {
            if (std::abs(r(k, k)) < 1e-8)
                ok = false;
            if (r(k, k) < 0.0)
                q.col(k) = -q.col(k);
        }
        pr.null_basis = ok ? q : f.null_space;
    } else {
        pr.null_basis = f.null_space;
    }

    if (require_consistent && !pr.consistent)
        throw InfeasibleError("accuracy conditions have no solution for p=" + std::to_string(p) +
                              ", d1=" + std::to_string(d1) + ", d2=" + std::to_string(d2) +
                              " (residual " + std::to_string(pr.residual) + ")");
    return pr;
}

OperatorPair solve_closure(const ClosureProblem& problem, const Eigen::VectorXd& free)
{
    if (free.size() != problem.null_dim)
        throw ParameterError("solve_closure: expected " + std::to_string(problem.null_dim) +
                             " free parameters, got " + std::to_string(free.size()));
    if (!problem.consistent)
        throw NumericalRankError("solve_closure: accuracy system is inconsistent");
    Eigen::VectorXd u = problem.particular;
    if (problem.null_dim > 0)
        u += problem.null_basis * free;

    const ClosureLayout& l = problem.layout;
    const int nb = l.block;
    const int nq = static_cast<int>(problem.q_unknowns.size());
    OperatorPair pair;
    pair.order = problem.p;
    pair.boundary_width = nb;
    pair.d1 = problem.d1;
    pair.d2 = problem.d2;
    pair.provenance = Provenance::derived;
    pair.interior = problem.interior.as_stencil();
    pair.q_boundary.assign(nb * nb, 0.0);
    pair.h_boundary.resize(nb);
    for (int i = 0; i < nb; ++i)
        pair.h_boundary[i] = u[nq + i];
    std::map<int, std::map<int, double>> extra;
    for (int k = 0; k < nq; ++k) {
        const auto [i, j] = problem.q_unknowns[k];
        if (j < nb)
            pair.q_boundary[i * nb + j] = u[k];
        else
            extra[i][j] = u[k];
    }
    for (const auto& [i, cols] : extra) {
        TransitionRow t;
        t.row = i;
        t.first_col = cols.begin()->first;
        for (const auto& [j, v] : cols)
            t.coeffs.push_back(v);
        pair.q_transition.push_back(std::move(t));
    }
    return pair;
}

double accuracy_residual(const ClosureProblem& problem, const OperatorPair& pair)
{
    const int nq = static_cast<int>(problem.q_unknowns.size());
    Eigen::VectorXd u(nq + problem.layout.block);
    const auto entries = closure_entries(pair);
    std::map<std::pair<int, int>, double> e(entries.begin(), entries.end());
    for (int k = 0; k < nq; ++k) {
        auto it = e.find(problem.q_unknowns[k]);
        u[k] = it == e.end() ? pair.interior.at(problem.q_unknowns[k].second - problem.q_unknowns[k].first)
                             : it->second;
    }
    for (int i = 0; i < problem.layout.block; ++i)
        u[nq + i] = pair.h_boundary[i];
    if (problem.A.rows() == 0)
        return 0.0;
    return (problem.A * u - problem.b).cwiseAbs().maxCoeff();
}

int objective_reference_size(const OperatorPair& pair)
{
    return std::max(4 * pair.boundary_width + 1, pair.min_size());
}

double objective(const OperatorPair& candidate, ObjectiveMode mode)
{
    const int m = objective_reference_size(candidate);
    const AssembledOperators ops = assemble(candidate, m);
    const int s = candidate.order % 2 == 0 ? candidate.order : candidate.order - 1;
    const int q1 = s / 2 + 1;
    double total = 0.0;
    for (Branch br : {Branch::plus, Branch::minus}) {
        std::vector<double> e = error_vector(ops, q1, br);
        if (mode == ObjectiveMode::combined_term) {
            const std::vector<double> e2 = error_vector(ops, q1 + 1, br);
            for (size_t i = 0; i < e.size(); ++i)
                e[i] += e2[i];
        }
        const double n = error_norm(e, ops.h());
        total += n * n;
    }
    return total;
}

double deflated_psd_eigenvalue(const OperatorPair& candidate, int m)
{
    const BandedMatrix q = assemble_qplus(candidate, m);
    Eigen::MatrixXd S = 0.5 * q.combine(1.0, q.transpose(), 1.0).to_dense();
    const double shift = 10.0 * std::max(1.0, S.cwiseAbs().maxCoeff());
    S.array() -= shift / m;   // pushes the constant mode to -shift
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

} // namespace sbp
