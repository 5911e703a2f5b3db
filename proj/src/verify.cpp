#include "sbp/verify.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sbp {

std::vector<bool> interior_rows(const OperatorPair& pair, const AssembledOperators& ops)
{
    const int m = ops.m;
    const int lo = pair.interior.first_offset, hi = pair.interior.last_offset();
    std::vector<bool> ok(m, false);
    for (int i = 0; i < m; ++i) {
        if (i == 0 || i == m - 1 || ops.H[i] != ops.grid.h)
            continue;
        // D- row i uses the mirrored stencil offsets -hi..-lo.
        const int jl = i - std::max(hi, -lo), jr = i + std::max(hi, -lo);
        if (jl < 2 || jr > m - 3)
            continue;
        const int a = std::min({ops.Qplus.first_col(i), ops.Qminus.first_col(i), i + lo, i - hi});
        const int b = std::max({ops.Qplus.first_col(i) + static_cast<int>(ops.Qplus.row(i).size()),
                                ops.Qminus.first_col(i) + static_cast<int>(ops.Qminus.row(i).size()),
                                i + hi + 1, i - lo + 1});
        bool same = true;
        for (int j = std::max(0, a); j < std::min(m, b) && same; ++j)
            same = ops.Qplus.at(i, j) == pair.interior.at(j - i) &&
                   ops.Qminus.at(i, j) == -pair.interior.at(i - j);
        ok[i] = same;
    }
    return ok;
}

namespace {

double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

SizeCheck check_size(const OperatorPair& pair, int m, const VerifyTolerances& tol)
{
    SizeCheck c;
    c.m = m;
    const AssembledOperators ops = assemble(pair, m);
    c.h_positive = std::all_of(ops.H.begin(), ops.H.end(), [](double v) { return v > 0.0; });
    if (!c.h_positive)
        c.failures.push_back("H has a nonpositive entry");

    const Eigen::MatrixXd Dp = ops.Dplus.to_dense(), Dm = ops.Dminus.to_dense();
    const Eigen::MatrixXd Qp = ops.Qplus.to_dense(), Qm = ops.Qminus.to_dense();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i)
        H(i, i) = ops.H[i];
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    B(0, 0) = -1.0;
    B(m - 1, m - 1) = 1.0;

    const double dscale = std::max(max_abs(Dp), max_abs(Dm));
    const double hscale = max_abs(H) * dscale;
    double skew = max_abs(Qp + Qm.transpose()) / std::max(1.0, max_abs(Qp));
    skew = std::max(skew, max_abs(H * Dm + Dp.transpose() * H - B) / hscale);
    skew = std::max(skew, max_abs(H * Dp + Dm.transpose() * H - B) / hscale);
    Eigen::MatrixXd S = ops.S.to_dense();
    Eigen::MatrixXd Hinv = H.inverse();
    skew = std::max(skew, max_abs(ops.D1.to_dense() - 0.5 * (Dp + Dm)) / dscale);
    skew = std::max(skew, max_abs(Hinv * S - 0.5 * (Dp - Dm)) / dscale);
    c.skew_identity_residual = skew;
    if (!(skew <= tol.skew))
        c.failures.push_back("skew identity residual " + std::to_string(skew));

    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i)
        J(i, m - 1 - i) = 1.0;
    c.reflection_residual = max_abs(J * Dp * J + Dm) / dscale;
    if (!(c.reflection_residual <= tol.reflection))
        c.failures.push_back("reflection residual " + std::to_string(c.reflection_residual));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    c.psd_max_eigenvalue = es.eigenvalues().maxCoeff();
    c.max_abs_s = max_abs(S);
    c.psd_threshold = tol.psd_relative * c.max_abs_s;
    if (!(c.psd_max_eigenvalue <= c.psd_threshold))
        c.failures.push_back("S has eigenvalue " + std::to_string(c.psd_max_eigenvalue));

    const std::vector<bool> interior = interior_rows(pair, ops);
    const int p = pair.order;
    const int s = pair.order % 2 == 0 ? pair.order : pair.order - 1;
    const auto& x = ops.grid.nodes;
    for (int q = 0; q <= p; ++q) {
        AccuracyResidual r;
        for (Branch b : {Branch::plus, Branch::minus}) {
            const std::vector<double> e = error_vector(ops, q, b);
            // Scale by the size of the terms that cancel in e.
            const BandedMatrix& Q = b == Branch::plus ? ops.Qplus : ops.Qminus;
            double scale = 0.0;
            for (int i = 0; i < m; ++i) {
                double t = q >= 1 ? ops.H[i] * std::abs(std::pow(x[i], q - 1)) / std::tgamma(q) : 0.0;
                for (int j = 0; j < m; ++j)
                    t += std::abs(Q.at(i, j)) * std::abs(std::pow(x[j], q)) / std::tgamma(q + 1.0);
                scale = std::max(scale, t);
            }
            scale = std::max(scale, 1e-300);
            for (int i = 0; i < m; ++i) {
                const double v = std::abs(e[i]) / scale;
                if (interior[i])
                    r.interior = std::max(r.interior, v);
                else
                    r.boundary = std::max(r.boundary, v);
            }
        }
        c.accuracy[q] = r;
        if (!(r.interior <= tol.accuracy))
            c.failures.push_back("interior rows inexact at q=" + std::to_string(q));
        if (q <= s / 2 && !(r.boundary <= tol.accuracy))
            c.failures.push_back("boundary rows inexact at q=" + std::to_string(q));
    }
    c.pass = c.failures.empty();
    return c;
}

} // namespace

std::vector<int> default_verify_sizes(const OperatorPair& pair)
{
    const int mmin = pair.min_size();
    return {mmin, mmin + 7, std::max(101, mmin + 8)};
}

SbpReport verify_sbp(const OperatorPair& pair, const std::vector<int>& sizes,
                     const VerifyTolerances& tol)
{
    SbpReport r;
    r.h_positive = true;
    r.pass = true;
    for (int m : sizes) {
        SizeCheck c = check_size(pair, m, tol);
        r.h_positive = r.h_positive && c.h_positive;
        r.skew_identity_residual = std::max(r.skew_identity_residual, c.skew_identity_residual);
        const double rel = c.psd_max_eigenvalue / std::max(c.max_abs_s, 1e-300);
        if (r.sizes.empty() || rel > r.psd_max_eigenvalue)
            r.psd_max_eigenvalue = rel;
        for (const auto& [q, a] : c.accuracy) {
            auto& t = r.accuracy_table[q];
            t.interior = std::max(t.interior, a.interior);
            t.boundary = std::max(t.boundary, a.boundary);
        }
        r.pass = r.pass && c.pass;
        r.sizes.push_back(std::move(c));
    }
    return r;
}

std::string SbpReport::summary() const
{
    std::ostringstream os;
    os << "pass: " << (pass ? "true" : "false") << "\n";
    os << "h_positive: " << (h_positive ? "true" : "false") << "\n";
    os << "skew_identity_residual: " << skew_identity_residual << "\n";
    os << "psd_max_eigenvalue_relative: " << psd_max_eigenvalue << "\n";
    os << "accuracy (q: interior boundary):\n";
    for (const auto& [q, a] : accuracy_table)
        os << "  " << q << ": " << a.interior << " " << a.boundary << "\n";
    for (const auto& c : sizes) {
        os << "m=" << c.m << (c.pass ? " ok" : " FAIL");
        for (const auto& f : c.failures)
            os << "; " << f;
        os << "\n";
    }
    return os.str();
}

} // namespace sbp
