#include "sbp/spectral.hpp"

#include "sbp/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace sbp {

double spectral_radius(const Eigen::MatrixXd& M)
{
    if (M.rows() != M.cols())
        throw ParameterError("spectral_radius: matrix is not square");
    if (!M.allFinite())
        throw ParameterError("spectral_radius: non-finite entries");
    if (M.rows() == 0)
        return 0.0;
    if (M.rows() <= 2000) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
        if (es.info() != Eigen::Success)
            throw NumericalRankError("spectral_radius: eigensolver did not converge");
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    const MatVec a = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) { out.noalias() = M * v; };
    const MatVec at = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
        out.noalias() = M.transpose() * v;
    };
    return spectral_radius_power(static_cast<int>(M.rows()), a, at);
}

namespace {

// Growth rate of ||A^k v|| measured over two steps, which also settles when the
// dominant eigenvalues form a complex pair.
double power_estimate(int n, const MatVec& apply, double rel_tol, int max_iter)
{
    Eigen::VectorXd v(n), w(n), u(n);
    for (int i = 0; i < n; ++i)
        v[i] = 1.0 + 0.5 * std::sin(1.0 + 7.0 * i);
    v.normalize();
    double prev = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        apply(v, w);
        apply(w, u);
        const double nu = u.norm();
        if (nu == 0.0)
            return 0.0;
        const double est = std::sqrt(nu);
        v = u / nu;
        if (prev > 0.0 && std::abs(est - prev) <= rel_tol * est)
            return est;
        prev = est;
    }
    return prev;
}

} // namespace

double spectral_radius_power(int n, const MatVec& apply, const MatVec& apply_transpose,
                             double rel_tol, int max_iter)
{
    const double a = power_estimate(n, apply, rel_tol, max_iter);
    const double b = power_estimate(n, apply_transpose, rel_tol, max_iter);
    return std::max(a, b);
}

} // namespace sbp
