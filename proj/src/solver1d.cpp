#include "sbp/solver1d.hpp"

#include "sbp/error.hpp"
#include "sbp/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace sbp {

Eigen::MatrixXd projection_operator(const Eigen::MatrixXd& L, const Eigen::VectorXd& hbar)
{
    const int n = static_cast<int>(hbar.size());
    if (L.cols() != n)
        throw SizeError("projection_operator: L has wrong column count");
    if ((hbar.array() <= 0.0).any())
        throw ParameterError("projection_operator: Hbar must be positive");
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    if (L.rows() == 0)
        return P;
    const Eigen::MatrixXd HiLt = hbar.cwiseInverse().asDiagonal() * L.transpose();
    const Eigen::MatrixXd K = L * HiLt;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (lu.rank() < K.rows())
        throw SingularityError("projection_operator: L Hbar^{-1} L^T is singular");
    P -= HiLt * lu.solve(L);
    return P;
}

ProjectionSystem::ProjectionSystem(const OperatorPair& pair, int m, const HyperbolicSystem& sys,
                                   DerivativeKind kind)
    : m_(m), sys_(sys), kind_(kind), ops_(assemble(pair, m, sys.x_l, sys.x_r))
{
    if (sys.alpha < 0.0)
        throw ParameterError("ProjectionSystem: alpha must be nonnegative");
    if (!(sys.c1 > 0.0) || !(sys.c2 > 0.0))
        throw ParameterError("ProjectionSystem: C must be positive");
    hbar_.resize(2 * m);
    for (int i = 0; i < m; ++i) {
        hbar_[i] = ops_.H[i] * sys.c1;
        hbar_[m + i] = ops_.H[i] * sys.c2;
    }
    constrained_ = {0, m - 1};
    const Eigen::MatrixXd Lm = L();
    const Eigen::VectorXd hb = Eigen::Map<const Eigen::VectorXd>(hbar_.data(), 2 * m);
    const Eigen::MatrixXd HiLt = hb.cwiseInverse().asDiagonal() * Lm.transpose();
    G_ = HiLt * (Lm * HiLt).inverse();
    w_.resize(2 * m);
    y_.resize(2 * m);
}

Eigen::MatrixXd ProjectionSystem::L() const
{
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2, 2 * m_);
    l(0, 0) = 1.0;
    l(1, m_ - 1) = 1.0;
    return l;
}

Eigen::MatrixXd ProjectionSystem::Dx() const
{
    Eigen::MatrixXd dp = ops_.Dplus.to_dense(), dm = ops_.Dminus.to_dense();
    if (kind_ == DerivativeKind::central)
        dp = dm = ops_.D1.to_dense();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * m_, 2 * m_);
    d.topLeftCorner(m_, m_) = sys_.alpha * dm;
    d.topRightCorner(m_, m_) = dp;
    d.bottomLeftCorner(m_, m_) = dm;
    return d;
}

Eigen::MatrixXd ProjectionSystem::P() const
{
    return projection_operator(L(), Eigen::Map<const Eigen::VectorXd>(hbar_.data(), 2 * m_));
}

Eigen::MatrixXd ProjectionSystem::M() const
{
    Eigen::VectorXd cinv(2 * m_);
    cinv.head(m_).setConstant(1.0 / sys_.c1);
    cinv.tail(m_).setConstant(1.0 / sys_.c2);
    const Eigen::MatrixXd p = P();
    return -p * cinv.asDiagonal() * Dx() * p;
}

void ProjectionSystem::project(const std::vector<double>& v, std::vector<double>& out) const
{
    const double l0 = v[constrained_[0]], l1 = v[constrained_[1]];
    out = v;
    for (int i = 0; i < 2 * m_; ++i)
        out[i] -= G_(i, 0) * l0 + G_(i, 1) * l1;
}

void ProjectionSystem::rhs(const std::vector<double>& v, std::vector<double>& out) const
{
    if (static_cast<int>(v.size()) != 2 * m_)
        throw SizeError("ProjectionSystem::rhs: state length mismatch");
    project(v, w_);
    std::span<const double> w1(w_.data(), m_), w2(w_.data() + m_, m_);
    std::span<double> y1(y_.data(), m_), y2(y_.data() + m_, m_);
    const BandedMatrix& dp = kind_ == DerivativeKind::central ? ops_.D1 : ops_.Dplus;
    const BandedMatrix& dm = kind_ == DerivativeKind::central ? ops_.D1 : ops_.Dminus;
    // y1 = alpha D- w1 + D+ w2, y2 = D- w1
    dm.apply(w1, y2);
    dp.apply(w2, y1);
    for (int i = 0; i < m_; ++i) {
        y1[i] = (y1[i] + sys_.alpha * y2[i]) / sys_.c1;
        y2[i] /= sys_.c2;
    }
    project(y_, out);
    for (double& o : out)
        o = -o;
}

std::vector<double> ProjectionSystem::rhs(const std::vector<double>& v) const
{
    std::vector<double> out(2 * m_);
    rhs(v, out);
    return out;
}

double ProjectionSystem::energy(const std::vector<double>& v) const
{
    double e = 0.0;
    for (int i = 0; i < 2 * m_; ++i)
        e += hbar_[i] * v[i] * v[i];
    return e;
}

std::pair<double, double> ProjectionSystem::energy_rate(const std::vector<double>& v) const
{
    const std::vector<double> r = rhs(v);
    double rate = 0.0;
    for (int i = 0; i < 2 * m_; ++i)
        rate += 2.0 * hbar_[i] * v[i] * r[i];
    std::vector<double> w;
    project(v, w);
    const std::vector<double> w1(w.begin(), w.begin() + m_);
    double sterm = 0.0;
    if (kind_ == DerivativeKind::upwind) {
        const std::vector<double> sw = ops_.S.apply(w1);
        for (int i = 0; i < m_; ++i)
            sterm += w1[i] * sw[i];
    }
    return {rate, 2.0 * sys_.alpha * sterm};
}

SolutionTrace rk4_integrate(const ProjectionSystem& sys, const std::vector<double>& v0, double t_end,
                            double cfl, const Rk4Options& opt)
{
    if (!(cfl > 0.0))
        throw ParameterError("rk4_integrate: cfl must be positive");
    const int n = sys.size();
    if (static_cast<int>(v0.size()) != n)
        throw SizeError("rk4_integrate: state length mismatch");
    const double k = cfl * sys.h();
    SolutionTrace tr;
    std::vector<double> v = v0, k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = 0.0;
    double e_prev = sys.energy(v);
    if (opt.record_energy) {
        tr.times.push_back(t);
        tr.energies.push_back(e_prev);
    }
    while (t < t_end) {
        double dt = k;
        bool last = false;
        if (t + dt >= t_end - 1e-12 * k) {
            dt = t_end - t;
            last = true;
        }
        sys.rhs(v, k1);
        for (int i = 0; i < n; ++i)
            tmp[i] = v[i] + 0.5 * dt * k1[i];
        sys.rhs(tmp, k2);
        for (int i = 0; i < n; ++i)
            tmp[i] = v[i] + 0.5 * dt * k2[i];
        sys.rhs(tmp, k3);
        for (int i = 0; i < n; ++i)
            tmp[i] = v[i] + dt * k3[i];
        sys.rhs(tmp, k4);
        for (int i = 0; i < n; ++i)
            v[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = last ? t_end : t + dt;
        ++tr.steps;
        for (int i = 0; i < n; ++i)
            if (!std::isfinite(v[i]))
                throw DivergenceError("rk4_integrate: non-finite state at t=" + std::to_string(t));
        const double e = sys.energy(v);
        tr.max_energy_increase = std::max(tr.max_energy_increase, e - e_prev);
        e_prev = e;
        if (opt.record_energy) {
            tr.times.push_back(t);
            tr.energies.push_back(e);
        }
    }
    tr.final_state = std::move(v);
    return tr;
}

GaussianFields gaussian_solution(const std::vector<double>& x, double r_star, double t, GaussianForm form)
{
    constexpr double L = 2.0;
    if (form == GaussianForm::reflected && (t < L - L / 8.0 || t > L + L / 8.0))
        throw DomainError("gaussian_solution: reflected form is valid for t in [1.75, 2.25]");
    if (!(r_star > 0.0))
        throw ParameterError("gaussian_solution: r_star must be positive");
    auto th1 = [&](double xx, double tt) { return std::exp(-std::pow((xx - tt) / r_star, 2)); };
    auto th2 = [&](double xx, double tt) { return -std::exp(-std::pow((xx + tt) / r_star, 2)); };
    GaussianFields f;
    f.u1.resize(x.size());
    f.u2.resize(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (form == GaussianForm::initial) {
            f.u1[i] = th1(x[i], t) - th2(x[i], t);
            f.u2[i] = th1(x[i], t) + th2(x[i], t);
        } else {
            f.u1[i] = th2(x[i], L - t) - th1(x[i], L - t);
            f.u2[i] = th1(x[i], L - t) + th2(x[i], L - t);
        }
    }
    return f;
}

std::vector<double> concat(const GaussianFields& f)
{
    std::vector<double> v = f.u1;
    v.insert(v.end(), f.u2.begin(), f.u2.end());
    return v;
}

double observed_rate(double err_m, double err_n, int m, int n)
{
    return std::log10(err_m / err_n) / std::log10(static_cast<double>(n) / m);
}

std::vector<ConvergenceRow> convergence_study(const std::vector<NamedOperator>& ops,
                                              const std::vector<int>& m_list,
                                              const ConvergenceOptions& opt)
{
    for (size_t k = 1; k < m_list.size(); ++k)
        if (m_list[k] <= m_list[k - 1])
            throw ParameterError("convergence_study: grid sizes must increase");
    const size_t ncase = ops.size() * m_list.size();
    std::vector<double> errors(ncase);
    std::vector<std::string> failures(ncase);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t c = next++; c < ncase; c = next++) {
            const NamedOperator& op = ops[c / m_list.size()];
            const int m = m_list[c % m_list.size()];
            try {
                HyperbolicSystem hs;
                hs.alpha = opt.alpha;
                const ProjectionSystem sys(op.pair, m, hs, op.kind);
                const std::vector<double> v0 = concat(gaussian_solution(sys.nodes(), opt.r_star, 0.0, GaussianForm::initial));
                Rk4Options ro;
                ro.record_energy = false;
                const SolutionTrace tr = rk4_integrate(sys, v0, opt.t_end, opt.cfl, ro);
                const std::vector<double> ex =
                    concat(gaussian_solution(sys.nodes(), opt.r_star, opt.t_end, GaussianForm::reflected));
                double s = 0.0;
                for (size_t i = 0; i < ex.size(); ++i)
                    s += std::pow(ex[i] - tr.final_state[i], 2);
                errors[c] = std::sqrt(sys.h() * s);
            } catch (const std::exception& e) {
                failures[c] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::max(1, opt.threads); ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();
    for (const auto& f : failures)
        if (!f.empty())
            throw DivergenceError("convergence_study: " + f);

    std::vector<ConvergenceRow> rows;
    for (size_t o = 0; o < ops.size(); ++o)
        for (size_t k = 0; k < m_list.size(); ++k) {
            ConvergenceRow r;
            r.name = ops[o].name;
            r.order = ops[o].pair.order;
            r.m = m_list[k];
            const double e = errors[o * m_list.size() + k];
            r.log10_error = std::log10(e);
            r.rate = k == 0 ? std::numeric_limits<double>::quiet_NaN()
                            : observed_rate(errors[o * m_list.size() + k - 1], e, m_list[k - 1], m_list[k]);
            rows.push_back(r);
        }
    return rows;
}

std::vector<SpectralRow> spectral_study(const std::vector<NamedOperator>& ops, const std::vector<int>& m_list)
{
    std::vector<SpectralRow> rows;
    for (const auto& op : ops)
        for (int m : m_list) {
            const ProjectionSystem sys(op.pair, m, HyperbolicSystem{}, op.kind);
            SpectralRow r;
            r.name = op.name;
            r.order = op.pair.order;
            r.m = m;
            r.rho_hM = spectral_radius(sys.h() * sys.M());
            rows.push_back(r);
        }
    return rows;
}

InteractionResult interaction_experiment(const NamedOperator& op, int m, double alpha, double t_end, double cfl,
                                         double r_star)
{
    HyperbolicSystem hs;
    hs.alpha = alpha;
    const ProjectionSystem sys(op.pair, m, hs, op.kind);
    const std::vector<double> v0 = concat(gaussian_solution(sys.nodes(), r_star, 0.0, GaussianForm::initial));
    InteractionResult r;
    r.trace = rk4_integrate(sys, v0, t_end, cfl);
    r.x = sys.nodes();
    r.u1.assign(r.trace.final_state.begin(), r.trace.final_state.begin() + m);
    r.u2.assign(r.trace.final_state.begin() + m, r.trace.final_state.end());
    r.max_u1 = *std::max_element(r.u1.begin(), r.u1.end());
    r.min_u1 = *std::min_element(r.u1.begin(), r.u1.end());
    r.max_u2 = *std::max_element(r.u2.begin(), r.u2.end());
    r.min_u2 = *std::min_element(r.u2.begin(), r.u2.end());
    for (int i = 0; i + 1 < m; ++i)
        r.total_variation += std::abs(r.u1[i + 1] - r.u1[i]) + std::abs(r.u2[i + 1] - r.u2[i]);
    const double band = 0.1 * (hs.x_r - hs.x_l);
    for (int i = 0; i < m; ++i)
        if (r.x[i] <= hs.x_l + band || r.x[i] >= hs.x_r - band)
            r.boundary_overshoot = std::max({r.boundary_overshoot, std::abs(r.u1[i]), std::abs(r.u2[i])});
    return r;
}

} // namespace sbp
