#include "sbp/construct.hpp"

#include "sbp/error.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace sbp {

namespace {

// Deflated lambda_max(S) accepted as round-off during the search.
constexpr double kPsdFeasible = 1e-11;

struct Evaluation {
    double value = std::numeric_limits<double>::infinity();
    double objective = 0.0;
    double penalty = 0.0;
    double psd = 0.0;
    double min_h = 0.0;
    bool consistent = false;
};

// Search variables: angles for the grid parameters (so the box constraint is
// built in), then the null-space coefficients.
class Search {
public:
    Search(int p, const OptimizationConfig& cfg) : p_(p), cfg_(cfg), layout_(closure_layout(p))
    {
        const ClosureProblem pr = assemble_accuracy_system(p, 1.0, 1.0);
        null_dim_ = pr.null_dim;
        const int s = layout_.s;
        // Objective normalization: e_(s/2+1) scales like h^(s/2+1).
        const double h = reference_spacing(4 * layout_.block + 1, 1.0, 1.0);
        scale_ = std::pow(h, -2.0 * (s / 2 + 1));
    }

    int grid_dims() const
    {
        if (cfg_.equispaced)
            return 0;
        return layout_.d2_fixed ? 1 : 2;
    }
    int dims() const { return grid_dims() + null_dim_; }
    int null_dim() const { return null_dim_; }

    std::pair<double, double> grid(const double* v) const
    {
        const double mid = 0.5 * (cfg_.d_min + cfg_.d_max), half = 0.5 * (cfg_.d_max - cfg_.d_min);
        const int g = grid_dims();
        const double d1 = g >= 1 ? mid + half * std::sin(v[0]) : 1.0;
        const double d2 = g >= 2 ? mid + half * std::sin(v[1]) : 1.0;
        return {d1, d2};
    }

    OperatorPair candidate(const double* v, bool* consistent) const
    {
        const auto [d1, d2] = grid(v);
        const ClosureProblem pr = assemble_accuracy_system(p_, d1, d2, false);
        *consistent = pr.consistent && pr.null_dim == null_dim_;
        if (!*consistent)
            return {};
        Eigen::VectorXd z(null_dim_);
        for (int k = 0; k < null_dim_; ++k)
            z[k] = v[grid_dims() + k];
        return solve_closure(pr, z);
    }

    Evaluation evaluate(const double* v) const
    {
        Evaluation e;
        bool ok = false;
        OperatorPair c;
        try {
            c = candidate(v, &ok);
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) {
            e.value = 1e12;
            return e;
        }
        e.consistent = true;
        const int m = objective_reference_size(c);
        e.psd = std::max(deflated_psd_eigenvalue(c, m), deflated_psd_eigenvalue(c, m + 7));
        e.min_h = *std::min_element(c.h_boundary.begin(), c.h_boundary.end());
        e.objective = objective(c, cfg_.mode);
        e.penalty = cfg_.psd_penalty_weight * std::pow(std::max(0.0, e.psd), 2) +
                    cfg_.h_penalty_weight * std::pow(std::max(0.0, cfg_.h_margin - e.min_h), 2);
        e.value = e.objective * scale_ + e.penalty * 1e4;
        if (!std::isfinite(e.value))
            e.value = 1e12;
        return e;
    }

private:
    int p_;
    OptimizationConfig cfg_;
    ClosureLayout layout_;
    int null_dim_ = 0;
    double scale_ = 1.0;
};

double gsl_objective(const gsl_vector* x, void* params)
{
    const auto* s = static_cast<const Search*>(params);
    return s->evaluate(x->data).value;
}

std::vector<double> simplex(const Search& search, std::vector<double> x0, const OptimizationConfig& cfg)
{
    const int n = search.dims();
    if (n == 0)
        return x0;
    gsl_multimin_function f{&gsl_objective, static_cast<size_t>(n), const_cast<Search*>(&search)};
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* step = gsl_vector_alloc(n);
    for (int pass = 0; pass < cfg.passes; ++pass) {
        for (int k = 0; k < n; ++k) {
            gsl_vector_set(x, k, x0[k]);
            gsl_vector_set(step, k, k < search.grid_dims() ? 0.2 : 0.5);
        }
        gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
        gsl_multimin_fminimizer_set(s, &f, x, step);
        for (int it = 0; it < cfg.max_evaluations; ++it) {
            if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS)
                break;
            if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), cfg.simplex_tolerance) == GSL_SUCCESS)
                break;
        }
        for (int k = 0; k < n; ++k)
            x0[k] = gsl_vector_get(s->x, k);
        gsl_multimin_fminimizer_free(s);
    }
    gsl_vector_free(x);
    gsl_vector_free(step);
    return x0;
}

// Latin hypercube over the start box, one stratum per restart and dimension.
std::vector<std::vector<double>> latin_hypercube(int n, int dims, int grid_dims, double z_range,
                                                 std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dims));
    for (int k = 0; k < dims; ++k) {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int i = 0; i < n; ++i) {
            const double t = (perm[i] + u(rng)) / n;
            pts[i][k] = k < grid_dims ? std::asin(2.0 * t - 1.0) : z_range * (2.0 * t - 1.0);
        }
    }
    return pts;
}

} // namespace

DerivationResult derive(int p, const OptimizationConfig& config)
{
    if (p < 2 || p > 9)
        throw ParameterError("derive: unsupported order " + std::to_string(p));
    if (!(config.d_min > 0.0) || !(config.d_min < config.d_max))
        throw ParameterError("derive: invalid d bounds");
    if (config.restarts < 1)
        throw ParameterError("derive: need at least one restart");
    gsl_set_error_handler_off();

    const Search search(p, config);
    const int dims = search.dims();
    const auto starts = latin_hypercube(config.restarts, dims, search.grid_dims(), config.z_range, config.seed);

    std::vector<RestartResult> results(config.restarts);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next++; i < config.restarts; i = next++) {
            const std::vector<double> x = simplex(search, starts[i], config);
            const Evaluation e = search.evaluate(x.data());
            RestartResult r;
            r.index = i;
            r.value = e.value;
            r.objective = e.objective;
            r.penalty = e.penalty;
            r.feasible = e.consistent && e.min_h > 0.0 && e.psd <= kPsdFeasible;
            const auto [d1, d2] = search.grid(x.data());
            r.params = {d1, d2};
            for (int k = search.grid_dims(); k < dims; ++k)
                r.params.push_back(x[k]);
            r.search_point = x;
            results[i] = std::move(r);
        }
    };
    int nthreads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::clamp(nthreads, 1, config.restarts);
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& t : pool)
        t.join();

    // Best certified candidate; ties broken by restart index.
    std::vector<int> order(config.restarts);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (results[a].feasible != results[b].feasible)
            return results[a].feasible;
        return results[a].objective < results[b].objective;
    });

    DerivationResult out;
    out.restarts = results;
    std::string last_failure;
    for (int idx : order) {
        const RestartResult& r = results[idx];
        if (!r.feasible)
            break;
        bool ok = false;
        OperatorPair pair = search.candidate(r.search_point.data(), &ok);
        if (!ok)
            continue;
        SbpReport rep = verify_sbp(pair, default_verify_sizes(pair));
        if (!rep.pass) {
            last_failure = rep.summary();
            continue;
        }
        const ClosureProblem pr = assemble_accuracy_system(p, pair.d1, pair.d2);
        out.pair = pair;
        out.objective = r.objective;
        out.penalty = r.penalty;
        const int m = objective_reference_size(pair);
        out.psd_eigenvalue = std::max(deflated_psd_eigenvalue(pair, m), deflated_psd_eigenvalue(pair, m + 7));
        out.min_h = *std::min_element(pair.h_boundary.begin(), pair.h_boundary.end());
        out.accuracy_residual = accuracy_residual(pr, pair);
        out.null_dim = pr.null_dim;
        out.free_parameters = pr.free_parameters();
        out.free.assign(r.params.begin() + 2, r.params.begin() + 2 + search.null_dim());
        out.chosen_restart = idx;
        out.report = std::move(rep);
        break;
    }
    if (out.chosen_restart < 0) {
        const RestartResult& best = results[order.front()];
        std::ostringstream os;
        os << "derive: no certified candidate for p=" << p << " after " << config.restarts
           << " restarts; best value " << best.value << " (objective " << best.objective << ", penalty "
           << best.penalty << ", d1=" << best.params[0] << ", d2=" << best.params[1] << ")";
        if (!last_failure.empty())
            os << "\nlast certification failure:\n" << last_failure;
        throw DerivationError(os.str());
    }

    std::ostringstream num;
    num << std::setprecision(17);
    auto str = [&](double v) {
        num.str("");
        num << v;
        return num.str();
    };
    auto& meta = out.pair.metadata;
    meta.emplace_back("objective", str(out.objective));
    meta.emplace_back("objective_mode", config.mode == ObjectiveMode::combined_term ? "combined" : "single");
    meta.emplace_back("seed", std::to_string(config.seed));
    meta.emplace_back("restarts", std::to_string(config.restarts));
    meta.emplace_back("chosen_restart", std::to_string(out.chosen_restart));
    meta.emplace_back("null_dim", std::to_string(out.null_dim));
    meta.emplace_back("free_parameters", std::to_string(out.free_parameters));
    std::string z;
    for (double v : out.free)
        z += (z.empty() ? "" : ",") + str(v);
    meta.emplace_back("null_coefficients", z.empty() ? "none" : z);
    meta.emplace_back("layout", config.equispaced ? "equispaced" : "optimized");
    return out;
}

std::string DerivationResult::report_text() const
{
    std::ostringstream os;
    os << std::setprecision(17);
    os << "order: " << pair.order << "\n";
    os << "boundary_width: " << pair.boundary_width << "\n";
    os << "d1: " << pair.d1 << "\n";
    os << "d2: " << pair.d2 << "\n";
    os << "objective: " << objective << "\n";
    os << "penalty: " << penalty << "\n";
    os << "psd_deflated_max_eigenvalue: " << psd_eigenvalue << "\n";
    os << "min_h_boundary: " << min_h << "\n";
    os << "accuracy_residual: " << accuracy_residual << "\n";
    os << "null_space_dimension: " << null_dim << "\n";
    os << "free_parameters: " << free_parameters << "\n";
    os << "null_coefficients:";
    for (double v : free)
        os << " " << v;
    os << "\n";
    int feasible = 0;
    for (const auto& r : restarts)
        feasible += r.feasible ? 1 : 0;
    os << "restarts: " << restarts.size() << " (feasible " << feasible << ", chosen " << chosen_restart << ")\n";
    os << "certification:\n" << report.summary();
    return os.str();
}

} // namespace sbp
