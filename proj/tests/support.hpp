#pragma once

#include "sbp/construct.hpp"
#include "sbp/operator_io.hpp"

#include <map>
#include <random>
#include <string>

namespace sbptest {

// Operators shipped under data/operators (produced by `sbpctl derive`).
inline const sbp::OperatorPair& shipped(int p)
{
    static std::map<int, sbp::OperatorPair> cache;
    auto it = cache.find(p);
    if (it == cache.end())
        it = cache.emplace(p, sbp::load_operator(std::string(SBP_DATA_DIR) + "/operators/upwind_p" +
                                                  std::to_string(p) + ".txt"))
                 .first;
    return it->second;
}

// A cheap derivation for tests that only need some certified pair.
inline const sbp::OperatorPair& quick(int p)
{
    static std::map<int, sbp::OperatorPair> cache;
    auto it = cache.find(p);
    if (it == cache.end()) {
        sbp::OptimizationConfig cfg;
        cfg.restarts = 4;
        cfg.threads = 1;
        it = cache.emplace(p, sbp::derive(p, cfg).pair).first;
    }
    return it->second;
}

inline std::vector<double> random_vector(int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v)
        x = u(rng);
    return v;
}

} // namespace sbptest
