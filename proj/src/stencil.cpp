#include "sbp/construct.hpp"

#include "sbp/error.hpp"

#include <cmath>
#include <map>

namespace sbp {

namespace {

using Poly = std::map<int, double>;   // offset -> coefficient

Poly convolve(const Poly& a, const Poly& b)
{
    Poly c;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b)
            c[i + j] += x * y;
    return c;
}

Poly power(const Poly& a, int k)
{
    Poly r{{0, 1.0}};
    for (int i = 0; i < k; ++i)
        r = convolve(r, a);
    return r;
}

const Poly kForward{{0, -1.0}, {1, 1.0}};
const Poly kBackward{{-1, -1.0}, {0, 1.0}};

double lgamma_int(int n) { return std::lgamma(n + 1.0); }

InteriorStencil pack(int order, const Poly& p, double alpha)
{
    InteriorStencil s;
    s.order = order;
    s.alpha = alpha;
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& [k, v] : p)
        if (v != 0.0) {
            if (first)
                lo = k;
            first = false;
            hi = k;
        }
    for (int k = lo; k <= hi; ++k) {
        s.offsets.push_back(k);
        const auto it = p.find(k);
        s.coefficients.push_back(it == p.end() ? 0.0 : it->second);
    }
    return s;
}

Poly to_poly(const InteriorStencil& s)
{
    Poly p;
    for (size_t k = 0; k < s.offsets.size(); ++k)
        p[s.offsets[k]] = s.coefficients[k];
    return p;
}

// Removes the coefficient at `offset` by subtracting alpha * d.
double eliminate(Poly& p, const Poly& d, int offset)
{
    const double alpha = p[offset] / d.at(offset);
    for (const auto& [k, v] : d)
        p[k] -= alpha * v;
    p[offset] = 0.0;
    return alpha;
}

} // namespace

Stencil InteriorStencil::as_stencil() const
{
    Stencil s;
    s.first_offset = offsets.empty() ? 0 : offsets.front();
    s.coeffs = coefficients;
    return s;
}

InteriorStencil central_stencil(int order)
{
    if (order < 2 || order > 12 || order % 2 != 0)
        throw ParameterError("central_stencil: unsupported order " + std::to_string(order));
    const int k = order / 2;
    Poly p;
    for (int j = 1; j <= k; ++j) {
        // (-1)^(j+1) (k!)^2 / (j (k-j)! (k+j)!)
        const double mag = std::exp(2.0 * lgamma_int(k) - lgamma_int(k - j) - lgamma_int(k + j)) / j;
        const double c = (j % 2 == 1 ? 1.0 : -1.0) * mag;
        p[j] = c;
        p[-j] = -c;
    }
    p[0] = 0.0;
    return pack(order, p, 0.0);
}

InteriorStencil upwind_interior(int p)
{
    if (p < 2 || p > 9)
        throw ParameterError("upwind_interior: unsupported order " + std::to_string(p));
    // Odd order q = 2k-1 comes from the central order-2k stencil with the
    // leftmost point removed by (D+D-)^k.
    const int k = p % 2 == 1 ? (p + 1) / 2 : p / 2 + 1;
    Poly st = to_poly(central_stencil(2 * k));
    const Poly dd = power(convolve(kForward, kBackward), k);
    double alpha = eliminate(st, dd, -k);
    if (p % 2 == 0) {
        // One more point off: D+ (D+D-)^(k-1) spans -(k-1)..k.
        const Poly d2 = convolve(kForward, power(convolve(kForward, kBackward), k - 1));
        alpha = eliminate(st, d2, -(k - 1));
    }
    return pack(p, st, alpha);
}

} // namespace sbp
