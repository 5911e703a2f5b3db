#include "sbp/grid.hpp"

#include "sbp/error.hpp"

#include <string>

namespace sbp {

double reference_spacing(int m, double d1, double d2)
{
    return 1.0 / (2.0 * (d1 + d2) + (m - 5));
}

Grid1D build_grid(int m, double d1, double d2, double x_l, double x_r)
{
    if (m < 7)
        throw SizeError("build_grid: need m >= 7, got " + std::to_string(m));
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw ParameterError("build_grid: d1 and d2 must be positive");
    if (!(x_l < x_r))
        throw ParameterError("build_grid: need x_l < x_r");

    const double d = d1 + d2;
    const double h = reference_spacing(m, d1, d2);
    std::vector<double> r(m);
    r[0] = 0.0;
    r[1] = d1 * h;
    for (int i = 2; i <= m / 2; ++i)
        r[i] = (d + (i - 2)) * h;
    // Fill the right half by mirroring so the symmetry holds to round-off.
    for (int i = 0; i < m / 2; ++i)
        r[m - 1 - i] = 1.0 - r[i];
    if (m % 2 == 1)
        r[m / 2] = 0.5;

    Grid1D g;
    g.d1 = d1;
    g.d2 = d2;
    g.x_l = x_l;
    g.x_r = x_r;
    const double len = x_r - x_l;
    g.h = h * len;
    g.nodes.resize(m);
    const double mid = 0.5 * (x_l + x_r);
    for (int i = 0; i < m; ++i) {
        // Offsets from the midpoint keep nodes[i] + nodes[m-1-i] exact.
        g.nodes[i] = mid + (r[i] - 0.5) * len;
    }
    g.nodes.front() = x_l;
    g.nodes.back() = x_r;
    return g;
}

} // namespace sbp
