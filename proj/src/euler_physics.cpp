#include "sbp/euler_physics.hpp"

#include "sbp/error.hpp"

#include <cmath>

namespace sbp::euler {

double pressure(const Cons& u)
{
    return (kGamma - 1.0) * (u[3] - 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]);
}

Cons to_conservative(const Primitive& w)
{
    return {w.rho, w.rho * w.v1, w.rho * w.v2,
            w.p / (kGamma - 1.0) + 0.5 * w.rho * (w.v1 * w.v1 + w.v2 * w.v2)};
}

Primitive to_primitive(const Cons& u)
{
    return {u[0], u[1] / u[0], u[2] / u[0], pressure(u)};
}

bool is_valid(const Cons& u)
{
    for (double v : u)
        if (!std::isfinite(v))
            return false;
    if (!(u[0] > 0.0))
        return false;
    const double p = pressure(u);
    return std::isfinite(p) && p > 0.0;
}

Cons flux(const Cons& u, double nx, double ny)
{
    const double v1 = u[1] / u[0], v2 = u[2] / u[0];
    const double p = pressure(u);
    const double vn = v1 * nx + v2 * ny;
    return {u[0] * vn, u[1] * vn + p * nx, u[2] * vn + p * ny, (u[3] + p) * vn};
}

void split_flux_unchecked(const Cons& u, double nx, double ny, SplittingKind kind, Cons& fp, Cons& fm)
{
    const double rho = u[0];
    const double v1 = u[1] / rho, v2 = u[2] / rho;
    const double p = pressure(u);
    const double c = std::sqrt(kGamma * p / rho);
    const double len = std::hypot(nx, ny);
    if (kind == SplittingKind::lax_friedrichs) {
        const double lam = std::abs(v1 * nx + v2 * ny) + c * len;
        const Cons f = flux(u, nx, ny);
        for (int k = 0; k < 4; ++k) {
            fp[k] = 0.5 * (f[k] + lam * u[k]);
            fm[k] = f[k] - fp[k];
        }
        return;
    }
    // Steger-Warming in the unit direction, scaled by |n|.
    const double ux = nx / len, uy = ny / len;
    const double vn = v1 * ux + v2 * uy;
    const double lam[3] = {vn - c, vn, vn + c};
    auto part = [&](double l, double sgn) { return 0.5 * (l + sgn * std::abs(l)); };
    const double g = kGamma;
    auto eval = [&](double sgn, Cons& f) {
        const double l1 = part(lam[0], sgn), l2 = part(lam[1], sgn), l3 = part(lam[2], sgn);
        const double a = rho / (2.0 * g) * len;
        const double w1x = v1 - c * ux, w1y = v2 - c * uy;
        const double w3x = v1 + c * ux, w3y = v2 + c * uy;
        f[0] = a * (2.0 * (g - 1.0) * l2 + l1 + l3);
        f[1] = a * (2.0 * (g - 1.0) * l2 * v1 + l1 * w1x + l3 * w3x);
        f[2] = a * (2.0 * (g - 1.0) * l2 * v2 + l1 * w1y + l3 * w3y);
        f[3] = a * ((g - 1.0) * l2 * (v1 * v1 + v2 * v2) + 0.5 * l1 * (w1x * w1x + w1y * w1y) +
                    0.5 * l3 * (w3x * w3x + w3y * w3y) + (3.0 - g) / (2.0 * (g - 1.0)) * (l1 + l3) * c * c);
    };
    eval(1.0, fp);
    const Cons f = flux(u, nx, ny);
    // f- = f - f+ keeps the splitting consistent to round-off.
    for (int k = 0; k < 4; ++k)
        fm[k] = f[k] - fp[k];
}

void split_flux(const Cons& u, double nx, double ny, SplittingKind kind, Cons& fp, Cons& fm)
{
    if (!is_valid(u))
        throw InvalidStateError("split_flux: state needs rho > 0 and p > 0");
    split_flux_unchecked(u, nx, ny, kind, fp, fm);
}

Cons llf_flux(const Cons& uL, const Cons& uR, double nx, double ny)
{
    const double lam = std::max(max_wave_speed(uL, nx, ny), max_wave_speed(uR, nx, ny));
    const Cons fL = flux(uL, nx, ny), fR = flux(uR, nx, ny);
    Cons f;
    for (int k = 0; k < 4; ++k)
        f[k] = 0.5 * (fL[k] + fR[k]) - 0.5 * lam * (uR[k] - uL[k]);
    return f;
}

Cons splitting_flux(const Cons& uL, const Cons& uR, double nx, double ny, SplittingKind kind)
{
    Cons pL, mL, pR, mR;
    split_flux_unchecked(uL, nx, ny, kind, pL, mL);
    split_flux_unchecked(uR, nx, ny, kind, pR, mR);
    Cons f;
    for (int k = 0; k < 4; ++k)
        f[k] = pL[k] + mR[k];
    return f;
}

double max_wave_speed(const Cons& u, double nx, double ny)
{
    const double v1 = u[1] / u[0], v2 = u[2] / u[0];
    const double c = std::sqrt(kGamma * pressure(u) / u[0]);
    return std::abs(v1 * nx + v2 * ny) + c * std::hypot(nx, ny);
}

} // namespace sbp::euler
