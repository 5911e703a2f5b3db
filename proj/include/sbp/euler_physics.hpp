#pragma once

#include <array>

namespace sbp::euler {

inline constexpr double kGamma = 1.4;

using Cons = std::array<double, 4>;   // rho, rho v1, rho v2, rho e

struct Primitive {
    double rho = 1.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double p = 1.0;
};

double pressure(const Cons& u);
Cons to_conservative(const Primitive& w);
Primitive to_primitive(const Cons& u);
bool is_valid(const Cons& u);

enum class SplittingKind { lax_friedrichs, steger_warming };

// Flux through the (not necessarily unit) direction n: nx f + ny g.
Cons flux(const Cons& u, double nx, double ny);

// Split flux along n. Checked version throws InvalidStateError for rho <= 0 or
// p <= 0; the unchecked one lets NaN propagate for the integrator to catch.
void split_flux(const Cons& u, double nx, double ny, SplittingKind kind, Cons& fp, Cons& fm);
void split_flux_unchecked(const Cons& u, double nx, double ny, SplittingKind kind, Cons& fp, Cons& fm);

// Two-point interface fluxes along n from the left state uL to the right state uR.
Cons llf_flux(const Cons& uL, const Cons& uR, double nx, double ny);
Cons splitting_flux(const Cons& uL, const Cons& uR, double nx, double ny, SplittingKind kind);

// Largest |v.n| + c |n|.
double max_wave_speed(const Cons& u, double nx, double ny);

} // namespace sbp::euler
