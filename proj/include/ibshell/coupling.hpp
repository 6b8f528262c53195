#pragma once

#include <span>
#include <vector>

#include "ibshell/fluid.hpp"
#include "ibshell/geometry.hpp"

namespace ibshell {

// One-dimensional smoothed delta kernel, support |r| < 2 mesh widths.
double phi(double r);

// F(x) = sum_q f(q) delta_h(x - X(q)) dq(q) on the periodic fluid lattice.
// Only the 4x4x4 lattice neighbourhood of each position receives weight.
VectorField spread_force(std::span<const Vec3> f, std::span<const Vec3> X, std::span<const double> area_weights,
                         const FluidParams& grid);

// U(q) = sum_x u(x) delta_h(x - X(q)) h^3.
std::vector<Vec3> interpolate_velocity(const VectorField& u, std::span<const Vec3> X, const FluidParams& grid);

}  // namespace ibshell
