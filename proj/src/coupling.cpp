#include "ibshell/coupling.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ibshell/errors.hpp"

namespace ibshell {

double phi(double r) {
    const double x = std::abs(r);
    if (x <= 1.0) return (3.0 - 2.0 * x + std::sqrt(1.0 + 4.0 * x - 4.0 * x * x)) / 8.0;
    if (x <= 2.0) return 0.5 - phi(2.0 - x);
    return 0.0;
}

namespace {

struct Stencil {
    std::array<int, 3> base;                       // first lattice index per axis
    std::array<std::array<double, 4>, 3> weight;   // phi per axis
};

Stencil stencil(const Vec3& X, const FluidParams& grid) {
    if (!X.allFinite()) throw NonFiniteInput("coupling: non-finite shell position");
    const double h = grid.h();
    Stencil s;
    for (int d = 0; d < 3; ++d) {
        double x = std::fmod(X[d], grid.a);
        if (x < 0.0) x += grid.a;
        if (x >= grid.a) x = 0.0;
        const double r = x / h;
        const int b = static_cast<int>(std::floor(r)) - 1;
        s.base[d] = b;
        for (int m = 0; m < 4; ++m) s.weight[d][m] = phi(r - (b + m));
    }
    return s;
}

}  // namespace

VectorField spread_force(std::span<const Vec3> f, std::span<const Vec3> X, std::span<const double> area_weights,
                         const FluidParams& grid) {
    if (f.size() != X.size() || area_weights.size() != X.size())
        throw InvalidParameter("spread_force: force, position and weight counts differ");
    const int N = grid.N;
    const double h = grid.h();
    const double inv_h3 = 1.0 / (h * h * h);
    VectorField F = VectorField::zeros(N);
    for (std::size_t q = 0; q < X.size(); ++q) {
        const Stencil s = stencil(X[q], grid);
        const Vec3 fq = f[q] * (area_weights[q] * inv_h3);
        for (int c = 0; c < 4; ++c)
            for (int b = 0; b < 4; ++b) {
                const double wbc = s.weight[1][b] * s.weight[2][c];
                for (int a = 0; a < 4; ++a) {
                    const double w = s.weight[0][a] * wbc;
                    const std::size_t idx = lattice_index(N, s.base[0] + a, s.base[1] + b, s.base[2] + c);
                    for (int d = 0; d < 3; ++d) F[d][idx] += w * fq[d];
                }
            }
    }
    return F;
}

std::vector<Vec3> interpolate_velocity(const VectorField& u, std::span<const Vec3> X, const FluidParams& grid) {
    const int N = grid.N;
    if (u.N != N) throw InvalidParameter("interpolate_velocity: velocity field does not match grid");
    std::vector<Vec3> U(X.size(), Vec3::Zero());
    for (std::size_t q = 0; q < X.size(); ++q) {
        const Stencil s = stencil(X[q], grid);
        Vec3 acc = Vec3::Zero();
        for (int c = 0; c < 4; ++c)
            for (int b = 0; b < 4; ++b) {
                const double wbc = s.weight[1][b] * s.weight[2][c];
                for (int a = 0; a < 4; ++a) {
                    const double w = s.weight[0][a] * wbc;
                    const std::size_t idx = lattice_index(N, s.base[0] + a, s.base[1] + b, s.base[2] + c);
                    acc += w * Vec3(u[0][idx], u[1][idx], u[2][idx]);
                }
            }
        // the h^3 of the sum cancels the h^-3 of delta_h
        U[q] = acc;
    }
    return U;
}

}  // namespace ibshell
