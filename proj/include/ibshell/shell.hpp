#pragma once

#include <span>
#include <string>
#include <vector>

#include "ibshell/geometry.hpp"
#include "ibshell/tensor_field.hpp"

namespace ibshell {

struct MaterialParams {
    double lambda = 0.0;      // first Lame coefficient, g cm^-1 s^-2
    double mu = 0.0;          // second Lame coefficient, g cm^-1 s^-2
    std::vector<double> h0;   // half-thickness per node, cm

    void validate(std::size_t nodes) const;
    // D = 2 mu (lambda + mu) / (lambda + 2 mu)
    double plate_modulus() const { return 2.0 * mu * (lambda + mu) / (lambda + 2.0 * mu); }
};

// How the through-thickness integrals of the coefficient tensors are closed.
//   Leading:   integrand factors frozen at t = 0, int dt = 2h0, int t dt = 0,
//              int t^2 dt = 2/3 h0^3.
//   Quadratic: the full t-dependent integrands integrated with 6-point
//              Gauss-Legendre, which keeps the O(h0^3) curvature corrections.
enum class ClosureOrder { Leading, Quadratic };

ClosureOrder parse_closure_order(const std::string& s);
std::string to_string(ClosureOrder o);

// Coefficient tensors of the shell force operator, all with upper indices.
struct ShellCoefficients {
    ClosureOrder order = ClosureOrder::Leading;
    TensorField A;         // scalar
    TensorField Abar;      // Abar^{s t m n}
    TensorField Abbar;     // Abbar^{m n}
    TensorField Phi;       // Phi^m
    TensorField Phibar;    // Phibar^{m n}
    TensorField Psi;       // Psi^{r m n}
    TensorField Psibar;    // Psibar^{s t m n}
    TensorField Omega;     // Omega^{m n}
    TensorField Omegabar;  // Omegabar^{m n r}
    TensorField Obbar;     // Obbar^{s t m n}
    TensorField Lambda0;   // Lambda^{a b c d} at t = 0

    std::size_t nodes() const { return A.nodes(); }
};

// Elasticity tensor at t = 0 with the pair-symmetrized shear term:
// c1 g^{ab} g^{cd} + mu/2 (g^{ac} g^{bd} + g^{ad} g^{bc}), c1 = lambda mu / (lambda + 2 mu).
TensorField elasticity_tensor(const TensorField& ginv, double lambda, double mu);

// Throws ThinShellViolation when h0 * |kappa| >= 1 anywhere; warns on stderr
// when it reaches 0.5.
ShellCoefficients compute_coefficients(const SurfaceGeometry& geom, const MaterialParams& mat,
                                       ClosureOrder order = ClosureOrder::Leading);

// X - X0 = omega N + W, with W carried both as W_mu and W^mu.
struct Displacement {
    TensorField omega;     // scalar
    TensorField W_lower;   // W_mu
    TensorField W_upper;   // W^mu
};

Displacement decompose_displacement(std::span<const Vec3> X, const SurfaceGrid& grid, const SurfaceGeometry& geom);
// Same decomposition from the displacement vectors X - X0 directly.
Displacement decompose_offsets(std::span<const Vec3> offsets, const SurfaceGeometry& geom);

struct ShellForceDensity {
    std::vector<double> f3;          // normal component
    TensorField fmu;                 // f^mu
    std::vector<Vec3> cartesian;     // f3 N + f^mu T_mu
};

// Force density the shell applies to the fluid: minus the discrete energy
// gradient given by the normal and tangential shell equations.
ShellForceDensity compute_force(const Displacement& disp, const ShellCoefficients& coeff,
                                const SurfaceGeometry& geom);

// Energy gradient itself (f3, f^mu before the sign flip), exposed for checks.
struct ShellOperatorValue {
    TensorField normal;      // scalar
    TensorField tangential;  // upper vector
};
ShellOperatorValue apply_shell_operator(const Displacement& disp, const ShellCoefficients& coeff,
                                        const SurfaceGeometry& geom);

std::vector<Vec3> force_to_cartesian(std::span<const double> f3, const TensorField& fmu, const SurfaceGeometry& geom);

}  // namespace ibshell
