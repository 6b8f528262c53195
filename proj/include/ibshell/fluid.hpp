#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace ibshell {

struct FluidParams {
    int N = 32;           // lattice points per side
    double a = 0.1;       // box side, cm
    double rho = 1.034;   // density, g cm^-3
    double mu_f = 0.0197; // dynamic viscosity, g cm^-1 s^-1
    double dt = 4e-8;     // s

    double h() const { return a / N; }
    std::size_t cells() const { return static_cast<std::size_t>(N) * N * N; }
    void validate() const;
};

// Periodic N^3 lattice, x fastest: idx = i + N (j + N k).
inline std::size_t lattice_index(int N, int i, int j, int k) {
    auto w = [N](int v) { return ((v % N) + N) % N; };
    return static_cast<std::size_t>(w(i)) +
           static_cast<std::size_t>(N) * (static_cast<std::size_t>(w(j)) + static_cast<std::size_t>(N) * w(k));
}

struct VectorField {
    int N = 0;
    std::array<std::vector<double>, 3> comp;

    static VectorField zeros(int N);
    std::vector<double>& operator[](int c) { return comp[static_cast<std::size_t>(c)]; }
    const std::vector<double>& operator[](int c) const { return comp[static_cast<std::size_t>(c)]; }
    std::size_t size() const { return comp[0].size(); }
    bool all_finite() const;
    double max_abs() const;
};

struct FluidState {
    VectorField u;          // cm/s
    std::vector<double> p;  // g cm^-1 s^-2

    static FluidState at_rest(int N);
};

enum class DiffKind { Forward, Backward, Centered };

std::vector<double> periodic_diff(std::span<const double> f, int N, double h, DiffKind kind, int axis);

// sum_k u_k D_k u with D- where u_k >= 0 and D+ where u_k < 0.
VectorField upwind_advection(const VectorField& u, double h);

// D0 . u
std::vector<double> divergence(const VectorField& u, double h);

// Implicit viscous / pressure solve of the periodic projection system
//   (rho/dt - mu_f Lap) u + D0 p = r,   D0 . u = 0
// by FFT, with the explicit right side built from the previous velocity.
class FluidSolver {
public:
    explicit FluidSolver(const FluidParams& params);
    ~FluidSolver();
    FluidSolver(const FluidSolver&) = delete;
    FluidSolver& operator=(const FluidSolver&) = delete;

    const FluidParams& params() const { return params_; }

    // Solves the linear system for an arbitrary right side.
    FluidState solve(const VectorField& r);

    // r = rho u/dt - rho adv(u) + F, then solve.
    FluidState step(const FluidState& state, const VectorField& F, bool advection = true);

private:
    FluidParams params_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
    std::vector<double> sin_half_sq_;  // sin^2(pi k / N)
    std::vector<double> sin_full_;     // sin(2 pi k / N), exactly zero at k = 0, N/2
    bool warned_divergence_ = false;
};

FluidState fluid_step(const FluidState& state, const VectorField& F, const FluidParams& params);

}  // namespace ibshell
