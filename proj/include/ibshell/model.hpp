#pragma once

#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ibshell/fluid.hpp"
#include "ibshell/geometry.hpp"
#include "ibshell/shell.hpp"

namespace ibshell {

enum class ThicknessLaw { Exact, Table };
// Symmetric: q = (k - 1) dq, so the lattice spans [0, L] x [0, w].
// Printed:   q = k dq for k = 1..n, shifted one spacing past the far edge.
enum class GridOrigin { Symmetric, Printed };

ThicknessLaw parse_thickness_law(const std::string& s);
GridOrigin parse_grid_origin(const std::string& s);
std::string to_string(ThicknessLaw v);
std::string to_string(GridOrigin v);

// Helicoidal test shell in a periodic box. Units: cm, g, s.
struct ModelConfig {
    // fluid
    int N = 32;
    double a = 0.1;
    double rho = 1.034;
    double mu_f = 0.0197;
    double dt = 4e-8;
    bool advection = true;
    // shell geometry
    double L = 0.5;
    double L_BM = 3.5;
    double w0 = 0.015;
    double w1 = 0.056;
    double alpha = 1.8 * std::numbers::pi / 0.5;
    double R = 1.0 / 30.0;
    double H = 0.01;
    int n1 = 0;  // 0: 10 N + 1
    int n2 = 0;  // 0: 3 N / 8 + 1
    GridOrigin grid_origin = GridOrigin::Symmetric;
    bool center_shell = true;
    // material
    double lambda = 26197503.0;
    double mu = 523950.0;
    ThicknessLaw thickness_law = ThicknessLaw::Table;
    ClosureOrder coefficient_order = ClosureOrder::Leading;
    // forcing
    double k_clamp = 1e7;             // g s^-2 per node; 1e8 diverges at N=16, dt=8e-8
    bool impulse = true;
    double impulse_z = 0.1;           // plane height, cm (taken modulo a)
    double impulse_density = 4e-7;    // surface force density, g cm^-1 s^-2
    double impulse_duration = 0.0;    // s; 0 means one time step
    // run control
    double T0 = 2e-6;
    int snapshot_every = 0;           // 0: no snapshots

    int resolved_n1() const { return n1 > 0 ? n1 : 10 * N + 1; }
    int resolved_n2() const { return n2 > 0 ? n2 : 3 * N / 8 + 1; }
    long steps() const;
    FluidParams fluid_params() const { return FluidParams{N, a, rho, mu_f, dt}; }
    void validate() const;
};

double strip_width(const ModelConfig& cfg, double q1);
Vec3 helix_point(const ModelConfig& cfg, double q1);
Vec3 helix_normal(const ModelConfig& cfg, double q1);
// Offset added to every node so the strip sits in the middle of the box.
Vec3 shell_offset(const ModelConfig& cfg);

// q1 value of lattice row i (0-based) under the configured origin.
double row_q1(const ModelConfig& cfg, int i);

SurfaceGrid build_model_shell(const ModelConfig& cfg);

// Half-thickness at arclength parameter q1 in [0, L].
double thickness_law(double q1, ThicknessLaw law, double L = 0.5);
// Per-node h0. Printed-origin rows past q1 = L use the value at L.
std::vector<double> node_thickness(const ModelConfig& cfg);

// Nodes in the two outermost rows along each edge.
std::vector<bool> clamped_nodes(const SurfaceLattice& lat);

// Adds -k (X - X0) / dq(node) at clamped nodes.
void add_clamp_force(std::span<Vec3> force, std::span<const Vec3> offsets, const SurfaceLattice& lat, double k_clamp);
std::vector<Vec3> clamp_force(std::span<const Vec3> offsets, const SurfaceLattice& lat, double k_clamp);

// Downward body force on the lattice plane nearest impulse_z, at step 0 only.
VectorField impulse_force(long step, const ModelConfig& cfg);
int impulse_plane(const ModelConfig& cfg);

}  // namespace ibshell
