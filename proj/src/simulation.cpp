#include "ibshell/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ibshell/errors.hpp"

namespace ibshell {

std::vector<Vec3> ShellState::positions(std::span<const Vec3> X0) const {
    std::vector<Vec3> X(X0.size());
    for (std::size_t q = 0; q < X0.size(); ++q) X[q] = X0[q] + D[q];
    return X;
}

double ShellState::max_offset() const {
    double m = 0.0;
    for (const Vec3& d : D) m = std::max(m, d.norm());
    return m;
}

namespace {

MaterialParams make_material(const ModelConfig& cfg) {
    MaterialParams m;
    m.lambda = cfg.lambda;
    m.mu = cfg.mu;
    m.h0 = node_thickness(cfg);
    return m;
}

}  // namespace

Simulation::Simulation(const ModelConfig& cfg)
    : cfg_(cfg),
      grid_(build_model_shell(cfg)),
      geom_(build_geometry(grid_)),
      material_(make_material(cfg)),
      coeff_(compute_coefficients(geom_, material_, cfg.coefficient_order)),
      area_(grid_.lattice.area_weights()),
      solver_(cfg.fluid_params()),
      fluid_(FluidState::at_rest(cfg.N)) {
    shell_.D.assign(grid_.X0.size(), Vec3::Zero());
}

std::vector<Vec3> Simulation::shell_force() const {
    const Displacement disp = decompose_offsets(shell_.D, geom_);
    std::vector<Vec3> f = compute_force(disp, coeff_, geom_).cartesian;
    add_clamp_force(f, shell_.D, grid_.lattice, cfg_.k_clamp);
    return f;
}

std::vector<double> Simulation::normal_displacement() const {
    std::vector<double> w(shell_.D.size());
    for (std::size_t q = 0; q < w.size(); ++q) w[q] = shell_.D[q].dot(geom_.frame.normal[q]);
    return w;
}

void Simulation::step() {
    const std::vector<Vec3> X = shell_.positions(grid_.X0);
    const std::vector<Vec3> f = shell_force();
    VectorField F = spread_force(f, X, area_, cfg_.fluid_params());
    if (shell_.step == 0 && cfg_.impulse) {
        const VectorField imp = impulse_force(0, cfg_);
        for (int d = 0; d < 3; ++d)
            for (std::size_t q = 0; q < F.size(); ++q) F[d][q] += imp[d][q];
    }
    fluid_ = solver_.step(fluid_, F, cfg_.advection);
    const std::vector<Vec3> U = interpolate_velocity(fluid_.u, X, cfg_.fluid_params());
    for (std::size_t q = 0; q < U.size(); ++q) shell_.D[q] += cfg_.dt * U[q];
    shell_.t += cfg_.dt;
    ++shell_.step;

    const double m = shell_.max_offset();
    if (!std::isfinite(m) || m > 0.5 * cfg_.a)
        throw InstabilityDetected("shell displacement " + std::to_string(m) + " cm exceeds a/2 at step " +
                                  std::to_string(shell_.step));
}

void Simulation::run(long steps, const std::function<void(const Simulation&)>& observer) {
    for (long s = 0; s < steps; ++s) {
        step();
        if (observer) observer(*this);
    }
}

}  // namespace ibshell
