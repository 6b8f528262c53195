#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ibshell/coupling.hpp"
#include "ibshell/fluid.hpp"
#include "ibshell/geometry.hpp"
#include "ibshell/model.hpp"
#include "ibshell/shell.hpp"

namespace ibshell {

// Shell positions are X0 + D. The offsets D are kept separately because
// the motion is many orders of magnitude below the rounding of X0.
struct ShellState {
    std::vector<Vec3> D;
    double t = 0.0;
    long step = 0;

    std::vector<Vec3> positions(std::span<const Vec3> X0) const;
    double max_offset() const;
};

// Fluid-structure time stepper for the model shell.
class Simulation {
public:
    explicit Simulation(const ModelConfig& cfg);

    const ModelConfig& config() const { return cfg_; }
    const SurfaceGrid& grid() const { return grid_; }
    const SurfaceGeometry& geometry() const { return geom_; }
    const ShellCoefficients& coefficients() const { return coeff_; }
    const MaterialParams& material() const { return material_; }
    const FluidState& fluid() const { return fluid_; }
    const ShellState& shell() const { return shell_; }
    FluidState& fluid_mut() { return fluid_; }
    ShellState& shell_mut() { return shell_; }

    // Elastic plus clamping force density at the current configuration.
    std::vector<Vec3> shell_force() const;
    // Current normal displacement omega = D . N.
    std::vector<double> normal_displacement() const;

    // One step: shell force, spreading (+ impulse at step 0), fluid solve,
    // position update with the new velocity.
    void step();
    // Runs `steps` steps, calling `observer` after each one.
    void run(long steps, const std::function<void(const Simulation&)>& observer = {});

private:
    ModelConfig cfg_;
    SurfaceGrid grid_;
    SurfaceGeometry geom_;
    MaterialParams material_;
    ShellCoefficients coeff_;
    std::vector<double> area_;
    FluidSolver solver_;
    FluidState fluid_;
    ShellState shell_;
};

}  // namespace ibshell
