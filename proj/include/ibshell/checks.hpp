#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ibshell/geometry.hpp"
#include "ibshell/shell.hpp"

namespace ibshell {

struct CheckLine {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CheckReport {
    std::string title;
    std::vector<CheckLine> lines;

    void add(std::string name, bool passed, std::string detail);
    bool passed() const;
    std::string format() const;
};

// Delta-kernel invariants over `samples` random offsets.
CheckReport kernel_check(std::uint64_t seed = 1, int samples = 10000,
                         const std::function<double(double)>& kernel = {});

// Flat chart X0 = (q1, q2, 0) with spacing dq.
SurfaceGrid flat_sheet(int n1, int n2, double dq);

struct PlateCheckOptions {
    int n = 65;
    double h0 = 0.001;
    double lambda = 26197503.0;
    double mu = 523950.0;
    // Added to one component of the elasticity tensor (fault injection).
    double lambda_fault = 0.0;
    // Interior margin (in nodes) where the operator is compared with the
    // composed plate stencils; closer to the edge the one-sided differences
    // do not commute.
    int margin = 4;
};

CheckReport plate_check(const PlateCheckOptions& opt = {});

// Observed convergence order of g, b and Gamma against analytic values on a
// cylinder, a sphere patch and the helicoidal model strip.
CheckReport geometry_check(double min_order = 1.9);

}  // namespace ibshell
