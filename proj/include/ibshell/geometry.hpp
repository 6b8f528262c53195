#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ibshell/tensor_field.hpp"

namespace ibshell {

using Vec3 = Eigen::Vector3d;

// Reference middle surface sampled on the parameter lattice.
struct SurfaceGrid {
    SurfaceLattice lattice;
    std::vector<Vec3> X0;  // lattice.index(i, j) order

    void validate() const;
};

// Lattice difference operator D_alpha (axis 0 = q1, axis 1 = q2): centered
// in the interior, forward at the first node and backward at the last node
// of the axis. Axis 1 uses the spacing of the node's own q1-row.
std::vector<double> surface_diff(const SurfaceLattice& lat, std::span<const double> f, int axis);
std::vector<Vec3> surface_diff(const SurfaceLattice& lat, std::span<const Vec3> f, int axis);
TensorField surface_diff(const SurfaceLattice& lat, const TensorField& f, int axis);

struct Frame {
    std::vector<Vec3> T1;
    std::vector<Vec3> T2;
    std::vector<Vec3> normal;
};

struct Metric {
    TensorField g;     // g_{mu nu}
    TensorField ginv;  // g^{mu nu}
};

Frame build_frame(const SurfaceGrid& grid);
Metric build_metric(const Frame& frame);
// b_{mu nu} = D_mu N . T_nu, symmetrized.
TensorField build_second_form(const SurfaceLattice& lat, const Frame& frame);
// Gamma^lambda_{mu nu}; slots (Upper, Lower, Lower).
TensorField build_christoffel(const SurfaceLattice& lat, const Metric& metric);

// Discrete covariant derivative. The derivative index is prepended as a new
// Lower slot 0. Fields with more than four indices are rejected.
TensorField covariant_derivative(const SurfaceLattice& lat, const TensorField& field,
                                 const TensorField& christoffel);

// Covariant divergence on an Upper slot: nabla_a T^{..a..}.
TensorField covariant_divergence(const SurfaceLattice& lat, const TensorField& field, std::size_t slot,
                                 const TensorField& christoffel);

// Every intrinsic quantity of the reference surface, built once and then
// treated as read-only.
struct SurfaceGeometry {
    SurfaceLattice lattice;
    Frame frame;
    TensorField g;            // g_{mu nu}
    TensorField ginv;         // g^{mu nu}
    TensorField b;            // b_{mu nu}
    TensorField b_mixed;      // b_mu^nu = b_{mu s} g^{s nu}; slots (Lower, Upper)
    TensorField christoffel;  // Gamma^l_{mu nu}
    TensorField grad_b;       // nabla_a b_b^c; slots (Lower, Lower, Upper)

    std::size_t nodes() const { return lattice.nodes(); }
};

SurfaceGeometry build_geometry(const SurfaceGrid& grid);

// Largest absolute principal curvature at each node (eigenvalues of b_mu^nu).
std::vector<double> principal_curvature_bound(const SurfaceGeometry& geom);

}  // namespace ibshell
