#include "ibshell/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ibshell/errors.hpp"

namespace ibshell {

void SurfaceGrid::validate() const {
    lattice.validate();
    if (X0.size() != lattice.nodes()) throw InvalidParameter("surface grid: position count does not match lattice");
    for (const Vec3& x : X0)
        if (!x.allFinite()) throw NonFiniteInput("surface grid: non-finite reference position");
}

namespace {

void require_axis(const SurfaceLattice& lat, int axis) {
    if (axis != 0 && axis != 1) throw InvalidParameter("surface_diff: axis must be 0 or 1");
    const int n = axis == 0 ? lat.n1 : lat.n2;
    if (n < 2)
        throw DimensionTooSmall("surface_diff: need at least 2 nodes along axis " + std::to_string(axis));
}

template <typename T>
std::vector<T> diff_impl(const SurfaceLattice& lat, std::span<const T> f, int axis) {
    require_axis(lat, axis);
    if (f.size() != lat.nodes()) throw InvalidParameter("surface_diff: field size does not match lattice");
    std::vector<T> out(f.size());
    const int n1 = lat.n1;
    const int n2 = lat.n2;
    if (axis == 0) {
        const double inv = 1.0 / lat.dq1;
        const double inv2 = 0.5 / lat.dq1;
        for (int j = 0; j < n2; ++j) {
            out[lat.index(0, j)] = (f[lat.index(1, j)] - f[lat.index(0, j)]) * inv;
            for (int i = 1; i < n1 - 1; ++i)
                out[lat.index(i, j)] = (f[lat.index(i + 1, j)] - f[lat.index(i - 1, j)]) * inv2;
            out[lat.index(n1 - 1, j)] = (f[lat.index(n1 - 1, j)] - f[lat.index(n1 - 2, j)]) * inv;
        }
    } else {
        for (int i = 0; i < n1; ++i) {
            const double inv = 1.0 / lat.dq2[static_cast<std::size_t>(i)];
            const double inv2 = 0.5 * inv;
            const std::size_t r = lat.index(i, 0);
            out[r] = (f[r + 1] - f[r]) * inv;
            for (int j = 1; j < n2 - 1; ++j) out[r + j] = (f[r + j + 1] - f[r + j - 1]) * inv2;
            out[r + n2 - 1] = (f[r + n2 - 1] - f[r + n2 - 2]) * inv;
        }
    }
    return out;
}

}  // namespace

std::vector<double> surface_diff(const SurfaceLattice& lat, std::span<const double> f, int axis) {
    return diff_impl<double>(lat, f, axis);
}

std::vector<Vec3> surface_diff(const SurfaceLattice& lat, std::span<const Vec3> f, int axis) {
    return diff_impl<Vec3>(lat, f, axis);
}

TensorField surface_diff(const SurfaceLattice& lat, const TensorField& f, int axis) {
    TensorField out(f.nodes(), f.slots());
    for (std::size_t c = 0; c < f.components(); ++c) {
        auto d = diff_impl<double>(lat, f.component(c), axis);
        std::copy(d.begin(), d.end(), out.component(c).begin());
    }
    return out;
}

Frame build_frame(const SurfaceGrid& grid) {
    grid.validate();
    Frame fr;
    fr.T1 = surface_diff(grid.lattice, std::span<const Vec3>(grid.X0), 0);
    fr.T2 = surface_diff(grid.lattice, std::span<const Vec3>(grid.X0), 1);
    fr.normal.resize(grid.X0.size());
    for (std::size_t q = 0; q < grid.X0.size(); ++q) {
        const Vec3 c = fr.T1[q].cross(fr.T2[q]);
        const double len = c.norm();
        if (!(len >= 1e-14))
            throw DegenerateFrame("degenerate frame at node " + std::to_string(q) + ": |T1 x T2| = " +
                                  std::to_string(len));
        fr.normal[q] = c / len;
    }
    return fr;
}

Metric build_metric(const Frame& frame) {
    const std::size_t n = frame.T1.size();
    Metric m{TensorField(n, {Slot::Lower, Slot::Lower}), TensorField(n, {Slot::Upper, Slot::Upper})};
    for (std::size_t q = 0; q < n; ++q) {
        const double g11 = frame.T1[q].dot(frame.T1[q]);
        const double g12 = frame.T1[q].dot(frame.T2[q]);
        const double g22 = frame.T2[q].dot(frame.T2[q]);
        const double det = g11 * g22 - g12 * g12;
        if (!(det >= 1e-14))
            throw SingularMetric("singular metric at node " + std::to_string(q) + ": det g = " + std::to_string(det));
        m.g.at({0, 0}, q) = g11;
        m.g.at({0, 1}, q) = g12;
        m.g.at({1, 0}, q) = g12;
        m.g.at({1, 1}, q) = g22;
        m.ginv.at({0, 0}, q) = g22 / det;
        m.ginv.at({0, 1}, q) = -g12 / det;
        m.ginv.at({1, 0}, q) = -g12 / det;
        m.ginv.at({1, 1}, q) = g11 / det;
    }
    return m;
}

TensorField build_second_form(const SurfaceLattice& lat, const Frame& frame) {
    const std::size_t n = frame.normal.size();
    const auto dN1 = surface_diff(lat, std::span<const Vec3>(frame.normal), 0);
    const auto dN2 = surface_diff(lat, std::span<const Vec3>(frame.normal), 1);
    TensorField b(n, {Slot::Lower, Slot::Lower});
    for (std::size_t q = 0; q < n; ++q) {
        const double b11 = dN1[q].dot(frame.T1[q]);
        const double b22 = dN2[q].dot(frame.T2[q]);
        const double b12 = 0.5 * (dN1[q].dot(frame.T2[q]) + dN2[q].dot(frame.T1[q]));
        b.at({0, 0}, q) = b11;
        b.at({0, 1}, q) = b12;
        b.at({1, 0}, q) = b12;
        b.at({1, 1}, q) = b22;
    }
    return b;
}

TensorField build_christoffel(const SurfaceLattice& lat, const Metric& metric) {
    const std::size_t n = metric.g.nodes();
    // dg[a] = D_a g_{mu nu}
    const TensorField dg[2] = {surface_diff(lat, metric.g, 0), surface_diff(lat, metric.g, 1)};
    TensorField gamma(n, {Slot::Upper, Slot::Lower, Slot::Lower});
    for (std::size_t q = 0; q < n; ++q) {
        for (int mu = 0; mu < 2; ++mu) {
            for (int nu = mu; nu < 2; ++nu) {
                // Gamma_{s mu nu} = 1/2 (D_nu g_{mu s} + D_mu g_{s nu} - D_s g_{mu nu})
                double low[2];
                for (int s = 0; s < 2; ++s)
                    low[s] = 0.5 * (dg[nu].at({mu, s}, q) + dg[mu].at({s, nu}, q) - dg[s].at({mu, nu}, q));
                for (int l = 0; l < 2; ++l) {
                    const double v = metric.ginv.at({0, l}, q) * low[0] + metric.ginv.at({1, l}, q) * low[1];
                    gamma.at({l, mu, nu}, q) = v;
                    gamma.at({l, nu, mu}, q) = v;
                }
            }
        }
    }
    return gamma;
}

TensorField covariant_derivative(const SurfaceLattice& lat, const TensorField& field,
                                 const TensorField& christoffel) {
    const std::size_t rank = field.rank();
    if (rank > 4) throw UnsupportedValence("covariant_derivative: at most four indices are supported");
    if (christoffel.rank() != 3 || christoffel.nodes() != field.nodes())
        throw InvalidParameter("covariant_derivative: Christoffel field does not match");
    std::vector<Slot> slots{Slot::Lower};
    slots.insert(slots.end(), field.slots().begin(), field.slots().end());
    TensorField out(field.nodes(), slots);
    const std::size_t n = field.nodes();
    const std::size_t ncomp = field.components();

    for (int alpha = 0; alpha < 2; ++alpha) {
        const TensorField d = surface_diff(lat, field, alpha);
        for (std::size_t c = 0; c < ncomp; ++c) {
            const std::size_t rc = (static_cast<std::size_t>(alpha) << rank) | c;
            auto dst = out.component(rc);
            auto src = d.component(c);
            std::copy(src.begin(), src.end(), dst.begin());
            for (std::size_t k = 0; k < rank; ++k) {
                const int ik = index_of(c, rank, k);
                for (int s = 0; s < 2; ++s) {
                    auto other = field.component(with_index(c, rank, k, s));
                    if (field.slots()[k] == Slot::Upper) {
                        // + Gamma^{ik}_{alpha s} A^{..s..}
                        auto gam = christoffel.component(TensorField::pack({ik, alpha, s}));
                        for (std::size_t q = 0; q < n; ++q) dst[q] += gam[q] * other[q];
                    } else {
                        // - Gamma^s_{alpha ik} A_{..s..}
                        auto gam = christoffel.component(TensorField::pack({s, alpha, ik}));
                        for (std::size_t q = 0; q < n; ++q) dst[q] -= gam[q] * other[q];
                    }
                }
            }
        }
    }
    return out;
}

TensorField covariant_divergence(const SurfaceLattice& lat, const TensorField& field, std::size_t slot,
                                 const TensorField& christoffel) {
    if (slot >= field.rank() || field.slots()[slot] != Slot::Upper)
        throw InvalidParameter("covariant_divergence: slot must be an upper index");
    return contract(covariant_derivative(lat, field, christoffel), 0, slot + 1);
}

SurfaceGeometry build_geometry(const SurfaceGrid& grid) {
    SurfaceGeometry geo;
    geo.lattice = grid.lattice;
    geo.frame = build_frame(grid);
    Metric m = build_metric(geo.frame);
    geo.g = std::move(m.g);
    geo.ginv = std::move(m.ginv);
    geo.b = build_second_form(grid.lattice, geo.frame);
    geo.christoffel = build_christoffel(grid.lattice, Metric{geo.g, geo.ginv});
    geo.b_mixed = contract_product(geo.b, geo.ginv, {{1, 0}});
    geo.grad_b = covariant_derivative(grid.lattice, geo.b_mixed, geo.christoffel);
    return geo;
}

std::vector<double> principal_curvature_bound(const SurfaceGeometry& geom) {
    std::vector<double> k(geom.nodes());
    for (std::size_t q = 0; q < geom.nodes(); ++q) {
        // eigenvalues of the (generally non-symmetric) 2x2 matrix b_mu^nu
        const double a = geom.b_mixed.at({0, 0}, q), bb = geom.b_mixed.at({0, 1}, q);
        const double c = geom.b_mixed.at({1, 0}, q), d = geom.b_mixed.at({1, 1}, q);
        const double tr = a + d, det = a * d - bb * c;
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        k[q] = std::max(std::abs(0.5 * tr + disc), std::abs(0.5 * tr - disc));
    }
    return k;
}

}  // namespace ibshell
