#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "ibshell/checks.hpp"
#include "ibshell/errors.hpp"
#include "ibshell/geometry.hpp"

using namespace ibshell;

namespace {

SurfaceLattice lattice(int n1, int n2, double dq1, double dq2) {
    SurfaceLattice l;
    l.n1 = n1;
    l.n2 = n2;
    l.dq1 = dq1;
    l.dq2.assign(static_cast<std::size_t>(n1), dq2);
    return l;
}

SurfaceGrid chart(int n1, int n2, double u0, double du, double v0, double dv,
                  const std::function<Vec3(double, double)>& X) {
    SurfaceGrid g;
    g.lattice = lattice(n1, n2, du, dv);
    g.X0.resize(g.lattice.nodes());
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) g.X0[g.lattice.index(i, j)] = X(u0 + i * du, v0 + j * dv);
    return g;
}

}  // namespace

TEST(TensorField, PackedComponentsAndContraction) {
    TensorField t(3, {Slot::Upper, Slot::Lower});
    EXPECT_EQ(t.components(), 4u);
    t.at({1, 0}, 2) = 5.0;
    EXPECT_EQ(t.at(2, 2), 5.0);  // slot 0 is the high bit
    EXPECT_EQ(index_of(2, 2, 0), 1);
    EXPECT_EQ(index_of(2, 2, 1), 0);
    EXPECT_EQ(with_index(0, 2, 1, 1), 1u);

    // trace of a mixed tensor
    TensorField m(1, {Slot::Lower, Slot::Upper});
    m.at({0, 0}, 0) = 2.0;
    m.at({1, 1}, 0) = 3.0;
    m.at({0, 1}, 0) = 7.0;
    EXPECT_DOUBLE_EQ(contract(m, 0, 1).at(0, 0), 5.0);
}

TEST(TensorField, ContractProductMatchesNaiveLoops) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TensorField a(2, {Slot::Upper, Slot::Upper, Slot::Upper, Slot::Upper});
    TensorField b(2, {Slot::Lower, Slot::Lower});
    for (double& v : a.data()) v = u(rng);
    for (double& v : b.data()) v = u(rng);
    const TensorField r = contract_product(a, b, {{2, 0}, {3, 1}});
    ASSERT_EQ(r.rank(), 2u);
    for (std::size_t q = 0; q < 2; ++q)
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) {
                double want = 0.0;
                for (int m = 0; m < 2; ++m)
                    for (int n = 0; n < 2; ++n) want += a.at({s, t, m, n}, q) * b.at({m, n}, q);
                EXPECT_NEAR(r.at({s, t}, q), want, 1e-14);
            }
}

TEST(SurfaceDiff, ConstantAndLinearAreExact) {
    const SurfaceLattice l = lattice(6, 5, 0.1, 0.2);
    std::vector<double> c(l.nodes(), 3.0), lin(l.nodes());
    for (int i = 0; i < l.n1; ++i)
        for (int j = 0; j < l.n2; ++j) lin[l.index(i, j)] = 2.5 * i * l.dq1 - 1.5 * j * l.dq2[0];
    for (double v : surface_diff(l, c, 0)) EXPECT_EQ(v, 0.0);
    for (double v : surface_diff(l, lin, 0)) EXPECT_NEAR(v, 2.5, 1e-13);
    for (double v : surface_diff(l, lin, 1)) EXPECT_NEAR(v, -1.5, 1e-13);
}

TEST(SurfaceDiff, QuadraticHasFirstOrderBoundaryBias) {
    const double dq = 0.1;
    const SurfaceLattice l = lattice(7, 5, dq, dq);
    std::vector<double> f(l.nodes());
    for (int i = 0; i < l.n1; ++i)
        for (int j = 0; j < l.n2; ++j) f[l.index(i, j)] = (i * dq) * (i * dq);
    const auto d = surface_diff(l, f, 0);
    for (int i = 1; i < l.n1 - 1; ++i) EXPECT_NEAR(d[l.index(i, 2)], 2.0 * i * dq, 1e-13);
    EXPECT_NEAR(d[l.index(0, 2)], 0.0 + dq, 1e-13);
    EXPECT_NEAR(d[l.index(l.n1 - 1, 2)], 2.0 * (l.n1 - 1) * dq - dq, 1e-13);
}

TEST(SurfaceDiff, RowDependentSpacing) {
    SurfaceLattice l = lattice(5, 5, 1.0, 1.0);
    for (int i = 0; i < 5; ++i) l.dq2[static_cast<std::size_t>(i)] = 0.1 * (i + 1);
    std::vector<double> f(l.nodes());
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) f[l.index(i, j)] = 4.0 * j * l.dq2[static_cast<std::size_t>(i)];
    for (double v : surface_diff(l, f, 1)) EXPECT_NEAR(v, 4.0, 1e-12);
}

TEST(SurfaceDiff, RejectsTooFewNodes) {
    const SurfaceLattice l = lattice(1, 5, 0.1, 0.1);
    std::vector<double> f(l.nodes(), 0.0);
    EXPECT_THROW(surface_diff(l, f, 0), DimensionTooSmall);
}

TEST(Frame, FlatSheet) {
    const SurfaceGrid g = flat_sheet(6, 6, 0.2);
    const SurfaceGeometry geo = build_geometry(g);
    for (std::size_t q = 0; q < g.X0.size(); ++q) {
        EXPECT_NEAR((geo.frame.T1[q] - Vec3(1, 0, 0)).norm(), 0.0, 1e-14);
        EXPECT_NEAR((geo.frame.T2[q] - Vec3(0, 1, 0)).norm(), 0.0, 1e-14);
        EXPECT_NEAR((geo.frame.normal[q] - Vec3(0, 0, 1)).norm(), 0.0, 1e-14);
        EXPECT_NEAR(geo.g.at({0, 0}, q), 1.0, 1e-14);
        EXPECT_NEAR(geo.g.at({0, 1}, q), 0.0, 1e-14);
        EXPECT_EQ(geo.b.max_abs(), 0.0);
        EXPECT_LT(geo.christoffel.max_abs(), 1e-12);
    }
}

TEST(Frame, CylinderNormalIsRadialAndUnit) {
    const double R = 2.0, du = 0.05;
    const SurfaceGrid g = chart(21, 9, 0.0, du, 0.0, 0.1, [R](double u, double v) {
        return Vec3(R * std::cos(u / R), R * std::sin(u / R), v);
    });
    const SurfaceGeometry geo = build_geometry(g);
    for (int i = 1; i < 20; ++i)
        for (int j = 1; j < 8; ++j) {
            const std::size_t q = g.lattice.index(i, j);
            const double u = i * du;
            EXPECT_NEAR(geo.frame.normal[q].norm(), 1.0, 1e-12);
            // chord/arc factor of the centered difference
            const double s = std::sin(du / R) * R / du;
            EXPECT_NEAR(geo.frame.T1[q].norm(), s, 1e-12);
            EXPECT_NEAR((geo.frame.normal[q] - Vec3(std::cos(u / R), std::sin(u / R), 0.0)).norm(), 0.0, 1e-12);
            EXPECT_NEAR(geo.frame.normal[q].dot(geo.frame.T1[q]), 0.0, 1e-12);
        }
}

TEST(Frame, DegenerateParameterizationThrows) {
    SurfaceGrid g = chart(6, 6, 0.0, 0.1, 0.0, 0.1, [](double u, double) { return Vec3(u, 0.0, 0.0); });
    EXPECT_THROW(build_frame(g), DegenerateFrame);
}

TEST(Metric, InverseTimesMetricIsIdentity) {
    const SurfaceGrid g = chart(9, 9, 0.6, 0.05, 0.0, 0.05, [](double u, double v) {
        return Vec3(std::sin(u) * std::cos(v), std::sin(u) * std::sin(v), std::cos(u));
    });
    const SurfaceGeometry geo = build_geometry(g);
    const TensorField prod = contract_product(geo.g, geo.ginv, {{1, 0}});
    for (std::size_t q = 0; q < g.X0.size(); ++q) {
        EXPECT_NEAR(prod.at({0, 0}, q), 1.0, 1e-10);
        EXPECT_NEAR(prod.at({1, 1}, q), 1.0, 1e-10);
        EXPECT_NEAR(prod.at({0, 1}, q), 0.0, 1e-10);
        EXPECT_EQ(geo.b.at({0, 1}, q), geo.b.at({1, 0}, q));
        for (int l = 0; l < 2; ++l) EXPECT_EQ(geo.christoffel.at({l, 0, 1}, q), geo.christoffel.at({l, 1, 0}, q));
    }
}

TEST(Christoffel, PolarChartOfThePlane) {
    // X = (r cos t, r sin t, 0): Gamma^1_22 = -r, Gamma^2_12 = 1/r.
    // The plane is not orientable as a frame here (normal along z), fine.
    auto errors = [](int n) {
        const double dr = 1.0 / (n - 1), dt = 1.0 / (n - 1);
        const SurfaceGrid g = chart(n, n, 1.0, dr, 0.0, dt, [](double r, double t) {
            return Vec3(r * std::cos(t), r * std::sin(t), 0.0);
        });
        const SurfaceGeometry geo = build_geometry(g);
        double e = 0.0;
        for (int i = n / 4; i <= 3 * n / 4; ++i)
            for (int j = n / 4; j <= 3 * n / 4; ++j) {
                const std::size_t q = g.lattice.index(i, j);
                const double r = 1.0 + i * dr;
                e = std::max(e, std::abs(geo.christoffel.at({0, 1, 1}, q) + r));
                e = std::max(e, std::abs(geo.christoffel.at({1, 0, 1}, q) - 1.0 / r));
                e = std::max(e, std::abs(geo.christoffel.at({0, 0, 0}, q)));
            }
        return e;
    };
    const double e1 = errors(33), e2 = errors(65);
    EXPECT_LT(e2, 1e-3);
    EXPECT_GT(std::log2(e1 / e2), 1.9);
}

TEST(CovariantDerivative, ScalarReducesToSurfaceDiff) {
    const SurfaceGrid g = chart(9, 7, 0.6, 0.05, 0.0, 0.05, [](double u, double v) {
        return Vec3(std::sin(u) * std::cos(v), std::sin(u) * std::sin(v), std::cos(u));
    });
    const SurfaceGeometry geo = build_geometry(g);
    std::vector<double> f(g.X0.size());
    for (std::size_t q = 0; q < f.size(); ++q) f[q] = g.X0[q].x() * g.X0[q].z();
    const TensorField d = covariant_derivative(g.lattice, TensorField::scalar(f), geo.christoffel);
    const auto d0 = surface_diff(g.lattice, f, 0);
    const auto d1 = surface_diff(g.lattice, f, 1);
    for (std::size_t q = 0; q < f.size(); ++q) {
        EXPECT_EQ(d.at({0}, q), d0[q]);
        EXPECT_EQ(d.at({1}, q), d1[q]);
    }
}

TEST(CovariantDerivative, MetricCompatibilityConverges) {
    auto err = [](int n) {
        const double h = 0.6 / (n - 1);
        const SurfaceGrid g = chart(n, n, 0.6, h, 0.0, h, [](double u, double v) {
            return Vec3(std::sin(u) * std::cos(v), std::sin(u) * std::sin(v), std::cos(u));
        });
        const SurfaceGeometry geo = build_geometry(g);
        const TensorField dg = covariant_derivative(g.lattice, geo.g, geo.christoffel);
        double e = 0.0;
        for (int i = n / 4; i <= 3 * n / 4; ++i)
            for (int j = n / 4; j <= 3 * n / 4; ++j)
                for (std::size_t c = 0; c < dg.components(); ++c)
                    e = std::max(e, std::abs(dg.at(c, g.lattice.index(i, j))));
        return e;
    };
    const double e1 = err(17), e2 = err(33);
    // the discrete connection is built from the same differences, so this is round-off
    EXPECT_LT(e2, 1e-10);
    EXPECT_LE(e2, e1 + 1e-12);
}

TEST(CovariantDerivative, FlatVectorFieldIsPlainDerivative) {
    const SurfaceGrid g = flat_sheet(7, 7, 0.1);
    const SurfaceGeometry geo = build_geometry(g);
    TensorField W(g.X0.size(), {Slot::Upper});
    for (std::size_t q = 0; q < g.X0.size(); ++q) {
        W.at({0}, q) = std::sin(g.X0[q].x());
        W.at({1}, q) = g.X0[q].x() * g.X0[q].y();
    }
    const TensorField d = covariant_derivative(g.lattice, W, geo.christoffel);
    const TensorField p0 = surface_diff(g.lattice, W, 0);
    for (std::size_t q = 0; q < g.X0.size(); ++q)
        for (int m = 0; m < 2; ++m) EXPECT_NEAR(d.at({0, m}, q), p0.at({m}, q), 1e-12);
}

TEST(CovariantDerivative, RejectsFiveIndices) {
    const SurfaceGrid g = flat_sheet(5, 5, 0.1);
    const SurfaceGeometry geo = build_geometry(g);
    TensorField big(g.X0.size(), std::vector<Slot>(5, Slot::Upper));
    EXPECT_THROW(covariant_derivative(g.lattice, big, geo.christoffel), UnsupportedValence);
}

TEST(Geometry, CheckReportPasses) {
    const CheckReport r = geometry_check();
    EXPECT_TRUE(r.passed()) << r.format();
}
