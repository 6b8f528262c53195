#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "ibshell/config.hpp"
#include "ibshell/coupling.hpp"
#include "ibshell/errors.hpp"
#include "ibshell/simulation.hpp"
#include "ibshell/snapshot.hpp"

using namespace ibshell;

namespace {

ModelConfig small_config() {
    ModelConfig c;
    c.N = 16;
    c.dt = 8e-8;
    return c;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("ibshell_test_" + name)).string();
}

}  // namespace

TEST(Model, StripWidthAndHelix) {
    const ModelConfig c;
    EXPECT_DOUBLE_EQ(strip_width(c, 0.0), 0.015);
    EXPECT_NEAR(strip_width(c, 3.5), 0.056, 1e-15);
    EXPECT_NEAR(strip_width(c, 0.5), 0.015 + 0.5 / 3.5 * 0.041, 1e-15);
    const Vec3 g = helix_point(c, 0.25);
    const double t = 1.8 * std::numbers::pi / 0.5 * 0.25;
    EXPECT_NEAR(g.x(), std::cos(t) / 30.0, 1e-15);
    EXPECT_NEAR(g.z(), 0.01 * t, 1e-15);
    EXPECT_NEAR(helix_normal(c, 0.25).dot(Vec3(std::cos(t), std::sin(t), 0.0)), -1.0, 1e-15);
}

TEST(Model, DimensionsNestAcrossTheStudy) {
    ModelConfig c;
    c.N = 128;
    EXPECT_EQ(c.resolved_n1(), 1281);
    EXPECT_EQ(c.resolved_n2(), 49);
    c.n1 = 10 * c.N;
    c.n2 = 3 * c.N / 8;
    EXPECT_EQ(c.resolved_n1(), 1280);
    EXPECT_EQ(c.resolved_n2(), 48);
    for (int N : {32, 64}) {
        ModelConfig f;
        f.N = N;
        EXPECT_EQ((f.resolved_n1() - 1) % 160, 0);
        EXPECT_EQ((f.resolved_n2() - 1) % 6, 0);
    }
}

TEST(Model, PrintedOriginFirstNode) {
    ModelConfig c = small_config();
    c.grid_origin = GridOrigin::Printed;
    c.center_shell = false;
    const SurfaceGrid g = build_model_shell(c);
    const int n1 = c.resolved_n1(), n2 = c.resolved_n2();
    const double dq1 = c.L / (n1 - 1);
    const double w = c.w0 + dq1 / c.L_BM * (c.w1 - c.w0);
    const double dq2 = w / (n2 - 1);
    const double t = c.alpha * dq1;
    const Vec3 want = Vec3(c.R * std::cos(t), c.R * std::sin(t), c.H * t) +
                      (dq2 - 0.5 * w) * Vec3(-std::cos(t), -std::sin(t), 0.0);
    EXPECT_NEAR((g.X0[0] - want).norm(), 0.0, 1e-15);
}

TEST(Model, SymmetricOriginSpansTheStripAndIsCentered) {
    const ModelConfig c = small_config();
    const SurfaceGrid g = build_model_shell(c);
    const SurfaceLattice& l = g.lattice;
    const Vec3 off(0.05, 0.05, 0.5 * (0.1 - c.H * c.alpha * c.L));
    const Vec3 mid_first = 0.5 * (g.X0[l.index(0, 0)] + g.X0[l.index(0, l.n2 - 1)]);
    EXPECT_NEAR((mid_first - (helix_point(c, 0.0) + off)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((g.X0[l.index(0, l.n2 - 1)] - g.X0[l.index(0, 0)]).norm(), c.w0, 1e-15);
    for (const Vec3& x : g.X0)
        for (int d = 0; d < 3; ++d) {
            EXPECT_GT(x[d], 0.0);
            EXPECT_LT(x[d], c.a);
        }
}

TEST(Model, ThicknessLaws) {
    EXPECT_NEAR(thickness_law(0.5, ThicknessLaw::Table), 0.0035, 1e-15);
    EXPECT_NEAR(thickness_law(0.0, ThicknessLaw::Table), 0.001, 1e-15);
    EXPECT_NEAR(thickness_law(0.0, ThicknessLaw::Exact), 0.001, 1e-15);
    EXPECT_NEAR(thickness_law(0.5, ThicknessLaw::Exact), 0.00125, 1e-5);
    EXPECT_THROW(thickness_law(0.6, ThicknessLaw::Exact), InvalidParameter);
    ModelConfig c = small_config();
    c.grid_origin = GridOrigin::Printed;
    const auto h = node_thickness(c);
    EXPECT_NEAR(h.back(), thickness_law(0.5, c.thickness_law), 1e-15);
}

TEST(Model, ClampActsOnTwoOuterRows) {
    SurfaceLattice l;
    l.n1 = 7;
    l.n2 = 6;
    l.dq1 = 0.1;
    l.dq2.assign(7, 0.05);
    const auto mask = clamped_nodes(l);
    int count = 0;
    for (bool b : mask) count += b;
    EXPECT_EQ(count, 7 * 6 - 3 * 2);
    EXPECT_FALSE(mask[l.index(3, 2)]);
    EXPECT_TRUE(mask[l.index(1, 3)]);
    std::vector<Vec3> off(l.nodes(), Vec3(0, 0, 2e-3));
    const auto f = clamp_force(off, l, 10.0);
    EXPECT_NEAR(f[l.index(0, 0)].z(), -10.0 * 2e-3 / (0.1 * 0.05), 1e-12);
    EXPECT_EQ(f[l.index(3, 2)].z(), 0.0);
}

TEST(Model, ImpulsePlaneAndValue) {
    ModelConfig c = small_config();
    EXPECT_EQ(impulse_plane(c), 0);  // z = 0.1 is the periodic image of 0
    c.impulse_z = 0.03;
    EXPECT_EQ(impulse_plane(c), 5);
    const VectorField F = impulse_force(0, c);
    const double h = c.a / c.N;
    EXPECT_NEAR(F[2][lattice_index(c.N, 3, 7, 5)], -4e-7 / h, 1e-18);
    EXPECT_EQ(F[2][lattice_index(c.N, 3, 7, 6)], 0.0);
    EXPECT_EQ(impulse_force(1, c).max_abs(), 0.0);
    c.impulse_duration = 2.0 * c.dt;
    EXPECT_NEAR(impulse_force(0, c)[2][lattice_index(c.N, 0, 0, 5)], -8e-7 / h, 1e-18);
}

TEST(Model, ValidationErrors) {
    ModelConfig c = small_config();
    c.n2 = 3;
    EXPECT_THROW(c.validate(), DimensionTooSmall);
    c = small_config();
    c.N = 24;
    EXPECT_THROW(c.validate(), InvalidParameter);
    EXPECT_THROW(parse_thickness_law("linear"), InvalidParameter);
    EXPECT_EQ(parse_grid_origin("printed"), GridOrigin::Printed);
}

TEST(Simulation, EquilibriumIsAFixedPoint) {
    ModelConfig c = small_config();
    c.impulse = false;
    Simulation sim(c);
    sim.run(10);
    EXPECT_EQ(sim.shell().max_offset(), 0.0);
    EXPECT_EQ(sim.fluid().u.max_abs(), 0.0);
    EXPECT_EQ(sim.shell().step, 10);
    EXPECT_NEAR(sim.shell().t, 10 * c.dt, 1e-20);
}

TEST(Simulation, FirstStepIsTheComposedUpdate) {
    const ModelConfig c = small_config();
    Simulation sim(c);
    sim.step();

    const SurfaceGrid g = build_model_shell(c);
    const FluidParams fp = c.fluid_params();
    // zero offsets: no elastic or clamp force, only the impulse
    VectorField F = spread_force(std::vector<Vec3>(g.X0.size(), Vec3::Zero()), g.X0, g.lattice.area_weights(), fp);
    const VectorField imp = impulse_force(0, c);
    for (int d = 0; d < 3; ++d)
        for (std::size_t q = 0; q < F.size(); ++q) F[d][q] += imp[d][q];
    FluidSolver solver(fp);
    const FluidState fl = solver.step(FluidState::at_rest(c.N), F);
    const auto U = interpolate_velocity(fl.u, g.X0, fp);
    for (std::size_t q = 0; q < U.size(); ++q)
        EXPECT_NEAR((sim.shell().D[q] - c.dt * U[q]).norm(), 0.0, 1e-30);
    // a plane impulse only moves the mean flow and the z-Nyquist mode, so
    // every node moves down by about the mean-flow displacement
    const double mean_u = -4e-7 * c.dt / (c.rho * c.a);
    for (const Vec3& d : sim.shell().D) EXPECT_LT(d.z(), 0.0);
    EXPECT_NEAR(sim.shell().D[0].z(), c.dt * mean_u, 0.05 * c.dt * std::abs(mean_u));
}

TEST(Simulation, Deterministic) {
    const ModelConfig c = small_config();
    Simulation a(c), b(c);
    a.run(5);
    b.run(5);
    for (std::size_t q = 0; q < a.shell().D.size(); ++q) EXPECT_EQ(a.shell().D[q], b.shell().D[q]);
}

TEST(Simulation, InstabilityIsReported) {
    ModelConfig c = small_config();
    c.impulse_density = 1e12;
    Simulation sim(c);
    EXPECT_THROW(sim.run(3), InstabilityDetected);
}

TEST(Config, RoundTrip) {
    ModelConfig c;
    c.N = 64;
    c.dt = 1.2345678901234567e-8;
    c.thickness_law = ThicknessLaw::Exact;
    c.grid_origin = GridOrigin::Printed;
    c.coefficient_order = ClosureOrder::Quadratic;
    c.advection = false;
    c.n1 = 17;
    const ModelConfig back = parse_config(format_config(c));
    EXPECT_EQ(format_config(back), format_config(c));
    EXPECT_EQ(back.dt, c.dt);
    EXPECT_EQ(back.alpha, c.alpha);
    EXPECT_EQ(back.thickness_law, ThicknessLaw::Exact);
    EXPECT_FALSE(back.advection);
    EXPECT_EQ(config_keys().size(), 28u);
}

TEST(Config, CommentsAndErrors) {
    const ModelConfig c = parse_config("# comment\n\nN = 8   # trailing\n k_clamp=2e5\n");
    EXPECT_EQ(c.N, 8);
    EXPECT_EQ(c.k_clamp, 2e5);
    EXPECT_THROW(parse_config("nu = 3\n"), ConfigError);
    EXPECT_THROW(parse_config("N = eight\n"), ConfigError);
    EXPECT_THROW(parse_config("N 8\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/ibshell.cfg"), IoError);
}

TEST(Snapshot, RoundTrip) {
    ModelConfig c = small_config();
    Simulation sim(c);
    sim.run(2);
    Snapshot s;
    s.N = c.N;
    s.n1 = sim.grid().lattice.n1;
    s.n2 = sim.grid().lattice.n2;
    s.t = sim.shell().t;
    s.dt = c.dt;
    s.step = sim.shell().step;
    s.params = format_config(c);
    s.X0 = sim.grid().X0;
    s.D = sim.shell().D;
    s.u = sim.fluid().u;
    s.p = sim.fluid().p;
    const std::string path = temp_path("snap.bin");
    write_snapshot(s, path);
    const Snapshot r = read_snapshot(path);
    EXPECT_EQ(r.N, s.N);
    EXPECT_EQ(r.step, 2);
    EXPECT_EQ(r.t, s.t);
    EXPECT_EQ(r.params, s.params);
    for (std::size_t q = 0; q < s.D.size(); ++q) EXPECT_EQ(r.D[q], s.D[q]);
    for (int d = 0; d < 3; ++d) EXPECT_EQ(r.u[d], s.u[d]);
    EXPECT_EQ(r.p, s.p);
    const auto size = std::filesystem::file_size(path);
    const std::size_t nodes = static_cast<std::size_t>(s.n1) * s.n2, cells = 16u * 16u * 16u;
    EXPECT_EQ(size, 8 + 4 + 12 + 16 + 8 + 4 + s.params.size() + 8 * (6 * nodes + 4 * cells));
    std::filesystem::remove(path);
}

TEST(Snapshot, RejectsForeignFiles) {
    const std::string path = temp_path("junk.bin");
    {
        std::ofstream f(path, std::ios::binary);
        f << "NOTASNAPSHOTFILE.............";
    }
    EXPECT_THROW(read_snapshot(path), IoError);
    std::filesystem::remove(path);
}

TEST(DisplacementMap, GrayLevels) {
    const std::vector<double> zero(6, 0.0);
    for (auto v : displacement_gray(zero)) EXPECT_EQ(v, 128);
    const std::vector<double> w = {-2.0, 0.0, 2.0, 1.0};
    const auto g = displacement_gray(w);
    EXPECT_EQ(g[0], 0);
    EXPECT_EQ(g[1], 128);
    EXPECT_EQ(g[2], 255);
    EXPECT_EQ(g[3], 192);

    const std::string path = temp_path("map.pgm");
    write_displacement_map(w, 2, 2, path);
    std::ifstream f(path, std::ios::binary);
    std::string magic;
    int width = 0, height = 0, maxval = 0;
    f >> magic >> width >> height >> maxval;
    EXPECT_EQ(magic, "P5");
    EXPECT_EQ(width, 2);
    EXPECT_EQ(height, 2);
    EXPECT_EQ(maxval, 255);
    std::filesystem::remove(path);
}
