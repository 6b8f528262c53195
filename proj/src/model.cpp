#include "ibshell/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ibshell/errors.hpp"

namespace ibshell {

ThicknessLaw parse_thickness_law(const std::string& s) {
    if (s == "exact") return ThicknessLaw::Exact;
    if (s == "table") return ThicknessLaw::Table;
    throw InvalidParameter("unknown thickness law '" + s + "' (expected exact or table)");
}

GridOrigin parse_grid_origin(const std::string& s) {
    if (s == "symmetric") return GridOrigin::Symmetric;
    if (s == "printed") return GridOrigin::Printed;
    throw InvalidParameter("unknown grid origin '" + s + "' (expected symmetric or printed)");
}

std::string to_string(ThicknessLaw v) { return v == ThicknessLaw::Exact ? "exact" : "table"; }
std::string to_string(GridOrigin v) { return v == GridOrigin::Symmetric ? "symmetric" : "printed"; }

long ModelConfig::steps() const { return std::lround(T0 / dt); }

void ModelConfig::validate() const {
    fluid_params().validate();
    if (resolved_n1() < 5 || resolved_n2() < 5)
        throw DimensionTooSmall("shell lattice " + std::to_string(resolved_n1()) + "x" + std::to_string(resolved_n2()) +
                                " is below 5x5");
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidParameter(std::string(name) + " must be positive");
    };
    positive(L, "L");
    positive(L_BM, "L_BM");
    positive(w0, "w0");
    positive(w1, "w1");
    positive(alpha, "alpha");
    positive(R, "R");
    positive(mu, "mu");
    positive(T0, "T0");
    if (!(H >= 0.0)) throw InvalidParameter("H must be non-negative");
    if (!(lambda + 2.0 * mu > 0.0)) throw InvalidParameter("lambda + 2 mu must be positive");
    if (!(k_clamp >= 0.0)) throw InvalidParameter("k_clamp must be non-negative");
    if (!(impulse_duration >= 0.0)) throw InvalidParameter("impulse_duration must be non-negative");
    if (snapshot_every < 0) throw InvalidParameter("snapshot_every must be non-negative");
}

double strip_width(const ModelConfig& cfg, double q1) { return cfg.w0 + (q1 / cfg.L_BM) * (cfg.w1 - cfg.w0); }

Vec3 helix_point(const ModelConfig& cfg, double q1) {
    const double t = cfg.alpha * q1;
    return {cfg.R * std::cos(t), cfg.R * std::sin(t), cfg.H * t};
}

Vec3 helix_normal(const ModelConfig& cfg, double q1) {
    const double t = cfg.alpha * q1;
    return {-std::cos(t), -std::sin(t), 0.0};
}

Vec3 shell_offset(const ModelConfig& cfg) {
    if (!cfg.center_shell) return Vec3::Zero();
    return {0.5 * cfg.a, 0.5 * cfg.a, 0.5 * (cfg.a - cfg.H * cfg.alpha * cfg.L)};
}

double row_q1(const ModelConfig& cfg, int i) {
    const double dq1 = cfg.L / (cfg.resolved_n1() - 1);
    return cfg.grid_origin == GridOrigin::Symmetric ? i * dq1 : (i + 1) * dq1;
}

SurfaceGrid build_model_shell(const ModelConfig& cfg) {
    cfg.validate();
    SurfaceGrid grid;
    SurfaceLattice& lat = grid.lattice;
    lat.n1 = cfg.resolved_n1();
    lat.n2 = cfg.resolved_n2();
    lat.dq1 = cfg.L / (lat.n1 - 1);
    lat.dq2.resize(static_cast<std::size_t>(lat.n1));
    grid.X0.resize(lat.nodes());
    const Vec3 off = shell_offset(cfg);
    const int shift = cfg.grid_origin == GridOrigin::Symmetric ? 0 : 1;
    for (int i = 0; i < lat.n1; ++i) {
        const double q1 = row_q1(cfg, i);
        const double w = strip_width(cfg, q1);
        const double dq2 = w / (lat.n2 - 1);
        lat.dq2[static_cast<std::size_t>(i)] = dq2;
        const Vec3 g = helix_point(cfg, q1);
        const Vec3 n = helix_normal(cfg, q1);
        for (int j = 0; j < lat.n2; ++j) {
            const double q2 = (j + shift) * dq2;
            grid.X0[lat.index(i, j)] = g + (q2 - 0.5 * w) * n + off;
        }
    }
    grid.validate();
    return grid;
}

double thickness_law(double q1, ThicknessLaw law, double L) {
    if (!(q1 >= 0.0) || !(q1 <= L)) throw InvalidParameter("thickness law: q1 = " + std::to_string(q1) + " outside [0, L]");
    if (law == ThicknessLaw::Table) return 0.001 * (1.0 + 5.0 * q1);
    return 0.001 * std::pow(1.0 + 2.0 * q1 / 3.0, 5.0 / 3.0) * std::pow(10.0, -2.0 * q1 / 9.0);
}

std::vector<double> node_thickness(const ModelConfig& cfg) {
    const int n1 = cfg.resolved_n1();
    const int n2 = cfg.resolved_n2();
    std::vector<double> h(static_cast<std::size_t>(n1) * n2);
    for (int i = 0; i < n1; ++i) {
        const double q1 = std::min(row_q1(cfg, i), cfg.L);
        const double v = thickness_law(q1, cfg.thickness_law, cfg.L);
        for (int j = 0; j < n2; ++j) h[static_cast<std::size_t>(i) * n2 + j] = v;
    }
    return h;
}

std::vector<bool> clamped_nodes(const SurfaceLattice& lat) {
    std::vector<bool> c(lat.nodes(), false);
    for (int i = 0; i < lat.n1; ++i)
        for (int j = 0; j < lat.n2; ++j)
            c[lat.index(i, j)] = i < 2 || i >= lat.n1 - 2 || j < 2 || j >= lat.n2 - 2;
    return c;
}

void add_clamp_force(std::span<Vec3> force, std::span<const Vec3> offsets, const SurfaceLattice& lat, double k_clamp) {
    if (force.size() != lat.nodes() || offsets.size() != lat.nodes())
        throw InvalidParameter("clamp_force: field size does not match lattice");
    for (int i = 0; i < lat.n1; ++i) {
        const double s = -k_clamp / lat.area_weight(i);
        for (int j = 0; j < lat.n2; ++j) {
            if (i >= 2 && i < lat.n1 - 2 && j >= 2 && j < lat.n2 - 2) continue;
            const std::size_t q = lat.index(i, j);
            force[q] += s * offsets[q];
        }
    }
}

std::vector<Vec3> clamp_force(std::span<const Vec3> offsets, const SurfaceLattice& lat, double k_clamp) {
    std::vector<Vec3> f(lat.nodes(), Vec3::Zero());
    add_clamp_force(f, offsets, lat, k_clamp);
    return f;
}

int impulse_plane(const ModelConfig& cfg) {
    const double h = cfg.a / cfg.N;
    const long k = std::lround(cfg.impulse_z / h);
    return static_cast<int>(((k % cfg.N) + cfg.N) % cfg.N);
}

VectorField impulse_force(long step, const ModelConfig& cfg) {
    VectorField F = VectorField::zeros(cfg.N);
    if (step != 0 || !cfg.impulse) return F;
    const double h = cfg.a / cfg.N;
    const double duration = cfg.impulse_duration > 0.0 ? cfg.impulse_duration : cfg.dt;
    // surface density -> volume density on one plane; the duration factor
    // keeps the delivered impulse independent of dt
    const double value = -cfg.impulse_density / h * (duration / cfg.dt);
    const int k = impulse_plane(cfg);
    for (int j = 0; j < cfg.N; ++j)
        for (int i = 0; i < cfg.N; ++i) F[2][lattice_index(cfg.N, i, j, k)] = value;
    return F;
}

}  // namespace ibshell
