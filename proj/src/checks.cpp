#include "ibshell/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "ibshell/coupling.hpp"
#include "ibshell/model.hpp"

namespace ibshell {

void CheckReport::add(std::string name, bool passed, std::string detail) {
    lines.push_back({std::move(name), passed, std::move(detail)});
}

bool CheckReport::passed() const {
    return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
}

std::string CheckReport::format() const {
    std::ostringstream out;
    out << title << "\n";
    for (const auto& l : lines) out << (l.passed ? "  PASS  " : "  FAIL  ") << l.name << "  (" << l.detail << ")\n";
    out << (passed() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

namespace {

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

}  // namespace

CheckReport kernel_check(std::uint64_t seed, int samples, const std::function<double(double)>& kernel) {
    const std::function<double(double)> k = kernel ? kernel : std::function<double(double)>(phi);
    CheckReport rep;
    rep.title = "kernel-check";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    double err_sum = 0.0, err_even = 0.0, err_odd = 0.0, support = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double r = uni(rng);
        double all = 0.0, even = 0.0, odd = 0.0;
        for (int j = -8; j <= 8; ++j) {
            const double v = k(r - j);
            all += v;
            (j % 2 == 0 ? even : odd) += v;
        }
        err_sum = std::max(err_sum, std::abs(all - 1.0));
        err_even = std::max(err_even, std::abs(even - 0.5));
        err_odd = std::max(err_odd, std::abs(odd - 0.5));
        const double far = 2.0 + std::abs(r);
        support = std::max({support, std::abs(k(far)), std::abs(k(-far))});
    }
    const double tol = 1e-12;
    rep.add("partition of unity", err_sum <= tol, "max error " + sci(err_sum));
    rep.add("even-node sum 1/2", err_even <= tol, "max error " + sci(err_even));
    rep.add("odd-node sum 1/2", err_odd <= tol, "max error " + sci(err_odd));
    rep.add("phi(0) = 1/2", std::abs(k(0.0) - 0.5) <= tol, "phi(0) = " + sci(k(0.0)));
    rep.add("phi(1) = 1/4", std::abs(k(1.0) - 0.25) <= tol && std::abs(k(-1.0) - 0.25) <= tol,
            "phi(1) = " + sci(k(1.0)));
    const double at2 = std::max(std::abs(k(2.0)), std::abs(k(-2.0)));
    rep.add("zero for |r| >= 2", at2 <= tol && support == 0.0, "max |phi| = " + sci(std::max(at2, support)));
    const double e = 1e-9;
    const double jump = std::max(std::abs(k(1.0 - e) - k(1.0 + e)), std::abs(k(2.0 - e) - k(2.0 + e)));
    rep.add("continuous at |r| = 1, 2", jump <= 1e-6, "max jump across branch points " + sci(jump));
    return rep;
}

SurfaceGrid flat_sheet(int n1, int n2, double dq) {
    SurfaceGrid g;
    g.lattice.n1 = n1;
    g.lattice.n2 = n2;
    g.lattice.dq1 = dq;
    g.lattice.dq2.assign(static_cast<std::size_t>(n1), dq);
    g.X0.resize(g.lattice.nodes());
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) g.X0[g.lattice.index(i, j)] = Vec3(i * dq, j * dq, 0.0);
    return g;
}

namespace {

double max_diff(const TensorField& a, const TensorField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

double lambda_asymmetry(const TensorField& L) {
    double m = 0.0;
    for (std::size_t q = 0; q < L.nodes(); ++q)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) {
                        const double v = L.at({a, b, c, d}, q);
                        m = std::max({m, std::abs(v - L.at({b, a, c, d}, q)), std::abs(v - L.at({a, b, d, c}, q)),
                                      std::abs(v - L.at({c, d, a, b}, q))});
                    }
    return m;
}

struct InteriorError {
    double err = 0.0;
    double scale = 0.0;
    double rel() const { return scale > 0.0 ? err / scale : err; }
};

InteriorError compare_interior(const SurfaceLattice& lat, std::span<const double> got, std::span<const double> want,
                               int margin) {
    InteriorError r;
    for (int i = margin; i < lat.n1 - margin; ++i)
        for (int j = margin; j < lat.n2 - margin; ++j) {
            const std::size_t q = lat.index(i, j);
            r.err = std::max(r.err, std::abs(got[q] - want[q]));
            r.scale = std::max(r.scale, std::abs(want[q]));
        }
    return r;
}

}  // namespace

CheckReport plate_check(const PlateCheckOptions& opt) {
    CheckReport rep;
    rep.title = "plate-check";
    const int n = opt.n;
    const SurfaceGrid grid = flat_sheet(n, n, 1.0 / (n - 1));
    const SurfaceLattice& lat = grid.lattice;
    const SurfaceGeometry geom = build_geometry(grid);
    MaterialParams mat{opt.lambda, opt.mu, std::vector<double>(lat.nodes(), opt.h0)};
    ShellCoefficients c = compute_coefficients(geom, mat);
    if (opt.lambda_fault != 0.0)
        for (std::size_t q = 0; q < lat.nodes(); ++q) c.Lambda0.at({0, 1, 0, 0}, q) += opt.lambda_fault;

    const double h = opt.h0;
    const double D = mat.plate_modulus();
    const double asym = lambda_asymmetry(c.Lambda0);
    rep.add("elasticity tensor pair and index symmetries", asym == 0.0, "max asymmetry " + sci(asym));

    const double lam_scale = c.Lambda0.max_abs();
    const double eAbar = max_diff(c.Abar, (2.0 / 3.0 * h * h * h) * c.Lambda0) / (2.0 / 3.0 * h * h * h * lam_scale);
    const double eObbar = max_diff(c.Obbar, (2.0 * h) * c.Lambda0) / (2.0 * h * lam_scale);
    rep.add("Abar = 2/3 h0^3 Lambda0", eAbar <= 1e-12, "relative error " + sci(eAbar));
    rep.add("Obbar = 2 h0 Lambda0", eObbar <= 1e-12, "relative error " + sci(eObbar));
    double others = 0.0;
    for (const TensorField* f : {&c.A, &c.Abbar, &c.Phi, &c.Phibar, &c.Psi, &c.Psibar, &c.Omega, &c.Omegabar})
        others = std::max(others, f->max_abs());
    rep.add("remaining coefficients vanish", others <= 1e-12 * 2.0 * h * lam_scale, "max |coefficient| " + sci(others));

    // normal: f3 = -(2/3) h0^3 D (D1D1 + D2D2)^2 omega
    std::vector<double> omega(lat.nodes());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = i * lat.dq1, y = j * lat.dq1;
            omega[lat.index(i, j)] = std::sin(2.0 * std::numbers::pi * x) * std::sin(4.0 * std::numbers::pi * y) +
                                     0.3 * std::cos(2.0 * std::numbers::pi * x * y);
        }
    auto lap = [&](const std::vector<double>& f) {
        auto a = surface_diff(lat, surface_diff(lat, f, 0), 0);
        auto b = surface_diff(lat, surface_diff(lat, f, 1), 1);
        for (std::size_t q = 0; q < a.size(); ++q) a[q] += b[q];
        return a;
    };
    const auto bih = lap(lap(omega));
    Displacement d{TensorField::scalar(omega), TensorField(lat.nodes(), {Slot::Lower}),
                   TensorField(lat.nodes(), {Slot::Upper})};
    const ShellForceDensity fn = compute_force(d, c, geom);
    std::vector<double> want(lat.nodes());
    for (std::size_t q = 0; q < want.size(); ++q) want[q] = -(2.0 / 3.0) * h * h * h * D * bih[q];
    const InteriorError en = compare_interior(lat, fn.f3, want, opt.margin);
    rep.add("normal force = -(2/3) h0^3 D biharmonic", en.rel() <= 1e-10, "relative error " + sci(en.rel()));

    // tangential: W = grad phi, f^mu = 2 h0 D grad div W
    std::vector<double> pot(lat.nodes());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = i * lat.dq1, y = j * lat.dq1;
            pot[lat.index(i, j)] = std::cos(2.0 * std::numbers::pi * x) * std::sin(2.0 * std::numbers::pi * y) + x * x * y;
        }
    const auto W1 = surface_diff(lat, pot, 0);
    const auto W2 = surface_diff(lat, pot, 1);
    Displacement dt{TensorField::scalar(lat.nodes()), TensorField(lat.nodes(), {Slot::Lower}),
                    TensorField(lat.nodes(), {Slot::Upper})};
    for (std::size_t q = 0; q < lat.nodes(); ++q) {
        dt.W_lower.at({0}, q) = dt.W_upper.at({0}, q) = W1[q];
        dt.W_lower.at({1}, q) = dt.W_upper.at({1}, q) = W2[q];
    }
    const ShellForceDensity ft = compute_force(dt, c, geom);
    auto divW = surface_diff(lat, W1, 0);
    const auto d2 = surface_diff(lat, W2, 1);
    for (std::size_t q = 0; q < divW.size(); ++q) divW[q] += d2[q];
    double et = 0.0;
    for (int mu = 0; mu < 2; ++mu) {
        auto g = surface_diff(lat, divW, mu);
        for (double& v : g) v *= 2.0 * h * D;
        et = std::max(et, compare_interior(lat, ft.fmu.component(static_cast<std::size_t>(mu)), g, opt.margin).rel());
    }
    rep.add("tangential force = 2 h0 D grad div W", et <= 1e-10, "relative error " + sci(et));

    // h0 -> 2 h0 multiplies the normal operator by 8
    MaterialParams mat2 = mat;
    for (double& v : mat2.h0) v *= 2.0;
    const ShellForceDensity f2 = compute_force(d, compute_coefficients(geom, mat2), geom);
    std::vector<double> eight(fn.f3.size());
    for (std::size_t q = 0; q < eight.size(); ++q) eight[q] = 8.0 * fn.f3[q];
    const InteriorError e8 = compare_interior(lat, f2.f3, eight, 0);
    rep.add("doubling h0 scales the normal force by 8", e8.rel() <= 1e-10, "relative error " + sci(e8.rel()));
    return rep;
}

namespace {

// Analytic frame data at one node: tangents and their derivatives along the
// lattice directions, dT[s][m] = d_s T_m.
struct FrameData {
    Vec3 T[2];
    Vec3 dT[2][2];
};

struct Exact {
    double g[2][2], b[2][2], G[2][2][2];
};

Exact exact_from_frame(const FrameData& f) {
    Exact e{};
    const Vec3 n = f.T[0].cross(f.T[1]).normalized();
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) {
            e.g[a][c] = f.T[a].dot(f.T[c]);
            e.b[a][c] = -0.5 * (n.dot(f.dT[a][c]) + n.dot(f.dT[c][a]));
        }
    double dg[2][2][2];
    for (int s = 0; s < 2; ++s)
        for (int a = 0; a < 2; ++a)
            for (int c = 0; c < 2; ++c) dg[s][a][c] = f.dT[s][a].dot(f.T[c]) + f.T[a].dot(f.dT[s][c]);
    const double det = e.g[0][0] * e.g[1][1] - e.g[0][1] * e.g[1][0];
    const double gi[2][2] = {{e.g[1][1] / det, -e.g[0][1] / det}, {-e.g[1][0] / det, e.g[0][0] / det}};
    for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m)
            for (int v = 0; v < 2; ++v) {
                double s = 0.0;
                for (int k = 0; k < 2; ++k) s += 0.5 * gi[k][l] * (dg[v][m][k] + dg[m][k][v] - dg[k][m][v]);
                e.G[l][m][v] = s;
            }
    return e;
}

struct TestSurface {
    std::string name;
    std::function<SurfaceGrid(int level)> build;
    std::function<FrameData(const SurfaceGrid&, int i, int j)> frame;
};

SurfaceGrid param_grid(int n1, int n2, double u0, double u1, double v0, double v1,
                       const std::function<Vec3(double, double)>& X) {
    SurfaceGrid g;
    g.lattice.n1 = n1;
    g.lattice.n2 = n2;
    g.lattice.dq1 = (u1 - u0) / (n1 - 1);
    g.lattice.dq2.assign(static_cast<std::size_t>(n1), (v1 - v0) / (n2 - 1));
    g.X0.resize(g.lattice.nodes());
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) g.X0[g.lattice.index(i, j)] = X(u0 + i * g.lattice.dq1, v0 + j * g.lattice.dq2[0]);
    return g;
}

std::vector<TestSurface> test_surfaces() {
    std::vector<TestSurface> s;
    const double R = 1.0;
    s.push_back({"cylinder",
                 [R](int level) {
                     const int n = 16 * (1 << level) + 1;
                     return param_grid(n, n, 0.0, 1.0, 0.0, 1.0, [R](double u, double v) {
                         return Vec3(R * std::cos(u / R), R * std::sin(u / R), v);
                     });
                 },
                 [R](const SurfaceGrid& g, int i, int) {
                     const double u = i * g.lattice.dq1;
                     FrameData f{};
                     f.T[0] = Vec3(-std::sin(u / R), std::cos(u / R), 0.0);
                     f.T[1] = Vec3(0.0, 0.0, 1.0);
                     f.dT[0][0] = Vec3(-std::cos(u / R), -std::sin(u / R), 0.0) / R;
                     f.dT[0][1] = f.dT[1][0] = f.dT[1][1] = Vec3::Zero();
                     return f;
                 }});
    const double Rs = 1.0, u0 = 0.6, v0 = 0.0, span = 0.6;
    s.push_back({"sphere patch",
                 [=](int level) {
                     const int n = 16 * (1 << level) + 1;
                     return param_grid(n, n, u0, u0 + span, v0, v0 + span, [Rs](double u, double v) {
                         return Vec3(Rs * std::sin(u) * std::cos(v), Rs * std::sin(u) * std::sin(v), Rs * std::cos(u));
                     });
                 },
                 [=](const SurfaceGrid& g, int i, int j) {
                     const double u = u0 + i * g.lattice.dq1, v = v0 + j * g.lattice.dq2[0];
                     const double su = std::sin(u), cu = std::cos(u), sv = std::sin(v), cv = std::cos(v);
                     FrameData f{};
                     f.T[0] = Rs * Vec3(cu * cv, cu * sv, -su);
                     f.T[1] = Rs * Vec3(-su * sv, su * cv, 0.0);
                     f.dT[0][0] = Rs * Vec3(-su * cv, -su * sv, -cu);
                     f.dT[0][1] = f.dT[1][0] = Rs * Vec3(-cu * sv, cu * cv, 0.0);
                     f.dT[1][1] = Rs * Vec3(-su * cv, -su * sv, 0.0);
                     return f;
                 }});
    // Model strip: rows at fixed q1, columns at fixed fraction xi of the
    // width, so the first lattice direction moves along constant xi.
    ModelConfig cfg;
    cfg.center_shell = false;
    s.push_back({"helicoid strip",
                 [cfg](int level) mutable {
                     cfg.n1 = 80 * (1 << level) + 1;
                     cfg.n2 = 8 * (1 << level) + 1;
                     return build_model_shell(cfg);
                 },
                 [cfg](const SurfaceGrid& g, int i, int j) {
                     const double q1 = i * g.lattice.dq1;
                     const double xi = static_cast<double>(j) / (g.lattice.n2 - 1);
                     const double t = cfg.alpha * q1, a = cfg.alpha;
                     const double w = strip_width(cfg, q1), wp = (cfg.w1 - cfg.w0) / cfg.L_BM;
                     const double s = xi - 0.5;
                     const Vec3 gp = a * Vec3(-cfg.R * std::sin(t), cfg.R * std::cos(t), cfg.H);
                     const Vec3 gpp = a * a * Vec3(-cfg.R * std::cos(t), -cfg.R * std::sin(t), 0.0);
                     const Vec3 N(-std::cos(t), -std::sin(t), 0.0);
                     const Vec3 Np = a * Vec3(std::sin(t), -std::cos(t), 0.0);
                     const Vec3 Npp = -a * a * N;
                     FrameData f{};
                     f.T[0] = gp + s * (wp * N + w * Np);
                     f.T[1] = N;
                     f.dT[0][0] = gpp + s * (2.0 * wp * Np + w * Npp);
                     f.dT[1][0] = (wp * N + w * Np) / w;
                     f.dT[0][1] = Np;
                     f.dT[1][1] = Vec3::Zero();
                     return f;
                 }});
    return s;
}

struct LevelErrors {
    double g = 0.0, b = 0.0, G = 0.0;
};

LevelErrors central_errors(const TestSurface& surf, int level) {
    const SurfaceGrid grid = surf.build(level);
    const SurfaceGeometry geo = build_geometry(grid);
    const SurfaceLattice& lat = grid.lattice;
    LevelErrors e;
    auto in_center = [](int k, int n) {
        const double x = static_cast<double>(k) / (n - 1);
        return x >= 0.375 - 1e-12 && x <= 0.625 + 1e-12;
    };
    for (int i = 0; i < lat.n1; ++i)
        for (int j = 0; j < lat.n2; ++j) {
            if (!in_center(i, lat.n1) || !in_center(j, lat.n2)) continue;
            const std::size_t q = lat.index(i, j);
            const Exact x = exact_from_frame(surf.frame(grid, i, j));
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c) {
                    e.g = std::max(e.g, std::abs(geo.g.at({a, c}, q) - x.g[a][c]));
                    e.b = std::max(e.b, std::abs(geo.b.at({a, c}, q) - x.b[a][c]));
                    for (int l = 0; l < 2; ++l)
                        e.G = std::max(e.G, std::abs(geo.christoffel.at({l, a, c}, q) - x.G[l][a][c]));
                }
        }
    return e;
}

}  // namespace

CheckReport geometry_check(double min_order) {
    CheckReport rep;
    rep.title = "geometry-check";
    for (const TestSurface& s : test_surfaces()) {
        LevelErrors e[3];
        for (int level = 0; level < 3; ++level) e[level] = central_errors(s, level);
        auto line = [&](const char* what, double LevelErrors::*m) {
            const double coarse = e[1].*m, fine = e[2].*m;
            // round-off-level errors have no measurable order
            const bool exact = fine <= 1e-12;
            const double order = (coarse > 0.0 && fine > 0.0) ? std::log2(coarse / fine) : 0.0;
            rep.add(s.name + ": " + what, exact || order >= min_order,
                    exact ? "error at round-off level " + sci(fine)
                          : "order " + sci(order) + ", errors " + sci(e[0].*m) + " " + sci(coarse) + " " + sci(fine));
        };
        line("metric", &LevelErrors::g);
        line("second fundamental form", &LevelErrors::b);
        line("Christoffel symbols", &LevelErrors::G);
    }
    return rep;
}

}  // namespace ibshell
