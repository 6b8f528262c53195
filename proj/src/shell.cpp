#include "ibshell/shell.hpp"

#include <array>
#include <cmath>
#include <iostream>
#include <string>

#include "ibshell/errors.hpp"

namespace ibshell {

void MaterialParams::validate(std::size_t nodes) const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidParameter("material: mu must be positive");
    if (!(lambda + 2.0 * mu > 0.0) || !std::isfinite(lambda))
        throw InvalidParameter("material: lambda + 2 mu must be positive");
    if (h0.size() != nodes) throw InvalidParameter("material: need one thickness value per node");
    for (double h : h0)
        if (!(h > 0.0) || !std::isfinite(h)) throw InvalidParameter("material: thickness must be positive");
}

ClosureOrder parse_closure_order(const std::string& s) {
    if (s == "leading") return ClosureOrder::Leading;
    if (s == "quadratic") return ClosureOrder::Quadratic;
    throw InvalidParameter("unknown coefficient order '" + s + "' (expected leading or quadratic)");
}

std::string to_string(ClosureOrder o) { return o == ClosureOrder::Leading ? "leading" : "quadratic"; }

namespace {

using M2 = std::array<std::array<double, 2>, 2>;
using T3 = std::array<M2, 2>;
using T4 = std::array<T3, 2>;

M2 inverse(const M2& m) {
    const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    return {{{m[1][1] / det, -m[0][1] / det}, {-m[1][0] / det, m[0][0] / det}}};
}

T4 lame(const M2& gi, double c1, double mu, double scale) {
    T4 L{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d)
                    L[a][b][c][d] = scale * (c1 * gi[a][b] * gi[c][d] +
                                             0.5 * mu * (gi[a][c] * gi[b][d] + gi[a][d] * gi[b][c]));
    return L;
}

// out^{s t m n} = L^{a b c d} P[a][s] Q[b][t] R[c][m] S[d][n], one slot at a time.
T4 transform(const T4& L, const M2& P, const M2& Q, const M2& R, const M2& S) {
    T4 x{}, y{};
    for (int s = 0; s < 2; ++s)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) x[s][b][c][d] = L[0][b][c][d] * P[0][s] + L[1][b][c][d] * P[1][s];
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) y[s][t][c][d] = x[s][0][c][d] * Q[0][t] + x[s][1][c][d] * Q[1][t];
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            for (int m = 0; m < 2; ++m)
                for (int d = 0; d < 2; ++d) x[s][t][m][d] = y[s][t][0][d] * R[0][m] + y[s][t][1][d] * R[1][m];
    for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t)
            for (int m = 0; m < 2; ++m)
                for (int n = 0; n < 2; ++n) y[s][t][m][n] = x[s][t][m][0] * S[0][n] + x[s][t][m][1] * S[1][n];
    return y;
}

M2 matmul(const M2& a, const M2& b) {
    M2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

// Integrands of the eleven coefficients at one node and one value of t.
// The explicit powers of t are applied by the caller.
struct Integrands {
    double A = 0.0;
    T4 Abar{};
    M2 Abbar{};
    std::array<double, 2> Phi{};
    M2 Phibar{};
    T3 Psi{};
    T4 Psibar{};
    M2 Omega{};
    T3 Omegabar{};
    T4 Obbar{};
};

struct NodeGeometry {
    M2 g, ginv, b, bm;  // bm[a][c] = b_a^c
    T3 gradb;           // gradb[a][b][c] = nabla_a b_b^c
};

Integrands integrands(const NodeGeometry& ng, double t, double c1, double mu) {
    M2 theta{};
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c) theta[a][c] = (a == c ? 1.0 : 0.0) + t * ng.bm[a][c];
    // bundle metric g(t) = theta . (g + t b), and mixed G_a^c = g(t)_{as} g^{sc}
    M2 gt{};
    for (int a = 0; a < 2; ++a)
        for (int c = 0; c < 2; ++c)
            gt[a][c] = theta[a][0] * (ng.g[0][c] + t * ng.b[0][c]) + theta[a][1] * (ng.g[1][c] + t * ng.b[1][c]);
    const M2 G = matmul(gt, ng.ginv);
    const M2 B = matmul(theta, ng.b);
    const double det_theta = theta[0][0] * theta[1][1] - theta[0][1] * theta[1][0];
    const T4 L = lame(inverse(gt), c1, mu, det_theta);
    const M2 theta2 = matmul(theta, theta);

    Integrands r;
    r.Abar = transform(L, theta, theta, theta, theta);
    r.Psibar = transform(L, theta, G, theta, theta);
    r.Obbar = transform(L, theta, G, theta, G);

    // LB^{cd} = L^{abcd} B_ab
    M2 LB{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) LB[c][d] += L[a][b][c][d] * B[a][b];
    for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) r.A += LB[c][d] * B[c][d];
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    r.Abbar[m][n] += LB[c][d] * theta[c][m] * theta[d][n];
                    r.Phibar[m][n] += LB[c][d] * theta[c][m] * theta2[d][n];
                }
    for (int m = 0; m < 2; ++m)
        for (int t2 = 0; t2 < 2; ++t2)
            for (int r2 = 0; r2 < 2; ++r2) r.Phi[m] += r.Abbar[t2][r2] * ng.gradb[t2][r2][m];

    // Psi^{r m n} = Abar^{s t m n} gradb_{s t}^r
    for (int rr = 0; rr < 2; ++rr)
        for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n)
                for (int s = 0; s < 2; ++s)
                    for (int tt = 0; tt < 2; ++tt) r.Psi[rr][m][n] += r.Abar[s][tt][m][n] * ng.gradb[s][tt][rr];
    // Omega^{m n} = Abar^{s t l r} gradb_{s t}^m gradb_{l r}^n
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            for (int s = 0; s < 2; ++s)
                for (int tt = 0; tt < 2; ++tt)
                    for (int l = 0; l < 2; ++l)
                        for (int rr = 0; rr < 2; ++rr)
                            r.Omega[m][n] += r.Abar[s][tt][l][rr] * ng.gradb[s][tt][m] * ng.gradb[l][rr][n];
    // Omegabar^{m n r} = Psibar^{m n t l} gradb_{t l}^r
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n)
            for (int rr = 0; rr < 2; ++rr)
                for (int tt = 0; tt < 2; ++tt)
                    for (int l = 0; l < 2; ++l) r.Omegabar[m][n][rr] += r.Psibar[m][n][tt][l] * ng.gradb[tt][l][rr];
    return r;
}

// Accumulates w * t^p * integrand into the coefficient fields.
struct Accumulator {
    ShellCoefficients& c;
    std::size_t q;

    void add(const Integrands& in, const std::array<double, 3>& wp) {
        c.A.at(0, q) += wp[0] * in.A;
        for (int i = 0; i < 2; ++i) {
            c.Phi.at({i}, q) += wp[1] * in.Phi[i];
            for (int j = 0; j < 2; ++j) {
                c.Abbar.at({i, j}, q) += wp[1] * in.Abbar[i][j];
                c.Phibar.at({i, j}, q) += wp[0] * in.Phibar[i][j];
                c.Omega.at({i, j}, q) += wp[2] * in.Omega[i][j];
                for (int k = 0; k < 2; ++k) {
                    c.Psi.at({i, j, k}, q) += wp[2] * in.Psi[i][j][k];
                    c.Omegabar.at({i, j, k}, q) += wp[1] * in.Omegabar[i][j][k];
                    for (int l = 0; l < 2; ++l) {
                        c.Abar.at({i, j, k, l}, q) += wp[2] * in.Abar[i][j][k][l];
                        c.Psibar.at({i, j, k, l}, q) += wp[1] * in.Psibar[i][j][k][l];
                        c.Obbar.at({i, j, k, l}, q) += wp[0] * in.Obbar[i][j][k][l];
                    }
                }
            }
        }
    }
};

TensorField upper(std::size_t n, std::size_t rank) { return TensorField(n, std::vector<Slot>(rank, Slot::Upper)); }

// Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 6> kGaussX = {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969,
                                           0.2386191860831969,  0.6612093864662645,  0.9324695142031521};
constexpr std::array<double, 6> kGaussW = {0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
                                           0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

}  // namespace

TensorField elasticity_tensor(const TensorField& ginv, double lambda, double mu) {
    const double c1 = lambda * mu / (lambda + 2.0 * mu);
    TensorField L = upper(ginv.nodes(), 4);
    for (std::size_t q = 0; q < ginv.nodes(); ++q) {
        const M2 gi{{{ginv.at({0, 0}, q), ginv.at({0, 1}, q)}, {ginv.at({1, 0}, q), ginv.at({1, 1}, q)}}};
        const T4 l = lame(gi, c1, mu, 1.0);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d) L.at({a, b, c, d}, q) = l[a][b][c][d];
    }
    return L;
}

ShellCoefficients compute_coefficients(const SurfaceGeometry& geom, const MaterialParams& mat, ClosureOrder order) {
    const std::size_t n = geom.nodes();
    mat.validate(n);

    const auto kappa = principal_curvature_bound(geom);
    double worst = 0.0;
    std::size_t worst_node = 0;
    for (std::size_t q = 0; q < n; ++q)
        if (mat.h0[q] * kappa[q] > worst) {
            worst = mat.h0[q] * kappa[q];
            worst_node = q;
        }
    if (worst >= 1.0)
        throw ThinShellViolation("thickness times curvature reaches " + std::to_string(worst) + " at node " +
                                 std::to_string(worst_node));
    if (worst >= 0.5)
        std::cerr << "warning: thickness times curvature reaches " << worst << " at node " << worst_node
                  << "; thin-shell closure is inaccurate\n";

    ShellCoefficients c;
    c.order = order;
    c.A = TensorField::scalar(n);
    c.Abar = upper(n, 4);
    c.Abbar = upper(n, 2);
    c.Phi = upper(n, 1);
    c.Phibar = upper(n, 2);
    c.Psi = upper(n, 3);
    c.Psibar = upper(n, 4);
    c.Omega = upper(n, 2);
    c.Omegabar = upper(n, 3);
    c.Obbar = upper(n, 4);
    c.Lambda0 = elasticity_tensor(geom.ginv, mat.lambda, mat.mu);

    const double c1 = mat.lambda * mat.mu / (mat.lambda + 2.0 * mat.mu);
    for (std::size_t q = 0; q < n; ++q) {
        NodeGeometry ng;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                ng.g[a][b] = geom.g.at({a, b}, q);
                ng.ginv[a][b] = geom.ginv.at({a, b}, q);
                ng.b[a][b] = geom.b.at({a, b}, q);
                ng.bm[a][b] = geom.b_mixed.at({a, b}, q);
                for (int k = 0; k < 2; ++k) ng.gradb[a][b][k] = geom.grad_b.at({a, b, k}, q);
            }
        const double h = mat.h0[q];
        Accumulator acc{c, q};
        if (order == ClosureOrder::Leading) {
            // int dt = 2h, int t dt = 0, int t^2 dt = 2/3 h^3
            acc.add(integrands(ng, 0.0, c1, mat.mu), {2.0 * h, 0.0, 2.0 / 3.0 * h * h * h});
        } else {
            for (std::size_t k = 0; k < kGaussX.size(); ++k) {
                const double t = h * kGaussX[k];
                const double w = h * kGaussW[k];
                acc.add(integrands(ng, t, c1, mat.mu), {w, w * t, w * t * t});
            }
        }
    }
    return c;
}

Displacement decompose_offsets(std::span<const Vec3> offsets, const SurfaceGeometry& geom) {
    const std::size_t n = geom.nodes();
    if (offsets.size() != n) throw InvalidParameter("decompose: displacement count does not match lattice");
    Displacement d{TensorField::scalar(n), TensorField(n, {Slot::Lower}), TensorField(n, {Slot::Upper})};
    for (std::size_t q = 0; q < n; ++q) {
        const Vec3& v = offsets[q];
        d.omega.at(0, q) = v.dot(geom.frame.normal[q]);
        const double w1 = v.dot(geom.frame.T1[q]);
        const double w2 = v.dot(geom.frame.T2[q]);
        d.W_lower.at({0}, q) = w1;
        d.W_lower.at({1}, q) = w2;
        d.W_upper.at({0}, q) = geom.ginv.at({0, 0}, q) * w1 + geom.ginv.at({0, 1}, q) * w2;
        d.W_upper.at({1}, q) = geom.ginv.at({1, 0}, q) * w1 + geom.ginv.at({1, 1}, q) * w2;
    }
    return d;
}

Displacement decompose_displacement(std::span<const Vec3> X, const SurfaceGrid& grid, const SurfaceGeometry& geom) {
    if (X.size() != grid.X0.size()) throw InvalidParameter("decompose: position count does not match lattice");
    std::vector<Vec3> off(X.size());
    for (std::size_t q = 0; q < X.size(); ++q) off[q] = X[q] - grid.X0[q];
    return decompose_offsets(off, geom);
}

namespace {

bool is_zero(const TensorField& f) { return f.max_abs() == 0.0; }

// Multiplies every component of f by the scalar field s.
TensorField times(const TensorField& f, const TensorField& s) {
    TensorField out = f;
    for (std::size_t c = 0; c < out.components(); ++c) {
        auto dst = out.component(c);
        auto w = s.component(0);
        for (std::size_t q = 0; q < dst.size(); ++q) dst[q] *= w[q];
    }
    return out;
}

struct Ops {
    const SurfaceGeometry& geom;
    TensorField div(const TensorField& f, std::size_t slot) const {
        return covariant_divergence(geom.lattice, f, slot, geom.christoffel);
    }
    // nabla_s nabla_t T^{s t}
    TensorField div2(const TensorField& f) const { return div(div(f, 1), 0); }
};

}  // namespace

ShellOperatorValue apply_shell_operator(const Displacement& disp, const ShellCoefficients& coeff,
                                        const SurfaceGeometry& geom) {
    const std::size_t n = geom.nodes();
    if (coeff.A.empty() || coeff.Abar.empty() || coeff.Obbar.empty() || coeff.nodes() != n)
        throw MissingCoefficients("shell force requested before coefficients were computed for this lattice");
    if (disp.omega.nodes() != n || disp.W_lower.nodes() != n)
        throw InvalidParameter("shell force: displacement does not match lattice");

    const Ops op{geom};
    const TensorField& omega = disp.omega;
    const TensorField& W = disp.W_lower;
    const TensorField Domega = covariant_derivative(geom.lattice, omega, geom.christoffel);
    const TensorField hess = covariant_derivative(geom.lattice, Domega, geom.christoffel);  // nabla_m D_n omega
    const TensorField DW = covariant_derivative(geom.lattice, W, geom.christoffel);         // nabla_s W_t

    ShellOperatorValue r{times(coeff.A, omega), TensorField(n, {Slot::Upper})};
    TensorField& e3 = r.normal;
    TensorField& emu = r.tangential;

    e3 += op.div2(contract_product(coeff.Abar, hess, {{2, 0}, {3, 1}}));
    if (!is_zero(coeff.Abbar)) {
        e3 -= op.div2(times(coeff.Abbar, omega));
        e3 -= contract_product(coeff.Abbar, hess, {{0, 0}, {1, 1}});
    }
    if (!is_zero(coeff.Phi)) {
        e3 += contract_product(coeff.Phi, W, {{0, 0}});
        emu += times(coeff.Phi, omega);
    }
    if (!is_zero(coeff.Phibar)) {
        e3 += contract_product(coeff.Phibar, DW, {{0, 0}, {1, 1}});
        emu -= op.div(times(coeff.Phibar, omega), 0);
    }
    if (!is_zero(coeff.Psi)) {
        e3 -= op.div2(contract_product(coeff.Psi, W, {{0, 0}}));
        emu -= contract_product(coeff.Psi, hess, {{1, 0}, {2, 1}});
    }
    if (!is_zero(coeff.Psibar)) {
        e3 -= op.div2(contract_product(coeff.Psibar, DW, {{0, 0}, {1, 1}}));
        emu += op.div(contract_product(coeff.Psibar, hess, {{2, 0}, {3, 1}}), 0);
    }
    if (!is_zero(coeff.Omega)) emu += contract_product(coeff.Omega, W, {{1, 0}});
    if (!is_zero(coeff.Omegabar)) {
        emu += contract_product(coeff.Omegabar, DW, {{0, 0}, {1, 1}});
        emu -= op.div(contract_product(coeff.Omegabar, W, {{2, 0}}), 0);
    }
    emu -= op.div(contract_product(coeff.Obbar, DW, {{0, 0}, {1, 1}}), 0);
    return r;
}

std::vector<Vec3> force_to_cartesian(std::span<const double> f3, const TensorField& fmu, const SurfaceGeometry& geom) {
    const std::size_t n = geom.nodes();
    if (f3.size() != n || fmu.nodes() != n) throw InvalidParameter("force_to_cartesian: size mismatch");
    std::vector<Vec3> out(n);
    for (std::size_t q = 0; q < n; ++q)
        out[q] = f3[q] * geom.frame.normal[q] + fmu.at({0}, q) * geom.frame.T1[q] + fmu.at({1}, q) * geom.frame.T2[q];
    return out;
}

ShellForceDensity compute_force(const Displacement& disp, const ShellCoefficients& coeff, const SurfaceGeometry& geom) {
    ShellOperatorValue e = apply_shell_operator(disp, coeff, geom);
    ShellForceDensity f;
    f.f3.assign(e.normal.data().begin(), e.normal.data().end());
    for (double& v : f.f3) v = -v;
    f.fmu = -1.0 * std::move(e.tangential);
    f.cartesian = force_to_cartesian(f.f3, f.fmu, geom);
    return f;
}

}  // namespace ibshell
