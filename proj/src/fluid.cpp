#include "ibshell/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "ibshell/errors.hpp"

namespace ibshell {

void FluidParams::validate() const {
    if (N < 4 || (N & (N - 1)) != 0) throw InvalidParameter("fluid: N must be a power of two >= 4, got " + std::to_string(N));
    if (!(a > 0.0) || !(rho > 0.0) || !(mu_f > 0.0) || !(dt > 0.0))
        throw InvalidParameter("fluid: a, rho, mu_f and dt must be positive");
    if (!std::isfinite(a) || !std::isfinite(rho) || !std::isfinite(mu_f) || !std::isfinite(dt))
        throw InvalidParameter("fluid: parameters must be finite");
}

VectorField VectorField::zeros(int N) {
    VectorField v;
    v.N = N;
    const std::size_t n = static_cast<std::size_t>(N) * N * N;
    for (auto& c : v.comp) c.assign(n, 0.0);
    return v;
}

bool VectorField::all_finite() const {
    for (const auto& c : comp)
        for (double x : c)
            if (!std::isfinite(x)) return false;
    return true;
}

double VectorField::max_abs() const {
    double m = 0.0;
    for (const auto& c : comp)
        for (double x : c) m = std::max(m, std::abs(x));
    return m;
}

FluidState FluidState::at_rest(int N) {
    FluidState s;
    s.u = VectorField::zeros(N);
    s.p.assign(s.u.size(), 0.0);
    return s;
}

std::vector<double> periodic_diff(std::span<const double> f, int N, double h, DiffKind kind, int axis) {
    if (axis < 0 || axis > 2) throw InvalidParameter("periodic_diff: axis must be 0, 1 or 2");
    const std::size_t n = static_cast<std::size_t>(N) * N * N;
    if (f.size() != n) throw InvalidParameter("periodic_diff: field size does not match N^3");
    std::vector<double> out(n);
    const int e[3] = {axis == 0, axis == 1, axis == 2};
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                const double c = f[lattice_index(N, i, j, k)];
                const double fp = f[lattice_index(N, i + e[0], j + e[1], k + e[2])];
                const double fm = f[lattice_index(N, i - e[0], j - e[1], k - e[2])];
                double v = 0.0;
                switch (kind) {
                    case DiffKind::Forward: v = (fp - c) / h; break;
                    case DiffKind::Backward: v = (c - fm) / h; break;
                    case DiffKind::Centered: v = (fp - fm) / (2.0 * h); break;
                }
                out[lattice_index(N, i, j, k)] = v;
            }
    return out;
}

VectorField upwind_advection(const VectorField& u, double h) {
    const int N = u.N;
    VectorField out = VectorField::zeros(N);
    for (int c = 0; c < 3; ++c) {
        const auto& f = u[c];
        auto& dst = out[c];
        for (int k = 0; k < N; ++k)
            for (int j = 0; j < N; ++j)
                for (int i = 0; i < N; ++i) {
                    const std::size_t q = lattice_index(N, i, j, k);
                    double acc = 0.0;
                    for (int d = 0; d < 3; ++d) {
                        const int e0 = d == 0, e1 = d == 1, e2 = d == 2;
                        const double vel = u[d][q];
                        const double diff = vel >= 0.0
                                                ? f[q] - f[lattice_index(N, i - e0, j - e1, k - e2)]
                                                : f[lattice_index(N, i + e0, j + e1, k + e2)] - f[q];
                        acc += vel * diff / h;
                    }
                    dst[q] = acc;
                }
    }
    return out;
}

std::vector<double> divergence(const VectorField& u, double h) {
    std::vector<double> out(u.size(), 0.0);
    for (int d = 0; d < 3; ++d) {
        const auto dd = periodic_diff(u[d], u.N, h, DiffKind::Centered, d);
        for (std::size_t q = 0; q < out.size(); ++q) out[q] += dd[q];
    }
    return out;
}

struct FluidSolver::Plans {
    int N;
    std::size_t nreal, ncomplex;
    double* real = nullptr;
    fftw_complex* spec[3] = {nullptr, nullptr, nullptr};
    fftw_complex* pspec = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    explicit Plans(int n) : N(n) {
        nreal = static_cast<std::size_t>(N) * N * N;
        ncomplex = static_cast<std::size_t>(N) * N * (N / 2 + 1);
        real = fftw_alloc_real(nreal);
        for (auto& s : spec) s = fftw_alloc_complex(ncomplex);
        pspec = fftw_alloc_complex(ncomplex);
        // FFTW is row-major with the last index fastest, so dims are (k, j, i).
        forward = fftw_plan_dft_r2c_3d(N, N, N, real, spec[0], FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_3d(N, N, N, spec[0], real, FFTW_ESTIMATE);
        if (!forward || !backward) throw Error("fluid: FFTW plan creation failed");
    }
    ~Plans() {
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        fftw_free(real);
        for (auto& s : spec) fftw_free(s);
        fftw_free(pspec);
    }
    void r2c(const std::vector<double>& in, fftw_complex* out) {
        std::copy(in.begin(), in.end(), real);
        fftw_execute_dft_r2c(forward, real, out);
    }
    // c2r destroys its input, so callers pass scratch data.
    void c2r(fftw_complex* in, std::vector<double>& out) {
        fftw_execute_dft_c2r(backward, in, real);
        const double scale = 1.0 / static_cast<double>(nreal);
        out.resize(nreal);
        for (std::size_t q = 0; q < nreal; ++q) out[q] = real[q] * scale;
    }
};

FluidSolver::FluidSolver(const FluidParams& params) : params_(params) {
    params_.validate();
    plans_ = std::make_unique<Plans>(params_.N);
    const int N = params_.N;
    sin_half_sq_.resize(static_cast<std::size_t>(N));
    sin_full_.resize(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        const double s = std::sin(std::numbers::pi * k / N);
        sin_half_sq_[static_cast<std::size_t>(k)] = s * s;
        sin_full_[static_cast<std::size_t>(k)] =
            (k == 0 || 2 * k == N) ? 0.0 : std::sin(2.0 * std::numbers::pi * k / N);
    }
}

FluidSolver::~FluidSolver() = default;

FluidState FluidSolver::solve(const VectorField& r) {
    const int N = params_.N;
    if (r.N != N || r.size() != params_.cells()) throw InvalidParameter("fluid solve: right side has wrong size");
    if (!r.all_finite()) throw NonFiniteInput("fluid solve: non-finite right side");
    const double h = params_.h();
    const double a0 = params_.rho / params_.dt;
    const double visc = 4.0 * params_.mu_f / (h * h);
    Plans& P = *plans_;
    for (int c = 0; c < 3; ++c) P.r2c(r[c], P.spec[c]);

    const int nh = N / 2 + 1;
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < nh; ++i) {
                const std::size_t m = static_cast<std::size_t>(i) + static_cast<std::size_t>(nh) * (j + static_cast<std::size_t>(N) * k);
                const double a = a0 + visc * (sin_half_sq_[i] + sin_half_sq_[j] + sin_half_sq_[k]);
                // g = (i/h) s
                const double s[3] = {sin_full_[i] / h, sin_full_[j] / h, sin_full_[k] / h};
                const double s2 = s[0] * s[0] + s[1] * s[1] + s[2] * s[2];
                std::complex<double> rh[3];
                for (int c = 0; c < 3; ++c) rh[c] = {P.spec[c][m][0], P.spec[c][m][1]};
                std::complex<double> ph = 0.0;
                if (s2 > 0.0) {
                    // p = conj(g) . r / |g|^2 = -i (s . r) / |s|^2
                    const std::complex<double> sr = s[0] * rh[0] + s[1] * rh[1] + s[2] * rh[2];
                    ph = std::complex<double>(0.0, -1.0) * sr / s2;
                }
                for (int c = 0; c < 3; ++c) {
                    const std::complex<double> uh = (rh[c] - std::complex<double>(0.0, s[c]) * ph) / a;
                    P.spec[c][m][0] = uh.real();
                    P.spec[c][m][1] = uh.imag();
                }
                P.pspec[m][0] = ph.real();
                P.pspec[m][1] = ph.imag();
            }

    FluidState out;
    out.u.N = N;
    for (int c = 0; c < 3; ++c) P.c2r(P.spec[c], out.u[c]);
    P.c2r(P.pspec, out.p);
    return out;
}

FluidState FluidSolver::step(const FluidState& state, const VectorField& F, bool advection) {
    const int N = params_.N;
    if (state.u.N != N || F.N != N) throw InvalidParameter("fluid step: field size does not match N");
    if (!state.u.all_finite() || !F.all_finite()) throw NonFiniteInput("fluid step: non-finite velocity or force");
    const double h = params_.h();
    if (!warned_divergence_) {
        const auto div = divergence(state.u, h);
        double m = 0.0;
        for (double v : div) m = std::max(m, std::abs(v));
        if (m * h > 1e-8 * state.u.max_abs()) {
            std::cerr << "warning: fluid step started from a velocity with max |D0.u| = " << m << "\n";
            warned_divergence_ = true;
        }
    }
    const double c = params_.rho / params_.dt;
    VectorField r = VectorField::zeros(N);
    VectorField adv;
    if (advection) adv = upwind_advection(state.u, h);
    for (int d = 0; d < 3; ++d)
        for (std::size_t q = 0; q < r.size(); ++q) {
            double v = c * state.u[d][q] + F[d][q];
            if (advection) v -= params_.rho * adv[d][q];
            r[d][q] = v;
        }
    return solve(r);
}

FluidState fluid_step(const FluidState& state, const VectorField& F, const FluidParams& params) {
    FluidSolver solver(params);
    return solver.step(state, F);
}

}  // namespace ibshell
