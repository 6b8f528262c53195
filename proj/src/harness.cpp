#include "ibshell/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "ibshell/errors.hpp"
#include "ibshell/simulation.hpp"

namespace ibshell {

NormKind parse_norm(const std::string& s) {
    if (s == "1" || s == "L1") return NormKind::L1;
    if (s == "2" || s == "L2") return NormKind::L2;
    if (s == "inf" || s == "Linf") return NormKind::Linf;
    throw InvalidParameter("unknown norm '" + s + "' (expected 1, 2 or inf)");
}

std::string to_string(NormKind p) {
    switch (p) {
        case NormKind::L1: return "L1";
        case NormKind::L2: return "L2";
        case NormKind::Linf: return "Linf";
    }
    return "?";
}

double lp_norm(std::span<const Vec3> v, NormKind p) {
    double acc = 0.0;
    for (const Vec3& x : v)
        for (int c = 0; c < 3; ++c) {
            const double a = std::abs(x[c]);
            if (p == NormKind::L1) acc += a;
            else if (p == NormKind::L2) acc += a * a;
            else acc = std::max(acc, a);
        }
    return p == NormKind::L2 ? std::sqrt(acc) : acc;
}

double lp_distance(std::span<const Vec3> a, std::span<const Vec3> b, NormKind p) {
    if (a.size() != b.size()) throw InvalidParameter("lp_distance: fields differ in size");
    std::vector<Vec3> d(a.size());
    for (std::size_t q = 0; q < a.size(); ++q) d[q] = a[q] - b[q];
    return lp_norm(d, p);
}

std::vector<Vec3> restrict_to_common_grid(std::span<const Vec3> X, int n1, int n2, int t1, int t2) {
    if (X.size() != static_cast<std::size_t>(n1) * n2) throw InvalidParameter("restrict: field size does not match dims");
    if (t1 < 2 || t2 < 2 || t1 > n1 || t2 > n2 || (n1 - 1) % (t1 - 1) != 0 || (n2 - 1) % (t2 - 1) != 0)
        throw NonNestedDims("cannot subsample " + std::to_string(n1) + "x" + std::to_string(n2) + " onto " +
                            std::to_string(t1) + "x" + std::to_string(t2));
    const int s1 = (n1 - 1) / (t1 - 1);
    const int s2 = (n2 - 1) / (t2 - 1);
    std::vector<Vec3> out(static_cast<std::size_t>(t1) * t2);
    for (int i = 0; i < t1; ++i)
        for (int j = 0; j < t2; ++j)
            out[static_cast<std::size_t>(i) * t2 + j] = X[static_cast<std::size_t>(i * s1) * n2 + j * s2];
    return out;
}

double relative_difference(std::span<const Vec3> X1, std::span<const Vec3> X2, std::span<const Vec3> X1_initial,
                           NormKind p) {
    const double den = lp_distance(X1, X1_initial, p);
    if (!(den > 0.0)) throw ZeroDenominator("relative difference undefined: |X1 - X1(0)| = 0");
    return lp_distance(X1, X2, p) / den;
}

double spacetime_norm(const StudyRecord& a, const StudyRecord& b, NormKind p, double t_lo, double t_hi) {
    if (a.times != b.times) throw TimeSetMismatch("runs " + a.label + " and " + b.label + " have different sample times");
    if (a.n1 != b.n1 || a.n2 != b.n2) throw NonNestedDims("runs " + a.label + " and " + b.label + " use different common grids");
    // a small slack keeps window-edge samples that differ from the bounds by rounding
    const double slack = 1e-9 * std::max(std::abs(t_lo), std::abs(t_hi));
    double s = 0.0;
    for (std::size_t k = 0; k < a.times.size(); ++k)
        if (a.times[k] >= t_lo - slack && a.times[k] <= t_hi + slack) s += lp_distance(a.samples[k], b.samples[k], p);
    return s;
}

double convergence_rate(double coarse_gap, double fine_gap) {
    if (!(coarse_gap > 0.0) || !(fine_gap > 0.0))
        throw ZeroDenominator("convergence rate undefined for a zero norm");
    return std::log2(coarse_gap / fine_gap);
}

std::vector<double> convergence_rates(const std::vector<StudyRecord>& runs, NormKind p, double t_lo, double t_hi) {
    if (runs.size() < 3) throw InsufficientRuns("a convergence rate needs at least three runs");
    std::vector<double> r;
    for (std::size_t k = 0; k + 2 < runs.size(); ++k)
        r.push_back(convergence_rate(spacetime_norm(runs[k + 1], runs[k], p, t_lo, t_hi),
                                     spacetime_norm(runs[k + 2], runs[k + 1], p, t_lo, t_hi)));
    return r;
}

namespace {

std::string run_label(double dt, int N) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g/%d", dt * 1e8, N);
    return buf;
}

}  // namespace

StudyReport run_convergence_study(const ModelConfig& base, const StudyOptions& opt) {
    const std::size_t nruns = opt.Ns.size();
    if (nruns != opt.dts.size()) throw InvalidParameter("study: need one time step per grid size");
    if (nruns < 3) throw InsufficientRuns("study: need at least three runs, got " + std::to_string(nruns));
    const double dt0 = opt.dts[0];
    const long coarse_steps = std::lround(opt.T0 / dt0);

    std::vector<int> ratio(nruns);
    for (std::size_t k = 0; k < nruns; ++k) {
        const double r = dt0 / opt.dts[k];
        ratio[k] = static_cast<int>(std::lround(r));
        if (ratio[k] < 1 || std::abs(r - ratio[k]) > 1e-9 * r)
            throw InvalidParameter("study: every time step must divide the first one");
    }

    ModelConfig coarse_cfg = base;
    coarse_cfg.N = opt.Ns[0];
    coarse_cfg.n1 = coarse_cfg.n2 = 0;
    const int t1 = coarse_cfg.resolved_n1();
    const int t2 = coarse_cfg.resolved_n2();

    StudyReport rep;
    rep.t_lo = 0.5 * opt.T0;
    rep.t_hi = opt.T0;
    for (std::size_t k = 0; k < nruns; ++k) {
        ModelConfig cfg = base;
        cfg.N = opt.Ns[k];
        cfg.dt = opt.dts[k];
        cfg.n1 = cfg.n2 = 0;
        cfg.T0 = opt.T0;
        if (cfg.impulse_duration <= 0.0) cfg.impulse_duration = dt0;

        StudyRecord rec;
        rec.label = run_label(cfg.dt, cfg.N);
        rec.N = cfg.N;
        rec.dt = cfg.dt;
        rec.n1 = t1;
        rec.n2 = t2;
        Simulation sim(cfg);
        const int n1 = cfg.resolved_n1(), n2 = cfg.resolved_n2();
        auto sample = [&](long m) {
            rec.times.push_back(static_cast<double>(m) * dt0);
            rec.samples.push_back(restrict_to_common_grid(sim.shell().D, n1, n2, t1, t2));
        };
        sample(0);
        const long steps = coarse_steps * ratio[k];
        if (opt.verbose)
            std::cerr << "study run " << rec.label << ": " << n1 << "x" << n2 << " shell, " << steps << " steps\n";
        for (long s = 1; s <= steps; ++s) {
            sim.step();
            if (s % ratio[k] == 0) sample(s / ratio[k]);
        }
        rep.runs.push_back(std::move(rec));
    }

    const NormKind kinds[3] = {NormKind::L1, NormKind::L2, NormKind::Linf};
    for (std::size_t k = 0; k + 1 < nruns; ++k) {
        const StudyRecord& c = rep.runs[k];
        const StudyRecord& f = rep.runs[k + 1];
        rep.pair_labels.push_back(f.label + " vs " + c.label);
        PairSeries ps;
        ps.label = rep.pair_labels.back();
        ps.times = f.times;
        for (int p = 0; p < 3; ++p) {
            rep.pair_norms[p].push_back(spacetime_norm(f, c, kinds[p], rep.t_lo, rep.t_hi));
            for (std::size_t m = 0; m < f.times.size(); ++m) {
                double e = std::numeric_limits<double>::quiet_NaN();
                const double den = lp_norm(f.samples[m], kinds[p]);
                if (den > 0.0) e = lp_distance(f.samples[m], c.samples[m], kinds[p]) / den;
                ps.E[p].push_back(e);
            }
        }
        rep.E.push_back(std::move(ps));
    }
    for (int p = 0; p < 3; ++p)
        for (std::size_t k = 0; k + 2 < nruns; ++k) {
            double r = std::numeric_limits<double>::quiet_NaN();
            if (rep.pair_norms[p][k] > 0.0 && rep.pair_norms[p][k + 1] > 0.0)
                r = convergence_rate(rep.pair_norms[p][k], rep.pair_norms[p][k + 1]);
            rep.rates[p].push_back(r);
        }

    if (!opt.out_dir.empty()) write_study_csv(rep, opt.out_dir);
    return rep;
}

void write_study_csv(const StudyReport& r, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto open = [&](const std::string& name) {
        std::ofstream f(out_dir + "/" + name);
        if (!f) throw IoError("cannot write " + out_dir + "/" + name);
        f.precision(10);
        return f;
    };
    const char* names[3] = {"L1", "L2", "Linf"};
    {
        auto f = open("study_runs.csv");
        f << "label,N,dt,samples,n1_common,n2_common\n";
        for (const auto& run : r.runs)
            f << run.label << "," << run.N << "," << run.dt << "," << run.times.size() << "," << run.n1 << "," << run.n2 << "\n";
    }
    {
        auto f = open("study_norms.csv");
        f << "pair,norm,value\n";
        for (std::size_t k = 0; k < r.pair_labels.size(); ++k)
            for (int p = 0; p < 3; ++p) f << r.pair_labels[k] << "," << names[p] << "," << r.pair_norms[p][k] << "\n";
    }
    {
        auto f = open("study_rates.csv");
        f << "triple,norm,rate\n";
        for (std::size_t k = 0; k + 2 < r.runs.size(); ++k)
            for (int p = 0; p < 3; ++p)
                f << r.runs[k].label << " " << r.runs[k + 1].label << " " << r.runs[k + 2].label << "," << names[p]
                  << "," << r.rates[p][k] << "\n";
    }
    {
        auto f = open("study_E.csv");
        f << "pair,t,E_L1,E_L2,E_Linf\n";
        for (const auto& s : r.E)
            for (std::size_t m = 0; m < s.times.size(); ++m)
                f << s.label << "," << s.times[m] << "," << s.E[0][m] << "," << s.E[1][m] << "," << s.E[2][m] << "\n";
    }
}

}  // namespace ibshell
