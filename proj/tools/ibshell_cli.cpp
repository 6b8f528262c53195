// Command-line driver: model runs, the refinement study, self-checks and
// rendering of displacement maps.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ibshell/checks.hpp"
#include "ibshell/config.hpp"
#include "ibshell/errors.hpp"
#include "ibshell/harness.hpp"
#include "ibshell/simulation.hpp"
#include "ibshell/snapshot.hpp"

using namespace ibshell;

namespace {

struct Common {
    std::string config;
    std::string out = "out";
    int n = 0;
    double dt = 0.0;
};

ModelConfig load(const Common& c) {
    ModelConfig cfg;
    if (!c.config.empty()) cfg = load_config(c.config);
    if (c.n > 0) cfg.N = c.n;
    if (c.dt > 0.0) cfg.dt = c.dt;
    return cfg;
}

std::string numbered(const std::string& dir, const char* stem, long step, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%07ld.%s", stem, step, ext);
    return dir + "/" + buf;
}

Snapshot make_snapshot(const Simulation& sim) {
    Snapshot s;
    s.N = sim.config().N;
    s.n1 = sim.grid().lattice.n1;
    s.n2 = sim.grid().lattice.n2;
    s.t = sim.shell().t;
    s.dt = sim.config().dt;
    s.step = sim.shell().step;
    s.params = format_config(sim.config());
    s.X0 = sim.grid().X0;
    s.D = sim.shell().D;
    s.u = sim.fluid().u;
    s.p = sim.fluid().p;
    return s;
}

// Centerline summary of the normal displacement: mean and the q1 of the
// largest |omega|.
struct Centerline {
    double mean = 0.0;
    double argmax_q1 = 0.0;
    double max_abs = 0.0;
};

Centerline centerline(const Simulation& sim) {
    const auto w = sim.normal_displacement();
    const SurfaceLattice& lat = sim.grid().lattice;
    const int j = lat.n2 / 2;
    Centerline c;
    for (int i = 0; i < lat.n1; ++i) {
        const double v = w[lat.index(i, j)];
        c.mean += v / lat.n1;
        if (std::abs(v) > c.max_abs) {
            c.max_abs = std::abs(v);
            c.argmax_q1 = row_q1(sim.config(), i);
        }
    }
    return c;
}

int cmd_run(const Common& c, long steps_override) {
    const ModelConfig cfg = load(c);
    std::filesystem::create_directories(c.out);
    {
        std::ofstream f(c.out + "/config.txt");
        f << format_config(cfg);
    }
    Simulation sim(cfg);
    const long steps = steps_override > 0 ? steps_override : cfg.steps();
    std::ofstream log(c.out + "/run.csv");
    if (!log) throw IoError("cannot write " + c.out + "/run.csv");
    log.precision(10);
    log << "step,t,max_offset,centerline_mean_omega,centerline_argmax_q1,centerline_max_abs_omega\n";
    auto record = [&](const Simulation& s) {
        const Centerline cl = centerline(s);
        log << s.shell().step << "," << s.shell().t << "," << s.shell().max_offset() << "," << cl.mean << ","
            << cl.argmax_q1 << "," << cl.max_abs << "\n";
        if (cfg.snapshot_every > 0 && s.shell().step % cfg.snapshot_every == 0) {
            write_snapshot(make_snapshot(s), numbered(c.out, "snap", s.shell().step, "bin"));
            write_displacement_map(s.normal_displacement(), s.grid().lattice.n1, s.grid().lattice.n2,
                                   numbered(c.out, "omega", s.shell().step, "pgm"));
        }
    };
    std::cout << "run: N=" << cfg.N << " shell " << sim.grid().lattice.n1 << "x" << sim.grid().lattice.n2
              << " dt=" << cfg.dt << " steps=" << steps << "\n";
    sim.run(steps, record);
    write_snapshot(make_snapshot(sim), c.out + "/final.bin");
    std::cout << "done: t=" << sim.shell().t << " max offset " << sim.shell().max_offset() << " cm\n";
    return 0;
}

int cmd_study(const Common& c, const std::string& norm, double T0) {
    ModelConfig cfg = load(c);
    StudyOptions opt;
    if (T0 > 0.0) opt.T0 = T0;
    opt.out_dir = c.out;
    opt.verbose = true;
    const StudyReport rep = run_convergence_study(cfg, opt);
    const NormKind p = parse_norm(norm);
    const int k = static_cast<int>(p);
    std::cout << "space-time norms (" << to_string(p) << ", t in [" << rep.t_lo << ", " << rep.t_hi << "])\n";
    for (std::size_t i = 0; i < rep.pair_labels.size(); ++i)
        std::cout << "  " << rep.pair_labels[i] << ": " << rep.pair_norms[k][i] << "\n";
    for (double r : rep.rates[k]) std::cout << "  rate r = " << r << "\n";
    std::cout << "CSV written to " << c.out << "\n";
    return 0;
}

int report(const CheckReport& r) {
    std::cout << r.format();
    return r.passed() ? 0 : 1;
}

int cmd_render(const std::string& snapshot, const std::string& out) {
    const Snapshot s = read_snapshot(snapshot);
    const ModelConfig cfg = parse_config(s.params);
    const SurfaceGrid grid = build_model_shell(cfg);
    if (grid.X0.size() != s.D.size()) throw IoError(snapshot + ": lattice in the parameter block does not match arrays");
    const Frame fr = build_frame(grid);
    std::vector<double> w(s.D.size());
    for (std::size_t q = 0; q < w.size(); ++q) w[q] = s.D[q].dot(fr.normal[q]);
    write_displacement_map(w, s.n1, s.n2, out);
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elastic shell immersed in a periodic viscous fluid"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "key = value configuration file");
        sub->add_option("--out", common.out, "output directory");
        sub->add_option("--n", common.n, "fluid grid points per side");
        sub->add_option("--dt", common.dt, "time step (s)");
    };

    long steps = 0;
    auto* run = app.add_subcommand("run", "run the model shell");
    add_common(run);
    run->add_option("--steps", steps, "number of steps (default T0/dt)");

    std::string norm = "1";
    double T0 = 0.0;
    auto* study = app.add_subcommand("study", "three-run refinement study");
    add_common(study);
    study->add_option("--norm", norm, "norm for the printed summary: 1, 2 or inf")->check(CLI::IsMember({"1", "2", "inf"}));
    study->add_option("--T0", T0, "simulated time per run (s)");

    auto* plate = app.add_subcommand("plate-check", "flat-plate limit of the shell operator");
    auto* kernel = app.add_subcommand("kernel-check", "delta kernel identities");
    auto* geometry = app.add_subcommand("geometry-check", "convergence of discrete surface geometry");

    std::string snapshot, image = "omega.pgm";
    auto* render = app.add_subcommand("render", "normal displacement of a snapshot as a PGM image");
    render->add_option("snapshot", snapshot, "snapshot file")->required();
    render->add_option("--out", image, "output image");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(common, steps);
        if (*study) return cmd_study(common, norm, T0);
        if (*plate) return report(plate_check());
        if (*kernel) return report(kernel_check());
        if (*geometry) return report(geometry_check());
        if (*render) return cmd_render(snapshot, image);
    } catch (const ibshell::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
