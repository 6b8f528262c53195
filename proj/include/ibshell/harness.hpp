#pragma once

#include <span>
#include <string>
#include <vector>

#include "ibshell/geometry.hpp"
#include "ibshell/model.hpp"

namespace ibshell {

enum class NormKind { L1, L2, Linf };
NormKind parse_norm(const std::string& s);  // "1", "2", "inf"
std::string to_string(NormKind p);

// L^p norm over all nodes and components.
double lp_norm(std::span<const Vec3> v, NormKind p);
double lp_distance(std::span<const Vec3> a, std::span<const Vec3> b, NormKind p);

// Pure subsampling of an n1 x n2 lattice field onto t1 x t2 nodes; requires
// (n - 1) to be a multiple of (t - 1) along both axes.
std::vector<Vec3> restrict_to_common_grid(std::span<const Vec3> X, int n1, int n2, int t1, int t2);

// |X1 - X2|_p / |X1 - X1(0)|_p
double relative_difference(std::span<const Vec3> X1, std::span<const Vec3> X2, std::span<const Vec3> X1_initial,
                           NormKind p);

// Time series of one run, restricted to the common grid. Samples hold the
// offsets X - X0; every run of a study shares X0 on the common grid, so
// differences of offsets are differences of positions.
struct StudyRecord {
    std::string label;  // "dt*1e8/N"
    int N = 0;
    double dt = 0.0;
    int n1 = 0, n2 = 0;                       // common-grid dims
    std::vector<double> times;                // s
    std::vector<std::vector<Vec3>> samples;   // one per time
};

// Sum over the sample times in [t_lo, t_hi] of |X1(t) - X2(t)|_p.
double spacetime_norm(const StudyRecord& a, const StudyRecord& b, NormKind p, double t_lo, double t_hi);

// r = log2(|X_mid - X_coarse| / |X_fine - X_mid|).
double convergence_rate(double coarse_gap, double fine_gap);
// One rate per consecutive triple of runs ordered coarse to fine.
std::vector<double> convergence_rates(const std::vector<StudyRecord>& runs, NormKind p, double t_lo, double t_hi);

struct StudyOptions {
    std::vector<int> Ns = {16, 32, 64};
    std::vector<double> dts = {8e-8, 4e-8, 2e-8};
    double T0 = 8e-6;
    std::string out_dir;  // empty: no CSV output
    bool verbose = false;
};

struct PairSeries {
    std::string label;            // "fine vs coarse" labels
    std::vector<double> times;
    std::vector<double> E[3];     // L1, L2, Linf; NaN where undefined
};

struct StudyReport {
    std::vector<StudyRecord> runs;           // coarse to fine
    std::vector<std::string> pair_labels;    // adjacent pairs
    std::vector<double> pair_norms[3];       // per NormKind, per adjacent pair
    std::vector<double> rates[3];            // per NormKind
    std::vector<PairSeries> E;               // per adjacent pair
    double t_lo = 0.0, t_hi = 0.0;
};

// Runs the model at each (N, dt) pair with everything else taken from base,
// samples the common grid at every coarse time step and evaluates norms,
// rates and relative differences. Writes CSV files when out_dir is set.
StudyReport run_convergence_study(const ModelConfig& base, const StudyOptions& opt);

void write_study_csv(const StudyReport& r, const std::string& out_dir);

}  // namespace ibshell
