#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ibshell/fluid.hpp"
#include "ibshell/geometry.hpp"

namespace ibshell {

// Binary snapshot, little-endian:
//   char[8]  "IBSHSNAP"
//   u32      version (1)
//   i32      N, n1, n2
//   f64      t, dt
//   i64      step
//   u32 len + bytes   parameter block (config text)
//   f64[3 n1 n2]      X0   (node-major, xyz per node)
//   f64[3 n1 n2]      D    (offsets X - X0)
//   f64[3 N^3]        u    (component-major, x fastest)
//   f64[N^3]          p
struct Snapshot {
    int N = 0, n1 = 0, n2 = 0;
    double t = 0.0, dt = 0.0;
    std::int64_t step = 0;
    std::string params;
    std::vector<Vec3> X0, D;
    VectorField u;
    std::vector<double> p;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const Snapshot& s, const std::string& path);
Snapshot read_snapshot(const std::string& path);

// Grayscale 8-bit binary PGM, width n1 (q1) by height n2 (q2). Black is the
// largest downward (negative) omega, white the largest upward, 128 is zero.
std::vector<std::uint8_t> displacement_gray(std::span<const double> omega);
void write_displacement_map(std::span<const double> omega, int n1, int n2, const std::string& path);

}  // namespace ibshell
