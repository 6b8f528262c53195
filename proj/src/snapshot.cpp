#include "ibshell/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "ibshell/errors.hpp"

namespace ibshell {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'I', 'B', 'S', 'H', 'S', 'N', 'A', 'P'};

class Writer {
public:
    explicit Writer(const std::string& path) : path_(path), f_(path, std::ios::binary) {
        if (!f_) throw IoError("cannot open " + path + " for writing");
    }
    template <typename T>
    void put(const T& v) { raw(&v, sizeof v); }
    void raw(const void* p, std::size_t n) {
        f_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
        if (!f_) throw IoError("write failed: " + path_);
    }
    void vecs(const std::vector<Vec3>& v) {
        for (const Vec3& x : v) raw(x.data(), 3 * sizeof(double));
    }
    void doubles(const std::vector<double>& v) { raw(v.data(), v.size() * sizeof(double)); }
    void close() {
        f_.close();
        if (!f_) throw IoError("write failed: " + path_);
    }

private:
    std::string path_;
    std::ofstream f_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : path_(path), f_(path, std::ios::binary) {
        if (!f_) throw IoError("cannot open " + path + " for reading");
    }
    template <typename T>
    T get() {
        T v{};
        raw(&v, sizeof v);
        return v;
    }
    void raw(void* p, std::size_t n) {
        f_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (!f_) throw IoError("truncated snapshot: " + path_);
    }
    std::vector<Vec3> vecs(std::size_t n) {
        std::vector<Vec3> v(n);
        for (Vec3& x : v) raw(x.data(), 3 * sizeof(double));
        return v;
    }
    std::vector<double> doubles(std::size_t n) {
        std::vector<double> v(n);
        raw(v.data(), n * sizeof(double));
        return v;
    }

private:
    std::string path_;
    std::ifstream f_;
};

}  // namespace

void write_snapshot(const Snapshot& s, const std::string& path) {
    const std::size_t nodes = static_cast<std::size_t>(s.n1) * s.n2;
    const std::size_t cells = static_cast<std::size_t>(s.N) * s.N * s.N;
    if (s.X0.size() != nodes || s.D.size() != nodes || s.p.size() != cells || s.u.size() != cells)
        throw InvalidParameter("snapshot: array sizes do not match header dims");
    Writer w(path);
    w.raw(kMagic, sizeof kMagic);
    w.put(kSnapshotVersion);
    w.put(static_cast<std::int32_t>(s.N));
    w.put(static_cast<std::int32_t>(s.n1));
    w.put(static_cast<std::int32_t>(s.n2));
    w.put(s.t);
    w.put(s.dt);
    w.put(s.step);
    w.put(static_cast<std::uint32_t>(s.params.size()));
    w.raw(s.params.data(), s.params.size());
    w.vecs(s.X0);
    w.vecs(s.D);
    for (int c = 0; c < 3; ++c) w.doubles(s.u[c]);
    w.doubles(s.p);
    w.close();
}

Snapshot read_snapshot(const std::string& path) {
    Reader r(path);
    char magic[8];
    r.raw(magic, sizeof magic);
    if (std::memcmp(magic, kMagic, sizeof magic) != 0) throw IoError(path + ": not a snapshot file");
    const auto version = r.get<std::uint32_t>();
    if (version != kSnapshotVersion) throw IoError(path + ": unsupported snapshot version " + std::to_string(version));
    Snapshot s;
    s.N = r.get<std::int32_t>();
    s.n1 = r.get<std::int32_t>();
    s.n2 = r.get<std::int32_t>();
    if (s.N <= 0 || s.n1 <= 0 || s.n2 <= 0 || s.N > 4096) throw IoError(path + ": corrupt header dims");
    s.t = r.get<double>();
    s.dt = r.get<double>();
    s.step = r.get<std::int64_t>();
    const auto len = r.get<std::uint32_t>();
    s.params.resize(len);
    r.raw(s.params.data(), len);
    const std::size_t nodes = static_cast<std::size_t>(s.n1) * s.n2;
    const std::size_t cells = static_cast<std::size_t>(s.N) * s.N * s.N;
    s.X0 = r.vecs(nodes);
    s.D = r.vecs(nodes);
    s.u.N = s.N;
    for (int c = 0; c < 3; ++c) s.u[c] = r.doubles(cells);
    s.p = r.doubles(cells);
    return s;
}

std::vector<std::uint8_t> displacement_gray(std::span<const double> omega) {
    double m = 0.0;
    for (double w : omega) m = std::max(m, std::abs(w));
    std::vector<std::uint8_t> g(omega.size(), 128);
    if (m == 0.0) return g;
    for (std::size_t q = 0; q < omega.size(); ++q) {
        const double v = std::round(128.0 + 128.0 * omega[q] / m);
        g[q] = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
    }
    return g;
}

void write_displacement_map(std::span<const double> omega, int n1, int n2, const std::string& path) {
    if (omega.size() != static_cast<std::size_t>(n1) * n2) throw InvalidParameter("displacement map: size mismatch");
    const auto g = displacement_gray(omega);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    f << "P5\n" << n1 << " " << n2 << "\n255\n";
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) f.put(static_cast<char>(g[static_cast<std::size_t>(i) * n2 + j]));
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace ibshell
