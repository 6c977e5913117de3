#include "hallmhd/snapshot.hpp"

#include <cstring>
#include <fstream>
#include <vector>

#include <json.hpp>

namespace hallmhd {

namespace {

constexpr char kMagic[8] = {'H', 'M', 'H', 'D', 'S', 'N', 'P', '1'};

struct Header {
    std::uint32_t n = 0;
    std::uint32_t components = 0;
    std::uint32_t kind = 0;
    double box_length = 0.0;
    double dealias_fraction = 0.0;
    double time = 0.0;
};

void write_header(std::ostream& os, const Header& h) {
    os.write(kMagic, sizeof(kMagic));
    os.write(reinterpret_cast<const char*>(&h.n), 4);
    os.write(reinterpret_cast<const char*>(&h.components), 4);
    os.write(reinterpret_cast<const char*>(&h.kind), 4);
    os.write(reinterpret_cast<const char*>(&h.box_length), 8);
    os.write(reinterpret_cast<const char*>(&h.dealias_fraction), 8);
    os.write(reinterpret_cast<const char*>(&h.time), 8);
}

Header read_header(std::istream& is, const std::filesystem::path& path) {
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a hallmhd snapshot: " + path.string());
    Header h;
    is.read(reinterpret_cast<char*>(&h.n), 4);
    is.read(reinterpret_cast<char*>(&h.components), 4);
    is.read(reinterpret_cast<char*>(&h.kind), 4);
    is.read(reinterpret_cast<char*>(&h.box_length), 8);
    is.read(reinterpret_cast<char*>(&h.dealias_fraction), 8);
    is.read(reinterpret_cast<char*>(&h.time), 8);
    if (!is) throw std::runtime_error("truncated snapshot header: " + path.string());
    return h;
}

// Storage (FFT) axis index of ascending-m position a.
inline int fft_index(int a, int n) { return (a + n / 2) % n; }

template <class Writer>
void for_each_ascending(const GridSpec& g, Writer&& w) {
    const int n = g.n_per_axis;
    for (int a1 = 0; a1 < n; ++a1) {
        const int i = fft_index(a1, n);
        for (int a2 = 0; a2 < n; ++a2) {
            const int j = fft_index(a2, n);
            for (int a3 = 0; a3 < n; ++a3) {
                w((static_cast<std::size_t>(i) * n + j) * n + fft_index(a3, n));
            }
        }
    }
}

void write_component(std::ostream& os, const GridSpec& g, std::span<const Complex> data,
                     ScalarKind kind) {
    if (kind == ScalarKind::Complex128) {
        std::vector<double> buf;
        buf.reserve(2 * g.point_count());
        for_each_ascending(g, [&](std::size_t idx) {
            buf.push_back(data[idx].real());
            buf.push_back(data[idx].imag());
        });
        os.write(reinterpret_cast<const char*>(buf.data()), buf.size() * sizeof(double));
    } else {
        std::vector<float> buf;
        buf.reserve(2 * g.point_count());
        for_each_ascending(g, [&](std::size_t idx) {
            buf.push_back(static_cast<float>(data[idx].real()));
            buf.push_back(static_cast<float>(data[idx].imag()));
        });
        os.write(reinterpret_cast<const char*>(buf.data()), buf.size() * sizeof(float));
    }
}

void read_component(std::istream& is, const GridSpec& g, std::span<Complex> data,
                    ScalarKind kind) {
    const std::size_t np = g.point_count();
    if (kind == ScalarKind::Complex128) {
        std::vector<double> buf(2 * np);
        is.read(reinterpret_cast<char*>(buf.data()), buf.size() * sizeof(double));
        std::size_t pos = 0;
        for_each_ascending(g, [&](std::size_t idx) {
            data[idx] = Complex(buf[2 * pos], buf[2 * pos + 1]);
            ++pos;
        });
    } else {
        std::vector<float> buf(2 * np);
        is.read(reinterpret_cast<char*>(buf.data()), buf.size() * sizeof(float));
        std::size_t pos = 0;
        for_each_ascending(g, [&](std::size_t idx) {
            data[idx] = Complex(buf[2 * pos], buf[2 * pos + 1]);
            ++pos;
        });
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path.string());
    return is;
}

GridSpec grid_from_header(const Header& h) {
    GridSpec g;
    g.n_per_axis = static_cast<int>(h.n);
    g.box_length = h.box_length;
    g.dealias_fraction = h.dealias_fraction;
    g.validate();
    return g;
}

}  // namespace

void save_field(const SpectralField& f, const std::filesystem::path& path, ScalarKind kind,
                double time) {
    auto os = open_out(path);
    const GridSpec& g = f.grid();
    write_header(os, {static_cast<std::uint32_t>(g.n_per_axis), 3,
                      static_cast<std::uint32_t>(kind), g.box_length, g.dealias_fraction, time});
    for (int c = 0; c < 3; ++c) write_component(os, g, f.component(c), kind);
    if (!os) throw std::runtime_error("short write: " + path.string());
}

SpectralField load_field(const std::filesystem::path& path, double* time_out) {
    auto is = open_in(path);
    const Header h = read_header(is, path);
    if (h.components != 3) throw std::runtime_error("expected 3 components: " + path.string());
    SpectralField f(grid_from_header(h));
    for (int c = 0; c < 3; ++c)
        read_component(is, f.grid(), f.component(c), static_cast<ScalarKind>(h.kind));
    if (!is) throw std::runtime_error("truncated snapshot: " + path.string());
    if (time_out) *time_out = h.time;
    return f;
}

void save_state(const SolenoidalState& s, const std::filesystem::path& path, ScalarKind kind) {
    auto os = open_out(path);
    const GridSpec& g = s.grid();
    write_header(os, {static_cast<std::uint32_t>(g.n_per_axis), 6,
                      static_cast<std::uint32_t>(kind), g.box_length, g.dealias_fraction, s.time});
    for (int c = 0; c < 3; ++c) write_component(os, g, s.u.component(c), kind);
    for (int c = 0; c < 3; ++c) write_component(os, g, s.B.component(c), kind);
    if (!os) throw std::runtime_error("short write: " + path.string());
}

SolenoidalState load_state(const std::filesystem::path& path) {
    auto is = open_in(path);
    const Header h = read_header(is, path);
    if (h.components != 6) throw std::runtime_error("expected 6 components: " + path.string());
    SolenoidalState s(grid_from_header(h));
    s.time = h.time;
    for (int c = 0; c < 3; ++c)
        read_component(is, s.grid(), s.u.component(c), static_cast<ScalarKind>(h.kind));
    for (int c = 0; c < 3; ++c)
        read_component(is, s.grid(), s.B.component(c), static_cast<ScalarKind>(h.kind));
    if (!is) throw std::runtime_error("truncated snapshot: " + path.string());
    return s;
}

void save_physical(const RealField& f, const std::filesystem::path& path, double time) {
    auto os = open_out(path);
    const GridSpec& g = f.grid();
    write_header(os, {static_cast<std::uint32_t>(g.n_per_axis), 3,
                      static_cast<std::uint32_t>(ScalarKind::Float64), g.box_length,
                      g.dealias_fraction, time});
    for (int c = 0; c < 3; ++c) {
        auto v = f.component(c);
        os.write(reinterpret_cast<const char*>(v.data()), v.size() * sizeof(double));
    }
    if (!os) throw std::runtime_error("short write: " + path.string());
}

RealField load_physical(const std::filesystem::path& path, double* time_out) {
    auto is = open_in(path);
    const Header h = read_header(is, path);
    if (h.components != 3 || static_cast<ScalarKind>(h.kind) != ScalarKind::Float64)
        throw std::runtime_error("not a physical snapshot: " + path.string());
    RealField f(grid_from_header(h));
    for (int c = 0; c < 3; ++c) {
        auto v = f.component(c);
        is.read(reinterpret_cast<char*>(v.data()), v.size() * sizeof(double));
    }
    if (!is) throw std::runtime_error("truncated snapshot: " + path.string());
    if (time_out) *time_out = h.time;
    return f;
}

void save_checkpoint(const SolenoidalState& s, const CheckpointMeta& meta,
                     const std::filesystem::path& path) {
    save_state(s, path);
    nlohmann::json j{{"dt", meta.dt},
                     {"scheme", meta.scheme},
                     {"step_count", meta.step_count},
                     {"time", meta.time}};
    std::ofstream os(path.string() + ".json");
    if (!os) throw std::runtime_error("cannot write checkpoint sidecar for " + path.string());
    os << j.dump(2) << "\n";
}

std::pair<SolenoidalState, CheckpointMeta> load_checkpoint(const std::filesystem::path& path) {
    SolenoidalState s = load_state(path);
    std::ifstream is(path.string() + ".json");
    if (!is) throw std::runtime_error("missing checkpoint sidecar for " + path.string());
    nlohmann::json j;
    is >> j;
    CheckpointMeta meta;
    meta.dt = j.value("dt", 0.0);
    meta.scheme = j.value("scheme", "");
    meta.step_count = j.value("step_count", 0L);
    meta.time = j.value("time", 0.0);
    return {std::move(s), meta};
}

}  // namespace hallmhd
