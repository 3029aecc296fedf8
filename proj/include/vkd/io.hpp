#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vkd/energy.hpp"
#include "vkd/errors.hpp"
#include "vkd/flows.hpp"
#include "vkd/grid.hpp"
#include "vkd/version.hpp"

namespace vkd {
namespace io {

// ---------------------------------------------------------------------------
// Binary field snapshots: "VKDW", version, nx, ny, a, b, lambda_tag, then
// (nx+1)*ny doubles, x-major, all little-endian.
// ---------------------------------------------------------------------------

constexpr std::uint32_t kSnapshotVersion = 1;

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
    std::array<unsigned char, 4> b{static_cast<unsigned char>(v & 0xff),
                                   static_cast<unsigned char>((v >> 8) & 0xff),
                                   static_cast<unsigned char>((v >> 16) & 0xff),
                                   static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b.data()), 4);
}

inline std::uint32_t get_u32(std::istream& is) {
    std::array<unsigned char, 4> b{};
    is.read(reinterpret_cast<char*>(b.data()), 4);
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

inline void put_f64(std::ostream& os, double v) {
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    std::array<unsigned char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((u >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b.data()), 8);
}

inline double get_f64(std::istream& is) {
    std::array<unsigned char, 8> b{};
    is.read(reinterpret_cast<char*>(b.data()), 8);
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= std::uint64_t(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

inline bool host_is_little_endian() {
    const std::uint32_t probe = 1;
    unsigned char c;
    std::memcpy(&c, &probe, 1);
    return c == 1;
}

} // namespace detail

inline void write_field(std::ostream& os, const ScalarField& f, double lambda_tag = 0.0) {
    const auto& s = f.spec();
    os.write("VKDW", 4);
    detail::put_u32(os, kSnapshotVersion);
    detail::put_u32(os, std::uint32_t(s.nx));
    detail::put_u32(os, std::uint32_t(s.ny));
    detail::put_f64(os, s.a);
    detail::put_f64(os, s.b);
    detail::put_f64(os, lambda_tag);
    if (detail::host_is_little_endian()) {
        os.write(reinterpret_cast<const char*>(f.data()),
                 std::streamsize(f.size() * sizeof(double)));
    } else {
        for (std::size_t k = 0; k < f.size(); ++k) detail::put_f64(os, f.data()[k]);
    }
    if (!os) throw IoError("failed writing field snapshot");
}

inline void write_field(const std::string& path, const ScalarField& f, double lambda_tag = 0.0) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    write_field(os, f, lambda_tag);
}

struct FieldSnapshot {
    ScalarField field;
    double lambda_tag = 0.0;
};

inline FieldSnapshot read_field(std::istream& is) {
    char magic[4] = {};
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "VKDW", 4) != 0)
        throw IoError("not a VKDW field snapshot");
    const std::uint32_t version = detail::get_u32(is);
    if (version != kSnapshotVersion)
        throw IoError("unsupported snapshot version " + std::to_string(version));
    const std::uint32_t nx = detail::get_u32(is);
    const std::uint32_t ny = detail::get_u32(is);
    const double a = detail::get_f64(is);
    const double b = detail::get_f64(is);
    const double lambda_tag = detail::get_f64(is);
    DomainSpec spec(a, b, int(nx), int(ny));
    ScalarField f(spec);
    if (detail::host_is_little_endian()) {
        is.read(reinterpret_cast<char*>(f.data()), std::streamsize(f.size() * sizeof(double)));
    } else {
        for (std::size_t k = 0; k < f.size(); ++k) f.data()[k] = detail::get_f64(is);
    }
    if (!is) throw IoError("field snapshot truncated");
    return {std::move(f), lambda_tag};
}

inline FieldSnapshot read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path);
    return read_field(is);
}

// ---------------------------------------------------------------------------
// Run configuration: key=value lines, '#' comments, unknown keys rejected.
// ---------------------------------------------------------------------------

struct RunConfig {
    double lambda = 1.5;
    double domain_a = 50.0;
    double domain_b = 50.0;
    int nx = 128;
    int ny = 128;
    double tol = 1e-6;
    energy::GradientMetric metric = energy::GradientMetric::x_preconditioned;
    int n_path = 41;
    flows::SeedShape seed_shape = flows::SeedShape::one_peak;
    bool symmetrize = true;
    long max_iters = 200000;
    std::string out_dir = ".";

    DomainSpec domain() const { return DomainSpec(domain_a, domain_b, nx, ny); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace detail

inline void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    auto bad_value = [&]() {
        throw ParseError("bad value '" + value + "' for config key '" + key + "'");
    };
    try {
        if (key == "lambda") cfg.lambda = std::stod(value);
        else if (key == "domain_a") cfg.domain_a = std::stod(value);
        else if (key == "domain_b") cfg.domain_b = std::stod(value);
        else if (key == "nx") cfg.nx = std::stoi(value);
        else if (key == "ny") cfg.ny = std::stoi(value);
        else if (key == "tol") cfg.tol = std::stod(value);
        else if (key == "n_path") cfg.n_path = std::stoi(value);
        else if (key == "max_iters") cfg.max_iters = std::stol(value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "metric") {
            if (value == "l2") cfg.metric = energy::GradientMetric::l2;
            else if (value == "x_preconditioned") cfg.metric = energy::GradientMetric::x_preconditioned;
            else bad_value();
        } else if (key == "seed_shape") {
            if (value == "one_peak") cfg.seed_shape = flows::SeedShape::one_peak;
            else if (value == "two_peaks_y") cfg.seed_shape = flows::SeedShape::two_peaks_y;
            else if (value == "two_peaks_x") cfg.seed_shape = flows::SeedShape::two_peaks_x;
            else bad_value();
        } else if (key == "symmetrize") {
            if (value == "on") cfg.symmetrize = true;
            else if (value == "off") cfg.symmetrize = false;
            else bad_value();
        } else {
            throw ParseError("unknown config key '" + key + "'");
        }
    } catch (const std::invalid_argument&) {
        bad_value();
    } catch (const std::out_of_range&) {
        bad_value();
    }
}

inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    if (const char* env = std::getenv("VKD_OUT_DIR")) cfg.out_dir = env;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(line_no) + ": expected key=value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        set_config_key(cfg, key, value);
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    return parse_config(in);
}

inline std::string config_echo(const RunConfig& cfg) {
    std::ostringstream os;
    os << "lambda=" << cfg.lambda << "\n"
       << "domain_a=" << cfg.domain_a << "\n"
       << "domain_b=" << cfg.domain_b << "\n"
       << "nx=" << cfg.nx << "\n"
       << "ny=" << cfg.ny << "\n"
       << "tol=" << cfg.tol << "\n"
       << "metric=" << (cfg.metric == energy::GradientMetric::l2 ? "l2" : "x_preconditioned")
       << "\n"
       << "n_path=" << cfg.n_path << "\n"
       << "seed_shape="
       << (cfg.seed_shape == flows::SeedShape::one_peak
               ? "one_peak"
               : cfg.seed_shape == flows::SeedShape::two_peaks_y ? "two_peaks_y"
                                                                 : "two_peaks_x")
       << "\n"
       << "symmetrize=" << (cfg.symmetrize ? "on" : "off") << "\n"
       << "max_iters=" << cfg.max_iters << "\n"
       << "out_dir=" << cfg.out_dir << "\n";
    return os.str();
}

// Metadata sidecar written next to every run output.
inline void write_metadata(const std::string& path, const RunConfig& cfg,
                           const std::map<std::string, std::string>& extra) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot write metadata sidecar: " + path);
    os << "# vkd run metadata\n";
    os << "toolkit_version=" << kVersion << "\n";
    os << config_echo(cfg);
    for (const auto& [k, v] : extra) os << k << "=" << v << "\n";
}

} // namespace io
} // namespace vkd
