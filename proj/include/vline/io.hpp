#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "grid.hpp"
#include "harmonics.hpp"
#include "phantom.hpp"
#include "sinogram.hpp"

namespace vline::io {

using json = nlohmann::json;

namespace detail {

inline std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t out = 0;
    for (int b = 0; b < 8; ++b) out |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
    return out;
}

inline void write_doubles(const std::string& path, const double* data, std::size_t count) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    std::vector<std::uint64_t> buf(count);
    for (std::size_t k = 0; k < count; ++k) buf[k] = to_little(std::bit_cast<std::uint64_t>(data[k]));
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(count * sizeof(std::uint64_t)));
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

inline std::vector<double> read_doubles(const std::string& path, std::size_t count) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes != count * sizeof(std::uint64_t))
        throw std::runtime_error("'" + path + "' holds " + std::to_string(bytes) + " bytes, expected " +
                                 std::to_string(count * sizeof(std::uint64_t)));
    in.seekg(0);
    std::vector<std::uint64_t> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(bytes));
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = std::bit_cast<double>(to_little(buf[k]));
    return out;
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
}

inline json read_sidecar(const std::string& raw_path, const std::string& expected_type) {
    const std::string path = raw_path + ".json";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("missing sidecar '" + path + "'");
    json j = json::parse(in);
    const std::string type = j.value("type", "");
    if (type != expected_type)
        throw std::invalid_argument("'" + path + "' describes a " + (type.empty() ? "?" : type) + ", expected " +
                                    expected_type);
    return j;
}

}  // namespace detail

inline std::string sidecar_path(const std::string& raw_path) { return raw_path + ".json"; }

inline void save_image(const ImageGrid& g, const std::string& path) {
    detail::write_doubles(path, g.values().data(), g.size());
    detail::write_json(sidecar_path(path),
                       {{"type", "image"}, {"width", g.width()}, {"height", g.height()}, {"margin", g.margin()}});
}

inline ImageGrid load_image(const std::string& path) {
    const json j = detail::read_sidecar(path, "image");
    const auto w = j.at("width").get<std::size_t>(), h = j.at("height").get<std::size_t>();
    return ImageGrid(w, h, j.value("margin", 0.0), detail::read_doubles(path, w * h));
}

inline void save_sinogram(const Sinogram& s, const std::string& path) {
    detail::write_doubles(path, s.values().data(), s.values().size());
    detail::write_json(sidecar_path(path),
                       {{"type", "sinogram"}, {"M", s.vertices()}, {"N", s.intervals()}, {"m", s.weight()}});
}

inline Sinogram load_sinogram(const std::string& path) {
    const json j = detail::read_sidecar(path, "sinogram");
    const auto M = j.at("M").get<std::size_t>(), N = j.at("N").get<std::size_t>();
    return Sinogram(M, N, j.at("m").get<int>(), detail::read_doubles(path, M * (N + 1)));
}

namespace detail {

inline void save_table(const OrderTable& t, const std::string& path, const std::string& type) {
    std::vector<double> flat(2 * t.data().size());
    for (std::size_t k = 0; k < t.data().size(); ++k) {
        flat[2 * k] = t.data()[k].real();
        flat[2 * k + 1] = t.data()[k].imag();
    }
    write_doubles(path, flat.data(), flat.size());
    write_json(sidecar_path(path), {{"type", type}, {"M", t.vertices()}, {"N", t.intervals()}});
}

template <class Table>
Table load_table(const std::string& path, const std::string& type) {
    const json j = read_sidecar(path, type);
    Table t(j.at("M").get<std::size_t>(), j.at("N").get<std::size_t>());
    const auto flat = read_doubles(path, 2 * t.data().size());
    for (std::size_t k = 0; k < t.data().size(); ++k) t.data()[k] = {flat[2 * k], flat[2 * k + 1]};
    return t;
}

}  // namespace detail

/// Rows ordered l = -M/2 .. M/2-1, each row N + 1 samples in s.
inline void save_harmonics(const HarmonicTable& t, const std::string& path) { detail::save_table(t, path, "harmonics"); }
inline HarmonicTable load_harmonics(const std::string& path) {
    return detail::load_table<HarmonicTable>(path, "harmonics");
}

/// Rows ordered l = -M/2 .. M/2-1, each row N midpoint samples in rho.
inline void save_profiles(const RadialProfileSet& t, const std::string& path) { detail::save_table(t, path, "profiles"); }
inline RadialProfileSet load_profiles(const std::string& path) {
    return detail::load_table<RadialProfileSet>(path, "profiles");
}

inline void write_sinogram_csv(const Sinogram& s, std::ostream& out) {
    out << "k,i,phi,s,value\n" << std::setprecision(17);
    for (std::size_t k = 0; k < s.vertices(); ++k)
        for (std::size_t i = 0; i < s.columns(); ++i)
            out << k << ',' << i << ',' << s.phi(k) << ',' << s.s(i) << ',' << s.at(k, i) << '\n';
}

inline void write_sinogram_csv(const Sinogram& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_sinogram_csv(s, out);
}

/// 8-bit ASCII PGM, min-max normalized (a constant image maps to 0).
/// Row 0 of the grid is the bottom row (y = -1), so rows are written in reverse.
inline void write_pgm(const std::vector<double>& values, std::size_t width, std::size_t height, std::ostream& out) {
    if (values.size() != width * height) throw std::invalid_argument("write_pgm: size mismatch");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = values.empty() ? 0.0 : *lo_it, hi = values.empty() ? 0.0 : *hi_it;
    const double span = hi - lo;
    out << "P2\n" << width << ' ' << height << "\n255\n";
    for (std::size_t r = height; r-- > 0;) {
        for (std::size_t c = 0; c < width; ++c) {
            const double v = values[r * width + c];
            const int level = span > 0.0 ? static_cast<int>(std::lround(255.0 * (v - lo) / span)) : 0;
            out << level << (c + 1 == width ? '\n' : ' ');
        }
    }
}

inline void write_pgm(const ImageGrid& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_pgm(g.values(), g.width(), g.height(), out);
}

/// Sinogram quicklook: vertices down, opening angles across.
inline void write_pgm(const Sinogram& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    std::vector<double> flipped(s.values().size());
    for (std::size_t k = 0; k < s.vertices(); ++k)
        for (std::size_t i = 0; i < s.columns(); ++i) flipped[(s.vertices() - 1 - k) * s.columns() + i] = s.at(k, i);
    write_pgm(flipped, s.columns(), s.vertices(), out);
}

/// Phantom description:
///   {"builtin": "disk" | "smiley"}  or
///   {"margin": 0.05, "primitives": [
///       {"type": "disk", "center": [x, y], "radius": r, "amplitude": a},
///       {"type": "annulus", "center": [x, y], "r_inner": r0, "r_outer": r1, "amplitude": a,
///        "theta_begin": t0, "theta_end": t1},
///       {"type": "harmonic", "order": l, "profile": "constant" | "bump", "radius": r, "amplitude": a,
///        "phase": p}]}
inline PhantomSpec parse_phantom(const json& j) {
    if (j.contains("builtin")) {
        const std::string name = j.at("builtin").get<std::string>();
        if (name == "disk") return disk_phantom(j.value("radius", 0.5), j.value("amplitude", 1.0));
        if (name == "smiley") return smiley_phantom();
        throw std::invalid_argument("unknown builtin phantom '" + name + "' (expected disk|smiley)");
    }
    PhantomSpec spec;
    spec.margin = j.value("margin", default_support_margin);
    for (const auto& p : j.at("primitives")) {
        const std::string type = p.at("type").get<std::string>();
        const auto center = p.value("center", std::vector<double>{0.0, 0.0});
        if (center.size() != 2) throw std::invalid_argument("phantom: center must be [x, y]");
        if (type == "disk") {
            spec.primitives.emplace_back(Disk{center[0], center[1], p.at("radius").get<double>(), p.value("amplitude", 1.0)});
        } else if (type == "annulus") {
            spec.primitives.emplace_back(Annulus{center[0], center[1], p.at("r_inner").get<double>(),
                                                 p.at("r_outer").get<double>(), p.value("amplitude", 1.0),
                                                 p.value("theta_begin", 0.0), p.value("theta_end", 2.0 * pi)});
        } else if (type == "harmonic") {
            spec.primitives.emplace_back(Harmonic{
                p.at("order").get<int>(),
                RadialProfile{parse_profile_kind(p.value("profile", std::string("bump"))), p.at("radius").get<double>()},
                p.value("amplitude", 1.0), p.value("phase", 0.0)});
        } else {
            throw std::invalid_argument("phantom: unknown primitive type '" + type + "'");
        }
    }
    validate_phantom(spec);
    return spec;
}

inline PhantomSpec load_phantom(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open phantom description '" + path + "'");
    return parse_phantom(json::parse(in));
}

}  // namespace vline::io
