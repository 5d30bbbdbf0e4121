#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "core.hpp"
#include "grid.hpp"

namespace vline {

enum class ProfileKind { constant, bump };

/// Built-in radial profile supported on [0, radius].
///   constant: 1 on [0, radius)
///   bump:     exp(1 - 1/(1 - (r/radius)^2)) on [0, radius), C-infinity, 1 at r = 0
struct RadialProfile {
    ProfileKind kind = ProfileKind::constant;
    double radius = 0.5;

    double operator()(double r) const {
        r = std::abs(r);
        if (r >= radius) return 0.0;
        switch (kind) {
            case ProfileKind::constant:
                return 1.0;
            case ProfileKind::bump: {
                const double u = r / radius;
                return std::exp(1.0 - 1.0 / (1.0 - u * u));
            }
        }
        return 0.0;
    }

    /// Radii where the profile is not smooth; quadrature splits there.
    std::vector<double> breakpoints() const { return {radius}; }
};

inline ProfileKind parse_profile_kind(std::string_view id) {
    if (id == "constant") return ProfileKind::constant;
    if (id == "bump") return ProfileKind::bump;
    throw std::invalid_argument("unknown radial profile id '" + std::string(id) + "' (expected constant|bump)");
}

inline std::string_view to_string(ProfileKind kind) {
    return kind == ProfileKind::constant ? "constant" : "bump";
}

struct Disk {
    double cx = 0.0, cy = 0.0;
    double radius = 0.5;
    double amplitude = 1.0;
};

/// Annulus r_inner <= |x - c| < r_outer, optionally restricted to polar angles
/// (about c) in [theta_begin, theta_end) given in radians.
struct Annulus {
    double cx = 0.0, cy = 0.0;
    double r_inner = 0.3, r_outer = 0.4;
    double amplitude = 1.0;
    double theta_begin = 0.0;
    double theta_end = 2.0 * pi;
};

/// amplitude * profile(r) * cos(order * alpha - phase), centered at the origin;
/// 0 at the origin itself when order >= 1.
struct Harmonic {
    int order = 0;
    RadialProfile profile{};
    double amplitude = 1.0;
    double phase = 0.0;
};

using Primitive = std::variant<Disk, Annulus, Harmonic>;

struct PhantomSpec {
    std::vector<Primitive> primitives;
    double margin = default_support_margin;
};

namespace detail {

inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * pi);
    return a < 0 ? a + 2.0 * pi : a;
}

inline double primitive_value(const Disk& d, double x, double y) {
    const double dx = x - d.cx, dy = y - d.cy;
    return std::sqrt(dx * dx + dy * dy) < d.radius ? d.amplitude : 0.0;
}

inline double primitive_value(const Annulus& a, double x, double y) {
    const double dx = x - a.cx, dy = y - a.cy;
    const double r = std::sqrt(dx * dx + dy * dy);
    if (r < a.r_inner || r >= a.r_outer) return 0.0;
    if (a.theta_end - a.theta_begin >= 2.0 * pi) return a.amplitude;
    const double t = wrap_angle(std::atan2(dy, dx) - a.theta_begin);
    return t < a.theta_end - a.theta_begin ? a.amplitude : 0.0;
}

inline double primitive_value(const Harmonic& h, double x, double y) {
    const double r = std::sqrt(x * x + y * y);
    const double p = h.profile(r);
    if (p == 0.0) return 0.0;
    if (h.order == 0) return h.amplitude * p;
    if (r == 0.0) return 0.0;
    return h.amplitude * p * std::cos(h.order * std::atan2(y, x) - h.phase);
}

inline double outer_radius(const Disk& d) { return std::hypot(d.cx, d.cy) + d.radius; }
inline double outer_radius(const Annulus& a) { return std::hypot(a.cx, a.cy) + a.r_outer; }
inline double outer_radius(const Harmonic& h) { return h.profile.radius; }

inline void validate(const Disk& d) {
    if (!(d.radius > 0)) throw std::invalid_argument("disk: radius must be positive");
}
inline void validate(const Annulus& a) {
    if (!(a.r_inner >= 0 && a.r_outer > a.r_inner)) throw std::invalid_argument("annulus: need 0 <= r_inner < r_outer");
    if (!(a.theta_end > a.theta_begin)) throw std::invalid_argument("annulus: need theta_begin < theta_end");
}
inline void validate(const Harmonic& h) {
    if (h.order < 0) throw std::invalid_argument("harmonic: order must be nonnegative");
    if (!(h.profile.radius > 0)) throw std::invalid_argument("harmonic: profile radius must be positive");
}

}  // namespace detail

/// Throws std::invalid_argument naming the first primitive that reaches the
/// band of radius >= 1 - margin.
inline void validate_phantom(const PhantomSpec& spec) {
    if (!(spec.margin >= 0.0 && spec.margin < 1.0)) throw std::invalid_argument("phantom: margin must lie in [0,1)");
    const double limit = 1.0 - spec.margin;
    for (std::size_t k = 0; k < spec.primitives.size(); ++k) {
        std::visit(
            [&](const auto& p) {
                detail::validate(p);
                const double reach = detail::outer_radius(p);
                if (reach > limit)
                    throw std::invalid_argument("phantom primitive #" + std::to_string(k) + " reaches radius " +
                                                std::to_string(reach) + ", beyond the support limit 1 - margin = " +
                                                std::to_string(limit));
            },
            spec.primitives[k]);
    }
}

/// Value of the phantom at a point (sum over primitives).
inline double phantom_value(const PhantomSpec& spec, double x, double y) {
    double v = 0.0;
    for (const auto& p : spec.primitives) v += std::visit([&](const auto& q) { return detail::primitive_value(q, x, y); }, p);
    return v;
}

/// Rasterizes the phantom at pixel centers of a size x size grid.
inline ImageGrid render_phantom(const PhantomSpec& spec, std::size_t size) {
    if (size < 16) throw std::invalid_argument("render_phantom: size must be at least 16");
    validate_phantom(spec);
    ImageGrid grid(size, size, spec.margin);
    const double limit = 1.0 - spec.margin;
    for (std::size_t r = 0; r < size; ++r) {
        const double y = grid.y_center(r);
        for (std::size_t c = 0; c < size; ++c) {
            const double x = grid.x_center(c);
            if (std::sqrt(x * x + y * y) >= limit) continue;
            grid.at(r, c) = phantom_value(spec, x, y);
        }
    }
    return grid;
}

/// The phantom rotated counter-clockwise by angle about the origin.
inline PhantomSpec rotate_phantom(PhantomSpec spec, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    auto turn = [&](double& x, double& y) {
        const double nx = c * x - s * y, ny = s * x + c * y;
        x = nx;
        y = ny;
    };
    for (auto& p : spec.primitives) {
        if (auto* d = std::get_if<Disk>(&p)) {
            turn(d->cx, d->cy);
        } else if (auto* a = std::get_if<Annulus>(&p)) {
            turn(a->cx, a->cy);
            a->theta_begin += angle;
            a->theta_end += angle;
        } else if (auto* h = std::get_if<Harmonic>(&p)) {
            h->phase += h->order * angle;
        }
    }
    return spec;
}

/// Centered disk.
inline PhantomSpec disk_phantom(double radius = 0.5, double amplitude = 1.0) {
    return PhantomSpec{{Disk{0.0, 0.0, radius, amplitude}}, default_support_margin};
}

/// Built-in smiley: face disk, two eyes and a lower mouth arc. The geometry is
/// fixed here because no canonical parameters exist; all amplitudes are
/// positive so the image is nonnegative (face 1, eyes and mouth 2).
inline PhantomSpec smiley_phantom() {
    PhantomSpec spec;
    spec.margin = default_support_margin;
    spec.primitives.emplace_back(Disk{0.0, 0.0, 0.8, 1.0});
    spec.primitives.emplace_back(Disk{-0.3, 0.3, 0.12, 1.0});
    spec.primitives.emplace_back(Disk{0.3, 0.3, 0.12, 1.0});
    spec.primitives.emplace_back(Annulus{0.0, 0.0, 0.42, 0.54, 1.0, 1.15 * pi, 1.85 * pi});
    return spec;
}

/// Real and imaginary parts of profile(r) * exp(i * order * alpha) (0 at the
/// origin when order >= 1).
inline std::pair<ImageGrid, ImageGrid> render_harmonic_phantom(int order, const RadialProfile& profile, std::size_t size,
                                                               double margin = default_support_margin) {
    if (size < 16) throw std::invalid_argument("render_harmonic_phantom: size must be at least 16");
    if (!(profile.radius > 0.0 && profile.radius <= 1.0 - margin))
        throw std::invalid_argument("render_harmonic_phantom: profile must be supported in [0, 1 - margin]");
    ImageGrid re(size, size, margin), im(size, size, margin);
    for (std::size_t r = 0; r < size; ++r) {
        const double y = re.y_center(r);
        for (std::size_t c = 0; c < size; ++c) {
            const double x = re.x_center(c);
            const double rad = std::sqrt(x * x + y * y);
            const double p = profile(rad);
            if (p == 0.0 || (order != 0 && rad == 0.0)) continue;
            if (order == 0) {
                re.at(r, c) = p;
            } else {
                const double a = order * std::atan2(y, x);
                re.at(r, c) = p * std::cos(a);
                im.at(r, c) = p * std::sin(a);
            }
        }
    }
    return {std::move(re), std::move(im)};
}

inline std::pair<ImageGrid, ImageGrid> render_harmonic_phantom(int order, std::string_view profile_id, double radius,
                                                               std::size_t size) {
    return render_harmonic_phantom(order, RadialProfile{parse_profile_kind(profile_id), radius}, size);
}

}  // namespace vline
