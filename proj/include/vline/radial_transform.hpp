#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "gegenbauer.hpp"
#include "kernels.hpp"
#include "phantom.hpp"
#include "quadrature.hpp"

namespace vline {

/// A radial profile f(rho) supported in [0, support] together with the radii
/// where it is not smooth.
struct RadialFunction {
    std::function<double(double)> value;
    double support = 1.0;
    std::vector<double> breakpoints;
};

inline RadialFunction make_radial(const RadialProfile& profile, double amplitude = 1.0) {
    return RadialFunction{[profile, amplitude](double r) { return amplitude * profile(r); }, profile.radius,
                          profile.breakpoints()};
}

namespace detail {

inline void check_radial_args(int n, double psi, const RadialFunction& f) {
    if (n < 2) throw std::invalid_argument("radial transform: n must be >= 2");
    if (!(psi > 0.0 && psi < 0.5 * pi)) throw std::domain_error("radial transform: psi must lie in (0, pi/2)");
    if (!(f.support > 0.0 && f.support < 1.0)) throw std::invalid_argument("radial transform: support must lie in (0, 1)");
}

}  // namespace detail

/// l-th radial coefficient of R_m applied to f_l(|x|) Y_l(x/|x|), written as
/// an integral over the angle alpha between the ray and the axis:
///   |S^{n-2}| int_0^{pi-psi} f(sin psi / sin(alpha+psi))
///       * sin(psi)^{n-1} sin(alpha)^{m+n-2} / sin(alpha+psi)^{m+n} * C_l(cos alpha) dalpha.
/// Only the alpha-range where the radius argument falls inside the support
/// contributes; it is split where that radius crosses a profile breakpoint.
inline double glk_alpha_integral(const RadialFunction& f, int n, int m, int l, double psi, double abs_tol = 1e-12) {
    detail::check_radial_args(n, psi, f);
    const double s = std::sin(psi);
    const double R = f.support;
    if (s >= R) return 0.0;

    const double lo = std::asin(s / R) - psi;
    const double hi = pi - std::asin(s / R) - psi;
    std::vector<double> breaks{0.5 * pi - psi};
    for (double b : f.breakpoints) {
        if (b <= s || b >= R) continue;
        const double a = std::asin(s / b);
        breaks.push_back(a - psi);
        breaks.push_back(pi - a - psi);
    }

    const double mu = 0.5 * (n - 2);
    const double sin_pow = ipow(s, n - 1);
    auto integrand = [&](double alpha) {
        const double denom = std::sin(alpha + psi);
        const double rho = s / denom;
        if (rho >= R) return 0.0;
        return f.value(rho) * sin_pow * ipow(std::sin(alpha), m + n - 2) / ipow(denom, m + n) *
               gegenbauer(l, mu, detail::clamp_unit(std::cos(alpha)));
    };
    return sphere_area(n - 2) * integrate_piecewise(integrand, lo, hi, breaks, abs_tol);
}

/// Same quantity in Abel form,
///   |S^{n-2}| sin(psi)^{-m} int_{sin psi}^{1} f(rho) rho K_l(psi, rho) / sqrt(rho^2 - sin^2 psi) drho,
/// integrated in u with rho = sqrt(sin^2 psi + u^2), which turns the measure
/// rho drho / sqrt(rho^2 - sin^2 psi) into du.
inline double glk2_rho_integral(const RadialFunction& f, int n, int m, int l, double psi, double abs_tol = 1e-12) {
    detail::check_radial_args(n, psi, f);
    const double s = std::sin(psi);
    const double R = f.support;
    if (s >= R) return 0.0;

    const KernelSpec spec{n, m, l};
    const double u_max = std::sqrt(R * R - s * s);
    std::vector<double> breaks;
    for (double b : f.breakpoints)
        if (b > s && b < R) breaks.push_back(std::sqrt(b * b - s * s));

    auto integrand = [&](double u) {
        const double rho = std::sqrt(s * s + u * u);
        if (rho >= R) return 0.0;
        return f.value(rho) * kernel_K(spec, psi, rho);
    };
    return sphere_area(n - 2) * ipow(s, -m) * integrate_piecewise(integrand, 0.0, u_max, breaks, abs_tol);
}

}  // namespace vline
