#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "core.hpp"
#include "gegenbauer.hpp"
#include "quadrature.hpp"

namespace vline {

/// Parameters of one radial Abel equation: space dimension n >= 2, radial
/// weight exponent m and angular order l. q = m + n - 2 is the kernel's
/// polynomial degree in the distance variable.
struct KernelSpec {
    int n = 2;
    int m = 0;
    int l = 0;

    int q() const { return m + n - 2; }
    double mu() const { return 0.5 * (n - 2); }

    /// m > -(n+1)/2: the regime where the radial equations have unique solutions.
    bool in_uniqueness_regime() const { return 2 * m + n + 1 > 0; }

    void validate() const {
        if (n < 2) throw std::invalid_argument("KernelSpec: dimension n must be >= 2");
        if (l < 0) throw std::invalid_argument("KernelSpec: order l must be nonnegative");
    }
};

namespace detail {

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

/// C_l^{(n-2)/2}(cos theta); for n = 2 this is cos(l theta) directly.
inline double angular_factor(const KernelSpec& spec, double theta) {
    if (spec.n == 2) return std::cos(spec.l * theta);
    return gegenbauer(spec.l, spec.mu(), clamp_unit(std::cos(theta)));
}

inline double sigma_pow(int l) { return (l % 2 == 0) ? 1.0 : -1.0; }

}  // namespace detail

/// K_l(psi, rho) = rho^q sum_{sigma=+-1} sigma^l sin(theta_sigma)^q C_l(cos theta_sigma),
/// theta_sigma = arcsin(sin(psi)/rho) - sigma psi, for 0 <= psi <= pi/2 and
/// sin(psi) <= rho.
inline double kernel_K(const KernelSpec& spec, double psi, double rho) {
    spec.validate();
    if (!(psi >= 0.0 && psi <= 0.5 * pi)) throw std::domain_error("kernel_K: psi outside [0, pi/2]");
    const double s = std::sin(psi);
    if (!(rho > 0.0)) throw std::domain_error("kernel_K: rho must be positive");
    double ratio = s / rho;
    if (ratio > 1.0) {
        if (ratio > 1.0 + 1e-14) {
            std::ostringstream msg;
            msg << "kernel_K: rho = " << rho << " below sin(psi) = " << s;
            throw std::domain_error(msg.str());
        }
        ratio = 1.0;
    }
    const double a = std::asin(ratio);
    const int q = spec.q();
    double total = 0.0;
    for (int sigma : {1, -1}) {
        const double theta = a - sigma * psi;
        const double sign = sigma == 1 ? 1.0 : detail::sigma_pow(spec.l);
        total += sign * ipow(rho * std::sin(theta), q) * detail::angular_factor(spec, theta);
    }
    return total;
}

/// F_l(t, s) = sum_{sigma=+-1} sigma^l (sqrt t - sigma sqrt(t-s))^q
///             * C_l((sqrt t sqrt(t-s) + sigma (1-t)) / sqrt(1-s)),  0 <= s <= t <= 1, s < 1.
inline double kernel_F(const KernelSpec& spec, double t, double s) {
    spec.validate();
    if (!(s >= 0.0 && s <= t && t <= 1.0)) throw std::domain_error("kernel_F: need 0 <= s <= t <= 1");
    if (!(s < 1.0)) throw std::domain_error("kernel_F: s must be < 1");
    const double rt = std::sqrt(t);
    const double rd = std::sqrt(t - s);
    const double rs = std::sqrt(1.0 - s);
    const int q = spec.q();
    double total = 0.0;
    for (int sigma : {1, -1}) {
        const double arg = detail::clamp_unit((rt * rd + sigma * (1.0 - t)) / rs);
        const double sign = sigma == 1 ? 1.0 : detail::sigma_pow(spec.l);
        total += sign * ipow(rt - sigma * rd, q) * gegenbauer(spec.l, spec.mu(), arg);
    }
    return total;
}

/// Closed form of the diagonal, v(s) = F_l(s, s) = 2 s^{q/2} C_l(sqrt(1-s)).
inline double kernel_F_diagonal(const KernelSpec& spec, double s) {
    return 2.0 * std::pow(s, 0.5 * spec.q()) * gegenbauer(spec.l, spec.mu(), std::sqrt(1.0 - s));
}

/// Analytic v'(s0) at a zero s0 of the diagonal: -s0^{q/2} C'(sqrt(1-s0)) / sqrt(1-s0).
inline double kernel_F_diagonal_slope_at_zero(const KernelSpec& spec, double s0) {
    const double x = std::sqrt(1.0 - s0);
    return -std::pow(s0, 0.5 * spec.q()) * gegenbauer_deriv(spec.l, spec.mu(), x, 1) / x;
}

/// Zeros of s -> F_l(s, s) in [a, 1), sorted ascending. Sign scan of
/// C_l(sqrt(1-s)) on a fine grid, bisection to 1e-13; every root is checked
/// to be simple (nonzero centered difference of v), else NumericalError.
inline std::vector<double> diagonal_zeros(const KernelSpec& spec, double a = 0.05) {
    spec.validate();
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("diagonal_zeros: a must lie in (0,1)");
    std::vector<double> roots;
    if (spec.l == 0) return roots;

    auto c = [&](double s) { return gegenbauer(spec.l, spec.mu(), std::sqrt(1.0 - s)); };
    const double hi = 1.0 - 1e-9;
    const int samples = 2000 * (spec.l + 1);
    const double step = (hi - a) / samples;

    double s_prev = a, c_prev = c(a);
    if (c_prev == 0.0) roots.push_back(a);
    for (int k = 1; k <= samples; ++k) {
        const double s_cur = (k == samples) ? hi : a + k * step;
        const double c_cur = c(s_cur);
        if (c_cur == 0.0) {
            roots.push_back(s_cur);
        } else if (c_prev != 0.0 && (c_prev < 0.0) != (c_cur < 0.0)) {
            double lo = s_prev, up = s_cur, c_lo = c_prev;
            for (int it = 0; it < 200 && up - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + up);
                const double c_mid = c(mid);
                if (c_mid == 0.0) {
                    lo = up = mid;
                    break;
                }
                if ((c_mid < 0.0) == (c_lo < 0.0)) {
                    lo = mid;
                    c_lo = c_mid;
                } else {
                    up = mid;
                }
            }
            roots.push_back(0.5 * (lo + up));
        }
        s_prev = s_cur;
        c_prev = c_cur;
    }

    for (double s0 : roots) {
        const double h = 1e-6;
        const double lo = std::max(0.0, s0 - h);
        const double up = std::min(1.0 - 1e-12, s0 + h);
        const double slope = (kernel_F_diagonal(spec, up) - kernel_F_diagonal(spec, lo)) / (up - lo);
        if (!(std::abs(slope) > 1e-10)) {
            std::ostringstream msg;
            msg << "diagonal_zeros: root s = " << s0 << " of order l = " << spec.l << " is not simple";
            throw NumericalError(msg.str());
        }
    }
    return roots;
}

namespace detail {

/// One-sided derivative g'(0) from samples at 0, h, 2h (second order) with one
/// Richardson step on h and h/2.
template <class G>
double one_sided_derivative(G&& g, double h) {
    auto d = [&](double step) { return (-3.0 * g(0.0) + 4.0 * g(step) - g(2.0 * step)) / (2.0 * step); };
    const double coarse = d(h);
    const double fine = d(0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

}  // namespace detail

/// Gradient of F_l at a diagonal point (s0, s0) by finite differences toward
/// the admissible region t >= s. Returns {dF/dt, dF/ds}.
inline std::pair<double, double> kernel_F_gradient(const KernelSpec& spec, double s0, double h = 1e-5) {
    const double beta1 = detail::one_sided_derivative([&](double d) { return kernel_F(spec, s0 + d, s0); }, h);
    const double beta2 = -detail::one_sided_derivative([&](double d) { return kernel_F(spec, s0, s0 - d); }, h);
    return {beta1, beta2};
}

struct UniquenessCheck {
    double s0 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    /// 1 + beta1 / (2 (beta1 + beta2)), Abel form of the condition
    double value = 0.0;
    /// 1 + alpha1 / (alpha1 + alpha2) with alpha1 = (pi/2) beta1, alpha1 + alpha2 = pi (beta1 + beta2)
    double value_volterra = 0.0;
    /// m + (n+1)/2
    double expected = 0.0;
    double slope_analytic = 0.0;
    double slope_rel_error = 0.0;
    bool zero_denominator = false;
    bool condition_holds = false;
    bool matches_expected = false;
    bool pass = false;
};

/// Evaluates the gradient condition at every diagonal zero in [a, 1).
/// A vanishing beta1 + beta2 is reported through zero_denominator.
inline std::vector<UniquenessCheck> check_uniqueness_condition(const KernelSpec& spec, double a = 0.05,
                                                                 double value_tol = 1e-4, double slope_tol = 1e-6) {
    std::vector<UniquenessCheck> out;
    const double expected = spec.m + 0.5 * (spec.n + 1);
    for (double s0 : diagonal_zeros(spec, a)) {
        UniquenessCheck r;
        r.s0 = s0;
        r.expected = expected;
        std::tie(r.beta1, r.beta2) = kernel_F_gradient(spec, s0);
        const double sum = r.beta1 + r.beta2;
        r.slope_analytic = kernel_F_diagonal_slope_at_zero(spec, s0);
        r.slope_rel_error = std::abs(sum - r.slope_analytic) / std::abs(r.slope_analytic);
        r.zero_denominator = !(std::abs(sum) > 1e-12 * (std::abs(r.beta1) + std::abs(r.beta2) + 1e-300));
        if (!r.zero_denominator) {
            r.value = 1.0 + r.beta1 / (2.0 * sum);
            const double alpha1 = 0.5 * pi * r.beta1;
            const double alpha_sum = pi * sum;
            r.value_volterra = 1.0 + alpha1 / alpha_sum;
            r.condition_holds = r.value > 0.0;
            r.matches_expected = std::abs(r.value - expected) < value_tol && r.slope_rel_error < slope_tol;
        }
        r.pass = r.condition_holds && r.matches_expected;
        out.push_back(r);
    }
    return out;
}

/// V(u, s) = int_0^1 F(s + (u-s) r, s) / sqrt(r (1-r)) dr, evaluated as
/// 2 int_0^{pi/2} F(s + (u-s) sin^2 th, s) dth (r = sin^2 th removes both
/// endpoint singularities).
inline double volterra_kernel_V(const KernelSpec& spec, double u, double s, double abs_tol = 1e-12) {
    if (!(s >= 0.0 && s <= u && u <= 1.0 && s < 1.0)) throw std::domain_error("volterra_kernel_V: need 0 <= s <= u <= 1, s < 1");
    auto integrand = [&](double th) {
        const double sn = std::sin(th);
        const double t = std::min(u, s + (u - s) * sn * sn);
        return 2.0 * kernel_F(spec, t, s);
    };
    return integrate_adaptive(integrand, 0.0, 0.5 * pi, abs_tol);
}

struct VolterraCheck {
    double s0 = 0.0;
    double dV_du = 0.0;
    double half_pi_beta1 = 0.0;
    double rel_error = 0.0;
    bool pass = false;
};

/// d/du V(u, s0) at u = s0 by one-sided differences, against (pi/2) dF/dt(s0, s0).
inline VolterraCheck check_volterra_slope(const KernelSpec& spec, double s0, double rel_tol = 1e-4) {
    VolterraCheck r;
    r.s0 = s0;
    r.dV_du = detail::one_sided_derivative([&](double d) { return volterra_kernel_V(spec, s0 + d, s0, 1e-13); }, 1e-4);
    r.half_pi_beta1 = 0.5 * pi * kernel_F_gradient(spec, s0).first;
    r.rel_error = std::abs(r.dV_du - r.half_pi_beta1) / std::abs(r.half_pi_beta1);
    r.pass = r.rel_error < rel_tol;
    return r;
}

}  // namespace vline
