#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace vline {

/// Gegenbauer polynomials C_l^mu normalized to C(1) = 1, mu = (n-2)/2 >= 0.
/// mu = 0 is the Chebyshev limit T_l, mu = 1/2 Legendre P_l.
///
/// With c_l := C_l^mu / C_l^mu(1) the classical three-term recurrence becomes
///   (l + 2mu - 1) c_l = 2 (l + mu - 1) x c_{l-1} - (l - 1) c_{l-2},
/// c_0 = 1, c_1 = x, which stays regular at mu = 0 for l >= 2.
struct GegenbauerParams {
    int degree = 0;
    double mu = 0.0;
};

namespace detail {

inline void check_gegenbauer_args(int degree, double mu, double x) {
    if (degree < 0) throw std::domain_error("gegenbauer: degree must be nonnegative");
    if (!(mu >= 0.0)) throw std::domain_error("gegenbauer: index mu must be nonnegative");
    if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("gegenbauer: argument " + std::to_string(x) + " outside [-1,1]");
}

struct GegenbauerJet {
    double value, d1, d2;
};

/// Value and first two derivatives by the differentiated normalized recurrence.
inline GegenbauerJet gegenbauer_jet(int degree, double mu, double x) {
    GegenbauerJet prev{1.0, 0.0, 0.0};
    if (degree == 0) return prev;
    GegenbauerJet cur{x, 1.0, 0.0};
    for (int l = 2; l <= degree; ++l) {
        const double a = 2.0 * (l + mu - 1.0);
        const double b = l - 1.0;
        const double denom = l + 2.0 * mu - 1.0;
        GegenbauerJet next{
            (a * x * cur.value - b * prev.value) / denom,
            (a * (cur.value + x * cur.d1) - b * prev.d1) / denom,
            (a * (2.0 * cur.d1 + x * cur.d2) - b * prev.d2) / denom,
        };
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace detail

/// Normalized Gegenbauer polynomial; throws std::domain_error for |x| > 1.
inline double gegenbauer(int degree, double mu, double x) {
    detail::check_gegenbauer_args(degree, mu, x);
    if (degree == 0) return 1.0;
    if (degree == 1) return x;
    if (x == 1.0) return 1.0;
    if (x == -1.0) return (degree % 2 == 0) ? 1.0 : -1.0;
    if (mu == 0.0) return std::cos(degree * std::acos(x));
    return detail::gegenbauer_jet(degree, mu, x).value;
}

inline double gegenbauer(const GegenbauerParams& p, double x) { return gegenbauer(p.degree, p.mu, x); }

/// First (order = 1) or second (order = 2) derivative of the normalized polynomial.
inline double gegenbauer_deriv(int degree, double mu, double x, int order) {
    detail::check_gegenbauer_args(degree, mu, x);
    if (order != 1 && order != 2) throw std::domain_error("gegenbauer_deriv: order must be 1 or 2");
    const auto jet = detail::gegenbauer_jet(degree, mu, x);
    return order == 1 ? jet.d1 : jet.d2;
}

}  // namespace vline
