#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core.hpp"

namespace vline {

namespace detail {

struct GkPiece {
    double a, b, value, error;
    bool operator<(const GkPiece& o) const { return error < o.error; }
};

template <class F>
GkPiece gk_piece(F& f, double a, double b, double& l1) {
    double error = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &error, &l1);
    return {a, b, value, error};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (15/31) integration on [a, b]: the piece
/// with the largest Kronrod error estimate is bisected until the summed
/// estimate drops below max(abs_tol, 50 eps ||f||_1), the roundoff floor.
/// Throws NumericalError after max_pieces pieces.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12, std::size_t max_pieces = 4000) {
    if (a == b) return 0.0;
    double l1 = 0.0;
    std::priority_queue<detail::GkPiece> heap;
    heap.push(detail::gk_piece(f, a, b, l1));
    double value = heap.top().value, error = heap.top().error;
    const double tol = std::max(abs_tol, 50.0 * std::numeric_limits<double>::epsilon() * l1);
    while (error > tol && heap.size() < max_pieces && std::isfinite(value)) {
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        double scratch = 0.0;
        const auto left = detail::gk_piece(f, worst.a, mid, scratch);
        const auto right = detail::gk_piece(f, mid, worst.b, scratch);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    if (error > tol) {
        // the running sums drift by roundoff; recompute before giving up
        value = error = 0.0;
        for (auto h = heap; !h.empty(); h.pop()) {
            value += h.top().value;
            error += h.top().error;
        }
    }
    if (!std::isfinite(value) || error > tol) {
        std::ostringstream msg;
        msg << "adaptive quadrature on [" << a << ", " << b << "] did not converge: error estimate " << error
            << " > tolerance " << tol;
        throw NumericalError(msg.str());
    }
    return value;
}

/// Same, splitting [a, b] at the given interior breakpoints (points outside
/// the interval are ignored). Each piece receives an equal share of abs_tol.
template <class F>
double integrate_piecewise(F&& f, double a, double b, std::vector<double> breaks, double abs_tol = 1e-12) {
    std::vector<double> nodes{a};
    std::sort(breaks.begin(), breaks.end());
    for (double p : breaks)
        if (p > a && p < b) nodes.push_back(p);
    nodes.push_back(b);
    const double share = abs_tol / static_cast<double>(nodes.size() - 1);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) total += integrate_adaptive(f, nodes[k], nodes[k + 1], share);
    return total;
}

}  // namespace vline
