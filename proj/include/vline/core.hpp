#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace vline {

inline constexpr double pi = std::numbers::pi;

/// Raised when a numerical procedure cannot deliver a trustworthy result
/// (quadrature that does not converge, a singular system, ...). Input
/// validation problems use std::invalid_argument / std::domain_error instead.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

/// Integer power; exponent may be negative. 0^0 == 1.
inline double ipow(double base, int exponent) {
    if (exponent < 0) return 1.0 / ipow(base, -exponent);
    double result = 1.0;
    while (exponent) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

/// Surface area of the unit sphere S^{d} embedded in R^{d+1}; S^0 is two points.
inline double sphere_area(int d) {
    if (d < 0) throw std::invalid_argument("sphere_area: negative dimension");
    // |S^d| = 2 pi^{(d+1)/2} / Gamma((d+1)/2), via the recursion |S^d| = 2pi/(d-1) |S^{d-2}|
    double area = (d % 2 == 0) ? 2.0 : 2.0 * pi;
    for (int k = (d % 2 == 0) ? 2 : 3; k <= d; k += 2) area *= 2.0 * pi / (k - 1);
    return area;
}

/// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
/// Each index is handled by exactly one thread, so results that only depend on
/// i are independent of the thread count.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min(hw, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace vline
