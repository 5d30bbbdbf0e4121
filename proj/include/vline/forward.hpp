#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "core.hpp"
#include "grid.hpp"
#include "sinogram.hpp"

namespace vline {

struct ForwardOptions {
    /// Ray quadrature spacing; 0 selects 1 / (2 * width).
    double step = 0.0;
};

/// Weighted V-line transform of an image whose support lies inside the unit disk.
///
/// Entry (k, i) is sum_{sigma=+-1} int_0^2 f(z_k - r e(phi_k - sigma psi_i)) r^m dr,
/// z_k = e(phi_k) = (cos phi_k, sin phi_k), by the composite trapezoidal rule on
/// the image's bilinear interpolant. Rays stop at r = 2, the longest chord.
inline Sinogram vline_forward(const ImageGrid& grid, std::size_t M, std::size_t N, int m, ForwardOptions opts = {}) {
    if (!is_power_of_two(M)) throw std::invalid_argument("vline_forward: M must be a power of two");
    if (N < 8) throw std::invalid_argument("vline_forward: N must be at least 8");
    double step = opts.step == 0.0 ? 1.0 / (2.0 * static_cast<double>(grid.width())) : opts.step;
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("vline_forward: step must be positive");
    if (!grid.satisfies_support())
        throw std::invalid_argument("vline_forward: image is nonzero at radius >= 1 - margin (support invariant violated)");

    const auto n_steps = static_cast<std::size_t>(std::ceil(2.0 / step - 1e-9));
    const double h = 2.0 / static_cast<double>(n_steps);

    // r^m on the ray nodes; the r = 0 node sits on the unit circle where f = 0.
    std::vector<double> weights(n_steps + 1);
    for (std::size_t j = 0; j <= n_steps; ++j) {
        const double r = h * static_cast<double>(j);
        double w = (j == 0) ? (m == 0 ? 1.0 : 0.0) : ipow(r, m);
        if (j == 0 || j == n_steps) w *= 0.5;
        weights[j] = w * h;
    }

    Sinogram sino(M, N, m);
    parallel_for(M, [&](std::size_t k) {
        const double phi = sino.phi(k);
        const double zx = std::cos(phi), zy = std::sin(phi);
        for (std::size_t i = 0; i <= N; ++i) {
            const double psi = sino.psi(i);
            double total = 0.0;
            for (int sigma : {1, -1}) {
                const double dir = phi - sigma * psi;
                const double dx = std::cos(dir), dy = std::sin(dir);
                double acc = 0.0;
                for (std::size_t j = 0; j <= n_steps; ++j) {
                    const double r = h * static_cast<double>(j);
                    acc += weights[j] * sample_bilinear(grid, zx - r * dx, zy - r * dy);
                }
                total += acc;
            }
            sino.at(k, i) = total;
        }
    });
    return sino;
}

inline double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// g + z with z i.i.d. Gaussian, rescaled so that ||z||_2 / ||g||_2 = rel_level.
/// Deterministic for a given seed.
inline Sinogram add_noise(const Sinogram& sino, double rel_level, std::uint64_t seed) {
    if (!(rel_level >= 0.0) || !std::isfinite(rel_level)) throw std::invalid_argument("add_noise: rel_level must be >= 0");
    Sinogram out = sino;
    if (rel_level == 0.0) return out;
    const double g_norm = l2_norm(sino.values());
    if (g_norm == 0.0) throw std::invalid_argument("add_noise: cannot scale relative noise on an all-zero sinogram");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> z(sino.values().size());
    for (double& x : z) x = gauss(rng);
    const double scale = rel_level * g_norm / l2_norm(z);
    for (std::size_t k = 0; k < z.size(); ++k) out.values()[k] += scale * z[k];
    return out;
}

struct NormReport {
    double l1_image = 0.0;
    double l2_image = 0.0;
    double l1_sino = 0.0;
    double l2_sino = 0.0;
    /// l1_sino / l1_image (0 for a zero image)
    double ratio_l1 = 0.0;
};

/// Discrete L1/L2 norms: pixel area (2/W)(2/H) on the image, (2 pi / M) dpsi_i
/// on the sinogram (unnormalized arc length on the vertex circle).
inline NormReport norm_report(const ImageGrid& grid, const Sinogram& sino) {
    NormReport r;
    const double area = (2.0 / static_cast<double>(grid.width())) * (2.0 / static_cast<double>(grid.height()));
    for (double v : grid.values()) {
        r.l1_image += std::abs(v) * area;
        r.l2_image += v * v * area;
    }
    const double dphi = 2.0 * pi / static_cast<double>(sino.vertices());
    for (std::size_t k = 0; k < sino.vertices(); ++k)
        for (std::size_t i = 0; i < sino.columns(); ++i) {
            const double w = dphi * sino.psi_cell(i);
            const double v = sino.at(k, i);
            r.l1_sino += std::abs(v) * w;
            r.l2_sino += v * v * w;
        }
    r.l2_image = std::sqrt(r.l2_image);
    r.l2_sino = std::sqrt(r.l2_sino);
    r.ratio_l1 = r.l1_image > 0.0 ? r.l1_sino / r.l1_image : 0.0;
    return r;
}

}  // namespace vline
