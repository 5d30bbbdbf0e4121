#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abel_solver.hpp"
#include "core.hpp"
#include "forward.hpp"
#include "grid.hpp"
#include "harmonics.hpp"
#include "phantom.hpp"
#include "sinogram.hpp"

namespace vline {

/// ||a - b||_2 / ||b||_2 over all pixels.
inline double relative_l2(const ImageGrid& a, const ImageGrid& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw std::invalid_argument("relative_l2: grids differ in size");
    double diff = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a.values()[k] - b.values()[k];
        diff += d * d;
        ref += b.values()[k] * b.values()[k];
    }
    if (ref == 0.0) throw std::invalid_argument("relative_l2: reference image is zero");
    return std::sqrt(diff / ref);
}

/// Pearson correlation coefficient of the pixel values (0 if either image is constant).
inline double correlation(const ImageGrid& a, const ImageGrid& b) {
    if (a.size() != b.size()) throw std::invalid_argument("correlation: grids differ in size");
    const auto n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ma += a.values()[k];
        mb += b.values()[k];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double da = a.values()[k] - ma, db = b.values()[k] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

struct ReconConfig {
    std::size_t grid = 301;
    std::size_t vertices = 256;
    /// opening-angle intervals N (N + 1 samples in s)
    std::size_t intervals = 300;
    int weight = 0;
    SolveConfig solver{};
    double noise = 0.0;
    std::uint64_t seed = 1;
    /// ray quadrature spacing for simulated data; 0 = 1 / (2 grid)
    double step = 0.0;

    /// exactly one of these is the input
    std::optional<PhantomSpec> phantom;
    std::optional<Sinogram> sinogram;

    void validate() const {
        if (grid < 16) throw std::invalid_argument("ReconConfig: grid must be at least 16");
        if (!is_power_of_two(vertices)) throw std::invalid_argument("ReconConfig: vertices must be a power of two");
        if (intervals < 8) throw std::invalid_argument("ReconConfig: intervals must be at least 8");
        if (weight < 0) throw std::invalid_argument("ReconConfig: weight must be >= 0");
        if (!(noise >= 0.0)) throw std::invalid_argument("ReconConfig: noise level must be >= 0");
        if (phantom.has_value() == sinogram.has_value())
            throw std::invalid_argument("ReconConfig: provide exactly one of phantom or sinogram");
        solver.validate();
    }
};

struct OrderDiagnostics {
    int order = 0;
    /// ||A f - b|| / ||b|| (0 when b = 0)
    double relative_residual = 0.0;
    double lambda = 0.0;
};

struct ReconTimings {
    double forward_s = 0.0;
    double decompose_s = 0.0;
    double solve_s = 0.0;
    double synthesize_s = 0.0;
};

struct ReconResult {
    ImageGrid image;
    RadialProfileSet profiles;
    Sinogram data;
    std::optional<ImageGrid> ground_truth;
    std::optional<double> relative_error;
    std::optional<double> correlation;
    std::vector<OrderDiagnostics> orders;
    ReconTimings timings;
};

/// Solves every order l = 0..M/2 and mirrors f_{-l} = conj(f_l); l = M/2 fills
/// the Nyquist slot -M/2.
inline RadialProfileSet solve_all_orders(const HarmonicTable& table, int weight, const SolveConfig& cfg,
                                         std::vector<OrderDiagnostics>* diagnostics = nullptr) {
    cfg.validate();
    const std::size_t M = table.vertices(), N = table.intervals();
    const int half = static_cast<int>(M / 2);
    std::vector<AbelSystem> systems(static_cast<std::size_t>(half + 1));
    parallel_for(systems.size(), [&](std::size_t l) {
        systems[l] = assemble(KernelSpec{2, weight, static_cast<int>(l)}, N);
    });

    if (cfg.method == SolveMethod::triangular) {
        for (const auto& sys : systems)
            if (has_near_zero_diagonal(sys))
                throw NumericalError("triangular solve refused: order l = " + std::to_string(sys.spec.l) +
                                     " has a near-zero diagonal; use --method tikhonov or tsvd");
    }

    RadialProfileSet profiles(M, N);
    std::vector<OrderDiagnostics> diag(systems.size());
    parallel_for(systems.size(), [&](std::size_t idx) {
        const int l = static_cast<int>(idx);
        const int slot = (l == half) ? -half : l;
        const auto& sys = systems[idx];
        const auto b = build_rhs(sys, table.order(slot));
        const auto f = solve(sys, b, cfg);

        double res = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            std::complex<double> af = 0.0;
            for (std::size_t j = i; j < N; ++j)
                af += sys.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * f[j];
            res += std::norm(af - b[i]);
            ref += std::norm(b[i]);
        }
        diag[idx] = {l, ref > 0.0 ? std::sqrt(res / ref) : 0.0,
                     cfg.method == SolveMethod::tikhonov ? cfg.lambda_for(l) : 0.0};

        for (std::size_t j = 0; j < N; ++j) {
            profiles.at(slot, j) = f[j];
            if (l != 0 && l != half) profiles.at(-l, j) = std::conj(f[j]);
        }
    });
    if (diagnostics) *diagnostics = std::move(diag);
    return profiles;
}

/// End-to-end: simulate (or take) data, angular decomposition, per-order
/// Abel solves, synthesis.
inline ReconResult reconstruct(const ReconConfig& cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    auto seconds = [](clock::time_point a, clock::time_point b) { return std::chrono::duration<double>(b - a).count(); };

    ReconResult out;
    auto t0 = clock::now();
    if (cfg.phantom) {
        out.ground_truth = render_phantom(*cfg.phantom, cfg.grid);
        out.data = vline_forward(*out.ground_truth, cfg.vertices, cfg.intervals, cfg.weight, ForwardOptions{cfg.step});
    } else {
        out.data = *cfg.sinogram;
        if (out.data.weight() != cfg.weight)
            throw std::invalid_argument("reconstruct: sinogram weight m differs from the configured weight");
    }
    if (cfg.noise > 0.0) out.data = add_noise(out.data, cfg.noise, cfg.seed);
    auto t1 = clock::now();

    const HarmonicTable table = decompose(out.data);
    auto t2 = clock::now();
    out.profiles = solve_all_orders(table, cfg.weight, cfg.solver, &out.orders);
    auto t3 = clock::now();
    out.image = synthesize(out.profiles, cfg.grid);
    auto t4 = clock::now();

    out.timings = {seconds(t0, t1), seconds(t1, t2), seconds(t2, t3), seconds(t3, t4)};
    if (out.ground_truth) {
        double norm = 0.0;
        for (double v : out.ground_truth->values()) norm += v * v;
        if (norm > 0.0) out.relative_error = relative_l2(out.image, *out.ground_truth);
        out.correlation = correlation(out.image, *out.ground_truth);
    }
    return out;
}

}  // namespace vline
