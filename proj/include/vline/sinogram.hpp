#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core.hpp"

namespace vline {

/// Samples of the weighted V-line transform on M vertices phi_k = 2 pi k / M
/// times N + 1 opening angles psi_i = arcsin(i / N). Row-major in (k, i).
class Sinogram {
public:
    Sinogram() = default;

    Sinogram(std::size_t vertices, std::size_t intervals, int weight)
        : M_(vertices), N_(intervals), m_(weight), values_(vertices * (intervals + 1), 0.0) {
        validate();
    }

    Sinogram(std::size_t vertices, std::size_t intervals, int weight, std::vector<double> values)
        : M_(vertices), N_(intervals), m_(weight), values_(std::move(values)) {
        validate();
        if (values_.size() != M_ * (N_ + 1)) throw std::invalid_argument("Sinogram: value count must be M*(N+1)");
    }

    std::size_t vertices() const { return M_; }
    std::size_t intervals() const { return N_; }
    std::size_t columns() const { return N_ + 1; }
    int weight() const { return m_; }

    double phi(std::size_t k) const { return 2.0 * pi * static_cast<double>(k) / static_cast<double>(M_); }
    double s(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(N_); }
    double psi(std::size_t i) const { return i == N_ ? 0.5 * pi : std::asin(s(i)); }

    double& at(std::size_t k, std::size_t i) { return values_[k * (N_ + 1) + i]; }
    double at(std::size_t k, std::size_t i) const { return values_[k * (N_ + 1) + i]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Width of the psi cell around column i (trapezoid weights on the
    /// nonuniform arcsin grid); the widths sum to pi/2.
    double psi_cell(std::size_t i) const {
        if (i == 0) return 0.5 * (psi(1) - psi(0));
        if (i == N_) return 0.5 * (psi(N_) - psi(N_ - 1));
        return 0.5 * (psi(i + 1) - psi(i - 1));
    }

private:
    void validate() const {
        if (M_ == 0) throw std::invalid_argument("Sinogram: need at least one vertex");
        if (N_ == 0) throw std::invalid_argument("Sinogram: need at least one opening-angle interval");
    }

    std::size_t M_ = 0;
    std::size_t N_ = 0;
    int m_ = 0;
    std::vector<double> values_;
};

}  // namespace vline
