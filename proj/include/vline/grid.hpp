#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace vline {

inline constexpr double default_support_margin = 0.05;

/// Square image on [-1,1]^2 sampled at pixel centers, row-major with row q at
/// y_q and column p at x_p, where x_p = (2p + 1 - width) / width.
///
/// The support margin eps states that every pixel whose center lies at
/// radius >= 1 - eps holds exactly zero. Grids produced by the phantom
/// renderers always satisfy it; use satisfies_support() for foreign data.
class ImageGrid {
public:
    ImageGrid() = default;

    ImageGrid(std::size_t width, std::size_t height, double margin = default_support_margin)
        : width_(width), height_(height), margin_(margin), values_(width * height, 0.0) {
        validate_shape();
    }

    ImageGrid(std::size_t width, std::size_t height, double margin, std::vector<double> values)
        : width_(width), height_(height), margin_(margin), values_(std::move(values)) {
        validate_shape();
        if (values_.size() != width_ * height_)
            throw std::invalid_argument("ImageGrid: value count does not match width*height");
    }

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return values_.size(); }
    double margin() const { return margin_; }

    double x_center(std::size_t col) const { return center(col, width_); }
    double y_center(std::size_t row) const { return center(row, height_); }

    double& at(std::size_t row, std::size_t col) { return values_[row * width_ + col]; }
    double at(std::size_t row, std::size_t col) const { return values_[row * width_ + col]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// True when all pixels with center radius >= 1 - margin are zero.
    bool satisfies_support() const {
        const double limit = 1.0 - margin_;
        for (std::size_t r = 0; r < height_; ++r) {
            const double y = y_center(r);
            for (std::size_t c = 0; c < width_; ++c) {
                const double x = x_center(c);
                if (std::sqrt(x * x + y * y) >= limit && at(r, c) != 0.0) return false;
            }
        }
        return true;
    }

    /// Largest |value| over pixels at radius >= 1 - margin.
    double max_outside_support() const {
        const double limit = 1.0 - margin_;
        double worst = 0.0;
        for (std::size_t r = 0; r < height_; ++r)
            for (std::size_t c = 0; c < width_; ++c) {
                const double x = x_center(c), y = y_center(r);
                if (std::sqrt(x * x + y * y) >= limit) worst = std::max(worst, std::abs(at(r, c)));
            }
        return worst;
    }

private:
    static double center(std::size_t idx, std::size_t n) {
        // Integer numerator keeps x_{n-1-p} == -x_p bit for bit.
        return (2.0 * static_cast<double>(idx) + 1.0 - static_cast<double>(n)) / static_cast<double>(n);
    }

    void validate_shape() const {
        if (width_ == 0 || height_ == 0) throw std::invalid_argument("ImageGrid: dimensions must be positive");
        if (!(margin_ >= 0.0 && margin_ < 1.0)) throw std::invalid_argument("ImageGrid: margin must lie in [0,1)");
    }

    std::size_t width_ = 0;
    std::size_t height_ = 0;
    double margin_ = default_support_margin;
    std::vector<double> values_;
};

/// Bilinear interpolation between the four surrounding pixel centers.
/// Points outside the hull of pixel centers evaluate to 0.
inline double sample_bilinear(const ImageGrid& grid, double x, double y) {
    const auto w = static_cast<double>(grid.width());
    const auto h = static_cast<double>(grid.height());
    const double u = (x + 1.0) * 0.5 * w - 0.5;
    const double v = (y + 1.0) * 0.5 * h - 0.5;
    if (!(u >= 0.0 && v >= 0.0 && u <= w - 1.0 && v <= h - 1.0)) return 0.0;

    auto c0 = static_cast<std::size_t>(u);
    auto r0 = static_cast<std::size_t>(v);
    if (c0 + 1 >= grid.width()) c0 = grid.width() >= 2 ? grid.width() - 2 : 0;
    if (r0 + 1 >= grid.height()) r0 = grid.height() >= 2 ? grid.height() - 2 : 0;
    const std::size_t c1 = std::min(c0 + 1, grid.width() - 1);
    const std::size_t r1 = std::min(r0 + 1, grid.height() - 1);
    const double fu = u - static_cast<double>(c0);
    const double fv = v - static_cast<double>(r0);

    const double bottom = (1.0 - fu) * grid.at(r0, c0) + fu * grid.at(r0, c1);
    const double top = (1.0 - fu) * grid.at(r1, c0) + fu * grid.at(r1, c1);
    return (1.0 - fv) * bottom + fv * top;
}

/// 90 degree counter-clockwise rotation of a square grid about the origin.
inline ImageGrid rotate90(const ImageGrid& grid) {
    if (grid.width() != grid.height()) throw std::invalid_argument("rotate90: grid must be square");
    const std::size_t n = grid.width();
    ImageGrid out(n, n, grid.margin());
    // (x, y) -> (-y, x): output pixel (row r, col c) takes input (row n-1-c, col r)
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) out.at(r, c) = grid.at(n - 1 - c, r);
    return out;
}

}  // namespace vline
