#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "core.hpp"
#include "grid.hpp"
#include "sinogram.hpp"

namespace vline {

using complex = std::complex<double>;

/// Table of complex coefficients indexed by angular order l in [-M/2, M/2)
/// and a second index in [0, columns). Base for the harmonic data g_l(s_i)
/// and the recovered radial profiles f_l(rho_j).
class OrderTable {
public:
    OrderTable() = default;
    OrderTable(std::size_t M, std::size_t N, std::size_t columns)
        : M_(M), N_(N), cols_(columns), data_(M * columns) {
        if (M == 0 || M % 2 != 0) throw std::invalid_argument("harmonic table: M must be positive and even");
    }

    std::size_t vertices() const { return M_; }
    std::size_t intervals() const { return N_; }
    std::size_t columns() const { return cols_; }
    int min_order() const { return -static_cast<int>(M_ / 2); }
    int max_order() const { return static_cast<int>(M_ / 2) - 1; }

    complex& at(int l, std::size_t col) { return data_[row(l) * cols_ + col]; }
    const complex& at(int l, std::size_t col) const { return data_[row(l) * cols_ + col]; }

    /// Contiguous coefficients of one order.
    std::vector<complex> order(int l) const {
        const auto first = data_.begin() + static_cast<std::ptrdiff_t>(row(l) * cols_);
        return {first, first + static_cast<std::ptrdiff_t>(cols_)};
    }
    void set_order(int l, const std::vector<complex>& values) {
        if (values.size() != cols_) throw std::invalid_argument("harmonic table: wrong row length");
        std::copy(values.begin(), values.end(), data_.begin() + static_cast<std::ptrdiff_t>(row(l) * cols_));
    }

    const std::vector<complex>& data() const { return data_; }
    std::vector<complex>& data() { return data_; }

private:
    std::size_t row(int l) const {
        if (l < min_order() || l > max_order()) throw std::out_of_range("harmonic table: order out of range");
        return static_cast<std::size_t>(l - min_order());
    }

    std::size_t M_ = 0, N_ = 0, cols_ = 0;
    std::vector<complex> data_;
};

/// g_l(s_i) ~ int_0^{2 pi} (Rf)(alpha, arcsin s_i) e^{-i l alpha} dalpha, i = 0..N.
class HarmonicTable : public OrderTable {
public:
    HarmonicTable() = default;
    HarmonicTable(std::size_t M, std::size_t N) : OrderTable(M, N, N + 1) {}
    double s(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(intervals()); }
};

/// Recovered f_l at the radial midpoints rho_j = (j + 1/2) / N, j = 0..N-1.
class RadialProfileSet : public OrderTable {
public:
    RadialProfileSet() = default;
    RadialProfileSet(std::size_t M, std::size_t N) : OrderTable(M, N, N) {}
    double rho(std::size_t j) const { return (static_cast<double>(j) + 0.5) / static_cast<double>(intervals()); }
};

/// Angular Fourier analysis of every opening-angle column: length-M DFT over the
/// vertex index scaled by 2 pi / M and reindexed to l in [-M/2, M/2).
inline HarmonicTable decompose(const Sinogram& sino) {
    const std::size_t M = sino.vertices();
    if (!is_power_of_two(M) || M < 2) throw std::invalid_argument("decompose: M must be a power of two >= 2");
    HarmonicTable table(M, sino.intervals());
    Eigen::FFT<double> fft;
    std::vector<complex> in(M), out(M);
    const double scale = 2.0 * pi / static_cast<double>(M);
    const int half = static_cast<int>(M / 2);
    for (std::size_t i = 0; i < sino.columns(); ++i) {
        for (std::size_t k = 0; k < M; ++k) in[k] = sino.at(k, i);
        fft.fwd(out, in);
        for (int l = -half; l < half; ++l) {
            const auto bin = static_cast<std::size_t>((l + static_cast<int>(M)) % static_cast<int>(M));
            table.at(l, i) = scale * out[bin];
        }
    }
    return table;
}

/// Inverse of decompose: inverse DFT with factor M / (2 pi). Returns the real
/// part and the largest discarded imaginary part.
inline std::pair<Sinogram, double> recompose(const HarmonicTable& table, int weight) {
    const std::size_t M = table.vertices();
    Sinogram sino(M, table.intervals(), weight);
    Eigen::FFT<double> fft;  // inv() includes the 1/M factor
    std::vector<complex> in(M), out(M);
    const double scale = static_cast<double>(M) / (2.0 * pi);
    const int half = static_cast<int>(M / 2);
    double max_imag = 0.0;
    for (std::size_t i = 0; i < table.columns(); ++i) {
        for (int l = -half; l < half; ++l)
            in[static_cast<std::size_t>((l + static_cast<int>(M)) % static_cast<int>(M))] = table.at(l, i);
        fft.inv(out, in);
        for (std::size_t k = 0; k < M; ++k) {
            sino.at(k, i) = scale * out[k].real();
            max_imag = std::max(max_imag, std::abs(scale * out[k].imag()));
        }
    }
    return {std::move(sino), max_imag};
}

/// Linear interpolation of midpoint samples: constant below rho_0, constant
/// between rho_{N-1} and 1, zero from r = 1 on. Returns {lower index, weight of upper}.
inline std::pair<std::size_t, double> profile_stencil(double r, std::size_t N) {
    const double t = r * static_cast<double>(N) - 0.5;
    if (t <= 0.0) return {0, 0.0};
    if (t >= static_cast<double>(N - 1)) return {N - 1, 0.0};
    const auto j = static_cast<std::size_t>(t);
    return {j, t - static_cast<double>(j)};
}

struct SynthesisResult {
    ImageGrid image;
    /// max |Im| of (1/2pi) sum_l f_l(r) e^{i l alpha} over the pixels
    double max_imag = 0.0;
};

/// f(r (cos a, sin a)) = (1 / 2 pi) Re sum_l f_l(r) e^{i l a} at every pixel
/// center with r < 1; the output grid has margin 0 (zero for r >= 1).
/// The unpaired Nyquist order l = -M/2 enters with cos(M a / 2), the symmetric
/// split of that bin, so Hermitian input gives a real sum.
inline SynthesisResult synthesize_detailed(const RadialProfileSet& profiles, std::size_t size) {
    if (size < 16) throw std::invalid_argument("synthesize: size must be at least 16");
    const std::size_t N = profiles.intervals();
    const int lo = profiles.min_order(), hi = profiles.max_order();
    SynthesisResult result{ImageGrid(size, size, 0.0), 0.0};
    ImageGrid& img = result.image;
    std::vector<double> row_imag(size, 0.0);

    parallel_for(size, [&](std::size_t row) {
        const double y = img.y_center(row);
        double worst = 0.0;
        for (std::size_t col = 0; col < size; ++col) {
            const double x = img.x_center(col);
            const double r = std::sqrt(x * x + y * y);
            if (r >= 1.0) continue;
            const auto [j, w] = profile_stencil(r, N);
            const std::size_t j1 = std::min(j + 1, N - 1);
            const double alpha = std::atan2(y, x);
            const complex step = std::polar(1.0, alpha);
            complex phase = std::polar(1.0, (lo + 1) * alpha);
            complex sum = ((1.0 - w) * profiles.at(lo, j) + w * profiles.at(lo, j1)) * std::cos(lo * alpha);
            for (int l = lo + 1; l <= hi; ++l) {
                const complex f = (1.0 - w) * profiles.at(l, j) + w * profiles.at(l, j1);
                sum += f * phase;
                phase *= step;
            }
            sum /= 2.0 * pi;
            img.at(row, col) = sum.real();
            worst = std::max(worst, std::abs(sum.imag()));
        }
        row_imag[row] = worst;
    });
    for (double v : row_imag) result.max_imag = std::max(result.max_imag, v);
    return result;
}

inline ImageGrid synthesize(const RadialProfileSet& profiles, std::size_t size) {
    return synthesize_detailed(profiles, size).image;
}

}  // namespace vline
