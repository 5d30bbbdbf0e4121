#include <catch_amalgamated.hpp>

#include <cmath>

#include "vline/reconstruct.hpp"

using namespace vline;
using Catch::Approx;

namespace {

ReconConfig small_config(PhantomSpec spec) {
    ReconConfig cfg;
    cfg.grid = 64;
    cfg.vertices = 32;
    cfg.intervals = 40;
    cfg.phantom = std::move(spec);
    return cfg;
}

}  // namespace

TEST_CASE("relative l2 error") {
    const auto b = render_phantom(smiley_phantom(), 64);
    CHECK(relative_l2(b, b) == 0.0);

    ImageGrid scaled = b;
    for (double& v : scaled.values()) v *= 1.1;
    CHECK(relative_l2(scaled, b) == Approx(0.1).margin(1e-12));

    // a perturbation orthogonal to b: supported where b vanishes inside the unit disk
    ImageGrid z(64, 64);
    double zz = 0.0;
    for (std::size_t r = 0; r < 64; ++r)
        for (std::size_t c = 0; c < 64; ++c) {
            const double x = z.x_center(c), y = z.y_center(r);
            if (b.at(r, c) == 0.0 && std::hypot(x, y) < 0.9) {
                z.at(r, c) = 1.0;
                zz += 1.0;
            }
        }
    double bb = 0.0;
    for (double v : b.values()) bb += v * v;
    ImageGrid a = b;
    const double scale = 0.04 * std::sqrt(bb / zz);
    for (std::size_t k = 0; k < a.size(); ++k) a.values()[k] += scale * z.values()[k];
    CHECK(relative_l2(a, b) == Approx(0.04).margin(1e-12));

    CHECK_THROWS_AS(relative_l2(b, ImageGrid(64, 64)), std::invalid_argument);
    CHECK_THROWS_AS(relative_l2(b, ImageGrid(32, 32)), std::invalid_argument);
}

TEST_CASE("correlation") {
    const auto b = render_phantom(smiley_phantom(), 64);
    ImageGrid affine = b;
    for (double& v : affine.values()) v = 3.0 * v - 1.0;
    CHECK(correlation(affine, b) == Approx(1.0).margin(1e-12));
    for (double& v : affine.values()) v = -v;
    CHECK(correlation(affine, b) == Approx(-1.0).margin(1e-12));
    CHECK(correlation(ImageGrid(64, 64), b) == 0.0);
}

TEST_CASE("configuration validation") {
    auto cfg = small_config(disk_phantom());
    CHECK_NOTHROW(cfg.validate());
    auto bad = cfg;
    bad.vertices = 48;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.intervals = 4;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.noise = -0.1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.sinogram = Sinogram(32, 40, 0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.phantom.reset();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.solver.lambda = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("zero data reconstructs to zero") {
    ReconConfig cfg;
    cfg.grid = 64;
    cfg.vertices = 32;
    cfg.intervals = 40;
    cfg.sinogram = Sinogram(32, 40, 0);
    const auto res = reconstruct(cfg);
    for (double v : res.image.values()) CHECK(v == 0.0);
    CHECK_FALSE(res.relative_error.has_value());
    CHECK(relative_l2(res.image, render_phantom(disk_phantom(), 64)) == Approx(1.0).margin(1e-15));
    for (const auto& d : res.orders) CHECK(d.relative_residual == 0.0);

    cfg.weight = 1;
    CHECK_THROWS_AS(reconstruct(cfg), std::invalid_argument);
}

TEST_CASE("pipeline is deterministic and linear") {
    auto cfg = small_config(smiley_phantom());
    cfg.noise = 0.04;
    cfg.seed = 7;
    const auto a = reconstruct(cfg), b = reconstruct(cfg);
    CHECK(a.image.values() == b.image.values());
    CHECK(a.data.values() == b.data.values());

    auto one = small_config(disk_phantom(0.5, 1.0));
    auto two = small_config(disk_phantom(0.5, 2.0));
    const auto r1 = reconstruct(one), r2 = reconstruct(two);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < r1.image.size(); ++k) {
        worst = std::max(worst, std::abs(r2.image.values()[k] - 2.0 * r1.image.values()[k]));
        scale = std::max(scale, std::abs(r1.image.values()[k]));
    }
    CHECK(worst < 1e-10 * scale);
    REQUIRE(r1.relative_error.has_value());
    CHECK(*r1.relative_error == Approx(*r2.relative_error).margin(1e-10));
}

TEST_CASE("regularization ablation on the disk") {
    auto weak = small_config(disk_phantom());
    weak.solver.lambda = 0.015;
    auto strong = weak;
    strong.solver.lambda = 0.5;
    const auto rw = reconstruct(weak), rs = reconstruct(strong);
    CHECK(*rw.relative_error < *rs.relative_error);
    CHECK(*rw.correlation > 0.9);
    REQUIRE(rw.orders.size() == 17);
    CHECK(rw.orders.front().lambda == 0.015);
}

TEST_CASE("triangular method is refused when a diagonal nearly vanishes") {
    auto cfg = small_config(disk_phantom());
    cfg.solver.method = SolveMethod::triangular;
    CHECK_THROWS_AS(reconstruct(cfg), NumericalError);
}

TEST_CASE("profiles are Hermitian across orders") {
    const auto res = reconstruct(small_config(smiley_phantom()));
    for (int l = 1; l < 16; ++l)
        for (std::size_t j = 0; j < 40; ++j) CHECK(res.profiles.at(-l, j) == std::conj(res.profiles.at(l, j)));
}
