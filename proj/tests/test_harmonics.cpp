#include <catch_amalgamated.hpp>

#include <cmath>

#include "vline/forward.hpp"
#include "vline/harmonics.hpp"
#include "vline/phantom.hpp"
#include "vline/radial_transform.hpp"
#include "vline/reconstruct.hpp"

using namespace vline;
using Catch::Approx;

TEST_CASE("order table indexing") {
    HarmonicTable t(8, 5);
    CHECK(t.min_order() == -4);
    CHECK(t.max_order() == 3);
    CHECK(t.columns() == 6);
    CHECK_THROWS_AS(t.at(4, 0), std::out_of_range);
    CHECK_THROWS_AS(t.at(-5, 0), std::out_of_range);
    t.at(-4, 2) = {1.0, 2.0};
    CHECK(t.order(-4)[2] == complex(1.0, 2.0));
    CHECK(RadialProfileSet(8, 5).rho(0) == Approx(0.1));
}

TEST_CASE("decompose of simple rows") {
    const std::size_t M = 32, N = 8;
    SECTION("constant rows") {
        Sinogram s(M, N, 0);
        for (std::size_t k = 0; k < M; ++k)
            for (std::size_t i = 0; i <= N; ++i) s.at(k, i) = 0.75;
        const auto g = decompose(s);
        for (std::size_t i = 0; i <= N; ++i)
            for (int l = g.min_order(); l <= g.max_order(); ++l) {
                const complex expect = (l == 0) ? complex(2.0 * pi * 0.75) : complex(0.0);
                CHECK(std::abs(g.at(l, i) - expect) < 1e-12);
            }
    }
    SECTION("cosine rows") {
        Sinogram s(M, N, 0);
        for (std::size_t k = 0; k < M; ++k)
            for (std::size_t i = 0; i <= N; ++i) s.at(k, i) = std::cos(3.0 * s.phi(k));
        const auto g = decompose(s);
        for (int l = g.min_order(); l <= g.max_order(); ++l) {
            const complex expect = (l == 3 || l == -3) ? complex(pi) : complex(0.0);
            CHECK(std::abs(g.at(l, 4) - expect) < 1e-12);
        }
    }
    CHECK_THROWS_AS(decompose(Sinogram(12, 8, 0)), std::invalid_argument);
}

TEST_CASE("Parseval, Hermitian symmetry and inversion") {
    const auto sino = vline_forward(render_phantom(smiley_phantom(), 96), 64, 40, 0);
    const auto g = decompose(sino);
    const std::size_t M = sino.vertices();
    for (std::size_t i = 0; i <= 40; i += 5) {
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t k = 0; k < M; ++k) lhs += sino.at(k, i) * sino.at(k, i);
        lhs *= 2.0 * pi / static_cast<double>(M);
        for (int l = g.min_order(); l <= g.max_order(); ++l) rhs += std::norm(g.at(l, i));
        rhs /= 2.0 * pi;
        CHECK(lhs == Approx(rhs).epsilon(1e-10));
    }
    for (int l = 1; l <= g.max_order(); ++l)
        for (std::size_t i = 0; i <= 40; ++i) CHECK(std::abs(g.at(-l, i) - std::conj(g.at(l, i))) < 1e-12);

    const auto [back, imag] = recompose(g, 0);
    CHECK(imag < 1e-12);
    for (std::size_t k = 0; k < sino.values().size(); ++k) CHECK(std::abs(back.values()[k] - sino.values()[k]) < 1e-12);
}

TEST_CASE("decompose is linear") {
    const auto a = vline_forward(render_phantom(smiley_phantom(), 64), 16, 12, 1);
    const auto b = vline_forward(render_phantom(disk_phantom(0.4, 1.0), 64), 16, 12, 1);
    Sinogram c(16, 12, 1);
    for (std::size_t k = 0; k < c.values().size(); ++k) c.values()[k] = 0.5 * a.values()[k] + 2.0 * b.values()[k];
    const auto ga = decompose(a), gb = decompose(b), gc = decompose(c);
    for (std::size_t k = 0; k < gc.data().size(); ++k) CHECK(std::abs(gc.data()[k] - (0.5 * ga.data()[k] + 2.0 * gb.data()[k])) < 1e-12);
}

TEST_CASE("synthesis") {
    SECTION("zero profiles") {
        const auto img = synthesize(RadialProfileSet(16, 20), 33);
        for (double v : img.values()) CHECK(v == 0.0);
    }
    SECTION("order 0 only is rotation invariant") {
        RadialProfileSet p(16, 20);
        for (std::size_t j = 0; j < 20; ++j) p.at(0, j) = std::exp(-3.0 * p.rho(j));
        const auto img = synthesize(p, 64);
        const auto rot = rotate90(img);
        for (std::size_t k = 0; k < img.size(); ++k) CHECK(std::abs(rot.values()[k] - img.values()[k]) < 1e-14);
        CHECK(img.margin() == 0.0);
    }
    SECTION("interpolation between midpoints and outside the unit disk") {
        RadialProfileSet p(4, 10);
        for (std::size_t j = 0; j < 10; ++j) p.at(0, j) = 2.0 * pi * (1.0 + static_cast<double>(j));
        const auto img = synthesize(p, 101);
        // r = 0 lies below rho_0: constant extrapolation
        CHECK(img.at(50, 50) == Approx(1.0).margin(1e-14));
        // r = 0.4 sits between rho_3 = 0.35 and rho_4 = 0.45
        const std::size_t col = 70;
        const double r = img.x_center(col);
        const double t = r * 10.0 - 0.5;
        CHECK(img.at(50, col) == Approx(1.0 + t).margin(1e-12));
        CHECK(img.at(0, 0) == 0.0);
    }
    SECTION("Hermitian profiles give a real image") {
        const auto g = decompose(vline_forward(render_phantom(smiley_phantom(), 96), 64, 40, 0));
        RadialProfileSet p(64, 40);
        for (int l = p.min_order(); l <= p.max_order(); ++l)
            for (std::size_t j = 0; j < 40; ++j) p.at(l, j) = g.at(l, j);
        CHECK(synthesize_detailed(p, 96).max_imag < 1e-10);
    }
    CHECK_THROWS_AS(synthesize(RadialProfileSet(16, 20), 8), std::invalid_argument);
}

TEST_CASE("order 2 round trip through the analytic profile") {
    const RadialProfile bump{ProfileKind::bump, 0.8};
    const std::size_t M = 64, N = 150, size = 151;
    const auto truth = render_phantom(PhantomSpec{{Harmonic{2, bump, 1.0}}}, size);
    const auto g = decompose(vline_forward(truth, M, N, 0));

    // p(r) cos 2a = (p e^{2ia} + p e^{-2ia}) / 2, so g_{+-2} = pi G_2 with G_2 the 1D transform
    const auto f = make_radial(bump);
    for (std::size_t i = 5; i < N; i += 5) {
        const double G = glk2_rho_integral(f, 2, 0, 2, std::asin(g.s(i)));
        CHECK(std::abs(g.at(2, i) - complex(pi * G)) < 2e-3);
        CHECK(std::abs(g.at(1, i)) < 1e-10);
    }

    // f_{+-2}(rho) = pi p(rho) in the (1 / 2 pi) synthesis convention
    RadialProfileSet p(M, N);
    for (std::size_t j = 0; j < N; ++j) p.at(2, j) = p.at(-2, j) = pi * bump(p.rho(j));
    const auto img = synthesize(p, size);
    CHECK(relative_l2(img, truth) < 0.05);
}
