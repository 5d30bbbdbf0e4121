#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "vline/kernels.hpp"

using namespace vline;
using Catch::Approx;

namespace {

// Roots of C_l^mu as eigenvalues of the symmetric Jacobi matrix of the monic
// recurrence x p_k = p_{k+1} + b_k p_{k-1}.
std::vector<double> gegenbauer_roots(int l, double mu) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(l, l);
    for (int k = 1; k < l; ++k) {
        const double b = (mu == 0.0) ? (k == 1 ? 0.5 : 0.25)
                                     : k * (k + 2.0 * mu - 1.0) / (4.0 * (k + mu) * (k + mu - 1.0));
        J(k - 1, k) = J(k, k - 1) = std::sqrt(b);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    std::vector<double> roots(eig.eigenvalues().data(), eig.eigenvalues().data() + l);
    return roots;
}

// Diagonal zeros in [a, 1) mapped from Gegenbauer roots x in (0, sqrt(1 - a)].
std::vector<double> expected_zeros(const KernelSpec& spec, double a) {
    std::vector<double> out;
    for (double x : gegenbauer_roots(spec.l, spec.mu()))
        if (x > 1e-9 && x <= std::sqrt(1.0 - a)) out.push_back(1.0 - x * x);
    std::sort(out.begin(), out.end());
    return out;
}

// The F_l expression with sqrt(t - s) replaced by a signed h.
double F_signed(const KernelSpec& spec, double t, double h) {
    const double s = t - h * h;
    double total = 0.0;
    for (int sigma : {1, -1}) {
        const double arg = std::clamp((std::sqrt(t) * h + sigma * (1.0 - t)) / std::sqrt(1.0 - s), -1.0, 1.0);
        total += std::pow(sigma, spec.l) * std::pow(std::sqrt(t) - sigma * h, spec.q()) * gegenbauer(spec.l, spec.mu(), arg);
    }
    return total;
}

}  // namespace

TEST_CASE("kernel spec") {
    CHECK(KernelSpec{2, 0, 3}.q() == 0);
    CHECK(KernelSpec{3, 1, 0}.q() == 2);
    CHECK(KernelSpec{2, -1, 0}.in_uniqueness_regime());
    CHECK_FALSE(KernelSpec{2, -2, 0}.in_uniqueness_regime());
    CHECK_THROWS_AS(kernel_K(KernelSpec{1, 0, 0}, 0.3, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(kernel_K(KernelSpec{2, 0, 2}, 0.6, 0.3), std::domain_error);
    CHECK_THROWS_AS(kernel_F(KernelSpec{2, 0, 2}, 0.3, 0.4), std::domain_error);
    CHECK_THROWS_AS(kernel_F(KernelSpec{2, 0, 2}, 1.0, 1.0), std::domain_error);
}

TEST_CASE("K closed forms for n = 2, m = 0") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double psi = 0.5 * pi * unif(rng);
        const double rho = std::sin(psi) + (1.0 - std::sin(psi)) * unif(rng);
        if (rho <= 0.0) continue;
        CHECK(kernel_K(KernelSpec{2, 0, 0}, psi, rho) == 2.0);
    }
    for (double psi : {0.1, 0.5, 1.0, 1.4}) CHECK(kernel_K(KernelSpec{2, 0, 1}, psi, 1.0) == Approx(2.0 * std::pow(std::sin(psi), 2)).margin(1e-14));
    // on the diagonal rho = sin psi = s both angles are pi/2 -+ psi, so K = 2 cos(pi - 2 psi) = 2 T_2(s)
    for (double s : {0.1, 0.3, 1.0 / std::sqrt(2.0), 0.9}) {
        const double psi = std::asin(s);
        CHECK(kernel_K(KernelSpec{2, 0, 2}, psi, s) == Approx(2.0 * (2.0 * s * s - 1.0)).margin(1e-13));
    }
}

TEST_CASE("K for n = 2 matches the cosine form at random points") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < 10000; ++k) {
        const int l = static_cast<int>(unif(rng) * 17);
        const double s = 0.999 * unif(rng);
        const double rho = s + (1.0 - s) * unif(rng) + 1e-9;
        if (rho > 1.0) continue;
        double ref = 0.0;
        for (int sigma : {1, -1}) ref += std::pow(sigma, l) * std::cos(l * (std::asin(s / rho) - sigma * std::asin(s)));
        CHECK(std::abs(kernel_K(KernelSpec{2, 0, l}, std::asin(s), rho) - ref) < 1e-13);
    }
}

TEST_CASE("F closed forms") {
    for (double t : {0.2, 0.5, 0.99})
        for (double s : {0.0, 0.1, 0.2})
            if (s <= t) CHECK(kernel_F(KernelSpec{2, 0, 0}, t, s) == Approx(2.0).margin(1e-14));
    const KernelSpec spec{3, 0, 4};
    CHECK(std::abs(kernel_F(spec, 0.3, 0.3) - 2.0 * std::pow(0.3, 0.5) * gegenbauer(4, 0.5, std::sqrt(0.7))) < 1e-12);
}

TEST_CASE("F diagonal identity") {
    for (auto [n, m] : {std::pair{2, 0}, {3, 0}, {3, 1}})
        for (int l = 0; l <= 8; ++l) {
            const KernelSpec spec{n, m, l};
            for (int k = 0; k < 50; ++k) {
                const double s = 0.01 + 0.98 * k / 49.0;
                CHECK(std::abs(kernel_F(spec, s, s) - kernel_F_diagonal(spec, s)) < 1e-12);
            }
        }
}

TEST_CASE("K and F agree under t = cos^2 psi, s = 1 - rho^2") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (auto [n, m] : {std::pair{2, 0}, {2, 1}, {3, 0}, {3, 1}})
        for (int l : {0, 1, 2, 5}) {
            const KernelSpec spec{n, m, l};
            for (int k = 0; k < 50; ++k) {
                const double psi = 0.05 + 1.4 * unif(rng);
                const double rho = std::sin(psi) + (1.0 - std::sin(psi)) * (0.02 + 0.96 * unif(rng));
                const double t = std::cos(psi) * std::cos(psi), s = 1.0 - rho * rho;
                const double K = kernel_K(spec, psi, rho);
                const double viaF = std::pow(std::sin(psi), spec.q()) * kernel_F(spec, t, s);
                CHECK(std::abs(K - viaF) <= 1e-10 * std::max(1.0, std::abs(K)));
            }
        }
}

TEST_CASE("F is even in sqrt(t - s)") {
    for (auto [n, m] : {std::pair{2, 0}, {3, 1}})
        for (int l : {1, 2, 3, 6})
            for (double t : {0.3, 0.7})
                for (double h : {0.05, 0.2, 0.5}) {
                    const KernelSpec spec{n, m, l};
                    if (h * h > t) continue;
                    CHECK(F_signed(spec, t, h) == Approx(F_signed(spec, t, -h)).margin(1e-12));
                    CHECK(kernel_F(spec, t, t - h * h) == Approx(F_signed(spec, t, h)).margin(1e-12));
                }
}

TEST_CASE("diagonal zeros") {
    CHECK(diagonal_zeros(KernelSpec{2, 0, 0}).empty());
    const auto z2 = diagonal_zeros(KernelSpec{2, 0, 2}, 0.1);
    REQUIRE(z2.size() == 1);
    CHECK(z2[0] == Approx(0.5).margin(1e-12));
    const auto z3 = diagonal_zeros(KernelSpec{3, 0, 2}, 0.1);
    REQUIRE(z3.size() == 1);
    CHECK(z3[0] == Approx(2.0 / 3.0).margin(1e-12));

    for (int n : {2, 3, 4})
        for (int l = 1; l <= 16; ++l) {
            const KernelSpec spec{n, 0, l};
            const auto found = diagonal_zeros(spec, 0.05);
            const auto expect = expected_zeros(spec, 0.05);
            INFO("n=" << n << " l=" << l);
            REQUIRE(found.size() == expect.size());
            for (std::size_t k = 0; k < found.size(); ++k) CHECK(found[k] == Approx(expect[k]).margin(1e-10));
            CHECK(std::is_sorted(found.begin(), found.end()));
        }
}

TEST_CASE("uniqueness condition at every diagonal zero") {
    for (auto [n, m] : {std::pair{2, 0}, {3, 0}, {3, 1}, {2, 1}})
        for (int l = 1; l <= 8; ++l) {
            const KernelSpec spec{n, m, l};
            for (const auto& r : check_uniqueness_condition(spec)) {
                INFO("n=" << n << " m=" << m << " l=" << l << " s0=" << r.s0);
                CHECK(r.expected == m + 0.5 * (n + 1));
                CHECK(std::abs(r.value - r.expected) < 1e-4);
                CHECK(r.slope_rel_error < 1e-6);
                CHECK(r.value_volterra == Approx(r.value).epsilon(1e-12));
                CHECK_FALSE(r.zero_denominator);
                CHECK(r.pass);
            }
        }
}

TEST_CASE("Volterra kernel") {
    for (double u : {0.1, 0.5, 0.9})
        CHECK(volterra_kernel_V(KernelSpec{2, 0, 0}, u, 0.05) == Approx(2.0 * pi).epsilon(1e-12));

    std::mt19937 rng(13);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    for (auto spec : {KernelSpec{2, 0, 3}, KernelSpec{3, 1, 4}}) {
        for (int k = 0; k < 20; ++k) {
            const double s = unif(rng);
            const double F = kernel_F(spec, s, s);
            if (std::abs(F) < 1e-6) continue;
            CHECK(volterra_kernel_V(spec, s, s) == Approx(pi * F).epsilon(1e-8));
        }
        for (double s0 : diagonal_zeros(spec)) {
            const auto r = check_volterra_slope(spec, s0);
            INFO("s0=" << s0 << " dV=" << r.dV_du << " ref=" << r.half_pi_beta1);
            CHECK(r.rel_error < 1e-4);
        }
    }
}
