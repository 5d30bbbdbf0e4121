#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SVD>

#include "core.hpp"
#include "kernels.hpp"

namespace vline {

/// Product-integration weight int_{s_j}^{s_{j+1}} rho / sqrt(rho^2 - s_i^2) drho
/// on the grid s_k = k / N, j >= i. Rationalized to avoid cancellation for j >> i.
inline double midpoint_weight(std::size_t i, std::size_t j, std::size_t N) {
    if (j < i) return 0.0;
    const double ii = static_cast<double>(i) * static_cast<double>(i);
    const double a = static_cast<double>(j + 1), b = static_cast<double>(j);
    const double upper = std::sqrt(a * a - ii);
    const double lower = std::sqrt(std::max(0.0, b * b - ii));
    return (2.0 * b + 1.0) / (upper + lower) / static_cast<double>(N);
}

/// Discretized radial equation of one order: A f = b with
/// A[i][j] = |S^{n-2}| w_{i,j} K_l(arcsin s_i, rho_j) for j >= i (upper triangular),
/// nodes s_i = i / N and midpoints rho_j = (j + 1/2) / N, i, j = 0..N-1.
struct AbelSystem {
    KernelSpec spec;
    std::size_t N = 0;
    Eigen::MatrixXd matrix;

    double s(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(N); }
    double rho(std::size_t j) const { return (static_cast<double>(j) + 0.5) / static_cast<double>(N); }
};

inline AbelSystem assemble(const KernelSpec& spec, std::size_t N) {
    spec.validate();
    if (N < 4) throw std::invalid_argument("assemble: N must be at least 4");
    if (spec.m < 0) throw std::invalid_argument("assemble: negative weights m are not supported by the s = 0 row");
    AbelSystem sys{spec, N, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N))};
    const double prefactor = sphere_area(spec.n - 2);
    for (std::size_t i = 0; i < N; ++i) {
        const double psi = std::asin(sys.s(i));
        for (std::size_t j = i; j < N; ++j)
            sys.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                prefactor * midpoint_weight(i, j, N) * kernel_K(spec, psi, sys.rho(j));
    }
    return sys;
}

/// Right-hand side b_i = s_i^m g_l(s_i), i = 0..N-1, from harmonic data sampled
/// at s_i = i / N (length N or N + 1; the s = 1 sample is not used).
inline std::vector<std::complex<double>> build_rhs(const AbelSystem& sys, const std::vector<std::complex<double>>& g) {
    if (g.size() < sys.N) throw std::invalid_argument("build_rhs: need at least N harmonic samples");
    std::vector<std::complex<double>> b(sys.N);
    for (std::size_t i = 0; i < sys.N; ++i) b[i] = ipow(sys.s(i), sys.spec.m) * g[i];
    return b;
}

enum class SolveMethod { triangular, tikhonov, tsvd };

inline SolveMethod parse_solve_method(std::string_view name) {
    if (name == "triangular") return SolveMethod::triangular;
    if (name == "tikhonov") return SolveMethod::tikhonov;
    if (name == "tsvd") return SolveMethod::tsvd;
    throw std::invalid_argument("unknown solve method '" + std::string(name) + "' (expected triangular|tikhonov|tsvd)");
}

inline std::string_view to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::triangular: return "triangular";
        case SolveMethod::tikhonov: return "tikhonov";
        case SolveMethod::tsvd: return "tsvd";
    }
    return "?";
}

struct SolveConfig {
    SolveMethod method = SolveMethod::tikhonov;
    double lambda = 0.015;
    /// Singular values below svd_threshold * sigma_max are discarded.
    double svd_threshold = 1e-3;
    /// Optional per-order override of lambda; orders are matched by |l|.
    std::map<int, double> lambda_per_order;

    double lambda_for(int l) const {
        const auto it = lambda_per_order.find(l < 0 ? -l : l);
        return it == lambda_per_order.end() ? lambda : it->second;
    }

    void validate() const {
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("SolveConfig: lambda must be >= 0");
        for (const auto& [l, v] : lambda_per_order)
            if (!(v >= 0.0)) throw std::invalid_argument("SolveConfig: per-order lambda must be >= 0");
        if (!(svd_threshold >= 0.0 && svd_threshold < 1.0))
            throw std::invalid_argument("SolveConfig: svd_threshold must lie in [0, 1)");
    }
};

/// Thrown by the triangular method when a diagonal entry is (numerically) zero.
class IllConditionedDiagonal : public NumericalError {
public:
    IllConditionedDiagonal(std::size_t index, double value, const std::string& what)
        : NumericalError(what), index_(index), value_(value) {}
    std::size_t index() const { return index_; }
    double value() const { return value_; }

private:
    std::size_t index_;
    double value_;
};

namespace detail {

inline Eigen::MatrixXd split_complex(const std::vector<std::complex<double>>& b) {
    Eigen::MatrixXd rhs(static_cast<Eigen::Index>(b.size()), 2);
    for (std::size_t i = 0; i < b.size(); ++i) {
        rhs(static_cast<Eigen::Index>(i), 0) = b[i].real();
        rhs(static_cast<Eigen::Index>(i), 1) = b[i].imag();
    }
    return rhs;
}

inline std::vector<std::complex<double>> join_complex(const Eigen::MatrixXd& x) {
    std::vector<std::complex<double>> out(static_cast<std::size_t>(x.rows()));
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[static_cast<std::size_t>(i)] = {x(i, 0), x(i, 1)};
    return out;
}

}  // namespace detail

/// Solves A f = b for complex b (real and imaginary parts independently, A is real).
///   triangular: back substitution; IllConditionedDiagonal if |A_ii| < 1e-12 max|A|
///   tikhonov:   (A^T A + lambda I) f = A^T b by Cholesky
///   tsvd:       pseudo-inverse restricted to sigma >= threshold * sigma_max
inline std::vector<std::complex<double>> solve(const AbelSystem& sys, const std::vector<std::complex<double>>& b,
                                               const SolveConfig& cfg) {
    cfg.validate();
    if (b.size() != sys.N) throw std::invalid_argument("solve: right-hand side must have length N");
    for (const auto& v : b)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("solve: non-finite data");
    const Eigen::MatrixXd& A = sys.matrix;
    const Eigen::MatrixXd rhs = detail::split_complex(b);

    switch (cfg.method) {
        case SolveMethod::triangular: {
            const double limit = 1e-12 * A.cwiseAbs().maxCoeff();
            for (Eigen::Index i = 0; i < A.rows(); ++i) {
                if (!(std::abs(A(i, i)) >= limit) || A(i, i) == 0.0) {
                    std::ostringstream msg;
                    msg << "ill-conditioned diagonal at index " << i << " (|A_ii| = " << std::abs(A(i, i))
                        << ") for order l = " << sys.spec.l << "; use tikhonov or tsvd";
                    throw IllConditionedDiagonal(static_cast<std::size_t>(i), A(i, i), msg.str());
                }
            }
            return detail::join_complex(A.triangularView<Eigen::Upper>().solve(rhs));
        }
        case SolveMethod::tikhonov: {
            const double lambda = cfg.lambda_for(sys.spec.l);
            Eigen::MatrixXd normal = A.transpose() * A;
            normal.diagonal().array() += lambda;
            const Eigen::LLT<Eigen::MatrixXd> llt(normal);
            if (llt.info() != Eigen::Success)
                throw NumericalError("tikhonov: normal matrix not positive definite (lambda = " + std::to_string(lambda) + ")");
            return detail::join_complex(llt.solve(A.transpose() * rhs));
        }
        case SolveMethod::tsvd: {
            const Eigen::BDCSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto& sigma = svd.singularValues();
            const double cutoff = cfg.svd_threshold * sigma(0);
            Eigen::VectorXd inv = Eigen::VectorXd::Zero(sigma.size());
            for (Eigen::Index k = 0; k < sigma.size(); ++k)
                if (sigma(k) > 0.0 && sigma(k) >= cutoff) inv(k) = 1.0 / sigma(k);
            const Eigen::MatrixXd coeff = inv.asDiagonal() * (svd.matrixU().transpose() * rhs);
            return detail::join_complex(svd.matrixV() * coeff);
        }
    }
    throw std::logic_error("solve: unknown method");
}

struct ConditionReport {
    double min_abs_diagonal = 0.0;
    double max_abs_diagonal = 0.0;
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    double condition_number = 0.0;
};

inline ConditionReport condition_report(const AbelSystem& sys) {
    ConditionReport r;
    const Eigen::VectorXd diag = sys.matrix.diagonal().cwiseAbs();
    r.min_abs_diagonal = diag.minCoeff();
    r.max_abs_diagonal = diag.maxCoeff();
    const Eigen::BDCSVD<Eigen::MatrixXd> svd(sys.matrix);
    const auto& sigma = svd.singularValues();
    r.sigma_max = sigma(0);
    r.sigma_min = sigma(sigma.size() - 1);
    r.condition_number = r.sigma_min > 0.0 ? r.sigma_max / r.sigma_min : std::numeric_limits<double>::infinity();
    return r;
}

/// True when some |A_ii| falls below rel * max |A_ii| (a diagonal zero of the
/// kernel sits close to the node set). For l = 0 the ratio min/max is
/// 1/sqrt(2N - 1), about 0.04 at N = 300.
inline bool has_near_zero_diagonal(const AbelSystem& sys, double rel = 1e-2) {
    const Eigen::VectorXd diag = sys.matrix.diagonal().cwiseAbs();
    return diag.minCoeff() < rel * diag.maxCoeff();
}

}  // namespace vline
