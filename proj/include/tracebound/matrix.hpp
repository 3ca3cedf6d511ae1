#pragma once

// Dense complex matrices and the trace-derived statistics of their spectra.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "tracebound/error.hpp"

namespace tracebound {

template <typename Real = double>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real = double>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Default tolerance of the normality gate, relative to ||A||_F^2.
inline constexpr double kNormalTolerance = 1e-10;
/// Default tolerance of the Hermitian test, relative to max(1, max |a_ij|).
inline constexpr double kHermitianTolerance = 1e-12;

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a) {
    if (a.rows() != a.cols()) {
        throw ShapeError(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
    }
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(std::real(a(i, j))) || !std::isfinite(std::imag(a(i, j)))) {
                return false;
            }
        }
    }
    return true;
}

template <typename Derived>
typename Derived::Scalar trace(const Eigen::MatrixBase<Derived>& a) {
    require_square(a);
    return a.trace();
}

/// A^p by iterated multiplication, so that trace identities stay independent
/// of any eigendecomposition.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
matrix_power(const Eigen::MatrixBase<Derived>& a, unsigned p) {
    require_square(a);
    if (p < 1) throw ParameterError("matrix power must be at least 1");
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> result = a;
    for (unsigned i = 1; i < p; ++i) result = (result * a).eval();
    return result;
}

template <typename Derived>
typename Derived::Scalar matrix_power_trace(const Eigen::MatrixBase<Derived>& a, unsigned p) {
    return matrix_power(a, p).trace();
}

/// sum |a_ij|^2 = tr(A A*).
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real
frobenius_norm_sq(const Eigen::MatrixBase<Derived>& a) {
    return a.squaredNorm();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, double tol = kHermitianTolerance) {
    if (a.rows() != a.cols()) return false;
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    const Real scale = std::max<Real>(Real(1), a.cwiseAbs().maxCoeff());
    const Real deviation = (a - a.adjoint()).cwiseAbs().maxCoeff();
    return deviation <= static_cast<Real>(tol) * scale;
}

/// ||A A* - A* A||_F.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real
commutator_norm(const Eigen::MatrixBase<Derived>& a) {
    return (a * a.adjoint() - a.adjoint() * a).norm();
}

template <typename Derived>
bool is_normal(const Eigen::MatrixBase<Derived>& a, double tol = kNormalTolerance) {
    if (a.rows() != a.cols()) return false;
    return commutator_norm(a) <= tol * a.squaredNorm();
}

/// B = A - (tr A / n) I; its eigenvalues are the deviations of those of A from their mean.
template <typename Real = double>
class CenteredMatrix {
public:
    using Complex = std::complex<Real>;

    explicit CenteredMatrix(ComplexMatrix<Real> base) : base_(std::move(base)) {
        require_square(base_);
        if (base_.rows() == 0) throw DegenerateSizeError("empty matrix");
        shift_ = base_.trace() / static_cast<Real>(base_.rows());
        centered_ = base_;
        centered_.diagonal().array() -= shift_;
    }

    const ComplexMatrix<Real>& base() const noexcept { return base_; }
    const ComplexMatrix<Real>& matrix() const noexcept { return centered_; }
    Complex shift() const noexcept { return shift_; }
    std::size_t order() const noexcept { return static_cast<std::size_t>(base_.rows()); }

private:
    ComplexMatrix<Real> base_;
    ComplexMatrix<Real> centered_;
    Complex shift_{};
};

/// Upper bound on sum_i |lambda_i(B)|^(2r): with C = B^r,
///   sqrt((||C||_F^2 - |tr C|^2/n)^2 - ||C C* - C* C||_F^2 / 2) + |tr C|^2/n.
/// Exact for normal B. A radicand that rounding pushes below zero is clamped to 0.
template <typename Derived>
typename Eigen::NumTraits<typename Derived::Scalar>::Real
moment_upper_bound(const Eigen::MatrixBase<Derived>& b, unsigned r) {
    using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
    if (r < 1) throw ParameterError("power r must be at least 1");
    const auto c = matrix_power(b, r);
    const Real n = static_cast<Real>(c.rows());
    const Real trace_term = std::norm(c.trace()) / n;
    const Real spread = c.squaredNorm() - trace_term;
    const Real commutator = (c * c.adjoint() - c.adjoint() * c).squaredNorm();
    const Real radicand = spread * spread - commutator / Real(2);
    return std::sqrt(std::max(radicand, Real(0))) + trace_term;
}

template <typename Real>
Real moment_upper_bound(const CenteredMatrix<Real>& b, unsigned r) {
    return moment_upper_bound(b.matrix(), r);
}

/// How S_lambda^2 was obtained.
enum class AbsVarianceSource {
    oracle,         ///< from supplied eigenvalues
    normal_formula, ///< tr(A A*)/n - |tr A/n|^2, exact for normal A
    upper_bound     ///< from moment_upper_bound(B, 1); every region built on it stays valid
};

inline const char* to_string(AbsVarianceSource source) {
    switch (source) {
    case AbsVarianceSource::oracle: return "oracle";
    case AbsVarianceSource::normal_formula: return "normal_formula";
    case AbsVarianceSource::upper_bound: return "upper_bound";
    }
    return "unknown";
}

template <typename Real = double>
struct SpectralStats {
    using Complex = std::complex<Real>;

    std::size_t n = 0;
    Complex trace{};
    Complex trace_sq{};
    Complex mean{};             ///< tr A / m
    Complex complex_variance{}; ///< S^2 = tr A^2 / m - mean^2
    Real abs_variance{};        ///< S_lambda^2
    AbsVarianceSource abs_variance_source = AbsVarianceSource::upper_bound;
    Real real_part_variance{};  ///< (S_lambda^2 + Re S^2) / 2
    Real imag_part_variance{};  ///< (S_lambda^2 - Re S^2) / 2
    std::size_t effective_dim = 0; ///< m; equals n unless a rank override was given
    bool hermitian = false;
    bool normal = false;
};

template <typename Real = double>
struct StatsOptions {
    AbsVarianceSource mode = AbsVarianceSource::upper_bound;
    /// Required when mode is oracle; one entry per eigenvalue, with multiplicity.
    std::span<const std::complex<Real>> oracle_eigenvalues{};
    /// Caller-supplied rank m; statistics treat the m nonzero eigenvalues as the sequence.
    std::optional<std::size_t> rank_override{};
    double normal_tolerance = kNormalTolerance;
    double hermitian_tolerance = kHermitianTolerance;
};

template <typename Real>
SpectralStats<Real> spectral_stats(const ComplexMatrix<Real>& a, const StatsOptions<Real>& options = {}) {
    using Complex = std::complex<Real>;
    require_square(a);
    const std::size_t n = static_cast<std::size_t>(a.rows());
    if (n == 0) throw DegenerateSizeError("empty matrix");
    const std::size_t m = options.rank_override.value_or(n);
    if (m < 1 || m > n) {
        throw ParameterError("rank override " + std::to_string(m) + " outside [1, " +
                             std::to_string(n) + "]");
    }

    SpectralStats<Real> s;
    s.n = n;
    s.effective_dim = m;
    s.hermitian = is_hermitian(a, options.hermitian_tolerance);
    s.normal = is_normal(a, options.normal_tolerance);
    s.trace = a.trace();
    s.trace_sq = (a * a).trace();
    const Real dim = static_cast<Real>(m);
    s.mean = s.trace / dim;
    s.complex_variance = s.trace_sq / dim - s.mean * s.mean;
    s.abs_variance_source = options.mode;

    const CenteredMatrix<Real> centered(a);
    const bool full_rank = (m == n);
    auto from_abs_sum = [&](Real sum_abs_sq) { return sum_abs_sq / dim - std::norm(s.mean); };

    switch (options.mode) {
    case AbsVarianceSource::oracle: {
        const auto& eigs = options.oracle_eigenvalues;
        if (eigs.size() != n) {
            throw PreconditionError("oracle mode needs " + std::to_string(n) + " eigenvalues, got " +
                                    std::to_string(eigs.size()));
        }
        Real sum(0);
        if (full_rank) {
            for (const Complex& z : eigs) sum += std::norm(z - s.mean);
            s.abs_variance = sum / dim;
        } else {
            for (const Complex& z : eigs) sum += std::norm(z);
            s.abs_variance = from_abs_sum(sum);
        }
        break;
    }
    case AbsVarianceSource::normal_formula:
        if (!s.normal) throw ModeError("normal formula requested for a non-normal matrix");
        s.abs_variance = full_rank ? centered.matrix().squaredNorm() / dim : from_abs_sum(a.squaredNorm());
        break;
    case AbsVarianceSource::upper_bound: {
        const Real moment = moment_upper_bound(centered.matrix(), 1);
        s.abs_variance = full_rank ? moment / dim
                                   : from_abs_sum(moment + std::norm(s.trace) / static_cast<Real>(n));
        break;
    }
    }
    s.abs_variance = std::max(s.abs_variance, Real(0));
    if (options.mode == AbsVarianceSource::oracle && full_rank) {
        // Direct sums; the half-sum/half-difference forms cancel when one part is tiny.
        Real re(0), im(0);
        for (const Complex& z : options.oracle_eigenvalues) {
            const Complex d = z - s.mean;
            re += d.real() * d.real();
            im += d.imag() * d.imag();
        }
        s.real_part_variance = re / dim;
        s.imag_part_variance = im / dim;
        return s;
    }
    s.real_part_variance = std::max((s.abs_variance + s.complex_variance.real()) / Real(2), Real(0));
    s.imag_part_variance = std::max((s.abs_variance - s.complex_variance.real()) / Real(2), Real(0));
    return s;
}

} // namespace tracebound
