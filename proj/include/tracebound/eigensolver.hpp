#pragma once

// Reference eigensolver for desk-scale dense complex matrices: Householder
// reduction to Hessenberg form, then single-shift complex QR with Wilkinson
// shifts until the Schur form is upper triangular.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tracebound/error.hpp"
#include "tracebound/matrix.hpp"

namespace tracebound {

inline constexpr std::size_t kMaxOracleOrder = 512;
inline constexpr double kDefaultEigenTolerance = 1e-10;

template <typename Real = double>
struct Spectrum {
    /// With algebraic multiplicity, in the order they appear on the Schur diagonal.
    std::vector<std::complex<Real>> eigenvalues;
    /// ||A - Q T Q*||_F / ||A||_F for the computed Schur form A = Q T Q*.
    Real residual{};
};

namespace detail {

// Unitary Givens rotation G = [c s; -conj(s) c] with G [x; y] = [r; 0].
template <typename Real>
struct Rotation {
    Real c;
    std::complex<Real> s;

    static Rotation zeroing(std::complex<Real> x, std::complex<Real> y) {
        const Real ax = std::abs(x);
        const Real ay = std::abs(y);
        if (ay == Real(0)) return {Real(1), {}};
        if (ax == Real(0)) return {Real(0), std::conj(y) / ay};
        const Real rho = std::hypot(ax, ay);
        return {ax / rho, x / ax * std::conj(y) / rho};
    }
};

template <typename Real>
std::complex<Real> wilkinson_shift(std::complex<Real> a, std::complex<Real> b, std::complex<Real> c,
                                   std::complex<Real> d) {
    const std::complex<Real> half = (a - d) / Real(2);
    const std::complex<Real> disc = std::sqrt(half * half + b * c);
    const std::complex<Real> mid = (a + d) / Real(2);
    const std::complex<Real> first = mid + disc;
    const std::complex<Real> second = mid - disc;
    return std::abs(first - d) < std::abs(second - d) ? first : second;
}

template <typename Real>
void reduce_to_hessenberg(ComplexMatrix<Real>& h, ComplexMatrix<Real>& q) {
    using Complex = std::complex<Real>;
    const Eigen::Index n = h.rows();
    for (Eigen::Index k = 0; k + 2 < n; ++k) {
        const Eigen::Index len = n - k - 1;
        ComplexVector<Real> v = h.col(k).tail(len);
        const Real norm_x = v.norm();
        if (norm_x == Real(0)) continue;
        const Complex x0 = v(0);
        const Complex phase = std::abs(x0) == Real(0) ? Complex(1) : x0 / std::abs(x0);
        v(0) += phase * norm_x;
        const Real norm_v = v.norm();
        if (norm_v == Real(0)) continue;
        v /= norm_v;
        // H <- P H P with P = I - 2 v v*, acting on indices k+1..n-1.
        auto rows = h.bottomRows(len);
        rows -= Real(2) * v * (v.adjoint() * rows);
        auto cols = h.rightCols(len);
        cols -= Real(2) * (cols * v) * v.adjoint();
        auto qcols = q.rightCols(len);
        qcols -= Real(2) * (qcols * v) * v.adjoint();
        h.col(k).tail(len - 1).setZero();
    }
}

} // namespace detail

/// Eigenvalues of a square matrix of order at most 512. Throws ConvergenceError
/// (with the eigenvalues found so far) when the budget of 100 n QR sweeps runs
/// out or the backward error exceeds `tol`.
template <typename Real>
Spectrum<Real> eigenvalues(const ComplexMatrix<Real>& a, Real tol = Real(kDefaultEigenTolerance)) {
    using Complex = std::complex<Real>;
    require_square(a);
    if (!(tol > Real(0))) throw ParameterError("eigensolver tolerance must be positive");
    const Eigen::Index n = a.rows();
    if (static_cast<std::size_t>(n) > kMaxOracleOrder) {
        throw ParameterError("reference eigensolver is limited to order " + std::to_string(kMaxOracleOrder));
    }
    Spectrum<Real> out;
    if (n == 0) return out;

    ComplexMatrix<Real> t = a;
    ComplexMatrix<Real> q = ComplexMatrix<Real>::Identity(n, n);
    detail::reduce_to_hessenberg(t, q);

    const Real eps = std::numeric_limits<Real>::epsilon();
    const std::size_t budget = 100 * static_cast<std::size_t>(n);
    std::size_t sweeps = 0;
    std::size_t since_deflation = 0;
    std::vector<detail::Rotation<Real>> rotations;

    Eigen::Index hi = n - 1;
    while (hi > 0) {
        // Deflate negligible subdiagonal entries and locate the active block [lo, hi].
        Eigen::Index lo = hi;
        while (lo > 0) {
            const Real local = std::abs(t(lo, lo)) + std::abs(t(lo - 1, lo - 1));
            if (std::abs(t(lo, lo - 1)) <= eps * local) {
                t(lo, lo - 1) = Complex(0);
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            since_deflation = 0;
            continue;
        }
        if (sweeps >= budget) {
            std::vector<Complex> partial;
            for (Eigen::Index i = hi + 1; i < n; ++i) partial.push_back(t(i, i));
            throw ConvergenceError("QR iteration did not converge within " + std::to_string(budget) +
                                       " sweeps",
                                   {partial.begin(), partial.end()});
        }
        ++sweeps;
        ++since_deflation;

        Complex shift;
        if (since_deflation % 11 == 10) {
            shift = t(hi, hi) + Real(1.5) * std::abs(t(hi, hi - 1));
        } else {
            shift = detail::wilkinson_shift(t(hi - 1, hi - 1), t(hi - 1, hi), t(hi, hi - 1), t(hi, hi));
        }

        for (Eigen::Index i = lo; i <= hi; ++i) t(i, i) -= shift;
        rotations.clear();
        for (Eigen::Index i = lo; i < hi; ++i) {
            const auto g = detail::Rotation<Real>::zeroing(t(i, i), t(i + 1, i));
            for (Eigen::Index j = i; j < n; ++j) {
                const Complex x = t(i, j);
                const Complex y = t(i + 1, j);
                t(i, j) = g.c * x + g.s * y;
                t(i + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
            t(i + 1, i) = Complex(0);
            rotations.push_back(g);
        }
        for (Eigen::Index i = lo; i < hi; ++i) {
            const auto& g = rotations[static_cast<std::size_t>(i - lo)];
            const Eigen::Index last = std::min<Eigen::Index>(i + 1, hi);
            for (Eigen::Index row = 0; row <= last; ++row) {
                const Complex x = t(row, i);
                const Complex y = t(row, i + 1);
                t(row, i) = g.c * x + std::conj(g.s) * y;
                t(row, i + 1) = -g.s * x + g.c * y;
            }
            for (Eigen::Index row = 0; row < n; ++row) {
                const Complex x = q(row, i);
                const Complex y = q(row, i + 1);
                q(row, i) = g.c * x + std::conj(g.s) * y;
                q(row, i + 1) = -g.s * x + g.c * y;
            }
        }
        for (Eigen::Index i = lo; i <= hi; ++i) t(i, i) += shift;
    }

    out.eigenvalues.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out.eigenvalues.push_back(t(i, i));

    const ComplexMatrix<Real> upper = t.template triangularView<Eigen::Upper>();
    const Real scale = a.norm();
    const Real backward = (a - q * upper * q.adjoint()).norm();
    out.residual = scale == Real(0) ? backward : backward / scale;
    if (!(out.residual <= tol)) {
        throw ConvergenceError("Schur residual " + std::to_string(static_cast<double>(out.residual)) +
                                   " exceeds tolerance",
                               {out.eigenvalues.begin(), out.eigenvalues.end()});
    }
    return out;
}

/// Ground-truth spectrum for verification: the same QR iteration carried out
/// in long double, rounded to double. Defective eigenvalues split under
/// rounding by about eps^(1/m) for a block of size m; the wider format keeps
/// that split below the verification slack.
inline Spectrum<double> reference_spectrum(const ComplexMatrix<double>& a, double tol = kDefaultEigenTolerance) {
    require_square(a);
    const ComplexMatrix<long double> wide = a.cast<std::complex<long double>>();
    const auto s = eigenvalues<long double>(wide, static_cast<long double>(tol));
    Spectrum<double> out;
    out.residual = static_cast<double>(s.residual);
    out.eigenvalues.reserve(s.eigenvalues.size());
    for (const auto& z : s.eigenvalues) {
        out.eigenvalues.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    }
    return out;
}

} // namespace tracebound
