#pragma once

// Eigenvalue localization from traces alone: inclusion disks and strips,
// spread bounds, and extremal-eigenvalue bounds for real spectra.
//
// Nothing here computes eigenvalues. Each region carries the claim it makes
// about the spectrum; verify.hpp checks claims against an eigensolver.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tracebound/error.hpp"
#include "tracebound/matrix.hpp"
#include "tracebound/variance.hpp"

namespace tracebound {

enum class ClaimKind {
    contains_at_least,         ///< at least `count` eigenvalues inside (with multiplicity)
    contains_all,              ///< every eigenvalue inside
    contains_one_more_given,   ///< besides `known`, at least one more eigenvalue inside
    at_least_one_on_or_outside ///< some eigenvalue on the boundary or beyond it
};

template <typename Real = double>
struct Claim {
    ClaimKind kind = ClaimKind::contains_all;
    std::size_t count = 0;
    std::complex<Real> known{};

    static Claim at_least(std::size_t count) { return {ClaimKind::contains_at_least, count, {}}; }
    static Claim all() { return {ClaimKind::contains_all, 0, {}}; }
    static Claim one_more_given(std::complex<Real> known) {
        return {ClaimKind::contains_one_more_given, 0, known};
    }
    static Claim one_on_or_outside() { return {ClaimKind::at_least_one_on_or_outside, 0, {}}; }

    friend bool operator==(const Claim&, const Claim&) = default;
};

/// Which bound produced a region, with its integer parameters.
struct Origin {
    std::string method;
    std::vector<std::pair<std::string, long long>> params;
    std::string note;

    friend bool operator==(const Origin&, const Origin&) = default;
};

template <typename Real = double>
struct Disk {
    std::complex<Real> center{};
    Real radius{};
    Claim<Real> claim{};
    Origin origin{};

    friend bool operator==(const Disk&, const Disk&) = default;
};

enum class Axis { real, imag };

/// A band |coordinate - center| <= half_width on the real or imaginary axis;
/// the claim concerns Re(lambda) or Im(lambda).
template <typename Real = double>
struct AxisStrip {
    Axis axis = Axis::real;
    Real center{};
    Real half_width{};
    Claim<Real> claim{};
    Origin origin{};

    friend bool operator==(const AxisStrip&, const AxisStrip&) = default;
};

template <typename Real = double>
struct RegionSet {
    Disk<Real> disk;
    AxisStrip<Real> real_strip;
    AxisStrip<Real> imag_strip;
};

template <typename Real = double>
struct SpreadBound {
    Real upper{};
    Part pair_kind = Part::modulus;
    std::size_t l = 1;
    std::size_t k = 2;
};

template <typename Real = double>
struct SpreadBounds {
    SpreadBound<Real> real_parts;
    SpreadBound<Real> imag_parts;
    SpreadBound<Real> modulus;
};

enum class ExtremalMethod { wolkowicz_styan, trace_moment };

inline const char* to_string(ExtremalMethod method) {
    return method == ExtremalMethod::wolkowicz_styan ? "wolkowicz_styan" : "trace_moment";
}

/// lambda_max >= lower_bound_on_max and lambda_min <= upper_bound_on_min, both
/// symmetric about tr A / n.
template <typename Real = double>
struct ExtremalBounds {
    Real lower_bound_on_max{};
    Real upper_bound_on_min{};
    ExtremalMethod method = ExtremalMethod::wolkowicz_styan;
    unsigned r = 1;
};

namespace detail {

template <typename Real>
Real sqrt_nonneg(Real x) {
    return std::sqrt(std::max(x, Real(0)));
}

template <typename Real>
struct Combinations {
    Real real_parts;
    Real imag_parts;
    Real modulus;
};

template <typename Real>
Combinations<Real> combinations(const SpectralStats<Real>& stats) {
    return {Real(2) * stats.real_part_variance, Real(2) * stats.imag_part_variance,
            stats.abs_variance + std::abs(stats.complex_variance)};
}

template <typename Real>
void require_full_dimension(const SpectralStats<Real>& stats, const char* what) {
    if (stats.effective_dim != stats.n) {
        throw ModeError(std::string(what) + " needs statistics over all n eigenvalues, not a rank override");
    }
}

// (n-1)^(2r-1) / (1 + (n-1)^(2r-1))
template <typename Real>
Real moment_coefficient(std::size_t n, unsigned r) {
    const Real q = std::pow(static_cast<Real>(n - 1), static_cast<Real>(2 * r - 1));
    if (std::isinf(q)) return Real(1);
    return q / (Real(1) + q);
}

template <typename Real>
void require_real_spectrum(const SpectralStats<Real>& stats, bool assume_real_spectrum) {
    if (!stats.hermitian && !assume_real_spectrum) {
        throw ModeError("extremal bounds need a real spectrum: input is not Hermitian and no "
                        "real-spectrum assertion was given");
    }
}

} // namespace detail

/// Disk about tr A / m of radius sqrt((m-k)/(2k) (S_lambda^2 + |S^2|)) claiming
/// at least m-2k+2 eigenvalues, plus the matching strips for real and
/// imaginary parts. m is the effective dimension; 1 <= k <= (m+1)/2.
template <typename Real>
RegionSet<Real> central_disks(const SpectralStats<Real>& stats, std::size_t k) {
    const std::size_t m = stats.effective_dim;
    if (k < 1 || 2 * k > m + 1) {
        throw ParameterError("k = " + std::to_string(k) + " outside [1, (m+1)/2] for m = " +
                             std::to_string(m));
    }
    const Real coefficient = static_cast<Real>(m - k) / (Real(2) * static_cast<Real>(k));
    const auto combo = detail::combinations(stats);
    const auto claim = Claim<Real>::at_least(m - 2 * k + 2);

    Origin origin{"central_disk", {{"k", static_cast<long long>(k)}}, {}};
    if (k == 1) origin.note = "k = 1 is the Huang-Wang disk containing every eigenvalue";

    RegionSet<Real> out;
    out.disk = {stats.mean, detail::sqrt_nonneg(coefficient * combo.modulus), claim, origin};
    out.real_strip = {Axis::real, stats.mean.real(), detail::sqrt_nonneg(coefficient * combo.real_parts),
                      claim, {"central_strip", origin.params, {}}};
    out.imag_strip = {Axis::imag, stats.mean.imag(), detail::sqrt_nonneg(coefficient * combo.imag_parts),
                      claim, {"central_strip", origin.params, {}}};
    return out;
}

/// Upper bounds on the gap between the l-th and k-th eigenvalues ordered by
/// real part, by imaginary part, and (modulus) along a suitable ordering.
/// For l = 1, k = n the modulus value bounds the spread max |lambda_i - lambda_j|.
template <typename Real>
SpreadBounds<Real> spread_upper_bounds(const SpectralStats<Real>& stats, std::size_t l, std::size_t k) {
    detail::require_full_dimension(stats, "spread bound");
    const std::size_t n = stats.n;
    detail::require_ordered_pair(l, k, n);
    const Real coefficient = detail::pair_coefficient<Real>(n, l, k);
    const auto combo = detail::combinations(stats);
    return {{detail::sqrt_nonneg(coefficient * combo.real_parts), Part::real, l, k},
            {detail::sqrt_nonneg(coefficient * combo.imag_parts), Part::imag, l, k},
            {detail::sqrt_nonneg(coefficient * combo.modulus), Part::modulus, l, k}};
}

/// Given one eigenvalue `known`, a disk about it of radius
/// n / sqrt(2(n-1)) sqrt(S_lambda^2 + |S^2|) claimed to hold another one, and
/// strips about its real and imaginary parts claimed to hold another's.
template <typename Real>
RegionSet<Real> neighbor_disk(const SpectralStats<Real>& stats, std::complex<Real> known) {
    detail::require_full_dimension(stats, "neighbor disk");
    const std::size_t n = stats.n;
    detail::require_at_least_two(n);
    const Real factor = static_cast<Real>(n) / std::sqrt(Real(2) * static_cast<Real>(n - 1));
    const auto combo = detail::combinations(stats);
    const auto claim = Claim<Real>::one_more_given(known);

    RegionSet<Real> out;
    out.disk = {known, factor * detail::sqrt_nonneg(combo.modulus), claim, {"neighbor_disk", {}, {}}};
    out.real_strip = {Axis::real, known.real(), factor * detail::sqrt_nonneg(combo.real_parts), claim,
                      {"neighbor_strip", {}, {}}};
    out.imag_strip = {Axis::imag, known.imag(), factor * detail::sqrt_nonneg(combo.imag_parts), claim,
                      {"neighbor_strip", {}, {}}};
    return out;
}

/// Disk about tr A / n holding every eigenvalue, of radius
/// ((n-1)^(2r-1) / (1 + (n-1)^(2r-1)) moment)^(1/(2r)), where `moment` is at
/// least sum |lambda_i(B)|^(2r) (an oracle value or moment_upper_bound).
template <typename Real>
Disk<Real> all_eigs_disk(const CenteredMatrix<Real>& b, unsigned r, Real moment) {
    if (r < 1) throw ParameterError("power r must be at least 1");
    if (moment < Real(0)) throw ParameterError("moment must be nonnegative");
    const std::size_t n = b.order();
    const Real radius = n < 2 ? Real(0)
                              : std::pow(detail::moment_coefficient<Real>(n, r) * moment,
                                         Real(1) / static_cast<Real>(2 * r));
    return {b.shift(), radius, Claim<Real>::all(),
            {"all_eigenvalues_disk", {{"r", static_cast<long long>(r)}}, {}}};
}

/// Normal matrices only: a circle about tr A / n of radius
/// (tr(B^r (B^r)*) / n)^(1/(2r)) with at least one eigenvalue on or outside it.
template <typename Real>
Disk<Real> outer_circle(const CenteredMatrix<Real>& b, unsigned r, double normal_tol = kNormalTolerance) {
    if (r < 1) throw ParameterError("power r must be at least 1");
    if (!is_normal(b.base(), normal_tol)) throw ModeError("outer circle needs a normal matrix");
    const Real mean_moment =
        matrix_power(b.matrix(), r).squaredNorm() / static_cast<Real>(b.order());
    return {b.shift(), std::pow(mean_moment, Real(1) / static_cast<Real>(2 * r)),
            Claim<Real>::one_on_or_outside(),
            {"outer_circle", {{"r", static_cast<long long>(r)}},
             "radius uses the mean tr(B^r (B^r)*)/n"}};
}

/// lambda_max >= tr A/n + sqrt(tr B^2 / (n(n-1))), lambda_min <= tr A/n - the same.
/// Requires a Hermitian matrix or an explicit real-spectrum assertion.
template <typename Real>
ExtremalBounds<Real> wolkowicz_styan_bounds(const SpectralStats<Real>& stats, Real trace_b2,
                                            bool assume_real_spectrum = false) {
    detail::require_real_spectrum(stats, assume_real_spectrum);
    if (trace_b2 < Real(0)) throw ParameterError("tr B^2 must be nonnegative for a real spectrum");
    const Real n = static_cast<Real>(stats.n);
    const Real center = stats.trace.real() / n;
    const Real offset = trace_b2 == Real(0) ? Real(0) : std::sqrt(trace_b2 / (n * (n - Real(1))));
    return {center + offset, center - offset, ExtremalMethod::wolkowicz_styan, 1};
}

/// Refinement using tr B^(2r):
///   offset = (tr B^2 / n) ((1 + (n-1)^(2r-1)) / (n-1)^(2r-1) / tr B^(2r))^(1/(2r)),
/// lambda_max >= tr A/n + offset, lambda_min <= tr A/n - offset. At r = 1 it
/// coincides with wolkowicz_styan_bounds.
template <typename Real>
ExtremalBounds<Real> trace_moment_extremal_bounds(const SpectralStats<Real>& stats, Real trace_b2,
                                                  Real trace_b2r, unsigned r,
                                                  bool assume_real_spectrum = false) {
    detail::require_real_spectrum(stats, assume_real_spectrum);
    if (r < 1) throw ParameterError("power r must be at least 1");
    if (trace_b2 < Real(0) || trace_b2r < Real(0)) {
        throw ParameterError("traces of even powers of B must be nonnegative for a real spectrum");
    }
    const Real n = static_cast<Real>(stats.n);
    const Real center = stats.trace.real() / n;
    if (trace_b2r == Real(0)) {
        if (trace_b2 == Real(0)) return {center, center, ExtremalMethod::trace_moment, r};
        throw ConsistencyError("tr B^(2r) = 0 with tr B^2 > 0 is impossible for a real spectrum");
    }
    const Real inverse_coefficient = Real(1) / detail::moment_coefficient<Real>(stats.n, r);
    const Real offset = trace_b2 / n *
                        std::pow(inverse_coefficient / trace_b2r, Real(1) / static_cast<Real>(2 * r));
    return {center + offset, center - offset, ExtremalMethod::trace_moment, r};
}

} // namespace tracebound
