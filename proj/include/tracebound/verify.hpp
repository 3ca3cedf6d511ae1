#pragma once

// Checks the claim a region makes against a computed spectrum.
//
// The margin is the signed amount by which the claim holds: radius minus the
// relevant eigenvalue distance for inclusion claims, distance minus radius for
// the outer circle. A claim passes when margin >= -slack, so enlarging a
// region never turns a pass into a failure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "tracebound/bounds.hpp"
#include "tracebound/eigensolver.hpp"
#include "tracebound/error.hpp"

namespace tracebound {

template <typename Real = double>
struct ClaimCheck {
    bool pass = false;
    Real margin{};
};

namespace detail {

template <typename Real>
ClaimCheck<Real> check_distances(std::vector<Real> distances, Real distance_of_known, Real boundary,
                                 const Claim<Real>& claim, Real slack) {
    if (slack < Real(0)) throw ParameterError("slack must be nonnegative");
    std::sort(distances.begin(), distances.end());
    const std::size_t n = distances.size();
    Real margin{};
    switch (claim.kind) {
    case ClaimKind::contains_at_least:
        if (claim.count == 0) {
            margin = std::numeric_limits<Real>::infinity();
        } else if (claim.count > n) {
            margin = -std::numeric_limits<Real>::infinity();
        } else {
            margin = boundary - distances[claim.count - 1];
        }
        break;
    case ClaimKind::contains_all:
        margin = n == 0 ? std::numeric_limits<Real>::infinity() : boundary - distances.back();
        break;
    case ClaimKind::contains_one_more_given: {
        // Drop one copy of the known eigenvalue (the entry nearest to it); the
        // next nearest must lie inside.
        if (n < 2) {
            margin = -std::numeric_limits<Real>::infinity();
            break;
        }
        auto known = std::lower_bound(distances.begin(), distances.end(), distance_of_known);
        if (known == distances.end()) known = distances.begin();
        distances.erase(known);
        margin = boundary - distances.front();
        break;
    }
    case ClaimKind::at_least_one_on_or_outside:
        margin = n == 0 ? -std::numeric_limits<Real>::infinity() : distances.back() - boundary;
        break;
    }
    return {margin >= -slack, margin};
}

} // namespace detail

template <typename Real>
ClaimCheck<Real> verify_region(const Disk<Real>& disk, const Spectrum<Real>& spectrum, Real slack) {
    std::vector<Real> distances;
    distances.reserve(spectrum.eigenvalues.size());
    for (const auto& z : spectrum.eigenvalues) distances.push_back(std::abs(z - disk.center));
    // The known eigenvalue is the center itself, so its distance is the smallest one.
    return detail::check_distances(std::move(distances), Real(0), disk.radius, disk.claim, slack);
}

template <typename Real>
ClaimCheck<Real> verify_region(const AxisStrip<Real>& strip, const Spectrum<Real>& spectrum, Real slack) {
    auto coordinate = [&](const std::complex<Real>& z) {
        return strip.axis == Axis::real ? z.real() : z.imag();
    };
    std::vector<Real> distances;
    distances.reserve(spectrum.eigenvalues.size());
    for (const auto& z : spectrum.eigenvalues) distances.push_back(std::abs(coordinate(z) - strip.center));
    const Real known = std::abs(coordinate(strip.claim.known) - strip.center);
    return detail::check_distances(std::move(distances), known, strip.half_width, strip.claim, slack);
}

/// Real and imaginary gap bounds are checked at their (l, k) ranks; the modulus
/// bound only in its spread form l = 1, k = n.
template <typename Real>
ClaimCheck<Real> verify_spread(const SpreadBound<Real>& bound, const Spectrum<Real>& spectrum, Real slack) {
    const auto& eigs = spectrum.eigenvalues;
    const std::size_t n = eigs.size();
    detail::require_ordered_pair(bound.l, bound.k, n);
    Real gap(0);
    if (bound.pair_kind == Part::modulus) {
        if (bound.l != 1 || bound.k != n) {
            throw PreconditionError("modulus gap bound is only checkable as the spread (l = 1, k = n)");
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) gap = std::max(gap, std::abs(eigs[i] - eigs[j]));
        }
    } else {
        std::vector<Real> coords;
        coords.reserve(n);
        for (const auto& z : eigs) coords.push_back(bound.pair_kind == Part::real ? z.real() : z.imag());
        std::sort(coords.begin(), coords.end());
        gap = coords[bound.k - 1] - coords[bound.l - 1];
    }
    const Real margin = bound.upper - gap;
    return {margin >= -slack, margin};
}

/// Both halves must hold; the margin is the smaller of the two.
template <typename Real>
ClaimCheck<Real> verify_extremal(const ExtremalBounds<Real>& bounds, const Spectrum<Real>& spectrum,
                                 Real slack) {
    if (spectrum.eigenvalues.empty()) throw DegenerateSizeError("empty spectrum");
    Real largest = -std::numeric_limits<Real>::infinity();
    Real smallest = std::numeric_limits<Real>::infinity();
    for (const auto& z : spectrum.eigenvalues) {
        largest = std::max(largest, z.real());
        smallest = std::min(smallest, z.real());
    }
    const Real margin = std::min(largest - bounds.lower_bound_on_max, bounds.upper_bound_on_min - smallest);
    return {margin >= -slack, margin};
}

} // namespace tracebound
