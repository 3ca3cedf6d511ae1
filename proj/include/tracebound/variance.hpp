#pragma once

// Variance lower bounds for real, complex and weighted scalar sequences.
//
// All variances are population variances (divide by n). Order-dependent
// bounds take 1-based ranks (1 <= l < k <= n) into the sequence as stored;
// sorting is the caller's job and is checked, never done silently.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tracebound/error.hpp"

namespace tracebound {

namespace detail {

inline void require_rank(std::size_t rank, std::size_t n, const char* name) {
    if (rank < 1 || rank > n) {
        throw IndexError(std::string(name) + " = " + std::to_string(rank) + " outside [1, " +
                         std::to_string(n) + "]");
    }
}

inline void require_ordered_pair(std::size_t l, std::size_t k, std::size_t n) {
    require_rank(l, n, "l");
    require_rank(k, n, "k");
    if (l >= k) {
        throw IndexError("need l < k, got l = " + std::to_string(l) + ", k = " + std::to_string(k));
    }
}

inline void require_at_least_two(std::size_t n) {
    if (n < 2) throw DegenerateSizeError("bound needs at least two values, got " + std::to_string(n));
}

// n(n+l-k+1) / (2l(n-k+1)), shared by the pairwise difference bounds.
template <typename Real>
Real pair_coefficient(std::size_t n, std::size_t l, std::size_t k) {
    const Real nn = static_cast<Real>(n);
    return nn * static_cast<Real>(n + l - k + 1) /
           (Real(2) * static_cast<Real>(l) * static_cast<Real>(n - k + 1));
}

template <typename Real>
Real integer_power(Real base, unsigned exponent) {
    Real result(1);
    while (exponent != 0) {
        if (exponent & 1U) result *= base;
        base *= base;
        exponent >>= 1U;
    }
    return result;
}

} // namespace detail

/// Mean and population variance of a real sequence, two-pass.
template <typename Real = double>
class RealSequenceStats {
public:
    explicit RealSequenceStats(std::vector<Real> values) : values_(std::move(values)) {
        if (values_.empty()) throw DegenerateSizeError("empty sequence");
        const Real n = static_cast<Real>(values_.size());
        mean_ = std::accumulate(values_.begin(), values_.end(), Real(0)) / n;
        Real sum_sq(0);
        for (Real x : values_) sum_sq += (x - mean_) * (x - mean_);
        variance_ = sum_sq / n;
        for (Real x : values_) scale_ = std::max(scale_, std::abs(x));
    }

    std::span<const Real> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    Real mean() const noexcept { return mean_; }
    Real variance() const noexcept { return variance_; }
    /// Largest magnitude in the sequence; sets the rounding slack of every bound.
    Real scale() const noexcept { return scale_; }
    bool is_sorted() const { return std::is_sorted(values_.begin(), values_.end()); }

private:
    std::vector<Real> values_;
    Real mean_{};
    Real variance_{};
    Real scale_{};
};

/// Mean, complex variance (mean of squared deviations) and absolute variance
/// (mean of squared deviation moduli) of a complex sequence.
template <typename Real = double>
class ComplexSequenceStats {
public:
    using Complex = std::complex<Real>;

    explicit ComplexSequenceStats(std::vector<Complex> values) : values_(std::move(values)) {
        if (values_.empty()) throw DegenerateSizeError("empty sequence");
        const Real n = static_cast<Real>(values_.size());
        mean_ = std::accumulate(values_.begin(), values_.end(), Complex(0)) / n;
        Complex sum_sq(0);
        Real sum_abs_sq(0);
        for (const Complex& z : values_) {
            const Complex d = z - mean_;
            sum_sq += d * d;
            sum_abs_sq += std::norm(d);
            scale_ = std::max(scale_, std::abs(z));
        }
        complex_variance_ = sum_sq / n;
        abs_variance_ = sum_abs_sq / n;
    }

    std::span<const Complex> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    Complex mean() const noexcept { return mean_; }
    Complex complex_variance() const noexcept { return complex_variance_; }
    Real abs_variance() const noexcept { return abs_variance_; }
    Real scale() const noexcept { return scale_; }

    /// (1/n) sum |z_i - mean|^(2r).
    Real central_abs_moment(unsigned r) const {
        Real sum(0);
        for (const Complex& z : values_) sum += detail::integer_power(std::norm(z - mean_), r);
        return sum / static_cast<Real>(values_.size());
    }

    RealSequenceStats<Real> real_parts() const {
        std::vector<Real> xs;
        xs.reserve(values_.size());
        for (const Complex& z : values_) xs.push_back(z.real());
        return RealSequenceStats<Real>(std::move(xs));
    }

    RealSequenceStats<Real> imag_parts() const {
        std::vector<Real> ys;
        ys.reserve(values_.size());
        for (const Complex& z : values_) ys.push_back(z.imag());
        return RealSequenceStats<Real>(std::move(ys));
    }

private:
    std::vector<Complex> values_;
    Complex mean_{};
    Complex complex_variance_{};
    Real abs_variance_{};
    Real scale_{};
};

/// Probability-weighted mean and central second moment.
template <typename Real = double>
class WeightedSequenceStats {
public:
    WeightedSequenceStats(std::vector<Real> values, std::vector<Real> weights)
        : values_(std::move(values)), weights_(std::move(weights)) {
        if (values_.empty()) throw DegenerateSizeError("empty sequence");
        if (values_.size() != weights_.size()) {
            throw PreconditionError("values and weights differ in length");
        }
        Real total(0);
        for (Real p : weights_) {
            if (!(p >= Real(0))) throw PreconditionError("weights must be nonnegative");
            total += p;
        }
        const Real tol = static_cast<Real>(std::max<std::size_t>(values_.size(), 2)) *
                         std::numeric_limits<Real>::epsilon();
        if (std::abs(total - Real(1)) > tol) throw PreconditionError("weights must sum to 1");

        for (std::size_t i = 0; i < values_.size(); ++i) mean_ += weights_[i] * values_[i];
        for (std::size_t i = 0; i < values_.size(); ++i) {
            variance_ += weights_[i] * (values_[i] - mean_) * (values_[i] - mean_);
        }
    }

    std::span<const Real> values() const noexcept { return values_; }
    std::span<const Real> weights() const noexcept { return weights_; }
    std::size_t size() const noexcept { return values_.size(); }
    Real weighted_mean() const noexcept { return mean_; }
    Real weighted_variance() const noexcept { return variance_; }

private:
    std::vector<Real> values_;
    std::vector<Real> weights_;
    Real mean_{};
    Real variance_{};
};

/// Which coordinate of a complex sequence a bound controls.
enum class Part { real, imag, modulus };

/// Samuelson: (x_j - mean)^2 / (n-1), never above the variance.
template <typename Real>
Real samuelson_bound(const RealSequenceStats<Real>& stats, std::size_t j) {
    const std::size_t n = stats.size();
    detail::require_at_least_two(n);
    detail::require_rank(j, n, "j");
    const Real d = stats.values()[j - 1] - stats.mean();
    return d * d / static_cast<Real>(n - 1);
}

/// Nagy: (max - min)^2 / (2n).
template <typename Real>
Real nagy_bound(const RealSequenceStats<Real>& stats) {
    const std::size_t n = stats.size();
    detail::require_at_least_two(n);
    const auto [lo, hi] = std::minmax_element(stats.values().begin(), stats.values().end());
    const Real d = *hi - *lo;
    return d * d / static_cast<Real>(2 * n);
}

/// Fahmy-Prochan: l(n-k+1) / (n(n+l-k+1)) (x_k - x_l)^2 for ascending data.
/// At l = 1, k = n it evaluates exactly as nagy_bound does.
template <typename Real>
Real fahmy_prochan_bound(const RealSequenceStats<Real>& stats, std::size_t l, std::size_t k) {
    const std::size_t n = stats.size();
    detail::require_ordered_pair(l, k, n);
    if (!stats.is_sorted()) throw PreconditionError("values must be sorted ascending");
    const Real d = stats.values()[k - 1] - stats.values()[l - 1];
    const Real numerator = static_cast<Real>(l * (n - k + 1));
    const Real denominator = static_cast<Real>(n * (n + l - k + 1));
    return numerator * (d * d) / denominator;
}

/// p_j / (1 - p_j) (mean - x_j)^2, never above the weighted variance.
template <typename Real>
Real weighted_variance_bound(const WeightedSequenceStats<Real>& stats, std::size_t j) {
    detail::require_rank(j, stats.size(), "j");
    const Real p = stats.weights()[j - 1];
    if (std::abs(Real(1) - p) <= std::numeric_limits<Real>::epsilon()) {
        throw ParameterError("weight p_j = 1 leaves no mass elsewhere");
    }
    const Real d = stats.weighted_mean() - stats.values()[j - 1];
    return p / (Real(1) - p) * d * d;
}

/// k/(n-k) (mean - x_j)^2 at j = k and j = n-k+1, for ascending data with k <= n-k+1.
template <typename Real>
std::pair<Real, Real> order_statistic_bound(const RealSequenceStats<Real>& stats, std::size_t k) {
    const std::size_t n = stats.size();
    detail::require_at_least_two(n);
    detail::require_rank(k, n, "k");
    if (k > n - k + 1) {
        throw PreconditionError("need k <= n-k+1, got k = " + std::to_string(k) +
                                ", n = " + std::to_string(n));
    }
    if (!stats.is_sorted()) throw PreconditionError("values must be sorted ascending");
    const Real coefficient = static_cast<Real>(k) / static_cast<Real>(n - k);
    const Real low = stats.mean() - stats.values()[k - 1];
    const Real high = stats.mean() - stats.values()[n - k];
    return {coefficient * low * low, coefficient * high * high};
}

namespace detail {

template <typename Real>
Real part_combination(const ComplexSequenceStats<Real>& stats, Part part) {
    const Real re = stats.complex_variance().real();
    switch (part) {
    case Part::real: return stats.abs_variance() + re;
    case Part::imag: return stats.abs_variance() - re;
    case Part::modulus: return stats.abs_variance() + std::abs(stats.complex_variance());
    }
    return Real(0);
}

} // namespace detail

/// Upper bound on the squared gap between ranks l < k of the real parts, the
/// imaginary parts, or (along a suitable ordering) the values themselves.
template <typename Real>
Real complex_difference_bound(const ComplexSequenceStats<Real>& stats, std::size_t l,
                              std::size_t k, Part part) {
    const std::size_t n = stats.size();
    detail::require_ordered_pair(l, k, n);
    const auto values = stats.values();
    if (part == Part::real &&
        !std::is_sorted(values.begin(), values.end(),
                        [](const auto& a, const auto& b) { return a.real() < b.real(); })) {
        throw PreconditionError("values must be sorted by real part");
    }
    if (part == Part::imag &&
        !std::is_sorted(values.begin(), values.end(),
                        [](const auto& a, const auto& b) { return a.imag() < b.imag(); })) {
        throw PreconditionError("values must be sorted by imaginary part");
    }
    return detail::pair_coefficient<Real>(n, l, k) * detail::part_combination(stats, part);
}

/// Squared distance from the mean allowed for the k-th and (n-k+1)-th order
/// statistics: (n-k)/(2k) times S_z^2 + Re S^2, S_z^2 - Re S^2 or S_z^2 + |S^2|.
template <typename Real>
Real deviation_order_bound(const ComplexSequenceStats<Real>& stats, std::size_t k, Part part) {
    const std::size_t n = stats.size();
    detail::require_at_least_two(n);
    detail::require_rank(k, n, "k");
    if (k > n - k + 1) throw PreconditionError("need k <= n-k+1");
    return static_cast<Real>(n - k) / (Real(2) * static_cast<Real>(k)) *
           detail::part_combination(stats, part);
}

/// Projects every value onto `direction`, sorts, and checks the squared gap of
/// ranks l < k against n(n+l-k+1)/(2l(n-k+1)) (S_z^2 + |S^2|). True for all
/// inputs in exact arithmetic; rounding slack is 1e-12 scale^2.
template <typename Real>
bool directional_projection_check(std::span<const std::complex<Real>> values,
                                  std::complex<Real> direction, std::size_t l, std::size_t k) {
    if (std::abs(std::abs(direction) - Real(1)) > Real(4) * std::numeric_limits<Real>::epsilon()) {
        throw PreconditionError("direction must have unit modulus");
    }
    const ComplexSequenceStats<Real> stats(std::vector<std::complex<Real>>(values.begin(), values.end()));
    const std::size_t n = stats.size();
    detail::require_ordered_pair(l, k, n);

    std::vector<Real> projected;
    projected.reserve(n);
    for (const auto& z : values) projected.push_back((direction * z).real());
    std::sort(projected.begin(), projected.end());

    const Real gap = projected[k - 1] - projected[l - 1];
    const Real bound = detail::pair_coefficient<Real>(n, l, k) *
                       detail::part_combination(stats, Part::modulus);
    const Real slack = Real(1e-12) * stats.scale() * stats.scale();
    return gap * gap <= bound + slack;
}

/// (1 + (n-1)^(2r-1)) / (n (n-1)^(2r-1)) |z_j - mean|^(2r); never above
/// central_abs_moment(r).
template <typename Real>
Real power_deviation_bound(const ComplexSequenceStats<Real>& stats, std::size_t j, unsigned r) {
    const std::size_t n = stats.size();
    detail::require_at_least_two(n);
    if (r < 1) throw ParameterError("power r must be at least 1");
    detail::require_rank(j, n, "j");
    const Real q = detail::integer_power(static_cast<Real>(n - 1), 2 * r - 1);
    const Real deviation = detail::integer_power(std::norm(stats.values()[j - 1] - stats.mean()), r);
    return (Real(1) + q) * deviation / (static_cast<Real>(n) * q);
}

} // namespace tracebound
