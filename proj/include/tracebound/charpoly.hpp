#pragma once

// Independent small-order eigenvalue oracle: characteristic polynomial by the
// Faddeev-LeVerrier recurrence, roots by Aberth-Ehrlich iteration, all in
// long double. Shares no code path with the QR eigensolver.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "tracebound/error.hpp"
#include "tracebound/matrix.hpp"

namespace tracebound {

inline constexpr std::size_t kMaxCharpolyOrder = 8;

/// Coefficients c_0..c_n of det(xI - A) (c_n = 1), lowest degree first.
template <typename Real>
std::vector<std::complex<long double>> characteristic_polynomial(const ComplexMatrix<Real>& a) {
    using Wide = std::complex<long double>;
    using WideMatrix = Eigen::Matrix<Wide, Eigen::Dynamic, Eigen::Dynamic>;
    require_square(a);
    const Eigen::Index n = a.rows();
    const WideMatrix aw = a.template cast<Wide>();
    std::vector<Wide> c(static_cast<std::size_t>(n) + 1);
    c[static_cast<std::size_t>(n)] = Wide(1);
    WideMatrix m = WideMatrix::Zero(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = aw * m;
        m.diagonal().array() += c[static_cast<std::size_t>(n - k + 1)];
        c[static_cast<std::size_t>(n - k)] = -(aw * m).trace() / static_cast<long double>(k);
    }
    return c;
}

namespace detail {

inline std::complex<long double> horner(const std::vector<std::complex<long double>>& c,
                                        std::complex<long double> z,
                                        std::complex<long double>& derivative) {
    std::complex<long double> p = c.back();
    derivative = 0;
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        derivative = derivative * z + p;
        p = p * z + c[i];
    }
    return p;
}

} // namespace detail

/// Roots of a monic polynomial (coefficients lowest degree first).
inline std::vector<std::complex<long double>>
polynomial_roots(const std::vector<std::complex<long double>>& c) {
    using Wide = std::complex<long double>;
    const std::size_t n = c.size() - 1;
    std::vector<Wide> z(n);
    if (n == 0) return z;

    // Cauchy bound on root moduli.
    long double bound = 0;
    for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, std::abs(c[i]));
    bound += 1;
    const long double start = std::min(bound, 1 + bound / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const long double angle = 2 * 3.14159265358979323846L * static_cast<long double>(i) /
                                      static_cast<long double>(n) +
                                  0.4L;
        z[i] = std::polar(start, angle);
    }

    const long double eps = std::numeric_limits<long double>::epsilon();
    for (int iter = 0; iter < 2000; ++iter) {
        long double largest_step = 0;
        for (std::size_t i = 0; i < n; ++i) {
            Wide derivative;
            const Wide p = detail::horner(c, z[i], derivative);
            if (p == Wide(0)) continue;
            const Wide ratio = derivative == Wide(0) ? Wide(0) : p / derivative;
            Wide repulsion = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i && z[i] != z[j]) repulsion += Wide(1) / (z[i] - z[j]);
            }
            const Wide denom = Wide(1) - ratio * repulsion;
            const Wide step = (derivative == Wide(0) || denom == Wide(0)) ? p : ratio / denom;
            z[i] -= step;
            largest_step = std::max(largest_step, std::abs(step) / std::max(1.0L, std::abs(z[i])));
        }
        if (largest_step <= 4 * eps) break;
    }
    return z;
}

/// Eigenvalues of a matrix of order at most 8 via its characteristic polynomial.
template <typename Real>
std::vector<std::complex<Real>> charpoly_eigenvalues(const ComplexMatrix<Real>& a) {
    require_square(a);
    if (static_cast<std::size_t>(a.rows()) > kMaxCharpolyOrder) {
        throw ParameterError("characteristic-polynomial oracle is limited to order 8");
    }
    const auto roots = polynomial_roots(characteristic_polynomial(a));
    std::vector<std::complex<Real>> out;
    out.reserve(roots.size());
    for (const auto& r : roots) {
        out.emplace_back(static_cast<Real>(r.real()), static_cast<Real>(r.imag()));
    }
    return out;
}

/// Largest pairing distance under the best one-to-one matching of two
/// eigenvalue multisets; exhaustive for up to 8 values, greedy beyond.
template <typename Real>
Real spectral_match_distance(std::vector<std::complex<Real>> a, std::vector<std::complex<Real>> b) {
    if (a.size() != b.size()) throw PreconditionError("spectra differ in size");
    const std::size_t n = a.size();
    if (n == 0) return Real(0);
    if (n <= kMaxCharpolyOrder) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        Real best = std::numeric_limits<Real>::infinity();
        do {
            Real worst(0);
            for (std::size_t i = 0; i < n && worst < best; ++i) worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
            best = std::min(best, worst);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }
    Real worst(0);
    for (const auto& z : a) {
        auto nearest = std::min_element(b.begin(), b.end(), [&](const auto& x, const auto& y) {
            return std::abs(x - z) < std::abs(y - z);
        });
        worst = std::max(worst, std::abs(*nearest - z));
        b.erase(nearest);
    }
    return worst;
}

} // namespace tracebound
