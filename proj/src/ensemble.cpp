#include "tracebound/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "tracebound/error.hpp"

namespace tracebound {

namespace {

using Complex = std::complex<double>;
using Matrix = ComplexMatrix<double>;

class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : engine_(seed) {}

    double real() { return normal_(engine_); }
    Complex complex() { return {real() * M_SQRT1_2, real() * M_SQRT1_2}; }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::size_t index(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }

    Matrix matrix(std::size_t n) {
        Matrix g(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) g(i, j) = complex();
        }
        return g;
    }

    // Haar unitary: QR of a complex Gaussian matrix with R's diagonal phases removed.
    Matrix unitary(std::size_t n) {
        const Eigen::HouseholderQR<Matrix> qr(matrix(n));
        Matrix q = qr.householderQ();
        const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (std::size_t j = 0; j < n; ++j) {
            const double modulus = std::abs(r(j, j));
            if (modulus > 0) q.col(j) *= r(j, j) / modulus;
        }
        return q;
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

Matrix jordan_defective(std::size_t n, Gaussian& rng) {
    Matrix j = Matrix::Zero(n, n);
    std::size_t pos = 0;
    while (pos < n) {
        // The leading block always has size >= 2 so the matrix is defective.
        const std::size_t drawn = (pos == 0 && n >= 2) ? rng.index(2, 3) : rng.index(1, 3);
        const std::size_t size = std::min(drawn, n - pos);
        const double eigenvalue = rng.real();
        for (std::size_t i = 0; i < size; ++i) {
            j(pos + i, pos + i) = eigenvalue;
            if (i + 1 < size) j(pos + i, pos + i + 1) = 1.0;
        }
        pos += size;
    }
    const Matrix u = rng.unitary(n);
    const Matrix v = rng.unitary(n);
    Eigen::VectorXd d(n);
    for (std::size_t i = 0; i < n; ++i) d(i) = rng.uniform(1.0, 2.0);
    const Matrix s = u * d.cast<Complex>().asDiagonal() * v.adjoint();
    const Matrix s_inv = v * d.cwiseInverse().cast<Complex>().asDiagonal() * u.adjoint();
    return s * j * s_inv;
}

} // namespace

const char* to_string(EnsembleKind kind) {
    switch (kind) {
    case EnsembleKind::hermitian: return "hermitian";
    case EnsembleKind::normal: return "normal";
    case EnsembleKind::ginibre: return "ginibre";
    case EnsembleKind::jordan_defective: return "jordan_defective";
    case EnsembleKind::diagonal: return "diagonal";
    }
    return "unknown";
}

EnsembleKind parse_ensemble_kind(const std::string& name) {
    for (auto kind : {EnsembleKind::hermitian, EnsembleKind::normal, EnsembleKind::ginibre,
                      EnsembleKind::jordan_defective, EnsembleKind::diagonal}) {
        if (name == to_string(kind)) return kind;
    }
    throw ParameterError("unknown ensemble kind '" + name + "'");
}

ComplexMatrix<double> generate(const EnsembleSpec& spec) {
    std::size_t n = spec.n;
    if (spec.kind == EnsembleKind::diagonal && !spec.values.empty()) {
        if (n != 0 && n != spec.values.size()) {
            throw ParameterError("diagonal ensemble: n = " + std::to_string(n) + " but " +
                                 std::to_string(spec.values.size()) + " values given");
        }
        n = spec.values.size();
    } else if (!spec.values.empty()) {
        throw ParameterError("explicit values are only accepted by the diagonal ensemble");
    }
    if (n < 1) throw ParameterError("ensemble order must be at least 1");
    if (!(spec.scale > 0) || !std::isfinite(spec.scale)) throw ParameterError("scale must be positive");

    Gaussian rng(spec.seed);
    Matrix a;
    switch (spec.kind) {
    case EnsembleKind::hermitian: {
        const Matrix g = rng.matrix(n);
        a = (g + g.adjoint()) / 2.0;
        break;
    }
    case EnsembleKind::normal: {
        const Matrix u = rng.unitary(n);
        ComplexVector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) z(i) = rng.complex();
        a = u * z.asDiagonal() * u.adjoint();
        break;
    }
    case EnsembleKind::ginibre: a = rng.matrix(n); break;
    case EnsembleKind::jordan_defective: a = jordan_defective(n, rng); break;
    case EnsembleKind::diagonal: {
        ComplexVector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) z(i) = spec.values.empty() ? Complex(rng.real()) : spec.values[i];
        a = z.asDiagonal();
        break;
    }
    }
    return a * spec.scale;
}

bool has_real_spectrum(const EnsembleSpec& spec) {
    switch (spec.kind) {
    case EnsembleKind::hermitian:
    case EnsembleKind::jordan_defective: return true;
    case EnsembleKind::diagonal:
        return std::all_of(spec.values.begin(), spec.values.end(),
                           [](const Complex& z) { return z.imag() == 0.0; });
    case EnsembleKind::normal:
    case EnsembleKind::ginibre: return false;
    }
    return false;
}

} // namespace tracebound
