#pragma once

// Reproducible random test matrices.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tracebound/matrix.hpp"

namespace tracebound {

enum class EnsembleKind { hermitian, normal, ginibre, jordan_defective, diagonal };

const char* to_string(EnsembleKind kind);
/// Accepts the names printed by to_string; throws ParameterError otherwise.
EnsembleKind parse_ensemble_kind(const std::string& name);

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::ginibre;
    std::size_t n = 4;
    std::uint64_t seed = 0;
    double scale = 1.0;
    /// diagonal only: explicit diagonal; when set, n may be 0 or must equal its length.
    std::vector<std::complex<double>> values;

    friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

/// hermitian: (G + G*)/2. normal: U diag(z) U* with U from the QR of a
/// Gaussian matrix (phases fixed so U is Haar distributed) and complex
/// Gaussian z. ginibre: i.i.d. standard complex Gaussian entries.
/// jordan_defective: Jordan blocks with real eigenvalues (at least one block
/// of size >= 2) conjugated by S = U diag(d) V* with d in [1, 2], so cond(S) <= 2.
/// diagonal: the given values, or real Gaussian ones. Every entry is
/// multiplied by `scale`.
ComplexMatrix<double> generate(const EnsembleSpec& spec);

/// True when every matrix of the spec has real eigenvalues by construction.
bool has_real_spectrum(const EnsembleSpec& spec);

} // namespace tracebound
