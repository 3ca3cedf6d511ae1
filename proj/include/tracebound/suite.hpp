#pragma once

// Randomized soundness harness: generates matrices, computes every bound from
// traces, and checks every claim against the reference eigensolver.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "tracebound/ensemble.hpp"
#include "tracebound/matrix.hpp"

namespace tracebound {

struct ClaimFailure {
    std::string claim;   ///< family and parameters, e.g. "central_disk k=2"
    double margin = 0.0; ///< how far the claim missed (negative)
    std::string ensemble;
    std::size_t n = 0;
    std::uint64_t seed = 0; ///< regenerates the matrix via generate()
};

struct FamilySummary {
    std::size_t checked = 0;
    std::size_t failed = 0;
    double min_margin = std::numeric_limits<double>::infinity();
};

struct VerificationReport {
    std::size_t matrices = 0;
    std::size_t claims_checked = 0;
    std::vector<ClaimFailure> failures;
    /// Eigensolver failures, kept apart from claim failures.
    std::vector<ClaimFailure> convergence_failures;
    /// Smallest margin over passing claims.
    double min_margin = std::numeric_limits<double>::infinity();
    std::map<std::string, FamilySummary> families;
    /// Total failures, including those beyond the recording cap.
    std::size_t failure_count = 0;

    bool passed() const noexcept { return failure_count == 0 && convergence_failures.empty(); }
    void merge(const VerificationReport& other);
};

struct SuiteOptions {
    /// Absolute slack per matrix is slack_factor * (||A||_F + 1).
    double slack_factor = 1e-9;
    /// Failures beyond this many are counted but not stored.
    std::size_t max_recorded_failures = 100;
    /// 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
    unsigned threads = 0;
};

/// Seed of trial `trial` of a spec; generate(spec with this seed) reproduces the matrix.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

/// Runs every claim on one matrix. `real_spectrum` enables the extremal bounds
/// for non-Hermitian inputs known to have real eigenvalues.
VerificationReport check_matrix(const ComplexMatrix<double>& a, bool real_spectrum, std::uint64_t seed,
                                const std::string& label, const SuiteOptions& options = {});

VerificationReport run_suite(const std::vector<EnsembleSpec>& specs, std::size_t trials_per_spec,
                             const SuiteOptions& options = {});

} // namespace tracebound
