#pragma once

// One-matrix analysis: every bound the traces give, optionally verified against
// the reference eigensolver, packaged as a versioned, serializable report.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracebound/ensemble.hpp"
#include "tracebound/io.hpp"
#include "tracebound/matrix.hpp"
#include "tracebound/suite.hpp"

namespace tracebound {

inline constexpr const char* kReportSchema = "tracebound-report/1";
inline constexpr const char* kToolVersion = "0.1.0";

enum class OutputFormat { json, table, csv };

const char* to_string(OutputFormat format);
OutputFormat parse_output_format(const std::string& name);
/// "oracle", "normal", "upper" (and the long names of AbsVarianceSource).
AbsVarianceSource parse_mode(const std::string& name);

struct AnalysisConfig {
    /// Exactly one of input and ensemble is set.
    std::optional<std::string> input;
    std::optional<MatrixFormat> format;
    std::optional<EnsembleSpec> ensemble;
    /// Empty means every valid k.
    std::vector<std::size_t> k;
    std::vector<unsigned> r{1, 2};
    /// Unset means auto: the normal formula for normal input, the upper bound otherwise.
    std::optional<AbsVarianceSource> mode;
    std::optional<std::size_t> rank;
    bool verify = false;
    OutputFormat out = OutputFormat::json;
    /// Verification slack is slack * (||A||_F + 1).
    double slack = 1e-9;
    std::uint64_t seed = 0;
    /// Eigenvalue the neighbor regions are centered on.
    std::optional<std::complex<double>> known;
    /// Enables the extremal bounds for a non-Hermitian matrix with real spectrum.
    bool assume_real = false;

    friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

/// Throws ParameterError on empty or contradictory settings.
void validate(const AnalysisConfig& config);

struct CheckResult {
    bool pass = false;
    double margin = 0.0;

    friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct MatrixInfo {
    std::size_t n = 0;
    bool hermitian = false;
    bool normal = false;
    std::string source;

    friend bool operator==(const MatrixInfo&, const MatrixInfo&) = default;
};

struct MomentEcho {
    unsigned r = 1;
    std::complex<double> trace_b2r{}; ///< tr B^(2r)
    double moment = 0.0;              ///< bound on sum |lambda_i(B)|^(2r) used by the disk
    std::string moment_source;        ///< "oracle" or "upper_bound"

    friend bool operator==(const MomentEcho&, const MomentEcho&) = default;
};

struct StatsEcho {
    std::complex<double> trace{};
    std::complex<double> trace_sq{};
    std::complex<double> trace_b2{};
    std::complex<double> mean{};
    std::complex<double> complex_variance{};
    double abs_variance = 0.0;
    std::string abs_variance_source;
    double real_part_variance = 0.0;
    double imag_part_variance = 0.0;
    std::size_t effective_dim = 0;
    std::vector<MomentEcho> moments;

    friend bool operator==(const StatsEcho&, const StatsEcho&) = default;
};

struct RegionEntry {
    std::string id;
    std::string shape; ///< "disk" or "strip"
    std::string method;
    std::vector<std::pair<std::string, long long>> params;
    std::string note;
    std::string axis; ///< strips only: "real" or "imag"
    std::complex<double> center{}; ///< strips use the real component
    double extent = 0.0;           ///< radius or half-width
    std::string claim;
    std::size_t claim_count = 0;
    std::complex<double> claim_known{};
    std::optional<CheckResult> check;

    friend bool operator==(const RegionEntry&, const RegionEntry&) = default;
};

struct SpreadEntry {
    std::size_t l = 1;
    std::size_t k = 2;
    double real_parts = 0.0;
    double imag_parts = 0.0;
    double modulus = 0.0;
    std::optional<CheckResult> real_check;
    std::optional<CheckResult> imag_check;
    std::optional<CheckResult> modulus_check;

    friend bool operator==(const SpreadEntry&, const SpreadEntry&) = default;
};

struct ExtremalEntry {
    std::string id; ///< "wolkowicz_styan" or "trace_moment_r<r>"
    std::string method;
    unsigned r = 1;
    double lower_bound_on_max = 0.0;
    double upper_bound_on_min = 0.0;
    std::optional<CheckResult> check;

    friend bool operator==(const ExtremalEntry&, const ExtremalEntry&) = default;
};

struct SkippedEntry {
    std::string id;
    std::string reason;

    friend bool operator==(const SkippedEntry&, const SkippedEntry&) = default;
};

struct VerificationBlock {
    std::vector<std::complex<double>> eigenvalues;
    double residual = 0.0;
    double slack = 0.0; ///< absolute
    std::size_t checked = 0;
    std::size_t failed = 0;
    double min_margin = 0.0;

    bool passed() const noexcept { return failed == 0; }
    friend bool operator==(const VerificationBlock&, const VerificationBlock&) = default;
};

struct Provenance {
    std::string tool = "tracebound";
    std::string version = kToolVersion;
    AnalysisConfig config;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct BoundReport {
    std::string schema = kReportSchema;
    MatrixInfo matrix;
    StatsEcho stats;
    std::vector<RegionEntry> regions;
    std::vector<SpreadEntry> spread;
    std::vector<ExtremalEntry> extremal;
    std::vector<SkippedEntry> skipped;
    std::optional<VerificationBlock> verification;
    Provenance provenance;

    /// False only when verification ran and some claim failed.
    bool passed() const noexcept { return !verification || verification->passed(); }
    friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

/// Loads the matrix named by the config (file or generated ensemble).
ComplexMatrix<double> load_matrix(const AnalysisConfig& config);

/// Gated bounds that do not apply are listed in `skipped`. Throws on invalid
/// configuration and ConvergenceError when the oracle is needed and fails.
BoundReport analyze(const AnalysisConfig& config);
BoundReport analyze(const ComplexMatrix<double>& a, const AnalysisConfig& config);

/// Lossless: from_json(to_json(r)) == r, and doubles print in shortest round-trip form.
std::string report_to_json(const BoundReport& report);
BoundReport report_from_json(const std::string& text);
/// Six decimals, complex values as a+bi.
std::string report_to_table(const BoundReport& report);
std::string report_to_csv(const BoundReport& report);
std::string render(const BoundReport& report, OutputFormat format);

/// Suite summaries: per-family counts, recorded failures, convergence failures.
std::string suite_to_table(const VerificationReport& report);
std::string suite_to_json(const VerificationReport& report);

/// "a+bi" with six decimals.
std::string format_complex(std::complex<double> z);

} // namespace tracebound
