#include "tracebound/suite.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <future>
#include <random>
#include <thread>

#include "tracebound/bounds.hpp"
#include "tracebound/eigensolver.hpp"
#include "tracebound/variance.hpp"
#include "tracebound/verify.hpp"

namespace tracebound {

namespace {

using Complex = std::complex<double>;
using Matrix = ComplexMatrix<double>;

class Recorder {
public:
    Recorder(VerificationReport& report, const SuiteOptions& options, std::string label, std::size_t n,
             std::uint64_t seed)
        : report_(report), options_(options), label_(std::move(label)), n_(n), seed_(seed) {}

    void record(const std::string& family, const std::string& params, ClaimCheck<double> check) {
        auto& summary = report_.families[family];
        ++summary.checked;
        ++report_.claims_checked;
        if (check.pass) {
            summary.min_margin = std::min(summary.min_margin, check.margin);
            report_.min_margin = std::min(report_.min_margin, check.margin);
            return;
        }
        ++summary.failed;
        fail(family + (params.empty() ? "" : " " + params), check.margin);
    }

    void fail(const std::string& claim, double margin) {
        ++report_.failure_count;
        if (report_.failures.size() < options_.max_recorded_failures) {
            report_.failures.push_back({claim, margin, label_, n_, seed_});
        }
    }

    // Runs `body`; an exception counts as one failure of `family`.
    template <typename F>
    void guarded(const std::string& family, const std::string& params, F&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            auto& summary = report_.families[family];
            ++summary.checked;
            ++summary.failed;
            ++report_.claims_checked;
            fail(family + (params.empty() ? "" : " " + params) + ": " + e.what(), 0.0);
        }
    }

private:
    VerificationReport& report_;
    const SuiteOptions& options_;
    std::string label_;
    std::size_t n_;
    std::uint64_t seed_;
};

std::string param(const char* name, std::size_t value) { return std::string(name) + "=" + std::to_string(value); }

ClaimCheck<double> at_most(double bound, double value, double slack) {
    const double margin = bound - value;
    return {margin >= -slack, margin};
}

// Real traces of even powers of B are nonnegative for real spectra; rounding can
// leave a tiny negative residue, which is cleared here.
double even_power_trace(const Matrix& b, unsigned p) {
    const double value = matrix_power_trace(b, p).real();
    const double scale = std::pow(b.norm() + 1.0, static_cast<double>(p));
    return (value < 0 && -value <= 1e-12 * scale) ? 0.0 : value;
}

void check_sequence_lemmas(Recorder& rec, const std::vector<Complex>& eigs, std::mt19937_64& rng) {
    const std::size_t n = eigs.size();
    if (n < 2) return;
    const ComplexSequenceStats<double> zstats(eigs);
    const double scale = std::max(zstats.scale(), 1e-300);

    std::vector<double> xs;
    for (const auto& z : eigs) xs.push_back(z.real());
    std::sort(xs.begin(), xs.end());
    const RealSequenceStats<double> x(xs);
    const double slack2 = 1e-12 * scale * scale;

    for (std::size_t j = 1; j <= n; ++j) {
        rec.record("samuelson", param("j", j), at_most(x.variance(), samuelson_bound(x, j), slack2));
    }
    rec.record("nagy", {}, at_most(x.variance(), nagy_bound(x), slack2));

    std::uniform_int_distribution<std::size_t> pick_l(1, n - 1);
    const std::size_t l = pick_l(rng);
    const std::size_t k = std::uniform_int_distribution<std::size_t>(l + 1, n)(rng);
    rec.record("fahmy_prochan", param("l", l) + " " + param("k", k),
               at_most(x.variance(), fahmy_prochan_bound(x, l, k), slack2));

    for (std::size_t kk = 1; kk <= n - kk + 1 && kk < n; ++kk) {
        const auto [low, high] = order_statistic_bound(x, kk);
        rec.record("order_statistic", param("k", kk),
                   at_most(x.variance(), std::max(low, high), slack2));
    }

    std::vector<double> weights(n);
    for (auto& w : weights) w = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    double total = 0;
    for (double w : weights) total += w;
    for (auto& w : weights) w /= total;
    // Renormalized weights can miss 1 by an ulp or two; fold the residue into the last one.
    double partial = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) partial += weights[i];
    weights.back() = 1.0 - partial;
    const WeightedSequenceStats<double> w(xs, weights);
    for (std::size_t j = 1; j <= n; ++j) {
        rec.record("weighted_variance", param("j", j),
                   at_most(w.weighted_variance(), weighted_variance_bound(w, j), slack2));
    }

    for (unsigned r = 1; r <= 3; ++r) {
        const double moment = zstats.central_abs_moment(r);
        const double slack = 1e-12 * std::pow(scale, 2.0 * r);
        for (std::size_t j = 1; j <= n; ++j) {
            rec.record("power_deviation", param("r", r) + " " + param("j", j),
                       at_most(moment, power_deviation_bound(zstats, j, r), slack));
        }
    }

    const Complex direction = std::polar(1.0, std::uniform_real_distribution<double>(0, 2 * M_PI)(rng));
    const bool ok = directional_projection_check<double>(eigs, direction, l, k);
    rec.record("directional_projection", param("l", l) + " " + param("k", k), {ok, ok ? 0.0 : -1.0});
}

} // namespace

void VerificationReport::merge(const VerificationReport& other) {
    matrices += other.matrices;
    claims_checked += other.claims_checked;
    failure_count += other.failure_count;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
    convergence_failures.insert(convergence_failures.end(), other.convergence_failures.begin(),
                                other.convergence_failures.end());
    min_margin = std::min(min_margin, other.min_margin);
    for (const auto& [name, summary] : other.families) {
        auto& mine = families[name];
        mine.checked += summary.checked;
        mine.failed += summary.failed;
        mine.min_margin = std::min(mine.min_margin, summary.min_margin);
    }
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) {
    // splitmix64 of (base, trial) so neighbouring trials are decorrelated.
    std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

VerificationReport check_matrix(const Matrix& a, bool real_spectrum, std::uint64_t seed, const std::string& label,
                                const SuiteOptions& options) {
    VerificationReport report;
    report.matrices = 1;
    const std::size_t n = static_cast<std::size_t>(a.rows());
    Recorder rec(report, options, label, n, seed);
    std::mt19937_64 rng(seed ^ 0x5DEECE66DULL);

    Spectrum<double> spectrum;
    try {
        spectrum = reference_spectrum(a);
    } catch (const ConvergenceError& e) {
        report.convergence_failures.push_back({e.what(), 0.0, label, n, seed});
        return report;
    }
    const auto& eigs = spectrum.eigenvalues;

    const double fro = a.norm();
    const double slack = options.slack_factor * (fro + 1.0);

    // Oracle self-consistency against the trace identities.
    {
        Complex sum(0), sum_sq(0);
        for (const auto& z : eigs) {
            sum += z;
            sum_sq += z * z;
        }
        const double tol1 = 1e-8 * fro;
        const double tol2 = 1e-8 * fro * fro;
        const double err1 = std::abs(sum - a.trace());
        const double err2 = std::abs(sum_sq - (a * a).trace());
        rec.record("oracle_trace", {}, {err1 <= tol1, tol1 - err1});
        rec.record("oracle_trace_sq", {}, {err2 <= tol2, tol2 - err2});
        if (is_hermitian(a)) {
            double worst_imag = 0;
            for (const auto& z : eigs) worst_imag = std::max(worst_imag, std::abs(z.imag()));
            rec.record("oracle_real_spectrum", {}, at_most(1e-8 * (fro + 1.0), worst_imag, 0.0));
        }
    }

    StatsOptions<double> oracle_options;
    oracle_options.mode = AbsVarianceSource::oracle;
    oracle_options.oracle_eigenvalues = eigs;
    const auto stats = spectral_stats(a, oracle_options);
    const auto upper_stats = spectral_stats<double>(a, {});
    const CenteredMatrix<double> b(a);

    if (stats.normal) {
        StatsOptions<double> normal_options;
        normal_options.mode = AbsVarianceSource::normal_formula;
        const auto normal_stats = spectral_stats(a, normal_options);
        const double tol = 1e-9 * fro * fro;
        const double err = std::abs(normal_stats.abs_variance - stats.abs_variance);
        rec.record("normal_formula_abs_variance", {}, {err <= tol, tol - err});
    }

    // Central disks and strips, every valid k, from exact and from upper-bound S_lambda^2.
    for (std::size_t k = 1; 2 * k <= n + 1; ++k) {
        const std::string p = param("k", k);
        rec.guarded("central_disk", p, [&] {
            const auto regions = central_disks(stats, k);
            rec.record("central_disk", p, verify_region(regions.disk, spectrum, slack));
            rec.record("central_strip_real", p, verify_region(regions.real_strip, spectrum, slack));
            rec.record("central_strip_imag", p, verify_region(regions.imag_strip, spectrum, slack));
            const auto loose = central_disks(upper_stats, k);
            rec.record("central_disk_upper_bound", p, verify_region(loose.disk, spectrum, slack));
            rec.record("central_strip_upper_bound", p, verify_region(loose.real_strip, spectrum, slack));
            rec.record("central_strip_upper_bound", p, verify_region(loose.imag_strip, spectrum, slack));
        });
    }

    if (n >= 2) {
        const auto spread = spread_upper_bounds(stats, 1, n);
        rec.record("spread_modulus", {}, verify_spread(spread.modulus, spectrum, slack));
        rec.record("spread_real", {}, verify_spread(spread.real_parts, spectrum, slack));
        rec.record("spread_imag", {}, verify_spread(spread.imag_parts, spectrum, slack));

        const std::size_t l = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(l + 1, n)(rng);
        const std::string p = param("l", l) + " " + param("k", k);
        const auto gaps = spread_upper_bounds(stats, l, k);
        rec.record("gap_real", p, verify_spread(gaps.real_parts, spectrum, slack));
        rec.record("gap_imag", p, verify_spread(gaps.imag_parts, spectrum, slack));

        const Complex known = eigs[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)];
        const auto neighbor = neighbor_disk(stats, known);
        rec.record("neighbor_disk", {}, verify_region(neighbor.disk, spectrum, slack));
        rec.record("neighbor_strip_real", {}, verify_region(neighbor.real_strip, spectrum, slack));
        rec.record("neighbor_strip_imag", {}, verify_region(neighbor.imag_strip, spectrum, slack));
    }

    const double b_norm = b.matrix().norm();
    for (unsigned r = 1; r <= 3; ++r) {
        const std::string p = param("r", r);
        double oracle_moment = 0;
        for (const auto& z : eigs) oracle_moment += std::pow(std::norm(z - b.shift()), static_cast<double>(r));
        const double upper_moment = moment_upper_bound(b, r);
        rec.record("moment_upper_bound", p,
                   at_most(upper_moment, oracle_moment, options.slack_factor * std::pow(b_norm + 1.0, 2.0 * r)));
        rec.record("all_eigs_disk_oracle", p, verify_region(all_eigs_disk(b, r, oracle_moment), spectrum, slack));
        rec.record("all_eigs_disk_upper_bound", p,
                   verify_region(all_eigs_disk(b, r, upper_moment), spectrum, slack));
        if (stats.normal) {
            rec.record("outer_circle", p, verify_region(outer_circle(b, r), spectrum, slack));
        }
    }

    if (stats.hermitian || real_spectrum) {
        const double trace_b2 = even_power_trace(b.matrix(), 2);
        rec.guarded("wolkowicz_styan", {}, [&] {
            rec.record("wolkowicz_styan", {},
                       verify_extremal(wolkowicz_styan_bounds(stats, trace_b2, true), spectrum, slack));
        });
        for (unsigned r = 1; r <= 3; ++r) {
            const std::string p = param("r", r);
            rec.guarded("trace_moment_extremal", p, [&] {
                const double trace_b2r = even_power_trace(b.matrix(), 2 * r);
                const auto bounds = trace_moment_extremal_bounds(stats, trace_b2, trace_b2r, r, true);
                rec.record("trace_moment_extremal", p, verify_extremal(bounds, spectrum, slack));
            });
        }
    }

    rec.guarded("sequence_lemmas", {}, [&] { check_sequence_lemmas(rec, eigs, rng); });
    return report;
}

VerificationReport run_suite(const std::vector<EnsembleSpec>& specs, std::size_t trials_per_spec,
                             const SuiteOptions& options) {
    if (trials_per_spec < 1) throw ParameterError("need at least one trial per spec");
    VerificationReport total;
    unsigned threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, trials_per_spec));

    for (const auto& spec : specs) {
        const bool real_spectrum = has_real_spectrum(spec);
        const std::string label = to_string(spec.kind);
        auto run_chunk = [&, real_spectrum](std::size_t begin, std::size_t end) {
            VerificationReport part;
            for (std::size_t t = begin; t < end; ++t) {
                EnsembleSpec trial = spec;
                trial.seed = trial_seed(spec.seed, t);
                part.merge(check_matrix(generate(trial), real_spectrum, trial.seed, label, options));
            }
            return part;
        };
        std::vector<std::future<VerificationReport>> parts;
        const std::size_t chunk = (trials_per_spec + threads - 1) / threads;
        for (std::size_t begin = 0; begin < trials_per_spec; begin += chunk) {
            parts.push_back(std::async(std::launch::async, run_chunk, begin, std::min(trials_per_spec, begin + chunk)));
        }
        for (auto& part : parts) total.merge(part.get());
    }
    if (total.failures.size() > options.max_recorded_failures) total.failures.resize(options.max_recorded_failures);
    return total;
}

} // namespace tracebound
