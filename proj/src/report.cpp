#include "tracebound/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tracebound/bounds.hpp"
#include "tracebound/eigensolver.hpp"
#include "tracebound/error.hpp"
#include "tracebound/verify.hpp"

namespace tracebound {

namespace {

using Complex = std::complex<double>;
using Matrix = ComplexMatrix<double>;
using Json = nlohmann::ordered_json;

std::string with_params(const std::string& name, const std::vector<std::pair<std::string, long long>>& params) {
    std::string out = name;
    for (const auto& [key, value] : params) out += " " + key + "=" + std::to_string(value);
    return out;
}

const char* claim_name(ClaimKind kind) {
    switch (kind) {
    case ClaimKind::contains_at_least: return "contains_at_least";
    case ClaimKind::contains_all: return "contains_all";
    case ClaimKind::contains_one_more_given: return "contains_one_more_given";
    case ClaimKind::at_least_one_on_or_outside: return "at_least_one_on_or_outside";
    }
    return "unknown";
}

RegionEntry entry_of(const Disk<double>& disk) {
    RegionEntry e;
    e.id = with_params(disk.origin.method, disk.origin.params);
    e.shape = "disk";
    e.method = disk.origin.method;
    e.params = disk.origin.params;
    e.note = disk.origin.note;
    e.center = disk.center;
    e.extent = disk.radius;
    e.claim = claim_name(disk.claim.kind);
    e.claim_count = disk.claim.count;
    e.claim_known = disk.claim.known;
    return e;
}

RegionEntry entry_of(const AxisStrip<double>& strip) {
    RegionEntry e;
    const char* axis = strip.axis == Axis::real ? "real" : "imag";
    e.id = with_params(strip.origin.method + "_" + axis, strip.origin.params);
    e.shape = "strip";
    e.method = strip.origin.method;
    e.params = strip.origin.params;
    e.note = strip.origin.note;
    e.axis = axis;
    e.center = {strip.center, 0.0};
    e.extent = strip.half_width;
    e.claim = claim_name(strip.claim.kind);
    e.claim_count = strip.claim.count;
    e.claim_known = strip.claim.known;
    return e;
}

class Checker {
public:
    Checker(const std::optional<Spectrum<double>>& spectrum, double slack, VerificationBlock* block)
        : spectrum_(spectrum), slack_(slack), block_(block) {}

    template <typename Region>
    void add(BoundReport& report, const Region& region) {
        RegionEntry e = entry_of(region);
        if (block_) e.check = count(verify_region(region, *spectrum_, slack_));
        report.regions.push_back(std::move(e));
    }

    std::optional<CheckResult> spread(const SpreadBound<double>& bound) {
        if (!block_) return std::nullopt;
        return count(verify_spread(bound, *spectrum_, slack_));
    }

    std::optional<CheckResult> extremal(const ExtremalBounds<double>& bounds) {
        if (!block_) return std::nullopt;
        return count(verify_extremal(bounds, *spectrum_, slack_));
    }

private:
    CheckResult count(ClaimCheck<double> check) {
        ++block_->checked;
        if (!check.pass) ++block_->failed;
        block_->min_margin = std::min(block_->min_margin, check.margin);
        return {check.pass, check.margin};
    }

    const std::optional<Spectrum<double>>& spectrum_;
    double slack_;
    VerificationBlock* block_;
};

// Runs one gated bound; library errors become a skipped entry.
template <typename F>
void gated(BoundReport& report, const std::string& id, F&& body) {
    try {
        body();
    } catch (const ConvergenceError&) {
        throw;
    } catch (const Error& e) {
        report.skipped.push_back({id, e.what()});
    }
}

// Real traces of even powers of B, with rounding residue below zero cleared.
double even_power_trace(const Complex& value, double b_norm, unsigned p) {
    const double scale = std::pow(b_norm + 1.0, static_cast<double>(p));
    if (std::abs(value.imag()) > 1e-9 * scale) {
        throw ConsistencyError("tr B^" + std::to_string(p) + " has an imaginary part; the spectrum is not real");
    }
    const double re = value.real();
    return (re < 0 && -re <= 1e-12 * scale) ? 0.0 : re;
}

} // namespace

const char* to_string(OutputFormat format) {
    switch (format) {
    case OutputFormat::json: return "json";
    case OutputFormat::table: return "table";
    case OutputFormat::csv: return "csv";
    }
    return "unknown";
}

OutputFormat parse_output_format(const std::string& name) {
    if (name == "json") return OutputFormat::json;
    if (name == "table") return OutputFormat::table;
    if (name == "csv") return OutputFormat::csv;
    throw ParameterError("unknown output format '" + name + "'");
}

AbsVarianceSource parse_mode(const std::string& name) {
    if (name == "oracle") return AbsVarianceSource::oracle;
    if (name == "normal" || name == "normal_formula") return AbsVarianceSource::normal_formula;
    if (name == "upper" || name == "upper_bound") return AbsVarianceSource::upper_bound;
    throw ParameterError("unknown mode '" + name + "'");
}

void validate(const AnalysisConfig& config) {
    if (config.input.has_value() == config.ensemble.has_value()) {
        throw ParameterError("give exactly one of an input file and an ensemble");
    }
    if (config.r.empty()) throw ParameterError("need at least one power r");
    for (unsigned r : config.r) {
        if (r < 1) throw ParameterError("power r must be at least 1");
    }
    for (std::size_t k : config.k) {
        if (k < 1) throw ParameterError("k must be at least 1");
    }
    if (config.rank && *config.rank < 1) throw ParameterError("rank must be at least 1");
    if (!(config.slack >= 0.0) || !std::isfinite(config.slack)) throw ParameterError("slack must be finite and nonnegative");
    if (config.known && (!std::isfinite(config.known->real()) || !std::isfinite(config.known->imag()))) {
        throw ValidationError("known eigenvalue must be finite");
    }
}

ComplexMatrix<double> load_matrix(const AnalysisConfig& config) {
    validate(config);
    if (config.input) return parse_matrix(*config.input, config.format);
    return generate(*config.ensemble);
}

BoundReport analyze(const AnalysisConfig& config) { return analyze(load_matrix(config), config); }

BoundReport analyze(const ComplexMatrix<double>& a, const AnalysisConfig& config) {
    validate(config);
    require_square(a);
    if (a.rows() == 0) throw DegenerateSizeError("empty matrix");
    if (!all_finite(a)) throw ValidationError("matrix contains NaN or Inf entries");
    const std::size_t n = static_cast<std::size_t>(a.rows());
    if (config.rank && *config.rank > n) {
        throw ParameterError("rank " + std::to_string(*config.rank) + " exceeds n = " + std::to_string(n));
    }
    const std::size_t m = config.rank.value_or(n);
    for (std::size_t k : config.k) {
        if (2 * k > m + 1) {
            throw ParameterError("k = " + std::to_string(k) + " outside [1, (m+1)/2] for m = " + std::to_string(m));
        }
    }

    const bool normal = is_normal(a);
    const AbsVarianceSource mode =
        config.mode.value_or(normal ? AbsVarianceSource::normal_formula : AbsVarianceSource::upper_bound);

    std::optional<Spectrum<double>> spectrum;
    if (config.verify || mode == AbsVarianceSource::oracle) spectrum = reference_spectrum(a);

    StatsOptions<double> options;
    options.mode = mode;
    options.rank_override = config.rank;
    if (spectrum) options.oracle_eigenvalues = spectrum->eigenvalues;
    const auto stats = spectral_stats(a, options);
    const CenteredMatrix<double> b(a);
    const double b_norm = b.matrix().norm();

    BoundReport report;
    report.provenance.config = config;
    report.matrix = {n, stats.hermitian, stats.normal,
                     config.input ? *config.input : std::string("ensemble:") + to_string(config.ensemble->kind)};
    report.stats.trace = stats.trace;
    report.stats.trace_sq = stats.trace_sq;
    report.stats.trace_b2 = matrix_power_trace(b.matrix(), 2);
    report.stats.mean = stats.mean;
    report.stats.complex_variance = stats.complex_variance;
    report.stats.abs_variance = stats.abs_variance;
    report.stats.abs_variance_source = to_string(stats.abs_variance_source);
    report.stats.real_part_variance = stats.real_part_variance;
    report.stats.imag_part_variance = stats.imag_part_variance;
    report.stats.effective_dim = stats.effective_dim;

    if (spectrum) {
        VerificationBlock block;
        block.eigenvalues = spectrum->eigenvalues;
        block.residual = spectrum->residual;
        block.slack = config.slack * (a.norm() + 1.0);
        block.min_margin = std::numeric_limits<double>::infinity();
        report.verification = block;
    }
    VerificationBlock* block = config.verify ? &*report.verification : nullptr;
    Checker checker(spectrum, report.verification ? report.verification->slack : 0.0, block);

    std::vector<std::size_t> ks = config.k;
    if (ks.empty()) {
        for (std::size_t k = 1; 2 * k <= m + 1; ++k) ks.push_back(k);
    }
    for (std::size_t k : ks) {
        gated(report, "central_disk k=" + std::to_string(k), [&] {
            const auto regions = central_disks(stats, k);
            checker.add(report, regions.disk);
            checker.add(report, regions.real_strip);
            checker.add(report, regions.imag_strip);
        });
    }

    gated(report, "spread l=1 k=" + std::to_string(n), [&] {
        const auto s = spread_upper_bounds(stats, 1, n);
        report.spread.push_back({1, n, s.real_parts.upper, s.imag_parts.upper, s.modulus.upper,
                                 checker.spread(s.real_parts), checker.spread(s.imag_parts),
                                 checker.spread(s.modulus)});
    });

    if (config.known) {
        gated(report, "neighbor_disk", [&] {
            const auto regions = neighbor_disk(stats, *config.known);
            checker.add(report, regions.disk);
            checker.add(report, regions.real_strip);
            checker.add(report, regions.imag_strip);
        });
    } else {
        report.skipped.push_back({"neighbor_disk", "needs a known eigenvalue (--known)"});
    }

    const bool oracle_moments = mode == AbsVarianceSource::oracle;
    for (unsigned r : config.r) {
        const std::string suffix = " r=" + std::to_string(r);
        MomentEcho echo;
        echo.r = r;
        echo.trace_b2r = matrix_power_trace(b.matrix(), 2 * r);
        if (oracle_moments) {
            for (const auto& z : spectrum->eigenvalues) {
                echo.moment += std::pow(std::norm(z - b.shift()), static_cast<double>(r));
            }
            echo.moment_source = "oracle";
        } else {
            echo.moment = moment_upper_bound(b, r);
            echo.moment_source = "upper_bound";
        }
        report.stats.moments.push_back(echo);

        gated(report, "all_eigenvalues_disk" + suffix, [&] { checker.add(report, all_eigs_disk(b, r, echo.moment)); });
        gated(report, "outer_circle" + suffix, [&] { checker.add(report, outer_circle(b, r)); });
    }

    const bool real_gate = stats.hermitian || config.assume_real;
    gated(report, "wolkowicz_styan", [&] {
        detail::require_real_spectrum(stats, config.assume_real);
        const double trace_b2 = even_power_trace(report.stats.trace_b2, b_norm, 2);
        const auto bounds = wolkowicz_styan_bounds(stats, trace_b2, config.assume_real);
        report.extremal.push_back({"wolkowicz_styan", to_string(bounds.method), 1, bounds.lower_bound_on_max,
                                   bounds.upper_bound_on_min, checker.extremal(bounds)});
    });
    for (const auto& echo : report.stats.moments) {
        const std::string id = "trace_moment_r" + std::to_string(echo.r);
        if (!real_gate) {
            report.skipped.push_back({id, "extremal bounds need a real spectrum: input is not Hermitian and no "
                                          "real-spectrum assertion was given"});
            continue;
        }
        gated(report, id, [&] {
            const double trace_b2 = even_power_trace(report.stats.trace_b2, b_norm, 2);
            const double trace_b2r = even_power_trace(echo.trace_b2r, b_norm, 2 * echo.r);
            const auto bounds = trace_moment_extremal_bounds(stats, trace_b2, trace_b2r, echo.r, config.assume_real);
            report.extremal.push_back({id, to_string(bounds.method), echo.r, bounds.lower_bound_on_max,
                                       bounds.upper_bound_on_min, checker.extremal(bounds)});
        });
    }

    if (report.verification) {
        auto& v = *report.verification;
        if (!config.verify || v.checked == 0) v.min_margin = 0.0;
        if (!config.verify) report.verification.reset();
    }
    return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

Json check_json(const std::optional<CheckResult>& c) {
    if (!c) return nullptr;
    return Json{{"pass", c->pass}, {"margin", c->margin}};
}

std::optional<CheckResult> check_from(const Json& j) {
    if (j.is_null()) return std::nullopt;
    return CheckResult{j.at("pass").get<bool>(), j.at("margin").get<double>()};
}

Json config_json(const AnalysisConfig& c) {
    Json j;
    j["input"] = c.input ? Json(*c.input) : Json(nullptr);
    j["format"] = c.format ? Json(to_string(*c.format)) : Json(nullptr);
    if (c.ensemble) {
        Json values = Json::array();
        for (const auto& v : c.ensemble->values) values.push_back(complex_json(v));
        j["ensemble"] = Json{{"kind", to_string(c.ensemble->kind)},
                             {"n", c.ensemble->n},
                             {"seed", c.ensemble->seed},
                             {"scale", c.ensemble->scale},
                             {"values", values}};
    } else {
        j["ensemble"] = nullptr;
    }
    j["k"] = c.k;
    j["r"] = c.r;
    j["mode"] = c.mode ? to_string(*c.mode) : "auto";
    j["rank"] = c.rank ? Json(*c.rank) : Json(nullptr);
    j["verify"] = c.verify;
    j["out"] = to_string(c.out);
    j["slack"] = c.slack;
    j["seed"] = c.seed;
    j["known"] = c.known ? complex_json(*c.known) : Json(nullptr);
    j["assume_real"] = c.assume_real;
    return j;
}

AnalysisConfig config_from(const Json& j) {
    AnalysisConfig c;
    if (!j.at("input").is_null()) c.input = j.at("input").get<std::string>();
    if (!j.at("format").is_null()) c.format = parse_format_name(j.at("format").get<std::string>());
    if (!j.at("ensemble").is_null()) {
        const auto& e = j.at("ensemble");
        EnsembleSpec spec;
        spec.kind = parse_ensemble_kind(e.at("kind").get<std::string>());
        spec.n = e.at("n").get<std::size_t>();
        spec.seed = e.at("seed").get<std::uint64_t>();
        spec.scale = e.at("scale").get<double>();
        for (const auto& v : e.at("values")) spec.values.push_back(complex_from(v));
        c.ensemble = spec;
    }
    c.k = j.at("k").get<std::vector<std::size_t>>();
    c.r = j.at("r").get<std::vector<unsigned>>();
    const auto mode = j.at("mode").get<std::string>();
    if (mode != "auto") c.mode = parse_mode(mode);
    if (!j.at("rank").is_null()) c.rank = j.at("rank").get<std::size_t>();
    c.verify = j.at("verify").get<bool>();
    c.out = parse_output_format(j.at("out").get<std::string>());
    c.slack = j.at("slack").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("known").is_null()) c.known = complex_from(j.at("known"));
    c.assume_real = j.at("assume_real").get<bool>();
    return c;
}

Json params_json(const std::vector<std::pair<std::string, long long>>& params) {
    Json j = Json::object();
    for (const auto& [key, value] : params) j[key] = value;
    return j;
}

} // namespace

std::string report_to_json(const BoundReport& r) {
    Json j;
    j["schema"] = r.schema;
    j["matrix"] = Json{{"n", r.matrix.n},
                       {"hermitian", r.matrix.hermitian},
                       {"normal", r.matrix.normal},
                       {"source", r.matrix.source}};

    Json moments = Json::array();
    for (const auto& m : r.stats.moments) {
        moments.push_back(Json{{"r", m.r},
                               {"trace_b2r", complex_json(m.trace_b2r)},
                               {"moment", m.moment},
                               {"moment_source", m.moment_source}});
    }
    j["stats"] = Json{{"trace", complex_json(r.stats.trace)},
                      {"trace_sq", complex_json(r.stats.trace_sq)},
                      {"trace_b2", complex_json(r.stats.trace_b2)},
                      {"mean", complex_json(r.stats.mean)},
                      {"complex_variance", complex_json(r.stats.complex_variance)},
                      {"abs_variance", r.stats.abs_variance},
                      {"abs_variance_source", r.stats.abs_variance_source},
                      {"real_part_variance", r.stats.real_part_variance},
                      {"imag_part_variance", r.stats.imag_part_variance},
                      {"effective_dim", r.stats.effective_dim},
                      {"moments", moments}};

    Json regions = Json::array();
    for (const auto& e : r.regions) {
        Json region{{"id", e.id}, {"shape", e.shape}, {"method", e.method}, {"params", params_json(e.params)},
                    {"note", e.note}};
        if (e.shape == "strip") {
            region["axis"] = e.axis;
            region["center"] = e.center.real();
            region["half_width"] = e.extent;
        } else {
            region["center"] = complex_json(e.center);
            region["radius"] = e.extent;
        }
        Json claim{{"kind", e.claim}};
        if (e.claim == "contains_at_least") claim["count"] = e.claim_count;
        if (e.claim == "contains_one_more_given") claim["known"] = complex_json(e.claim_known);
        region["claim"] = claim;
        region["check"] = check_json(e.check);
        regions.push_back(region);
    }
    j["regions"] = regions;

    Json spread = Json::array();
    for (const auto& s : r.spread) {
        spread.push_back(Json{{"l", s.l},
                              {"k", s.k},
                              {"real_parts", s.real_parts},
                              {"imag_parts", s.imag_parts},
                              {"modulus", s.modulus},
                              {"real_check", check_json(s.real_check)},
                              {"imag_check", check_json(s.imag_check)},
                              {"modulus_check", check_json(s.modulus_check)}});
    }
    j["spread"] = spread;

    Json extremal = Json::array();
    for (const auto& e : r.extremal) {
        extremal.push_back(Json{{"id", e.id},
                                {"method", e.method},
                                {"r", e.r},
                                {"lower_bound_on_max", e.lower_bound_on_max},
                                {"upper_bound_on_min", e.upper_bound_on_min},
                                {"check", check_json(e.check)}});
    }
    j["extremal"] = extremal;

    Json skipped = Json::array();
    for (const auto& s : r.skipped) skipped.push_back(Json{{"id", s.id}, {"reason", s.reason}});
    j["skipped"] = skipped;

    if (r.verification) {
        const auto& v = *r.verification;
        Json eigs = Json::array();
        for (const auto& z : v.eigenvalues) eigs.push_back(complex_json(z));
        j["verification"] = Json{{"eigenvalues", eigs},
                                 {"residual", v.residual},
                                 {"slack", v.slack},
                                 {"checked", v.checked},
                                 {"failed", v.failed},
                                 {"min_margin", v.min_margin},
                                 {"passed", v.passed()}};
    } else {
        j["verification"] = nullptr;
    }
    j["provenance"] = Json{{"tool", r.provenance.tool},
                           {"version", r.provenance.version},
                           {"config", config_json(r.provenance.config)}};
    return j.dump(2) + "\n";
}

BoundReport report_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid report JSON: ") + e.what(), 1, 1);
    }
    try {
        BoundReport r;
        r.schema = j.at("schema").get<std::string>();
        if (r.schema != kReportSchema) throw ValidationError("unsupported report schema '" + r.schema + "'");
        const auto& m = j.at("matrix");
        r.matrix = {m.at("n").get<std::size_t>(), m.at("hermitian").get<bool>(), m.at("normal").get<bool>(),
                    m.at("source").get<std::string>()};

        const auto& s = j.at("stats");
        r.stats.trace = complex_from(s.at("trace"));
        r.stats.trace_sq = complex_from(s.at("trace_sq"));
        r.stats.trace_b2 = complex_from(s.at("trace_b2"));
        r.stats.mean = complex_from(s.at("mean"));
        r.stats.complex_variance = complex_from(s.at("complex_variance"));
        r.stats.abs_variance = s.at("abs_variance").get<double>();
        r.stats.abs_variance_source = s.at("abs_variance_source").get<std::string>();
        r.stats.real_part_variance = s.at("real_part_variance").get<double>();
        r.stats.imag_part_variance = s.at("imag_part_variance").get<double>();
        r.stats.effective_dim = s.at("effective_dim").get<std::size_t>();
        for (const auto& mm : s.at("moments")) {
            r.stats.moments.push_back({mm.at("r").get<unsigned>(), complex_from(mm.at("trace_b2r")),
                                       mm.at("moment").get<double>(), mm.at("moment_source").get<std::string>()});
        }

        for (const auto& g : j.at("regions")) {
            RegionEntry e;
            e.id = g.at("id").get<std::string>();
            e.shape = g.at("shape").get<std::string>();
            e.method = g.at("method").get<std::string>();
            for (const auto& [key, value] : g.at("params").items()) e.params.emplace_back(key, value.get<long long>());
            e.note = g.at("note").get<std::string>();
            if (e.shape == "strip") {
                e.axis = g.at("axis").get<std::string>();
                e.center = {g.at("center").get<double>(), 0.0};
                e.extent = g.at("half_width").get<double>();
            } else {
                e.center = complex_from(g.at("center"));
                e.extent = g.at("radius").get<double>();
            }
            const auto& claim = g.at("claim");
            e.claim = claim.at("kind").get<std::string>();
            if (claim.contains("count")) e.claim_count = claim.at("count").get<std::size_t>();
            if (claim.contains("known")) e.claim_known = complex_from(claim.at("known"));
            e.check = check_from(g.at("check"));
            r.regions.push_back(std::move(e));
        }
        for (const auto& g : j.at("spread")) {
            r.spread.push_back({g.at("l").get<std::size_t>(), g.at("k").get<std::size_t>(),
                                g.at("real_parts").get<double>(), g.at("imag_parts").get<double>(),
                                g.at("modulus").get<double>(), check_from(g.at("real_check")),
                                check_from(g.at("imag_check")), check_from(g.at("modulus_check"))});
        }
        for (const auto& g : j.at("extremal")) {
            r.extremal.push_back({g.at("id").get<std::string>(), g.at("method").get<std::string>(),
                                  g.at("r").get<unsigned>(), g.at("lower_bound_on_max").get<double>(),
                                  g.at("upper_bound_on_min").get<double>(), check_from(g.at("check"))});
        }
        for (const auto& g : j.at("skipped")) {
            r.skipped.push_back({g.at("id").get<std::string>(), g.at("reason").get<std::string>()});
        }
        if (!j.at("verification").is_null()) {
            const auto& v = j.at("verification");
            VerificationBlock block;
            for (const auto& z : v.at("eigenvalues")) block.eigenvalues.push_back(complex_from(z));
            block.residual = v.at("residual").get<double>();
            block.slack = v.at("slack").get<double>();
            block.checked = v.at("checked").get<std::size_t>();
            block.failed = v.at("failed").get<std::size_t>();
            block.min_margin = v.at("min_margin").get<double>();
            r.verification = block;
        }
        const auto& p = j.at("provenance");
        r.provenance.tool = p.at("tool").get<std::string>();
        r.provenance.version = p.at("version").get<std::string>();
        r.provenance.config = config_from(p.at("config"));
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed report: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Text renderings

std::string format_complex(Complex z) {
    char buffer[96];
    const double im = z.imag() == 0.0 ? 0.0 : z.imag();
    std::snprintf(buffer, sizeof buffer, "%.6f%c%.6fi", z.real(), std::signbit(im) ? '-' : '+', std::abs(im));
    return buffer;
}

namespace {

std::string fixed(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", x);
    return buffer;
}

std::string check_text(const std::optional<CheckResult>& c) {
    if (!c) return "";
    return std::string(c->pass ? "pass" : "FAIL") + " (margin " + fixed(c->margin) + ")";
}

std::string claim_text(const RegionEntry& e) {
    if (e.claim == "contains_at_least") return "at least " + std::to_string(e.claim_count);
    if (e.claim == "contains_all") return "all";
    if (e.claim == "contains_one_more_given") return "one besides " + format_complex(e.claim_known);
    return "one on or outside";
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string report_to_table(const BoundReport& r) {
    std::ostringstream out;
    out << "matrix   n=" << r.matrix.n << " hermitian=" << (r.matrix.hermitian ? "yes" : "no")
        << " normal=" << (r.matrix.normal ? "yes" : "no") << " source=" << r.matrix.source << "\n";
    out << "tr A     " << format_complex(r.stats.trace) << "\n";
    out << "tr A^2   " << format_complex(r.stats.trace_sq) << "\n";
    out << "tr B^2   " << format_complex(r.stats.trace_b2) << "\n";
    for (const auto& m : r.stats.moments) {
        out << "tr B^" << 2 * m.r << "   " << format_complex(m.trace_b2r) << "  moment " << fixed(m.moment) << " ("
            << m.moment_source << ")\n";
    }
    out << "mean     " << format_complex(r.stats.mean) << "\n";
    out << "S^2      " << format_complex(r.stats.complex_variance) << "\n";
    out << "S_l^2    " << fixed(r.stats.abs_variance) << " (" << r.stats.abs_variance_source << ", m="
        << r.stats.effective_dim << ")\n";

    out << "\nregions\n";
    for (const auto& e : r.regions) {
        out << "  " << e.id;
        if (e.shape == "strip") {
            out << "  |" << (e.axis == "real" ? "Re" : "Im") << " z - " << fixed(e.center.real())
                << "| <= " << fixed(e.extent);
        } else {
            out << "  |z - " << format_complex(e.center) << "| <= " << fixed(e.extent);
        }
        out << "  claim: " << claim_text(e);
        if (e.check) out << "  " << check_text(e.check);
        out << "\n";
    }
    if (!r.spread.empty()) out << "\nspread\n";
    for (const auto& s : r.spread) {
        out << "  l=" << s.l << " k=" << s.k << "  real " << fixed(s.real_parts) << "  imag " << fixed(s.imag_parts)
            << "  modulus " << fixed(s.modulus);
        if (s.modulus_check) out << "  " << check_text(s.modulus_check);
        out << "\n";
    }
    if (!r.extremal.empty()) out << "\nextremal\n";
    for (const auto& e : r.extremal) {
        out << "  " << e.id << "  lambda_max >= " << fixed(e.lower_bound_on_max) << "  lambda_min <= "
            << fixed(e.upper_bound_on_min);
        if (e.check) out << "  " << check_text(e.check);
        out << "\n";
    }
    if (!r.skipped.empty()) out << "\nskipped\n";
    for (const auto& s : r.skipped) out << "  " << s.id << ": " << s.reason << "\n";
    if (r.verification) {
        const auto& v = *r.verification;
        out << "\nverification  checked=" << v.checked << " failed=" << v.failed << " min_margin="
            << fixed(v.min_margin) << " residual=" << v.residual << "\n";
        out << "  eigenvalues";
        for (const auto& z : v.eigenvalues) out << " " << format_complex(z);
        out << "\n";
    }
    return out.str();
}

std::string report_to_csv(const BoundReport& r) {
    std::ostringstream out;
    out << "section,id,center,value,claim,pass,margin\n";
    auto row = [&](const std::string& section, const std::string& id, const std::string& center,
                   const std::string& value, const std::string& claim, const std::optional<CheckResult>& check) {
        out << section << "," << csv_field(id) << "," << center << "," << value << "," << csv_field(claim) << ",";
        if (check) out << (check->pass ? "pass" : "fail") << "," << fixed(check->margin);
        else out << ",";
        out << "\n";
    };
    row("stats", "trace", "", format_complex(r.stats.trace), "", std::nullopt);
    row("stats", "trace_sq", "", format_complex(r.stats.trace_sq), "", std::nullopt);
    row("stats", "trace_b2", "", format_complex(r.stats.trace_b2), "", std::nullopt);
    for (const auto& m : r.stats.moments) {
        row("stats", "trace_b" + std::to_string(2 * m.r), "", format_complex(m.trace_b2r), "", std::nullopt);
    }
    row("stats", "complex_variance", "", format_complex(r.stats.complex_variance), "", std::nullopt);
    row("stats", "abs_variance", "", fixed(r.stats.abs_variance), r.stats.abs_variance_source, std::nullopt);
    for (const auto& e : r.regions) {
        const std::string center = e.shape == "strip" ? fixed(e.center.real()) : format_complex(e.center);
        row(e.shape, e.id, center, fixed(e.extent), claim_text(e), e.check);
    }
    for (const auto& s : r.spread) {
        const std::string id = "spread l=" + std::to_string(s.l) + " k=" + std::to_string(s.k);
        row("spread", id + " real", "", fixed(s.real_parts), "", s.real_check);
        row("spread", id + " imag", "", fixed(s.imag_parts), "", s.imag_check);
        row("spread", id + " modulus", "", fixed(s.modulus), "", s.modulus_check);
    }
    for (const auto& e : r.extremal) {
        row("extremal", e.id + " max", "", fixed(e.lower_bound_on_max), "lambda_max >=", e.check);
        row("extremal", e.id + " min", "", fixed(e.upper_bound_on_min), "lambda_min <=", e.check);
    }
    for (const auto& s : r.skipped) row("skipped", s.id, "", "", s.reason, std::nullopt);
    return out.str();
}

std::string suite_to_table(const VerificationReport& report) {
    std::ostringstream out;
    auto margin_text = [](double m) { return std::isfinite(m) ? fixed(m) : std::string("-"); };
    std::size_t width = 6;
    for (const auto& [name, _] : report.families) width = std::max(width, name.size());
    char line[256];
    std::snprintf(line, sizeof line, "%-*s %10s %8s %14s\n", static_cast<int>(width), "family", "checked", "failed",
                  "min_margin");
    out << line;
    for (const auto& [name, f] : report.families) {
        std::snprintf(line, sizeof line, "%-*s %10zu %8zu %14s\n", static_cast<int>(width), name.c_str(), f.checked,
                      f.failed, margin_text(f.min_margin).c_str());
        out << line;
    }
    out << "\nmatrices " << report.matrices << "  claims checked " << report.claims_checked << "  failures "
        << report.failure_count << "  convergence failures " << report.convergence_failures.size()
        << "  min margin " << margin_text(report.min_margin) << "\n";
    for (const auto& f : report.failures) {
        out << "  FAIL " << f.claim << "  margin " << f.margin << "  " << f.ensemble << " n=" << f.n
            << " seed=" << f.seed << "\n";
    }
    if (report.failure_count > report.failures.size()) {
        out << "  ... " << report.failure_count - report.failures.size() << " more failures not listed\n";
    }
    for (const auto& f : report.convergence_failures) {
        out << "  NO CONVERGENCE " << f.claim << "  " << f.ensemble << " n=" << f.n << " seed=" << f.seed << "\n";
    }
    return out.str();
}

std::string suite_to_json(const VerificationReport& report) {
    auto margin_json = [](double m) { return std::isfinite(m) ? Json(m) : Json(nullptr); };
    auto failure_json = [](const ClaimFailure& f) {
        return Json{{"claim", f.claim}, {"margin", f.margin}, {"ensemble", f.ensemble}, {"n", f.n}, {"seed", f.seed}};
    };
    Json families = Json::object();
    for (const auto& [name, f] : report.families) {
        families[name] = Json{{"checked", f.checked}, {"failed", f.failed}, {"min_margin", margin_json(f.min_margin)}};
    }
    Json failures = Json::array();
    for (const auto& f : report.failures) failures.push_back(failure_json(f));
    Json convergence = Json::array();
    for (const auto& f : report.convergence_failures) convergence.push_back(failure_json(f));
    const Json j{{"schema", "tracebound-suite/1"},
                 {"matrices", report.matrices},
                 {"claims_checked", report.claims_checked},
                 {"failure_count", report.failure_count},
                 {"min_margin", margin_json(report.min_margin)},
                 {"passed", report.passed()},
                 {"families", families},
                 {"failures", failures},
                 {"convergence_failures", convergence}};
    return j.dump(2) + "\n";
}

std::string render(const BoundReport& report, OutputFormat format) {
    switch (format) {
    case OutputFormat::json: return report_to_json(report);
    case OutputFormat::table: return report_to_table(report);
    case OutputFormat::csv: return report_to_csv(report);
    }
    return {};
}

} // namespace tracebound
