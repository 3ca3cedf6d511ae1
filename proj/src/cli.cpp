#include "tracebound/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tracebound/error.hpp"
#include "tracebound/io.hpp"
#include "tracebound/report.hpp"
#include "tracebound/suite.hpp"

namespace tracebound {

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        items.push_back(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

std::vector<std::complex<double>> parse_values(const std::string& text) {
    std::vector<std::complex<double>> values;
    for (const auto& item : split_list(text)) {
        try {
            values.push_back(parse_complex_token(item));
        } catch (const ParseError&) {
            throw ParameterError("cannot read '" + item + "' in --values");
        }
    }
    return values;
}

std::uint64_t parse_seed(const std::string& text, const char* what) {
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParameterError(std::string("invalid seed '") + text + "' in " + what);
    }
    return seed;
}

// --seed, else TRACEBOUND_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::string>& flag) {
    if (flag) return parse_seed(*flag, "--seed");
    if (const char* env = std::getenv("TRACEBOUND_SEED"); env != nullptr && *env != '\0') {
        return parse_seed(env, "TRACEBOUND_SEED");
    }
    return 0;
}

std::vector<EnsembleKind> parse_kinds(const std::string& text) {
    if (text == "all") {
        return {EnsembleKind::hermitian, EnsembleKind::normal, EnsembleKind::ginibre, EnsembleKind::jordan_defective};
    }
    std::vector<EnsembleKind> kinds;
    for (const auto& item : split_list(text)) kinds.push_back(parse_ensemble_kind(item));
    return kinds;
}

struct AnalyzeArgs {
    std::string input;
    std::string format;
    std::string ensemble;
    std::size_t n = 0;
    std::string values;
    double scale = 1.0;
    std::vector<std::size_t> k;
    std::vector<unsigned> r;
    std::string mode;
    std::optional<std::size_t> rank;
    bool verify = false;
    std::string out = "json";
    double slack = 1e-9;
    std::optional<std::string> seed;
    std::string known;
    bool assume_real = false;
};

struct VerifyArgs {
    std::string ensemble;
    std::vector<std::size_t> n;
    std::size_t trials = 1;
    std::optional<std::string> seed;
    std::string values;
    double scale = 1.0;
    double slack = 1e-9;
    unsigned threads = 0;
    std::string out = "table";
};

AnalysisConfig build_config(const AnalyzeArgs& args) {
    AnalysisConfig config;
    config.seed = resolve_seed(args.seed);
    if (!args.input.empty()) config.input = args.input;
    if (!args.format.empty()) config.format = parse_format_name(args.format);
    if (!args.ensemble.empty()) {
        EnsembleSpec spec;
        spec.kind = parse_ensemble_kind(args.ensemble);
        spec.n = args.n;
        spec.seed = config.seed;
        spec.scale = args.scale;
        if (!args.values.empty()) spec.values = parse_values(args.values);
        config.ensemble = spec;
    }
    config.k = args.k;
    if (!args.r.empty()) config.r = args.r;
    if (!args.mode.empty()) config.mode = parse_mode(args.mode);
    config.rank = args.rank;
    config.verify = args.verify;
    config.out = parse_output_format(args.out);
    config.slack = args.slack;
    if (!args.known.empty()) {
        try {
            config.known = parse_complex_token(args.known);
        } catch (const ParseError&) {
            throw ParameterError("cannot read --known '" + args.known + "'");
        }
    }
    config.assume_real = args.assume_real;
    validate(config);
    return config;
}

int run_analyze(const AnalyzeArgs& args, std::ostream& out) {
    const AnalysisConfig config = build_config(args);
    const BoundReport report = analyze(config);
    out << render(report, config.out);
    return report.passed() ? kExitOk : kExitClaimFailure;
}

int run_verify(const VerifyArgs& args, std::ostream& out) {
    const std::uint64_t seed = resolve_seed(args.seed);
    const auto kinds = parse_kinds(args.ensemble);
    std::vector<std::complex<double>> values;
    if (!args.values.empty()) values = parse_values(args.values);
    std::vector<std::size_t> sizes = args.n;
    if (sizes.empty()) {
        if (values.empty()) throw ParameterError("--n is required unless --values is given");
        sizes.push_back(values.size());
    }
    if (args.trials < 1) throw ParameterError("--trials must be at least 1");

    std::vector<EnsembleSpec> specs;
    for (const auto kind : kinds) {
        for (const std::size_t n : sizes) {
            EnsembleSpec spec;
            spec.kind = kind;
            spec.n = n;
            spec.seed = seed;
            spec.scale = args.scale;
            spec.values = values;
            if (!values.empty() && kind != EnsembleKind::diagonal) throw ParameterError("--values needs --ensemble diagonal");
            if (n < 1 || (!values.empty() && n != values.size())) {
                throw ParameterError("--n must match the number of --values");
            }
            specs.push_back(spec);
        }
    }
    SuiteOptions options;
    options.slack_factor = args.slack;
    options.threads = args.threads;
    const VerificationReport report = run_suite(specs, args.trials, options);
    const OutputFormat format = parse_output_format(args.out);
    if (format == OutputFormat::csv) throw ParameterError("verify prints table or json");
    out << (format == OutputFormat::json ? suite_to_json(report) : suite_to_table(report));
    if (report.failure_count > 0) return kExitClaimFailure;
    if (!report.convergence_failures.empty()) return kExitConvergenceError;
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Eigenvalue localization from traces"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    AnalyzeArgs a;
    auto* analyze_cmd = app.add_subcommand("analyze", "Bounds for one matrix");
    auto* input_opt = analyze_cmd->add_option("--input", a.input, "Matrix file (.mtx, .json, .csv)");
    analyze_cmd->add_option("--format", a.format, "mm, json or csv (default from the extension)")
        ->check(CLI::IsMember({"mm", "json", "csv"}));
    auto* ensemble_opt = analyze_cmd->add_option("--ensemble", a.ensemble, "Generate the matrix instead of reading it");
    input_opt->excludes(ensemble_opt);
    analyze_cmd->add_option("--n", a.n, "Order of the generated matrix");
    analyze_cmd->add_option("--values", a.values, "Diagonal ensemble values, comma separated");
    analyze_cmd->add_option("--scale", a.scale, "Scale of the generated matrix");
    analyze_cmd->add_option("--k", a.k, "Central disk indices (default: all)")->delimiter(',');
    analyze_cmd->add_option("--r", a.r, "Moment powers (default 1,2)")->delimiter(',');
    analyze_cmd->add_option("--mode", a.mode, "Source of S_lambda^2: oracle, normal or upper (default auto)")
        ->check(CLI::IsMember({"oracle", "normal", "upper"}));
    analyze_cmd->add_option("--rank", a.rank, "Number of nonzero eigenvalues");
    analyze_cmd->add_flag("--verify", a.verify, "Check every claim against the eigensolver");
    analyze_cmd->add_option("--out", a.out, "json, table or csv")->check(CLI::IsMember({"json", "table", "csv"}));
    analyze_cmd->add_option("--slack", a.slack, "Verification slack factor, times ||A||_F + 1");
    analyze_cmd->add_option("--seed", a.seed, "Ensemble seed (fallback TRACEBOUND_SEED)");
    analyze_cmd->add_option("--known", a.known, "A known eigenvalue, e.g. 2-1i, for the neighbor regions");
    analyze_cmd->add_flag("--assume-real", a.assume_real, "Treat the spectrum as real for extremal bounds");

    VerifyArgs v;
    auto* verify_cmd = app.add_subcommand("verify", "Randomized soundness suite");
    verify_cmd->add_option("--ensemble", v.ensemble, "hermitian, normal, ginibre, jordan_defective, diagonal; "
                                                     "comma separated or 'all'")
        ->required();
    verify_cmd->add_option("--n", v.n, "Orders, comma separated")->delimiter(',');
    verify_cmd->add_option("--trials", v.trials, "Trials per ensemble and order");
    verify_cmd->add_option("--seed", v.seed, "Base seed (fallback TRACEBOUND_SEED)");
    verify_cmd->add_option("--values", v.values, "Diagonal ensemble values, comma separated");
    verify_cmd->add_option("--scale", v.scale, "Scale of the generated matrices");
    verify_cmd->add_option("--slack", v.slack, "Slack factor, times ||A||_F + 1");
    verify_cmd->add_option("--threads", v.threads, "Worker threads (default: all cores)");
    verify_cmd->add_option("--out", v.out, "table or json")->check(CLI::IsMember({"table", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (analyze_cmd->parsed()) return run_analyze(a, out);
        return run_verify(v, out);
    } catch (const ConvergenceError& e) {
        err << "tracebound: " << e.what() << "\n";
        return kExitConvergenceError;
    } catch (const Error& e) {
        err << "tracebound: " << e.what() << "\n";
        return kExitInputError;
    }
}

} // namespace tracebound
