// ropelab CLI: emit frequency tables, compare schemes, sweep attention
// entropy, and run the invariant validation suite.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ropelab/attention_lab.hpp"
#include "ropelab/dynamic.hpp"
#include "ropelab/rope_core.hpp"
#include "ropelab/schemes.hpp"
#include "ropelab/table_io.hpp"
#include "ropelab/validate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CliOptions {
    std::string scheme = "none";
    double scale = 1.0;
    double base = 10000.0;
    int dim = 128;
    std::int64_t trained = 4096;
    std::int64_t target = 0;  // 0 = unset
    double alpha = 1.0;
    double beta = 32.0;
    bool dynamic = false;
    bool blend_wavelengths = false;
    std::string format = "csv";
    std::string out;  // empty = stdout
    std::uint64_t seed = 0;
};

int write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return kExitOk;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        std::cerr << "error: cannot open '" << path << "' for writing\n";
        return kExitIo;
    }
    file << content;
    file.flush();
    if (!file) {
        std::cerr << "error: short write to '" << path << "'\n";
        return kExitIo;
    }
    return kExitOk;
}

ropelab::RopeParams make_params(const CliOptions& options) {
    return ropelab::RopeParams{options.base, options.dim, options.trained};
}

// Resolves --scale / --target-len precedence: an explicit scale wins and the
// target is dropped from the config (it may legitimately disagree, e.g. when
// training shorter than the scale implies).
ropelab::SchemeConfig make_scheme_config(const CliOptions& options, bool scale_given,
                                         bool target_given) {
    ropelab::SchemeConfig config;
    const auto kind = ropelab::parse_scheme(options.scheme);
    if (!kind) {
        throw std::invalid_argument("unknown scheme '" + options.scheme + "'");
    }
    config.kind = *kind;
    config.alpha = options.alpha;
    config.beta = options.beta;
    config.blend_wavelengths = options.blend_wavelengths;
    if (scale_given && target_given) {
        std::cerr << "warning: both --scale and --target-len given; --scale wins\n";
        config.scale = options.scale;
    } else if (target_given) {
        config.scale = static_cast<double>(options.target) /
                       static_cast<double>(options.trained);
        config.target_context = options.target;
    } else {
        config.scale = options.scale;
    }
    return config;
}

std::string render_freqs(const ropelab::FrequencyTable& table, const std::string& format) {
    return format == "json" ? ropelab::io::freqs_json(table) : ropelab::io::freqs_csv(table);
}

int run_freqs(const CliOptions& options, bool scale_given, bool target_given) {
    const ropelab::RopeParams params = make_params(options);
    ropelab::SchemeConfig config = make_scheme_config(options, scale_given, target_given);
    if (options.dynamic) {
        if (scale_given) {
            std::cerr << "warning: --dynamic derives the scale from the sequence "
                         "length; --scale is ignored\n";
        }
        const std::int64_t length = target_given ? options.target : options.trained;
        config.scale = 1.0;
        config.target_context.reset();
        ropelab::DynamicScaler scaler(params, config);
        return write_output(options.out,
                            render_freqs(scaler.table_for_length(length), options.format));
    }
    return write_output(options.out,
                        render_freqs(ropelab::build_table(params, config), options.format));
}

int run_compare(const CliOptions& options, const std::string& scheme_a,
                const std::string& scheme_b, double scale_a, double scale_b) {
    const ropelab::RopeParams params = make_params(options);
    ropelab::SchemeConfig config_a;
    ropelab::SchemeConfig config_b;
    const auto kind_a = ropelab::parse_scheme(scheme_a);
    const auto kind_b = ropelab::parse_scheme(scheme_b);
    if (!kind_a || !kind_b) {
        throw std::invalid_argument("unknown scheme in --scheme-a/--scheme-b");
    }
    config_a.kind = *kind_a;
    config_b.kind = *kind_b;
    config_a.scale = scale_a;
    config_b.scale = scale_b;
    config_a.alpha = config_b.alpha = options.alpha;
    config_a.beta = config_b.beta = options.beta;
    config_a.blend_wavelengths = config_b.blend_wavelengths = options.blend_wavelengths;

    const ropelab::io::CompareReport report = ropelab::io::compare_tables(
        ropelab::build_table(params, config_a), ropelab::build_table(params, config_b));
    const std::string content = options.format == "json"
                                    ? ropelab::io::compare_json(report)
                                    : ropelab::io::compare_csv(report);
    return write_output(options.out, content);
}

int run_entropy(const CliOptions& options, bool scale_given, bool target_given,
                const std::vector<std::int64_t>& lengths) {
    const ropelab::RopeParams params = make_params(options);
    const ropelab::SchemeConfig config =
        make_scheme_config(options, scale_given, target_given);
    const std::vector<ropelab::AttentionDiagnostics> cells = ropelab::entropy_sweep(
        params, {config}, lengths, options.seed, options.dynamic);
    const std::vector<ropelab::io::EntropyRecord> records = ropelab::io::entropy_records(cells);
    const std::string content = options.format == "json"
                                    ? ropelab::io::entropy_json(records)
                                    : ropelab::io::entropy_csv(records);
    return write_output(options.out, content);
}

int run_validate(const CliOptions& options, bool inject_ramp_fault) {
    ropelab::ValidationOptions validation;
    validation.params = make_params(options);
    validation.scale = options.scale > 1.0 ? options.scale : 16.0;
    validation.alpha = options.alpha;
    validation.beta = options.beta;
    validation.seed = options.seed;
    validation.flip_ramp_sign = inject_ramp_fault;

    const std::vector<ropelab::CheckResult> results = ropelab::run_validation(validation);
    std::string report;
    int failures = 0;
    for (const ropelab::CheckResult& result : results) {
        report += result.passed ? "PASS  " : "FAIL  ";
        report += result.name;
        if (!result.detail.empty()) {
            report += "  (" + result.detail + ")";
        }
        report += '\n';
        if (!result.passed) {
            ++failures;
        }
    }
    report += failures == 0
                  ? "all " + std::to_string(results.size()) + " checks passed\n"
                  : std::to_string(failures) + " of " + std::to_string(results.size()) +
                        " checks failed\n";
    const int io_status = write_output(options.out, report);
    if (io_status != kExitOk) {
        return io_status;
    }
    return failures == 0 ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RoPE context-extension frequency tables and attention diagnostics"};
    app.fallthrough(true);
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value file mirroring the long flags");

    CliOptions options;
    app.add_option("--scheme", options.scheme,
                   "frequency transform: none|pi|ntk-aware|ntk-by-parts|yarn")
        ->capture_default_str();
    app.add_option("--scale", options.scale, "extension ratio s = L'/L, >= 1")
        ->capture_default_str();
    app.add_option("--base", options.base, "RoPE frequency base b")->capture_default_str();
    app.add_option("--dim", options.dim, "head dimension |D| (even)")->capture_default_str();
    app.add_option("--trained-len", options.trained, "trained context length L (tokens)")
        ->capture_default_str();
    app.add_option("--target-len", options.target, "target context length L' (tokens)");
    app.add_option("--alpha", options.alpha, "ramp lower rotation threshold")
        ->capture_default_str();
    app.add_option("--beta", options.beta, "ramp upper rotation threshold")
        ->capture_default_str();
    app.add_flag("--dynamic", options.dynamic,
                 "recompute the scale from the sequence length");
    app.add_flag("--blend-wavelengths", options.blend_wavelengths,
                 "blend ntk-by-parts/yarn in the wavelength domain");
    app.add_option("--format", options.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", options.out, "output path (default: standard output)");
    app.add_option("--seed", options.seed, "RNG seed")->capture_default_str();

    CLI::App* freqs = app.add_subcommand("freqs", "emit the per-dimension frequency table");

    std::string scheme_a;
    std::string scheme_b;
    double scale_a = -1.0;  // -1 = inherit --scale
    double scale_b = -1.0;
    CLI::App* compare = app.add_subcommand("compare", "per-dim ratio of two schemes");
    compare->add_option("--scheme-a", scheme_a, "first scheme")->required();
    compare->add_option("--scheme-b", scheme_b, "second scheme")->required();
    compare->add_option("--scale-a", scale_a, "scale for the first scheme");
    compare->add_option("--scale-b", scale_b, "scale for the second scheme");

    std::vector<std::int64_t> lengths{16, 64, 256, 1024};
    CLI::App* entropy =
        app.add_subcommand("entropy", "softmax entropy sweep over context lengths");
    entropy->add_option("--lengths", lengths, "context lengths to sweep")
        ->delimiter(',')
        ->capture_default_str();

    bool inject_ramp_fault = false;
    CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
    validate->add_flag("--inject-ramp-fault", inject_ramp_fault)->group("");  // self-test

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const bool scale_given = app.count("--scale") > 0;
    const bool target_given = app.count("--target-len") > 0;

    try {
        if (freqs->parsed()) {
            return run_freqs(options, scale_given, target_given);
        }
        if (compare->parsed()) {
            const double a = compare->count("--scale-a") > 0 ? scale_a : options.scale;
            const double b = compare->count("--scale-b") > 0 ? scale_b : options.scale;
            return run_compare(options, scheme_a, scheme_b, a, b);
        }
        if (entropy->parsed()) {
            return run_entropy(options, scale_given, target_given, lengths);
        }
        if (validate->parsed()) {
            return run_validate(options, inject_ramp_fault);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    return kExitUsage;
}
