// stratx command line: partial dependence curves and category effects
// computed directly from training data, plus data generators, a
// brute-force cross-check, and a scaling benchmark.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stratx/catstratpd.hpp"
#include "stratx/dataset.hpp"
#include "stratx/errors.hpp"
#include "stratx/format.hpp"
#include "stratx/oracle.hpp"
#include "stratx/stratpd.hpp"
#include "stratx/synth.hpp"

#include "svg.hpp"

namespace {

using namespace stratx;

struct RunConfig {
    std::string input;
    std::string response;
    std::string feature;
    std::vector<std::string> categorical;
    std::size_t min_samples_leaf = 10;
    std::size_t min_slopes_per_x = 5;
    std::size_t ntrials = 1;
    double max_features = 1.0;
    std::uint64_t seed = 0;
    std::string out = "-";
    std::string format = "csv";
};

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw DataError("cannot open output file '" + path + "'");
    file << content;
    file.flush();
    if (!file) throw DataError("failed writing output file '" + path + "'");
}

void check_format(const std::string& format) {
    if (format != "csv" && format != "svg") {
        throw DataError("unknown format '" + format + "' (expected csv or svg)");
    }
}

Dataset load_for_run(const RunConfig& cfg) {
    if (cfg.feature == cfg.response) {
        throw DataError("feature of interest equals the response column '" + cfg.response + "'");
    }
    const std::set<std::string> cats(cfg.categorical.begin(), cfg.categorical.end());
    return load_csv(cfg.input, cfg.response, cats);
}

void warn_if_mostly_ignored(std::size_t ignored, std::size_t total_rows) {
    if (2 * ignored > total_rows) {
        std::cerr << "warning: " << ignored << " of " << total_rows
                  << " rows were ignored (more than half); the estimate rests on little data\n";
    }
}

int cmd_pd(const RunConfig& cfg) {
    check_format(cfg.format);
    const Dataset ds = load_for_run(cfg);
    const std::size_t j = ds.column_index(cfg.feature);
    if (ds.n_rows() < 2 * cfg.min_samples_leaf) {
        std::cerr << "warning: " << ds.n_rows() << " rows < 2*min_samples_leaf="
                  << 2 * cfg.min_samples_leaf
                  << "; the stratification is a single leaf, so the curve is marginal,"
                  << " not partial, dependence\n";
    }

    StratPDParams params;
    params.min_samples_leaf = cfg.min_samples_leaf;
    params.min_slopes_per_x = cfg.min_slopes_per_x;
    params.ntrials = cfg.ntrials;
    params.max_features = cfg.max_features;
    params.rng_seed = cfg.seed;
    const PDCurve curve = stratpd(ds, j, params);

    warn_if_mostly_ignored(curve.ignored_rows, ds.n_rows() * cfg.ntrials);
    std::cerr << "kept " << curve.x.size() << " x values; ignored_rows=" << curve.ignored_rows
              << '\n';

    std::ostringstream body;
    if (cfg.format == "csv") {
        write_curve_csv(curve, body);
    } else {
        body << svg_line_chart(curve, cfg.feature, "partial dependence");
    }
    write_output(cfg.out, body.str());
    return 0;
}

int cmd_catpd(const RunConfig& cfg) {
    check_format(cfg.format);
    const Dataset ds = load_for_run(cfg);
    const std::size_t j = ds.column_index(cfg.feature);

    CatStratPDParams params;
    params.min_samples_leaf = cfg.min_samples_leaf;
    params.ntrials = cfg.ntrials;
    params.max_features = cfg.max_features;
    params.rng_seed = cfg.seed;
    const CatEffect effect = catstratpd(ds, j, params);

    std::size_t supported = 0;
    for (double d : effect.delta) {
        if (std::isfinite(d)) ++supported;
    }
    if (supported == 0) throw NoSupportedCategoriesError();

    warn_if_mostly_ignored(effect.ignored_rows, ds.n_rows() * cfg.ntrials);
    std::cerr << supported << " of " << effect.delta.size()
              << " categories supported; ignored_rows=" << effect.ignored_rows << '\n';

    const std::vector<std::string>& labels = ds.meta(j).category_labels;
    std::ostringstream body;
    if (cfg.format == "csv") {
        write_effect_csv(effect, labels, body);
    } else {
        body << svg_bar_chart(effect, labels, cfg.feature, "effect on " + ds.response_name());
    }
    write_output(cfg.out, body.str());
    return 0;
}

// Weather rows come in blocks of 5 states x 365 days; round the requested
// row count to the nearest block.
std::size_t weather_reps_for(std::size_t n) {
    return std::max<std::size_t>(1, (n + 912) / 1825);
}

Dataset generate(SynthKind kind, std::size_t n, std::optional<double> sigma,
                 std::uint64_t seed) {
    switch (kind) {
    case SynthKind::interaction:
        return gen_interaction(n, seed);
    case SynthKind::noisy_quadratic:
        return gen_noisy_quadratic(n, sigma.value_or(1.0), seed);
    case SynthKind::weather: {
        const std::size_t reps = weather_reps_for(n);
        std::cerr << "weather: " << reps << " rows per state and day = " << reps * 1825
                  << " rows total\n";
        return gen_weather(reps, seed, sigma.value_or(4.0));
    }
    case SynthKind::bodyweight:
        return gen_bodyweight(n, seed);
    }
    throw DataError("unreachable synth kind");
}

int cmd_synth(const std::string& kind_name, std::size_t n, std::optional<double> sigma,
              std::uint64_t seed, const std::string& out) {
    const SynthKind kind = parse_synth_kind(kind_name);
    const Dataset ds = generate(kind, n, sigma, seed);
    std::ostringstream body;
    write_csv(ds, body);
    write_output(out, body.str());
    std::cerr << "wrote " << ds.n_rows() << " rows x " << ds.n_features()
              << " features + response '" << ds.response_name() << "'\n";
    return 0;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> sizes;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        try {
            const long long v = std::stoll(token);
            if (v <= 0) throw DataError("bench sizes must be positive, got '" + token + "'");
            sizes.push_back(static_cast<std::size_t>(v));
        } catch (const std::invalid_argument&) {
            throw DataError("bad bench size '" + token + "'");
        } catch (const std::out_of_range&) {
            throw DataError("bench size out of range: '" + token + "'");
        }
    }
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) throw DataError("bench sizes must be ascending");
    }
    return sizes;
}

std::string default_bench_feature(SynthKind kind) {
    switch (kind) {
    case SynthKind::interaction:
    case SynthKind::noisy_quadratic: return "x1";
    case SynthKind::weather: return "state";
    case SynthKind::bodyweight: return "height";
    }
    return "x1";
}

int cmd_bench(const std::string& kind_name, const std::string& sizes_text,
              const std::string& feature_override, const RunConfig& cfg) {
    const SynthKind kind = parse_synth_kind(kind_name);
    const std::vector<std::size_t> sizes = parse_sizes(sizes_text);
    const std::string feature =
        feature_override.empty() ? default_bench_feature(kind) : feature_override;

    std::ostringstream body;
    body << "n,seconds\n";
    for (std::size_t n : sizes) {
        const Dataset ds = generate(kind, n, std::nullopt, cfg.seed);
        const std::size_t j = ds.column_index(feature);

        std::vector<double> times;
        for (int run = 0; run < 3; ++run) {
            const auto start = std::chrono::steady_clock::now();
            if (ds.is_categorical(j)) {
                CatStratPDParams params;
                params.min_samples_leaf = cfg.min_samples_leaf;
                params.max_features = cfg.max_features;
                params.rng_seed = cfg.seed;
                (void)catstratpd(ds, j, params);
            } else {
                StratPDParams params;
                params.min_samples_leaf = cfg.min_samples_leaf;
                params.min_slopes_per_x = cfg.min_slopes_per_x;
                params.max_features = cfg.max_features;
                params.rng_seed = cfg.seed;
                (void)stratpd(ds, j, params);
            }
            const auto stop = std::chrono::steady_clock::now();
            times.push_back(std::chrono::duration<double>(stop - start).count());
        }
        std::sort(times.begin(), times.end());
        const double median = times[1];
        body << ds.n_rows() << ',' << format_double(median) << '\n';
        std::cerr << "n=" << ds.n_rows() << " feature=" << feature << " median "
                  << format_double(median) << " s\n";
    }
    write_output(cfg.out, body.str());
    return 0;
}

int cmd_oracle_check(std::size_t datasets, std::uint64_t seed, bool verbose) {
    const OracleCheckReport report = oracle_check(datasets, seed, verbose ? &std::cerr : nullptr);
    std::cerr << "checked " << report.datasets << " datasets: " << report.numeric_compared
              << " numeric and " << report.categorical_compared
              << " categorical comparisons agree exactly, " << report.agreed_errors
              << " agreed insufficient-support cases, " << report.mismatches << " mismatches\n";
    if (!report.ok()) {
        std::cerr << "first mismatch: " << report.first_mismatch << '\n';
        return 1;
    }
    return 0;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg, bool with_min_slopes) {
    cmd->add_option("--input", cfg.input, "input CSV path")->required();
    cmd->add_option("--response", cfg.response, "response column name")->required();
    cmd->add_option("--feature", cfg.feature, "feature of interest")->required();
    cmd->add_option("--categorical", cfg.categorical,
                    "comma-separated categorical column names")
        ->delimiter(',');
    cmd->add_option("--min-samples-leaf", cfg.min_samples_leaf,
                    "minimum rows per stratification leaf");
    if (with_min_slopes) {
        cmd->add_option("--min-slopes-per-x", cfg.min_slopes_per_x,
                        "minimum slope count for an x value to be kept");
    }
    cmd->add_option("--ntrials", cfg.ntrials, "bootstrap repetitions to average");
    cmd->add_option("--max-features", cfg.max_features,
                    "fraction of columns considered per split");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--out", cfg.out, "output path, '-' for stdout");
    cmd->add_option("--format", cfg.format, "output format: csv or svg");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"partial dependence directly from training data"};
    app.require_subcommand(1);

    RunConfig pd_cfg;
    CLI::App* pd = app.add_subcommand("pd", "partial dependence curve for a numeric feature");
    add_common_options(pd, pd_cfg, true);

    RunConfig catpd_cfg;
    CLI::App* catpd =
        app.add_subcommand("catpd", "per-category effects for a categorical feature");
    add_common_options(catpd, catpd_cfg, false);

    std::string synth_kind;
    std::size_t synth_n = 1000;
    double synth_sigma = 0.0;
    std::uint64_t synth_seed = 0;
    std::string synth_out = "-";
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset as CSV");
    synth->add_option("--kind", synth_kind,
                      "interaction, noisy_quadratic, weather, or bodyweight")
        ->required();
    synth->add_option("--n", synth_n, "row count (weather rounds to blocks of 1825)");
    CLI::Option* sigma_opt =
        synth->add_option("--sigma", synth_sigma, "noise std dev (kind-specific default)");
    synth->add_option("--seed", synth_seed, "random seed");
    synth->add_option("--out", synth_out, "output path, '-' for stdout");

    RunConfig bench_cfg;
    std::string bench_kind;
    std::string bench_sizes = "1000,2000,4000,8000,16000,30000";
    std::string bench_feature;
    CLI::App* bench = app.add_subcommand("bench", "time PD computation across dataset sizes");
    bench->add_option("--kind", bench_kind, "synthetic dataset kind")->required();
    bench->add_option("--sizes", bench_sizes, "comma-separated ascending row counts");
    bench->add_option("--feature", bench_feature, "feature to analyze (kind default if empty)");
    bench->add_option("--min-samples-leaf", bench_cfg.min_samples_leaf, "leaf size");
    bench->add_option("--min-slopes-per-x", bench_cfg.min_slopes_per_x, "slope filter");
    bench->add_option("--max-features", bench_cfg.max_features, "split column fraction");
    bench->add_option("--seed", bench_cfg.seed, "random seed");
    bench->add_option("--out", bench_cfg.out, "output path, '-' for stdout");

    std::size_t oc_datasets = 50;
    std::uint64_t oc_seed = 0;
    bool oc_verbose = false;
    CLI::App* oc = app.add_subcommand(
        "oracle-check", "compare optimized estimators against the brute-force reference");
    oc->add_option("--datasets", oc_datasets, "number of random datasets");
    oc->add_option("--seed", oc_seed, "random seed");
    oc->add_flag("--verbose", oc_verbose, "log one line per dataset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (pd->parsed()) return cmd_pd(pd_cfg);
        if (catpd->parsed()) return cmd_catpd(catpd_cfg);
        if (synth->parsed()) {
            std::optional<double> sigma;
            if (sigma_opt->count() > 0) {
                if (!(synth_sigma >= 0.0)) throw DataError("sigma must be non-negative");
                sigma = synth_sigma;
            }
            return cmd_synth(synth_kind, synth_n, sigma, synth_seed, synth_out);
        }
        if (bench->parsed()) return cmd_bench(bench_kind, bench_sizes, bench_feature, bench_cfg);
        if (oc->parsed()) return cmd_oracle_check(oc_datasets, oc_seed, oc_verbose);
    } catch (const InsufficientSupportError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const NoSupportedCategoriesError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
