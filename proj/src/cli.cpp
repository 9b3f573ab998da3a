#include "clusterdiag/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "clusterdiag/datagen.hpp"
#include "clusterdiag/error.hpp"
#include "clusterdiag/metrics.hpp"
#include "clusterdiag/pca.hpp"
#include "clusterdiag/pipeline.hpp"
#include "clusterdiag/preprocess.hpp"
#include "clusterdiag/report.hpp"

namespace clusterdiag {

namespace {

constexpr std::uint64_t default_seed = 7;

struct Common {
    std::uint64_t seed = default_seed;
    unsigned threads = 1;
    std::string out;
    std::string format;
};

struct DataSource {
    std::string in;
    std::vector<std::string> features;
};

struct FitFlags {
    std::string method = "classical";
    int n_init = 10;
    int max_iter = 300;
    std::optional<double> tol;
};

void add_common(CLI::App* cmd, Common& c, bool with_format) {
    cmd->add_option("--seed", c.seed, "Master seed for every random draw")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker threads, 0 for one per core; results do not depend on it")
        ->capture_default_str();
    cmd->add_option("--out", c.out, "Output file (stdout when omitted)");
    if (with_format) {
        cmd->add_option("--format", c.format, "json, csv or svg");
    }
}

void add_source(CLI::App* cmd, DataSource& s) {
    cmd->add_option("--in", s.in, "Input CSV with a header row")->required();
    cmd->add_option("--features", s.features, "Comma-separated columns to use (default: all but 'label')")
        ->delimiter(',');
}

void add_fit(CLI::App* cmd, FitFlags& f) {
    cmd->add_option("--method", f.method, "classical or spherical")->capture_default_str();
    cmd->add_option("--n-init", f.n_init, "K-means++ restarts")->capture_default_str();
    cmd->add_option("--max-iter", f.max_iter, "Lloyd iteration cap")->capture_default_str();
    cmd->add_option("--tol", f.tol, "Convergence tolerance (default 1e-4 classical, 1e-6 spherical)");
}

FitOptions fit_options(const FitFlags& f, Method method, unsigned threads) {
    FitOptions options = method == Method::classical ? FitOptions{} : spherical_defaults();
    if (f.n_init < 1) throw InvalidArgument("--n-init must be at least 1");
    if (f.max_iter < 1) throw InvalidArgument("--max-iter must be at least 1");
    options.n_init = f.n_init;
    options.max_iter = f.max_iter;
    if (f.tol) {
        if (!(*f.tol >= 0.0)) throw InvalidArgument("--tol must be non-negative");
        options.tol = *f.tol;
    }
    options.threads = threads;
    return options;
}

ArtifactFormat resolve_format(const std::string& flag, const std::string& out, ArtifactFormat fallback) {
    if (!flag.empty()) {
        return parse_format(flag);
    }
    const auto dot = out.rfind('.');
    if (dot != std::string::npos) {
        const std::string ext = out.substr(dot + 1);
        if (ext == "json" || ext == "csv" || ext == "svg") {
            return parse_format(ext);
        }
    }
    return fallback;
}

void emit(const std::string& path, const std::string& contents, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << contents;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw InvalidArgument("cannot write " + path);
    }
    file << contents;
    if (!file.flush()) {
        throw InvalidArgument("write failed: " + path);
    }
}

Matrix load_standardized(const DataSource& source, std::vector<std::string>& names) {
    const DataMatrix raw = load_csv(source.in, source.features);
    names = raw.feature_names;
    return standardize(raw).data.values;
}

std::size_t scenario_index(DatasetKind kind) {
    switch (kind) {
    case DatasetKind::random: return 0;
    case DatasetKind::gaussian: return 1;
    case DatasetKind::correlated: return 2;
    case DatasetKind::multimodal: return 3;
    case DatasetKind::cytometer: return 4;
    }
    return 0;
}

bool use_color(const std::ostream& err) {
    return &err == &std::cerr && std::getenv("NO_COLOR") == nullptr && ::isatty(STDERR_FILENO) == 1;
}

void report_error(std::ostream& err, const std::string& message) {
    if (use_color(err)) {
        err << "\x1b[31merror:\x1b[0m " << message << "\n";
    } else {
        err << "error: " << message << "\n";
    }
}

}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cluster-validity diagnostics: K-means, spherical K-means, silhouette, ARI stability, null models",
                 "clusterdiag"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    // generate
    Common gen_common;
    std::string dataset;
    std::size_t gen_n = default_rows;
    std::size_t gen_d = default_features;
    double gen_rho = default_rho;
    std::string gen_mixture;
    auto* generate = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
    add_common(generate, gen_common, false);
    generate->add_option("--dataset", dataset, "random, gaussian, correlated, multimodal or cytometer")->required();
    generate->add_option("--n", gen_n, "Rows")->capture_default_str();
    generate->add_option("--d", gen_d, "Features")->capture_default_str();
    generate->add_option("--rho", gen_rho, "Equicorrelation for the correlated design")->capture_default_str();
    generate->add_option("--mixture", gen_mixture, "Mixture JSON overriding the multimodal or cytometer layout");

    // fit
    Common fit_common;
    DataSource fit_source;
    FitFlags fit_flags;
    int fit_k = 0;
    auto* fit_cmd = app.add_subcommand("fit", "Fit one clustering and write its labels and centroids as JSON");
    add_common(fit_cmd, fit_common, false);
    add_source(fit_cmd, fit_source);
    add_fit(fit_cmd, fit_flags);
    fit_cmd->add_option("--k", fit_k, "Number of clusters")->required();

    // sweep
    Common sweep_common;
    DataSource sweep_source;
    FitFlags sweep_flags;
    int k_min = 2;
    int k_max = 10;
    int sweep_runs = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "Silhouette, SSE and optional stability over a range of k");
    add_common(sweep_cmd, sweep_common, true);
    add_source(sweep_cmd, sweep_source);
    add_fit(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--k-min", k_min, "Smallest k")->capture_default_str();
    sweep_cmd->add_option("--k-max", k_max, "Largest k")->capture_default_str();
    sweep_cmd->add_option("--stability-runs", sweep_runs, "Per-k stability runs, 0 to skip")->capture_default_str();

    // stability
    Common stab_common;
    DataSource stab_source;
    FitFlags stab_flags;
    int stab_k = 0;
    int stab_runs = 20;
    auto* stab_cmd = app.add_subcommand("stability", "Pairwise ARI over repeated single-initialization fits");
    add_common(stab_cmd, stab_common, false);
    add_source(stab_cmd, stab_source);
    add_fit(stab_cmd, stab_flags);
    stab_cmd->add_option("--k", stab_k, "Number of clusters")->required();
    stab_cmd->add_option("--runs", stab_runs, "Independent runs")->capture_default_str();

    // project
    Common proj_common;
    DataSource proj_source;
    std::string labels_path;
    std::size_t dims = 2;
    auto* proj_cmd = app.add_subcommand("project", "PCA projection of standardized data for plotting");
    add_common(proj_cmd, proj_common, true);
    add_source(proj_cmd, proj_source);
    proj_cmd->add_option("--labels", labels_path, "Fit JSON written by 'fit'");
    proj_cmd->add_option("--dims", dims, "2 or 3")->capture_default_str()->check(CLI::IsMember({2, 3}));

    // paperbench
    Common bench_common;
    PaperbenchConfig bench;
    std::string bench_out;
    std::string empirical;
    std::vector<std::string> empirical_features;
    auto* bench_cmd = app.add_subcommand("paperbench", "Rerun every synthetic scenario (and optionally a CSV)");
    bench_cmd->add_option("--seed", bench_common.seed, "Master seed")->capture_default_str();
    bench_cmd->add_option("--threads", bench_common.threads, "Worker threads, 0 for one per core")
        ->capture_default_str();
    bench_cmd->add_option("--out-dir,--out", bench_out, "Output directory")->required();
    bench_cmd->add_option("--n", bench.n, "Rows per synthetic dataset")->capture_default_str();
    bench_cmd->add_option("--d", bench.d, "Features per synthetic dataset")->capture_default_str();
    bench_cmd->add_option("--rho", bench.rho, "Equicorrelation for the correlated design")->capture_default_str();
    bench_cmd->add_option("--k-min", bench.scenario.k_min, "Smallest k")->capture_default_str();
    bench_cmd->add_option("--k-max", bench.scenario.k_max, "Largest k")->capture_default_str();
    bench_cmd->add_option("--n-init", bench.scenario.n_init, "K-means++ restarts")->capture_default_str();
    bench_cmd->add_option("--stability-runs", bench.scenario.stability_runs, "Stability runs at best k")
        ->capture_default_str();
    bench_cmd->add_option("--empirical", empirical, "Extra scenario from a CSV file");
    bench_cmd->add_option("--features", empirical_features, "Columns of the empirical CSV")->delimiter(',');

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        report_error(err, e.what());
        err << "run with --help for usage\n";
        return exit_invalid_input;
    }

    try {
        if (generate->parsed()) {
            err << "seed: " << gen_common.seed << "\n";
            const DatasetKind kind = parse_dataset_kind(dataset);
            RngStream stream = RngStream(gen_common.seed, 0).child(scenario_index(kind)).child(0);
            DataMatrix data;
            switch (kind) {
            case DatasetKind::random: data = gen_random(gen_n, gen_d, stream); break;
            case DatasetKind::gaussian: data = gen_unimodal_gaussian(gen_n, gen_d, stream); break;
            case DatasetKind::correlated: data = gen_correlated_gaussian(gen_n, gen_d, gen_rho, stream); break;
            case DatasetKind::multimodal: {
                const MixtureSpec spec = gen_mixture.empty() ? default_multimodal_spec() : load_mixture(gen_mixture);
                if (generate->count("--d") == 0) gen_d = spec.dims();
                data = gen_multimodal(gen_n, gen_d, spec, stream);
                break;
            }
            case DatasetKind::cytometer:
                data = gen_mixture.empty() ? gen_cytometer(gen_n, stream)
                                           : gen_cytometer(gen_n, load_mixture(gen_mixture), stream);
                break;
            }
            std::ostringstream csv;
            write_csv(csv, data);
            emit(gen_common.out, csv.str(), out);
            return exit_ok;
        }

        if (fit_cmd->parsed()) {
            err << "seed: " << fit_common.seed << "\n";
            const Method method = parse_method(fit_flags.method);
            std::vector<std::string> names;
            const Matrix z = load_standardized(fit_source, names);
            const ClusteringResult result =
                fit(z, fit_k, method, fit_options(fit_flags, method, fit_common.threads), RngStream(fit_common.seed, 0));
            emit(fit_common.out, fit_to_json(result, method, names).dump(2) + "\n", out);
            return exit_ok;
        }

        if (sweep_cmd->parsed()) {
            err << "seed: " << sweep_common.seed << "\n";
            if (k_min > k_max) {
                throw InvalidArgument("invalid k range: --k-min " + std::to_string(k_min) + " is greater than --k-max " +
                                      std::to_string(k_max));
            }
            if (sweep_runs == 1 || sweep_runs < 0) {
                throw InvalidArgument("--stability-runs must be 0 or at least 2");
            }
            const Method method = parse_method(sweep_flags.method);
            const ArtifactFormat format = resolve_format(sweep_common.format, sweep_common.out, ArtifactFormat::json);
            std::vector<std::string> names;
            const Matrix z = load_standardized(sweep_source, names);
            SweepConfig config;
            config.k_min = k_min;
            config.k_max = k_max;
            config.fit = fit_options(sweep_flags, method, sweep_common.threads);
            config.stability_runs = sweep_runs;
            const KSweepReport report = k_sweep(z, method, config, RngStream(sweep_common.seed, 0));
            emit(sweep_common.out, emit_sweep(report, format), out);
            return exit_ok;
        }

        if (stab_cmd->parsed()) {
            err << "seed: " << stab_common.seed << "\n";
            const Method method = parse_method(stab_flags.method);
            std::vector<std::string> names;
            const Matrix z = load_standardized(stab_source, names);
            const StabilityReport report = stability(z, stab_k, method, stab_runs, RngStream(stab_common.seed, 0),
                                                     fit_options(stab_flags, method, stab_common.threads));
            emit(stab_common.out, stability_to_json(report).dump(2) + "\n", out);
            return exit_ok;
        }

        if (proj_cmd->parsed()) {
            const ArtifactFormat format = resolve_format(proj_common.format, proj_common.out, ArtifactFormat::csv);
            std::vector<std::string> names;
            const Matrix z = load_standardized(proj_source, names);
            Partition partition;
            if (!labels_path.empty()) {
                std::ifstream in(labels_path);
                if (!in) {
                    throw InvalidArgument("cannot read " + labels_path);
                }
                nlohmann::json doc;
                try {
                    doc = nlohmann::json::parse(in);
                } catch (const nlohmann::json::exception& e) {
                    throw InvalidArgument(labels_path + ": " + e.what());
                }
                partition = partition_from_fit_json(doc);
                if (partition.size() != z.rows()) {
                    throw InvalidArgument("labels file has " + std::to_string(partition.size()) + " rows, data has " +
                                          std::to_string(z.rows()));
                }
            }
            if (dims > z.cols()) {
                throw InvalidArgument("--dims " + std::to_string(dims) + " exceeds the " + std::to_string(z.cols()) +
                                      " selected features");
            }
            const Projection projection = pca_project(pca_fit(z, dims), z, partition);
            emit(proj_common.out, emit_scatter(projection, format), out);
            return exit_ok;
        }

        if (bench_cmd->parsed()) {
            err << "seed: " << bench_common.seed << "\n";
            if (bench.scenario.k_min > bench.scenario.k_max) {
                throw InvalidArgument("invalid k range: --k-min " + std::to_string(bench.scenario.k_min) +
                                      " is greater than --k-max " + std::to_string(bench.scenario.k_max));
            }
            bench.seed = bench_common.seed;
            bench.scenario.threads = bench_common.threads;
            bench.out_dir = bench_out;
            if (!empirical.empty()) {
                bench.empirical_csv = empirical;
                bench.empirical_features = empirical_features;
            }
            const auto results = paperbench(bench);
            out << summary_table(results, false);
            return exit_ok;
        }
    } catch (const NumericFailure& e) {
        report_error(err, e.what());
        return exit_numeric_failure;
    } catch (const std::invalid_argument& e) {
        report_error(err, e.what());
        return exit_invalid_input;
    } catch (const std::filesystem::filesystem_error& e) {
        report_error(err, e.what());
        return exit_invalid_input;
    } catch (const std::exception& e) {
        report_error(err, e.what());
        return exit_numeric_failure;
    }
    return exit_invalid_input;
}

}
