#include "clusterdiag/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "clusterdiag/error.hpp"
#include "clusterdiag/pca.hpp"
#include "clusterdiag/preprocess.hpp"
#include "clusterdiag/report.hpp"

namespace fs = std::filesystem;

namespace clusterdiag {

namespace {

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidArgument("cannot write " + path.string());
    }
    out << contents;
    if (!out.flush()) {
        throw InvalidArgument("write failed: " + path.string());
    }
}

MethodSummary run_method(const Matrix& z, Method method, const ScenarioConfig& config, const RngStream& sweep_stream,
                         const RngStream& stability_stream, const std::optional<std::vector<int>>& truth) {
    SweepConfig sweep_config;
    sweep_config.k_min = config.k_min;
    sweep_config.k_max = config.k_max;
    sweep_config.fit.n_init = config.n_init;
    sweep_config.fit.max_iter = config.max_iter;
    sweep_config.fit.tol = method == Method::classical ? config.tol_classical : config.tol_spherical;
    sweep_config.fit.threads = config.threads;

    MethodSummary summary;
    summary.sweep = k_sweep(z, method, sweep_config, sweep_stream);
    const int k = summary.sweep.best_k;

    FitOptions single = sweep_config.fit;
    single.threads = 1;
    summary.best_fit = fit(z, k, method, single, sweep_stream.child(static_cast<std::uint64_t>(k)).child(0));
    summary.stability = stability(z, k, method, config.stability_runs, stability_stream, sweep_config.fit);
    if (truth) {
        summary.ari_vs_truth = ari(*truth, summary.best_fit.partition.labels);
    }
    return summary;
}

void write_scenario(const fs::path& dir, const DataMatrix& raw, const Matrix& z, const ScenarioResult& result) {
    std::ostringstream data;
    write_csv(data, raw);
    write_file(dir / "data.csv", data.str());

    nlohmann::ordered_json sweeps;
    sweeps["classical"] = sweep_to_json(result.classical.sweep);
    sweeps["spherical"] = sweep_to_json(result.spherical.sweep);
    write_file(dir / "sweep.json", sweeps.dump(2) + "\n");

    nlohmann::ordered_json stab;
    stab["classical"] = stability_to_json(result.classical.stability);
    stab["spherical"] = stability_to_json(result.spherical.stability);
    write_file(dir / "stability.json", stab.dump(2) + "\n");

    const PcaModel pca = pca_fit(z, 2);
    for (const Method method : {Method::classical, Method::spherical}) {
        const MethodSummary& summary = method == Method::classical ? result.classical : result.spherical;
        const std::string suffix = method == Method::classical ? "" : "_spherical";

        write_file(dir / ("sweep_" + std::string(to_string(method)) + ".csv"),
                   emit_sweep(summary.sweep, ArtifactFormat::csv));
        write_file(dir / ("sweep_" + std::string(to_string(method)) + ".svg"),
                   emit_sweep(summary.sweep, ArtifactFormat::svg));

        const ProfileTable profile = method == Method::classical
                                         ? emit_profile(summary.best_fit, raw.feature_names)
                                         : profile_from_partition(z, summary.best_fit.partition, raw.feature_names);
        write_file(dir / ("profile" + suffix + ".csv"), profile_csv(profile));
        write_file(dir / ("profile" + suffix + ".svg"), profile_svg(profile));

        const Projection projection = pca_project(pca, z, summary.best_fit.partition);
        write_file(dir / ("scatter" + suffix + ".csv"), emit_scatter(projection, ArtifactFormat::csv));
        write_file(dir / ("scatter" + suffix + ".svg"), emit_scatter(projection, ArtifactFormat::svg));
    }
}

}

ScenarioResult analyze_scenario(const DataMatrix& raw, const std::string& name, const ScenarioConfig& config,
                                const RngStream& stream, const std::optional<fs::path>& out_dir) {
    if (config.stability_runs < 2) {
        throw InvalidArgument("stability runs must be at least 2, got " + std::to_string(config.stability_runs));
    }
    const Standardized standardized = standardize(raw);
    const Matrix& z = standardized.data.values;

    ScenarioResult result;
    result.name = name;
    result.n = raw.n();
    result.d = raw.d();
    result.classical = run_method(z, Method::classical, config, stream.child(1), stream.child(3), raw.truth_labels);
    result.spherical = run_method(z, Method::spherical, config, stream.child(2), stream.child(4), raw.truth_labels);

    if (out_dir) {
        fs::path target = *out_dir;
        fs::path staging = target;
        staging += ".partial";
        fs::remove_all(staging);
        fs::create_directories(staging);
        try {
            write_scenario(staging, raw, z, result);
        } catch (...) {
            std::error_code ignored;
            fs::remove_all(staging, ignored);
            throw;
        }
        fs::remove_all(target);
        fs::rename(staging, target);
    }
    return result;
}

std::vector<std::string> paperbench_scenarios(bool with_empirical) {
    std::vector<std::string> names = {"random", "gaussian", "correlated", "multimodal", "cytometer"};
    if (with_empirical) {
        names.emplace_back("empirical");
    }
    return names;
}

std::vector<ScenarioResult> paperbench(const PaperbenchConfig& config) {
    if (config.out_dir.empty()) {
        throw InvalidArgument("paperbench: output directory is required");
    }
    const auto names = paperbench_scenarios(config.empirical_csv.has_value());

    // Load up front so a bad empirical file fails before any synthetic work.
    std::optional<DataMatrix> empirical;
    if (config.empirical_csv) {
        empirical = load_csv(*config.empirical_csv, config.empirical_features);
    }

    fs::create_directories(config.out_dir);
    const RngStream root(config.seed, 0);
    std::vector<ScenarioResult> results;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const RngStream scenario = root.child(i);
        RngStream gen = scenario.child(0);
        DataMatrix raw;
        switch (i) {
        case 0: raw = gen_random(config.n, config.d, gen); break;
        case 1: raw = gen_unimodal_gaussian(config.n, config.d, gen); break;
        case 2: raw = gen_correlated_gaussian(config.n, config.d, config.rho, gen); break;
        case 3: raw = gen_multimodal(config.n, config.d, default_multimodal_spec(), gen); break;
        case 4:
            if (config.d != default_cytometer_spec().dims()) {
                throw InvalidArgument("cytometer layout has " + std::to_string(default_cytometer_spec().dims()) +
                                      " features, requested d = " + std::to_string(config.d));
            }
            raw = gen_cytometer(config.n, gen);
            break;
        default: raw = *empirical; break;
        }
        if (i < 5) {
            raw.provenance.seed = config.seed;
        }
        const fs::path dir = config.out_dir / (std::to_string(i) + "_" + names[i]);
        results.push_back(analyze_scenario(raw, names[i], config.scenario, scenario, dir));
    }
    write_file(config.out_dir / "summary.csv", summary_table(results, true));
    return results;
}

std::string summary_table(const std::vector<ScenarioResult>& results, bool csv) {
    auto best_silhouette = [](const KSweepReport& sweep) {
        for (const auto& row : sweep.rows) {
            if (row.k == sweep.best_k) return row.silhouette;
        }
        return 0.0;
    };
    auto ari_cell = [](const MethodSummary& m) { return m.ari_vs_truth ? format_double(*m.ari_vs_truth) : std::string(); };

    std::string out;
    if (csv) {
        out = "scenario,n,d,classical_best_k,classical_silhouette,classical_elbow_k,classical_stability_mean,"
              "classical_stability_sd,classical_ari_truth,spherical_best_k,spherical_silhouette,spherical_elbow_k,"
              "spherical_stability_mean,spherical_stability_sd,spherical_ari_truth\n";
        for (const auto& r : results) {
            out += r.name + "," + std::to_string(r.n) + "," + std::to_string(r.d);
            for (const MethodSummary* m : {&r.classical, &r.spherical}) {
                out += "," + std::to_string(m->sweep.best_k) + "," + format_double(best_silhouette(m->sweep)) + "," +
                       (m->sweep.elbow_k ? std::to_string(*m->sweep.elbow_k) : "") + "," +
                       format_double(m->stability.mean) + "," + format_double(m->stability.sd) + "," + ari_cell(*m);
            }
            out += "\n";
        }
        return out;
    }

    char line[256];
    std::snprintf(line, sizeof(line), "%-12s %13s %8s %14s   %13s %8s %14s\n", "scenario", "classical k", "sil",
                  "ARI mean (sd)", "spherical k", "sil", "ARI mean (sd)");
    out += line;
    for (const auto& r : results) {
        char cls[32];
        char sph[32];
        std::snprintf(cls, sizeof(cls), "%.3f (%.3f)", r.classical.stability.mean, r.classical.stability.sd);
        std::snprintf(sph, sizeof(sph), "%.3f (%.3f)", r.spherical.stability.mean, r.spherical.stability.sd);
        std::snprintf(line, sizeof(line), "%-12s %13d %8.3f %14s   %13d %8.3f %14s\n", r.name.c_str(),
                      r.classical.sweep.best_k, best_silhouette(r.classical.sweep), cls, r.spherical.sweep.best_k,
                      best_silhouette(r.spherical.sweep), sph);
        out += line;
    }
    return out;
}

}
