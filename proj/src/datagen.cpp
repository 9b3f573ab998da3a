#include "clusterdiag/datagen.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "clusterdiag/error.hpp"
#include "clusterdiag/linalg.hpp"

namespace clusterdiag {

namespace embedded {
// Generated at configure time from config/*.json.
extern const char* const multimodal_v1;
extern const char* const cytometer_v1;
}

namespace {

std::string fmt_param(double value) {
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

DataMatrix blank(std::size_t n, std::size_t d, std::string generator, RngStream& stream) {
    DataMatrix out;
    out.values = Matrix(n, d);
    out.feature_names = default_feature_names(d);
    out.provenance.generator = std::move(generator);
    out.provenance.seed = stream.master_seed();
    out.provenance.parameters["n"] = std::to_string(n);
    out.provenance.parameters["d"] = std::to_string(d);
    out.provenance.parameters["stream"] = std::to_string(stream.stream_index());
    return out;
}

void require_shape(std::size_t n, std::size_t d, const char* what) {
    if (n < 1 || d < 1) {
        throw InvalidArgument(std::string(what) + ": n and d must be positive (got n=" + std::to_string(n) +
                              ", d=" + std::to_string(d) + ")");
    }
}

}

std::vector<std::string> default_feature_names(std::size_t d) {
    std::vector<std::string> names;
    names.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
        names.push_back("f" + std::to_string(j + 1));
    }
    return names;
}

void MixtureSpec::validate() const {
    const std::size_t k = components();
    if (k == 0 || dims() == 0) {
        throw InvalidArgument("mixture '" + name + "': needs at least one component and one dimension");
    }
    if (weights.size() != k || chol_factors.size() != k) {
        throw InvalidArgument("mixture '" + name + "': " + std::to_string(k) + " means but " +
                              std::to_string(weights.size()) + " weights and " + std::to_string(chol_factors.size()) +
                              " covariance factors");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        if (!(weights[j] > 0.0) || !std::isfinite(weights[j])) {
            throw InvalidArgument("mixture '" + name + "': weight " + std::to_string(j) + " is not positive");
        }
        total += weights[j];
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw InvalidArgument("mixture '" + name + "': weights sum to " + fmt_param(total) + ", expected 1");
    }
    for (double v : means.values()) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("mixture '" + name + "': non-finite mean entry");
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        const Matrix& l = chol_factors[j];
        if (l.rows() != dims() || l.cols() != dims()) {
            throw InvalidArgument("mixture '" + name + "': covariance factor " + std::to_string(j) + " has wrong shape");
        }
        for (std::size_t r = 0; r < l.rows(); ++r) {
            if (!(l(r, r) > 0.0)) {
                throw InvalidArgument("mixture '" + name + "': covariance factor " + std::to_string(j) +
                                      " has a non-positive diagonal");
            }
            for (std::size_t c = r + 1; c < l.cols(); ++c) {
                if (l(r, c) != 0.0) {
                    throw InvalidArgument("mixture '" + name + "': covariance factor " + std::to_string(j) +
                                          " is not lower-triangular");
                }
            }
        }
    }
    if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) {
        throw InvalidArgument("mixture '" + name + "': noise_sd must be finite and non-negative");
    }
}

MixtureSpec mixture_from_json(const nlohmann::json& doc) {
    MixtureSpec spec;
    try {
        spec.name = doc.value("name", std::string("custom"));
        spec.version = doc.value("version", std::string(""));
        spec.noise_sd = doc.value("noise_sd", 0.0);
        const auto& comps = doc.at("components");
        if (!comps.is_array() || comps.empty()) {
            throw InvalidArgument("mixture: 'components' must be a non-empty array");
        }
        std::vector<std::vector<double>> means;
        for (const auto& comp : comps) {
            means.push_back(comp.at("mean").get<std::vector<double>>());
            spec.weights.push_back(comp.at("weight").get<double>());
            const std::size_t d = means.back().size();
            if (comp.contains("cov")) {
                const auto rows = comp.at("cov").get<std::vector<std::vector<double>>>();
                spec.chol_factors.push_back(cholesky(Matrix::from_rows(rows)));
            } else {
                const auto sd = comp.at("sd").get<std::vector<double>>();
                if (sd.size() != d) {
                    throw InvalidArgument("mixture: 'sd' length differs from 'mean' length");
                }
                Matrix l(d, d);
                for (std::size_t i = 0; i < d; ++i) {
                    l(i, i) = sd[i];
                }
                spec.chol_factors.push_back(std::move(l));
            }
        }
        spec.means = Matrix::from_rows(means);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("mixture: malformed document: ") + e.what());
    }
    spec.validate();
    return spec;
}

MixtureSpec load_mixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open mixture file '" + path + "'");
    }
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("mixture file '" + path + "': " + e.what());
    }
    return mixture_from_json(doc);
}

const MixtureSpec& default_multimodal_spec() {
    static const MixtureSpec spec = mixture_from_json(nlohmann::json::parse(embedded::multimodal_v1));
    return spec;
}

const MixtureSpec& default_cytometer_spec() {
    static const MixtureSpec spec = mixture_from_json(nlohmann::json::parse(embedded::cytometer_v1));
    return spec;
}

Matrix equicorrelation(std::size_t d, double rho) {
    Matrix out(d, d, rho);
    for (std::size_t i = 0; i < d; ++i) {
        out(i, i) = 1.0;
    }
    return out;
}

DataMatrix gen_random(std::size_t n, std::size_t d, RngStream& stream) {
    require_shape(n, d, "gen_random");
    DataMatrix out = blank(n, d, "random", stream);
    for (auto& v : out.values.values()) {
        v = stream.uniform01();
    }
    return out;
}

DataMatrix gen_unimodal_gaussian(std::size_t n, std::size_t d, RngStream& stream) {
    require_shape(n, d, "gen_unimodal_gaussian");
    DataMatrix out = blank(n, d, "gaussian", stream);
    for (auto& v : out.values.values()) {
        v = stream.standard_normal();
    }
    return out;
}

DataMatrix gen_correlated_gaussian(std::size_t n, std::size_t d, double rho, RngStream& stream) {
    require_shape(n, d, "gen_correlated_gaussian");
    const double lower = d > 1 ? -1.0 / static_cast<double>(d - 1) : -1.0;
    if (!(rho > lower && rho < 1.0)) {
        throw InvalidArgument("gen_correlated_gaussian: rho = " + fmt_param(rho) + " is outside (" + fmt_param(lower) +
                              ", 1) for d = " + std::to_string(d));
    }
    const Matrix factor = cholesky(equicorrelation(d, rho));
    const std::vector<double> zero(d, 0.0);
    DataMatrix out = blank(n, d, "correlated", stream);
    out.provenance.parameters["rho"] = fmt_param(rho);
    for (std::size_t i = 0; i < n; ++i) {
        const auto draw = mvn_sample(zero, factor, stream);
        std::copy(draw.begin(), draw.end(), out.values.row(i).begin());
    }
    return out;
}

DataMatrix gen_multimodal(std::size_t n, std::size_t d, const MixtureSpec& spec, RngStream& stream) {
    require_shape(n, d, "gen_multimodal");
    spec.validate();
    if (spec.dims() != d) {
        throw InvalidArgument("gen_multimodal: mixture '" + spec.name + "' has " + std::to_string(spec.dims()) +
                              " dimensions, requested d = " + std::to_string(d));
    }
    DataMatrix out = blank(n, d, "multimodal", stream);
    out.provenance.parameters["mixture"] = spec.name;
    out.provenance.parameters["mixture_version"] = spec.version;
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t comp = stream.weighted_index(spec.weights);
        if (comp >= spec.components()) {
            comp = spec.components() - 1;
        }
        labels[i] = static_cast<int>(comp);
        auto draw = mvn_sample(spec.means.row(comp), spec.chol_factors[comp], stream);
        if (spec.noise_sd > 0.0) {
            for (auto& v : draw) {
                v += spec.noise_sd * stream.standard_normal();
            }
        }
        std::copy(draw.begin(), draw.end(), out.values.row(i).begin());
    }
    out.truth_labels = std::move(labels);
    return out;
}

DataMatrix gen_cytometer(std::size_t n, RngStream& stream) {
    return gen_cytometer(n, default_cytometer_spec(), stream);
}

DataMatrix gen_cytometer(std::size_t n, const MixtureSpec& spec, RngStream& stream) {
    if (n < 100) {
        throw InvalidArgument("gen_cytometer: n must be at least 100, got " + std::to_string(n));
    }
    DataMatrix out = gen_multimodal(n, spec.dims(), spec, stream);
    out.provenance.generator = "cytometer";
    return out;
}

DatasetKind parse_dataset_kind(std::string_view name) {
    if (name == "random") return DatasetKind::random;
    if (name == "gaussian") return DatasetKind::gaussian;
    if (name == "correlated") return DatasetKind::correlated;
    if (name == "multimodal") return DatasetKind::multimodal;
    if (name == "cytometer") return DatasetKind::cytometer;
    throw InvalidArgument("unknown dataset '" + std::string(name) +
                          "' (expected random, gaussian, correlated, multimodal or cytometer)");
}

std::string_view to_string(DatasetKind kind) {
    switch (kind) {
    case DatasetKind::random: return "random";
    case DatasetKind::gaussian: return "gaussian";
    case DatasetKind::correlated: return "correlated";
    case DatasetKind::multimodal: return "multimodal";
    case DatasetKind::cytometer: return "cytometer";
    }
    return "unknown";
}

}
