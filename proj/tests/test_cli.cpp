#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "clusterdiag/cli.hpp"

using namespace clusterdiag;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "clusterdiag");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(CLUSTERDIAG_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}

TEST_CASE("generate is deterministic and reports its seed") {
    const auto dir = scratch("generate");
    const auto a = (dir / "a.csv").string();
    const auto b = (dir / "b.csv").string();
    const auto first = invoke({"generate", "--dataset", "multimodal", "--n", "300", "--seed", "5", "--out", a});
    REQUIRE(first.code == 0);
    CHECK(first.err.find("seed: 5") != std::string::npos);
    REQUIRE(invoke({"generate", "--dataset", "multimodal", "--n", "300", "--seed", "5", "--out", b}).code == 0);
    CHECK(slurp(a) == slurp(b));

    std::istringstream lines(slurp(a));
    std::string header;
    std::getline(lines, header);
    CHECK(header == "f1,f2,f3,f4,f5,f6,label");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 300);

    const auto other = invoke({"generate", "--dataset", "multimodal", "--n", "300", "--seed", "6"});
    REQUIRE(other.code == 0);
    CHECK(other.out != slurp(a));
}

TEST_CASE("default seed is printed") {
    const auto r = invoke({"generate", "--dataset", "random", "--n", "10"});
    CHECK(r.code == 0);
    CHECK(r.err.find("seed: 7") != std::string::npos);
}

TEST_CASE("invalid input exits with code 2") {
    const auto dir = scratch("invalid");
    const auto data = (dir / "data.csv").string();
    REQUIRE(invoke({"generate", "--dataset", "gaussian", "--n", "100", "--out", data}).code == 0);

    const auto range = invoke({"sweep", "--in", data, "--k-min", "5", "--k-max", "2"});
    CHECK(range.code == 2);
    CHECK(range.err.find("--k-min") != std::string::npos);

    CHECK(invoke({"fit", "--in", data, "--k", "3", "--features", "f1,nope"}).code == 2);
    CHECK(invoke({"fit", "--in", (dir / "missing.csv").string(), "--k", "3"}).code == 2);
    CHECK(invoke({"fit", "--in", data, "--k", "3", "--method", "fuzzy"}).code == 2);
    CHECK(invoke({"project", "--in", data, "--dims", "4"}).code == 2);
    CHECK(invoke({"generate", "--dataset", "correlated", "--rho", "1.5"}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
}

TEST_CASE("a mixture that is not positive definite exits with code 3") {
    const auto dir = scratch("numeric");
    const auto mixture = dir / "bad.json";
    std::ofstream(mixture) << R"({"name": "bad", "version": "1", "noise_sd": 0,
        "components": [{"mean": [0, 0], "weight": 1, "cov": [[1, 2], [2, 1]]}]})";
    const auto r = invoke({"generate", "--dataset", "multimodal", "--d", "2", "--n", "50", "--mixture", mixture.string()});
    CHECK(r.code == 3);
    CHECK(!r.err.empty());
}

TEST_CASE("fit, sweep, stability and project work end to end") {
    const auto dir = scratch("pipeline");
    const auto data = (dir / "data.csv").string();
    REQUIRE(invoke({"generate", "--dataset", "multimodal", "--n", "400", "--out", data}).code == 0);

    const auto fit_path = (dir / "fit.json").string();
    const auto fit = invoke({"fit", "--in", data, "--k", "5", "--out", fit_path});
    REQUIRE(fit.code == 0);
    const auto doc = nlohmann::json::parse(slurp(fit_path));
    CHECK(doc["k"] == 5);
    CHECK(doc["labels"].size() == 400);

    const auto sweep_csv = (dir / "sweep.csv").string();
    REQUIRE(invoke({"sweep", "--in", data, "--k-min", "2", "--k-max", "6", "--out", sweep_csv}).code == 0);
    std::istringstream sweep_lines(slurp(sweep_csv));
    std::string header;
    std::getline(sweep_lines, header);
    CHECK(header == "k,silhouette,sse,stability_mean,stability_sd");

    const auto sweep_json = invoke({"sweep", "--in", data, "--k-min", "2", "--k-max", "6", "--format", "json",
                                    "--method", "spherical"});
    REQUIRE(sweep_json.code == 0);
    CHECK(nlohmann::json::parse(sweep_json.out)["best_k"] == 5);

    const auto stab = invoke({"stability", "--in", data, "--k", "5", "--runs", "4"});
    REQUIRE(stab.code == 0);
    CHECK(nlohmann::json::parse(stab.out)["pairwise"].size() == 6);

    const auto scatter = invoke({"project", "--in", data, "--labels", fit_path, "--format", "csv"});
    REQUIRE(scatter.code == 0);
    CHECK(scatter.out.rfind("pc1,pc2,label\n", 0) == 0);
    const auto svg = invoke({"project", "--in", data, "--labels", fit_path, "--dims", "3", "--format", "svg"});
    REQUIRE(svg.code == 0);
    CHECK(svg.out.find("<svg") != std::string::npos);
}

TEST_CASE("paperbench writes one directory per scenario") {
    const auto dir = scratch("bench");
    const auto out = dir / "run";
    const auto r = invoke({"paperbench", "--out-dir", out.string(), "--n", "300", "--k-max", "5", "--n-init", "2",
                           "--stability-runs", "3"});
    REQUIRE(r.code == 0);
    std::set<std::string> entries;
    for (const auto& e : fs::directory_iterator(out)) entries.insert(e.path().filename().string());
    CHECK(entries == std::set<std::string>{"0_random", "1_gaussian", "2_correlated", "3_multimodal", "4_cytometer",
                                           "summary.csv"});
    for (const char* f : {"data.csv", "sweep.json", "stability.json", "sweep_classical.svg", "profile.csv",
                          "scatter.svg"}) {
        CHECK(fs::exists(out / "3_multimodal" / f));
    }
    CHECK(r.out.find("cytometer") != std::string::npos);
}
