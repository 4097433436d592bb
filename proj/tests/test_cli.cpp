#include "pdfuse/cli.h"
#include "pdfuse/tabular.h"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace pdfuse;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "pdfuse");
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("pdfuse_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

const std::string kZadeh1 = R"({"frame": ["A", "B", "C"], "masses": {"A": 0.99, "B": 0.01}})";
const std::string kZadeh2 = R"({"frame": ["A", "B", "C"], "masses": {"C": 0.99, "B": 0.01}})";

}  // namespace

TEST_CASE("version and usage") {
    const auto v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("pdfuse 1.0.0") == 0);
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("gen writes the scenario and is deterministic") {
    const auto d = scratch("gen");
    const auto missing = run({"gen", "--seed", "42", "--out", d.string()});
    CHECK(missing.code == cli::kUsage);
    CHECK(missing.err.find("--n") != std::string::npos);

    for (const char* sub : {"a", "b"})
        REQUIRE(run({"gen", "--seed", "42", "--n", "1000", "--classes", "3", "--out", (d / sub).string()}).code == 0);
    for (const char* f : {"operation.csv", "monitoring.csv", "environment.csv", "labels.csv", "manifest.json"}) {
        CHECK(fs::exists(d / "a" / f));
        CHECK(cli::sha256_hex(slurp(d / "a" / f)) == cli::sha256_hex(slurp(d / "b" / f)));
    }
    CHECK(run({"gen", "--n", "100", "--conflict-rate", "2", "--out", d.string()}).code == cli::kUsage);
    CHECK(run({"gen", "--n", "100", "--noise", "0.1,0.2", "--out", d.string()}).code == cli::kUsage);
    fs::remove_all(d);
}

TEST_CASE("output directory falls back to the environment") {
    const auto d = scratch("env");
    ::unsetenv(cli::kOutEnv);
    CHECK(run({"gen", "--n", "20"}).code == cli::kUsage);
    ::setenv(cli::kOutEnv, d.string().c_str(), 1);
    CHECK(run({"gen", "--n", "20"}).code == 0);
    ::unsetenv(cli::kOutEnv);
    CHECK(fs::exists(d / "labels.csv"));
    fs::remove_all(d);
}

TEST_CASE("normalize sidecar, idempotence and failures") {
    const auto d = scratch("norm");
    REQUIRE(run({"gen", "--n", "200", "--out", d.string()}).code == 0);
    const auto first = run({"normalize", "--input", (d / "operation.csv").string(), "--out", (d / "n1").string()});
    REQUIRE(first.code == 0);
    const auto sidecar = Json::parse(slurp(d / "n1" / "operation.params.json"));
    for (const auto& [name, entry] : sidecar.items()) {
        CHECK(entry["lambda"].get<double>() >= -5.0);
        CHECK(entry["lambda"].get<double>() <= 5.0);
    }

    REQUIRE(run({"normalize", "--input", (d / "n1" / "operation.normalized.csv").string(), "--kind", "operation",
                 "--lambda-grid", "1:1:1", "--out", (d / "n2").string()})
                .code == 0);
    const auto schema = schema_from_header(slurp(d / "n1" / "operation.normalized.csv"), SourceKind::operation);
    const auto once = parse_csv(slurp(d / "n1" / "operation.normalized.csv"), schema).table;
    const auto twice = parse_csv(slurp(d / "n2" / "operation.normalized.normalized.csv"), schema).table;
    for (std::size_t r = 0; r < once.rows(); ++r)
        for (std::size_t c = 0; c < once.cols(); ++c) CHECK(std::fabs(once.at(r, c) - twice.at(r, c)) <= 1e-12);

    CHECK(run({"normalize", "--input", (d / "operation.csv").string(), "--reuse-params",
               (d / "n1" / "operation.params.json").string(), "--out", (d / "n3").string()})
              .code == 0);
    CHECK(slurp(d / "n3" / "operation.normalized.csv") == slurp(d / "n1" / "operation.normalized.csv"));
    CHECK(run({"normalize", "--input", (d / "monitoring.csv").string(), "--reuse-params",
               (d / "n1" / "operation.params.json").string(), "--out", (d / "n4").string()})
              .code == cli::kUsage);

    write(d / "broken.csv", "timestamp,a\n2024-01-01T00:00:00Z,1\n2024-01-01T00:00:00Z,2\n");
    CHECK(run({"normalize", "--input", (d / "broken.csv").string(), "--out", (d / "n5").string()}).code ==
          cli::kParse);
    write(d / "flat.csv", "timestamp,a\n2024-01-01T00:00:00Z,1\n2024-01-01T00:00:01Z,1\n2024-01-01T00:00:02Z,1\n");
    CHECK(run({"normalize", "--input", (d / "flat.csv").string(), "--out", (d / "n6").string()}).code ==
          cli::kDegenerate);
    CHECK(run({"normalize", "--input", (d / "operation.csv").string(), "--lambda-grid", "-9:1:0.1", "--out",
               (d / "n7").string()})
              .code == cli::kUsage);
    fs::remove_all(d);
}

TEST_CASE("fuse Zadeh fixture") {
    const auto d = scratch("fuse");
    write(d / "m1.json", kZadeh1);
    write(d / "m2.json", kZadeh2);
    const auto m1 = (d / "m1.json").string(), m2 = (d / "m2.json").string();

    const auto ds = run({"fuse", "--mass", m1, "--mass", m2, "--method", "ds", "--out", (d / "ds").string()});
    REQUIRE(ds.code == 0);
    const auto dj = Json::parse(slurp(d / "ds" / "fusion.json"));
    CHECK(std::fabs(dj["combined"]["masses"]["B"].get<double>() - 1.0) <= 1e-12);

    const auto pd = run({"fuse", "--mass", m1, "--mass", m2, "--method", "pca-ds", "--out", (d / "pd").string()});
    REQUIRE(pd.code == 0);
    const auto pj = Json::parse(slurp(d / "pd" / "fusion.json"));
    for (const char* h : {"A", "B", "C"}) CHECK(pj["combined"]["masses"][h].get<double>() > 0.0);

    CHECK(run({"fuse", "--mass", m1, "--mass", m2, "--watch", "Q", "--out", d.string()}).code == cli::kUsage);
    const auto watched = run({"fuse", "--mass", m1, "--mass", m2, "--watch", "A", "--out", (d / "w").string()});
    CHECK(watched.code == 0);
    CHECK(Json::parse(watched.out)["watch"]["best_step"] == 1);

    write(d / "t1.json", R"({"frame": ["A", "B"], "masses": {"A": 1}})");
    write(d / "t2.json", R"({"frame": ["A", "B"], "masses": {"B": 1}})");
    CHECK(run({"fuse", "--mass", (d / "t1.json").string(), "--mass", (d / "t2.json").string(), "--method", "ds",
               "--out", d.string()})
              .code == cli::kTotalConflict);
    write(d / "bad.json", "{not json");
    CHECK(run({"fuse", "--mass", m1, "--mass", (d / "bad.json").string(), "--out", d.string()}).code == cli::kParse);
    fs::remove_all(d);
}

TEST_CASE("eval over generated data writes every artifact") {
    const auto d = scratch("eval");
    REQUIRE(run({"gen", "--n", "200", "--conflict-rate", "0.2", "--out", d.string()}).code == 0);
    const auto r = run({"eval", "--data", d.string(), "--sizes", "100,200", "--out", (d / "e").string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"result.json", "intervals.csv", "accuracy.csv", "prototypes.json", "eval_manifest.json"})
        CHECK(fs::exists(d / "e" / f));
    const auto acc = slurp(d / "e" / "accuracy.csv");
    CHECK(std::count(acc.begin(), acc.end(), '\n') == 1 + 2 * 2);

    const auto again = run({"eval", "--data", d.string(), "--sizes", "100,200", "--out", (d / "f").string()});
    REQUIRE(again.code == 0);
    CHECK(slurp(d / "e" / "result.json") == slurp(d / "f" / "result.json"));

    const auto norm = run({"normalize", "--input", (d / "operation.csv").string(), "--input",
                           (d / "monitoring.csv").string(), "--input", (d / "environment.csv").string(), "--out",
                           d.string()});
    REQUIRE(norm.code == 0);
    const auto pre = run({"eval", "--data", d.string(), "--normalized", "--out", (d / "g").string()});
    CHECK(pre.code == 0);

    const auto by_csv = run({"fuse", "--csv", (d / "operation.normalized.csv").string(), "--csv",
                             (d / "monitoring.normalized.csv").string(), "--csv",
                             (d / "environment.normalized.csv").string(), "--prototypes",
                             (d / "g" / "prototypes.json").string(), "--row", "3", "--out", (d / "h").string()});
    CHECK(by_csv.code == 0);
    CHECK(run({"eval", "--out", d.string()}).code == cli::kUsage);
    fs::remove_all(d);
}
