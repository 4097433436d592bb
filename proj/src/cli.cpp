#include "pdfuse/cli.h"

#include "pdfuse/eval.h"
#include "pdfuse/simgen.h"
#include "pdfuse/tabular.h"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#ifndef PDFUSE_VERSION
#define PDFUSE_VERSION "0.0.0"
#endif

namespace pdfuse::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kFormatVersion = 1;

/// Failure that already carries its exit code.
struct CommandError {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CommandError{kParse, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json parse_json(const std::string& text, const std::string& path) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw CommandError{kParse, "'" + path + "' is not valid JSON: " + e.what()};
    }
}

/// Output directory; files are written to a temp name and renamed into place.
class OutputDir {
public:
    explicit OutputDir(const std::string& flag) {
        std::string dir = flag;
        if (dir.empty()) {
            if (const char* env = std::getenv(kOutEnv)) dir = env;
        }
        if (dir.empty()) throw CommandError{kUsage, "no output directory: pass --out or set " + std::string(kOutEnv)};
        root_ = dir;
        std::error_code ec;
        fs::create_directories(root_, ec);
        if (ec) throw CommandError{kUsage, "cannot create output directory '" + dir + "': " + ec.message()};
    }

    void write(const std::string& name, const std::string& content) {
        const auto target = root_ / name;
        const auto tmp = root_ / ("." + name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw CommandError{kUsage, "cannot write '" + tmp.string() + "'"};
            out << content;
            if (!out.flush()) throw CommandError{kUsage, "short write to '" + tmp.string() + "'"};
        }
        fs::rename(tmp, target);
        written_.push_back(name);
    }

    const fs::path& root() const noexcept { return root_; }
    const std::vector<std::string>& written() const noexcept { return written_; }

private:
    fs::path root_;
    std::vector<std::string> written_;
};

LambdaGrid parse_grid(const std::string& text) {
    LambdaGrid g;
    if (text.empty()) return g;
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CommandError{kUsage, "--lambda-grid expects lo:hi:step, got '" + text + "'"};
        }
    }
    if (parts.size() != 3) throw CommandError{kUsage, "--lambda-grid expects lo:hi:step, got '" + text + "'"};
    g = LambdaGrid{parts[0], parts[1], parts[2]};
    try {
        g.validate();
    } catch (const Error& e) {
        throw CommandError{kUsage, e.what()};
    }
    return g;
}

std::array<double, kSourceCount> parse_noise(const std::vector<double>& noise) {
    std::array<double, kSourceCount> out{kDefaultNoise, kDefaultNoise, kDefaultNoise};
    if (noise.empty()) return out;
    if (noise.size() == 1) {
        out.fill(noise.front());
    } else if (noise.size() == kSourceCount) {
        std::copy(noise.begin(), noise.end(), out.begin());
    } else {
        throw CommandError{kUsage, "--noise takes one value or one per source (3)"};
    }
    return out;
}

struct ScenarioFlags {
    std::uint64_t seed = 42;
    std::size_t n = 0;
    std::size_t classes = 3;
    std::vector<std::string> labels;
    double skew = 1.0;
    double conflict_rate = 0.0;
    std::vector<double> noise;
    std::string start = "2024-01-01T00:00:00Z";
    std::int64_t span = 604800;

    void add_to(CLI::App& app, bool n_required) {
        app.add_option("--seed", seed, "Scenario seed")->capture_default_str();
        auto* n_opt = app.add_option("--n", n, "Number of observations (>= 10)");
        if (n_required) n_opt->required();
        app.add_option("--classes", classes, "Number of fault classes (2-8)")->capture_default_str();
        app.add_option("--labels", labels, "Explicit class labels (overrides --classes)")->delimiter(',');
        app.add_option("--skew", skew, "Lognormal sigma of heavy-tailed columns")->capture_default_str();
        app.add_option("--conflict-rate", conflict_rate, "Fraction of observations with a corrupted source")
            ->capture_default_str();
        app.add_option("--noise", noise, "Latent noise, one value or one per source")->delimiter(',');
        app.add_option("--start", start, "First timestamp (ISO-8601)")->capture_default_str();
        app.add_option("--span", span, "Seconds covered by the observations")->capture_default_str();
    }

    ScenarioConfig config() const {
        ScenarioConfig c;
        c.n_observations = n;
        c.hypotheses = labels.empty() ? default_hypotheses(classes) : labels;
        c.seed = seed;
        c.skew_severity = skew;
        c.conflict_rate = conflict_rate;
        c.source_noise = parse_noise(noise);
        const auto t = parse_timestamp(start);
        if (!t) throw CommandError{kUsage, "--start is not an ISO-8601 timestamp"};
        c.start = *t;
        c.span_seconds = span;
        try {
            c.validate();
        } catch (const Error& e) {
            throw CommandError{kUsage, e.what()};
        }
        return c;
    }
};

Json scenario_json(const ScenarioConfig& c) {
    return Json{{"n_observations", c.n_observations},
                {"hypotheses", c.hypotheses},
                {"seed", c.seed},
                {"skew_severity", c.skew_severity},
                {"conflict_rate", c.conflict_rate},
                {"source_noise", c.source_noise},
                {"start", format_timestamp(c.start)},
                {"span_seconds", c.span_seconds},
                {"cadence_seconds", c.cadence_seconds()}};
}

void finish(OutputDir& dir, RunManifest manifest, const std::string& name) {
    manifest.outputs = dir.written();
    dir.write(name, canonical_dump(manifest.to_json()));
}

// ---- gen -------------------------------------------------------------------

int cmd_gen(const ScenarioFlags& flags, const std::string& out_flag, std::ostream& out) {
    const auto config = flags.config();
    OutputDir dir(out_flag);
    const auto scenario = generate_scenario(config);
    for (std::size_t s = 0; s < kSourceCount; ++s) {
        dir.write(std::string(to_string(kSourceOrder[s])) + ".csv", serialize_csv(scenario.sources[s]));
    }
    dir.write("labels.csv", labels_csv(scenario));
    RunManifest m{"gen", Json{{"scenario", scenario_json(config)}}, Json{{"scenario", config.seed}}, {}};
    finish(dir, std::move(m), "manifest.json");
    out << "wrote " << config.n_observations << " observations to " << dir.root().string() << "\n";
    return kOk;
}

// ---- normalize ---------------------------------------------------------------

SourceKind kind_for(const std::string& path, const std::string& flag) {
    if (!flag.empty()) {
        const auto k = source_kind_from_string(flag);
        if (!k) throw CommandError{kUsage, "--kind must be operation, monitoring or environment"};
        return *k;
    }
    const auto stem = fs::path(path).stem().string();
    for (auto k : kSourceOrder)
        if (stem.rfind(std::string(to_string(k)), 0) == 0) return k;
    return SourceKind::operation;
}

SampleTable read_table(const std::string& path, SourceKind kind, std::size_t* dropped = nullptr) {
    const auto text = read_file(path);
    const auto schema = schema_from_header(text, kind);
    auto parsed = parse_csv(text, schema);
    if (dropped) *dropped = parsed.dropped_rows;
    return std::move(parsed.table);
}

int cmd_normalize(const std::vector<std::string>& inputs, const std::string& kind_flag, const std::string& grid_flag,
                  const std::vector<std::string>& reuse, const std::string& out_flag, std::ostream& out) {
    if (!reuse.empty() && reuse.size() != inputs.size()) {
        throw CommandError{kUsage, "--reuse-params must be given once per --input"};
    }
    const auto grid = parse_grid(grid_flag);
    OutputDir dir(out_flag);
    Json config{{"lambda_grid", Json{{"lo", grid.lo}, {"hi", grid.hi}, {"step", grid.step}}}};
    Json input_digests = Json::array();
    bool any_usable = false;

    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& path = inputs[i];
        std::size_t dropped = 0;
        const auto table = read_table(path, kind_for(path, kind_flag), &dropped);
        std::vector<std::string> names;
        for (const auto& c : table.columns()) names.push_back(c.name);

        std::optional<BoxCoxParams> params;
        Json reuse_digest = nullptr;
        if (!reuse.empty()) {
            const auto text = read_file(reuse[i]);
            try {
                params = params_from_sidecar(parse_json(text, reuse[i]), names);
            } catch (const Error& e) {
                throw CommandError{e.code() == Errc::DimensionMismatch ? kUsage : kParse, e.what()};
            }
            reuse_digest = sha256_hex(text);
        }

        const auto result = bc_zscore(table.values(), params, grid);
        std::vector<SidecarEntry> entries;
        for (std::size_t c = 0; c < table.cols(); ++c) {
            auto shifted = table.column(c);
            for (double& v : shifted) v += result.params[c].shift;
            const auto transformed = boxcox(shifted, result.params[c].lambda);
            const auto bc_stats = column_stats(transformed);
            entries.push_back(SidecarEntry{names[c], result.params[c], bc_stats.mean, bc_stats.sample_std,
                                           column_stats(table.column(c)).skewness,
                                           column_stats(result.values.column(c)).skewness, result.degenerate[c]});
            if (!result.degenerate[c]) any_usable = true;
        }

        const auto stem = fs::path(path).stem().string();
        dir.write(stem + ".normalized.csv", serialize_csv(table.with_values(result.values)));
        dir.write(stem + ".params.json", canonical_dump(sidecar_to_json(entries)));
        input_digests.push_back(Json{{"file", fs::path(path).filename().string()},
                                     {"sha256", sha256_hex(read_file(path))},
                                     {"dropped_rows", dropped},
                                     {"reuse_params_sha256", reuse_digest}});
    }
    config["inputs"] = input_digests;
    RunManifest m{"normalize", config, Json::object(), {}};
    finish(dir, std::move(m), "normalize_manifest.json");
    if (!any_usable) throw CommandError{kDegenerate, "every input column is constant"};
    out << "normalized " << inputs.size() << " file(s) into " << dir.root().string() << "\n";
    return kOk;
}

// ---- fuse ------------------------------------------------------------------

struct FuseFlags {
    std::vector<std::string> mass_files;
    std::vector<std::string> csv_files;
    std::string prototypes;
    std::size_t row = 0;
    std::string method = "pca-ds";
    double threshold = kDefaultVarianceThreshold;
    std::string watch;
};

int cmd_fuse(const FuseFlags& f, const std::string& out_flag, std::ostream& out) {
    const auto method = fusion_method_from_string(f.method);
    if (!method) throw CommandError{kUsage, "--method must be ds or pca-ds"};
    if (!(f.threshold > 0.0 && f.threshold <= 1.0)) throw CommandError{kUsage, "--threshold must lie in (0, 1]"};
    if (f.mass_files.empty() == f.csv_files.empty()) {
        throw CommandError{kUsage, "pass either --mass files or --csv files with --prototypes"};
    }

    std::vector<MassFunction> masses;
    Json inputs = Json::array();
    if (!f.mass_files.empty()) {
        for (const auto& path : f.mass_files) {
            const auto text = read_file(path);
            masses.push_back(mass_from_json(parse_json(text, path)));
            inputs.push_back(Json{{"file", fs::path(path).filename().string()}, {"sha256", sha256_hex(text)}});
        }
    } else {
        if (f.prototypes.empty()) throw CommandError{kUsage, "--csv needs --prototypes"};
        const auto proto_text = read_file(f.prototypes);
        const auto builder = evidence_builder_from_json(parse_json(proto_text, f.prototypes));
        if (f.csv_files.size() != builder.prototypes.size()) {
            throw CommandError{kUsage, "prototype file describes " + std::to_string(builder.prototypes.size()) +
                                           " sources, got " + std::to_string(f.csv_files.size()) + " CSVs"};
        }
        std::vector<std::vector<double>> rows;
        for (const auto& path : f.csv_files) {
            const auto table = read_table(path, kind_for(path, ""));
            if (f.row >= table.rows()) throw CommandError{kUsage, "--row beyond the end of '" + path + "'"};
            rows.emplace_back(table.values().row(f.row).begin(), table.values().row(f.row).end());
            inputs.push_back(
                Json{{"file", fs::path(path).filename().string()}, {"sha256", sha256_hex(read_file(path))}});
        }
        masses = build_evidence(rows, builder);
        inputs.push_back(Json{{"file", fs::path(f.prototypes).filename().string()}, {"sha256", sha256_hex(proto_text)}});
    }
    for (const auto& m : masses)
        if (!same_frame(m, masses.front())) throw CommandError{kParse, "mass files use different frames"};
    if (masses.size() < 2) throw CommandError{kUsage, "fusion needs at least two sources"};

    std::optional<std::size_t> watch;
    if (!f.watch.empty()) {
        const auto& labels = masses.front().frame().labels();
        const auto it = std::find(labels.begin(), labels.end(), f.watch);
        if (it == labels.end()) throw CommandError{kUsage, "--watch names unknown hypothesis '" + f.watch + "'"};
        watch = static_cast<std::size_t>(it - labels.begin());
    }

    OutputDir dir(out_flag);
    const auto report = fuse(masses, *method, f.threshold);
    auto j = fusion_report_to_json(report, watch);
    if (watch) {
        const auto trace = fuse_sequence(masses, *method, FocalSet::singleton(*watch), f.threshold);
        j["watch"] = Json{{"hypothesis", f.watch}, {"best_step", trace.best_step}};
    }
    const auto text = canonical_dump(j);
    dir.write("fusion.json", text);
    RunManifest m{"fuse",
                  Json{{"method", f.method}, {"threshold", f.threshold}, {"watch", f.watch}, {"row", f.row},
                       {"inputs", inputs}},
                  Json::object(),
                  {}};
    finish(dir, std::move(m), "fuse_manifest.json");
    out << text;
    return kOk;
}

// ---- eval ------------------------------------------------------------------

struct EvalFlags {
    ScenarioFlags scenario;
    std::string data;
    bool normalized = false;
    std::string labels_file;
    std::vector<std::size_t> sizes;
    std::uint64_t split_seed = 7;
    double threshold = kDefaultVarianceThreshold;
    double temperature = kDefaultTemperature;
    double floor = 0.1;
    std::string grid;
};

std::vector<std::size_t> default_sizes(std::size_t n) {
    std::set<std::size_t> s;
    for (std::size_t i = 1; i <= 10; ++i) {
        const auto v = (i * n + 5) / 10;
        if (v >= 10) s.insert(v);
    }
    s.insert(n);
    return {s.begin(), s.end()};
}

int cmd_eval(const EvalFlags& f, const std::string& out_flag, std::ostream& out) {
    Experiment2Options opt;
    opt.split_seed = f.split_seed;
    opt.threshold = f.threshold;
    opt.temperature = f.temperature;
    opt.ignorance_floor = f.floor;
    opt.grid = parse_grid(f.grid);
    opt.normalized_input = f.normalized;
    if (!(f.threshold > 0.0 && f.threshold <= 1.0)) throw CommandError{kUsage, "--threshold must lie in (0, 1]"};
    if (!(f.temperature > 0.0)) throw CommandError{kUsage, "--temperature must be positive"};
    if (!(f.floor >= 0.0 && f.floor < 1.0)) throw CommandError{kUsage, "--floor must lie in [0, 1)"};

    Json config{{"split_seed", f.split_seed},
                {"threshold", f.threshold},
                {"temperature", f.temperature},
                {"ignorance_floor", f.floor},
                {"lambda_grid", Json{{"lo", opt.grid.lo}, {"hi", opt.grid.hi}, {"step", opt.grid.step}}},
                {"normalized_input", f.normalized}};
    Json seeds{{"split", f.split_seed}};

    std::vector<SampleTable> sources;
    std::vector<std::size_t> labels;
    FramePtr frame;
    if (!f.data.empty()) {
        const fs::path root(f.data);
        std::vector<std::string> hypotheses;
        if (fs::exists(root / "manifest.json")) {
            const auto m = parse_json(read_file((root / "manifest.json").string()), "manifest.json");
            try {
                hypotheses = m.at("config").at("scenario").at("hypotheses").get<std::vector<std::string>>();
            } catch (const Json::exception&) {
                hypotheses.clear();
            }
        }
        const auto labels_path = f.labels_file.empty() ? (root / "labels.csv").string() : f.labels_file;
        const auto labels_text = read_file(labels_path);
        if (hypotheses.empty()) {
            std::set<std::string> seen;
            std::stringstream ss(labels_text);
            std::string line;
            std::getline(ss, line);
            while (std::getline(ss, line)) {
                const auto a = line.find(',');
                if (a == std::string::npos) continue;
                const auto b = line.find(',', a + 1);
                seen.insert(line.substr(a + 1, b == std::string::npos ? std::string::npos : b - a - 1));
            }
            hypotheses.assign(seen.begin(), seen.end());
        }
        frame = make_frame(hypotheses);
        const auto by_time = parse_labels_csv(labels_text, hypotheses);
        std::map<Timestamp, std::size_t> label_at(by_time.begin(), by_time.end());

        std::vector<SampleTable> raw;
        Json inputs = Json::array();
        for (auto kind : kSourceOrder) {
            const auto name = std::string(to_string(kind)) + (f.normalized ? ".normalized.csv" : ".csv");
            const auto path = (root / name).string();
            raw.push_back(read_table(path, kind));
            inputs.push_back(Json{{"file", name}, {"sha256", sha256_hex(read_file(path))}});
        }
        inputs.push_back(Json{{"file", fs::path(labels_path).filename().string()}, {"sha256", sha256_hex(labels_text)}});
        config["inputs"] = inputs;
        config["hypotheses"] = hypotheses;

        const auto aligned = align_by_timestamp(raw);
        std::vector<std::size_t> keep;
        for (std::size_t r = 0; r < aligned.rows(); ++r) {
            const auto it = label_at.find(aligned.timestamps()[r]);
            if (it == label_at.end()) continue;
            keep.push_back(r);
            labels.push_back(it->second);
        }
        if (keep.size() < 2) throw CommandError{kParse, "fewer than two labelled observations"};
        const auto rows = aligned.select_rows(keep);
        std::size_t col0 = 0;
        for (const auto& t : raw) {
            Matrix v(rows.rows(), t.cols());
            for (std::size_t r = 0; r < rows.rows(); ++r)
                for (std::size_t c = 0; c < t.cols(); ++c) v(r, c) = rows.at(r, col0 + c);
            sources.emplace_back(rows.timestamps(), std::move(v), t.columns());
            col0 += t.cols();
        }
    } else {
        if (f.scenario.n == 0) throw CommandError{kUsage, "eval needs --data <dir> or scenario flags with --n"};
        const auto sc = f.scenario.config();
        auto data = generate_scenario(sc);
        sources = std::move(data.sources);
        labels = std::move(data.labels);
        frame = make_frame(sc.hypotheses);
        config["scenario"] = scenario_json(sc);
        seeds["scenario"] = sc.seed;
    }

    opt.sizes = f.sizes.empty() ? default_sizes(labels.size()) : f.sizes;
    config["sizes"] = opt.sizes;
    for (auto s : opt.sizes)
        if (s < 2 || s > labels.size()) {
            throw CommandError{kUsage, "--sizes entries must lie in [2, " + std::to_string(labels.size()) + "]"};
        }

    OutputDir dir(out_flag);
    const auto result = run_experiment2(sources, labels, frame, opt);

    std::string intervals = "method,step,bel,pl,mu\n";
    for (const auto& m : result.methods)
        for (const auto& p : m.mean_trace) {
            intervals += std::string(to_string(m.method)) + "," + std::to_string(p.step) + "," +
                         format_real(p.interval.bel) + "," + format_real(p.interval.pl) + "," +
                         format_real(p.interval.mu) + "\n";
        }
    std::string acc = "size,method,accuracy\n";
    for (const auto& s : result.series) {
        acc += std::to_string(s.size) + "," + std::string(to_string(s.method)) + "," + format_real(s.accuracy) + "\n";
    }
    dir.write("result.json", canonical_dump(experiment_to_json(result)));
    dir.write("intervals.csv", intervals);
    dir.write("accuracy.csv", acc);
    dir.write("prototypes.json", canonical_dump(evidence_builder_to_json(result.builder)));
    RunManifest m{"eval", config, seeds, {}};
    finish(dir, std::move(m), "eval_manifest.json");

    for (const auto& mo : result.methods) {
        out << to_string(mo.method) << " accuracy " << format_real(mo.accuracy) << " (" << mo.correct << "/"
            << mo.total << ")\n";
    }
    return kOk;
}

}  // namespace

int exit_code_for(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidArgument:
        case Errc::InvalidConfig: return kUsage;
        case Errc::DegenerateColumn: return kDegenerate;
        case Errc::TotalConflict: return kTotalConflict;
        default: return kParse;
    }
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error(Errc::InvalidArgument, "SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string RunManifest::config_digest() const { return sha256_hex(canonical_dump(config)); }

Json RunManifest::to_json() const {
    return Json{{"command", command},
                {"config", config},
                {"config_digest", config_digest()},
                {"tool_version", PDFUSE_VERSION},
                {"format_version", kFormatVersion},
                {"seeds", seeds},
                {"outputs", outputs}};
}

std::string version_string() {
    return std::string("pdfuse ") + PDFUSE_VERSION + " (csv format " + std::to_string(kFormatVersion) +
           ", json format " + std::to_string(kFormatVersion) + ")";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-source BC-Zscore normalization and conflict-optimized evidence fusion", "pdfuse"};
    app.set_version_flag("--version", version_string());
    app.require_subcommand(1);

    std::string out_dir;

    ScenarioFlags gen_flags;
    auto* gen = app.add_subcommand("gen", "Generate a seeded three-source scenario");
    gen_flags.add_to(*gen, true);
    gen->add_option("--out", out_dir, "Output directory");

    std::vector<std::string> norm_inputs, reuse;
    std::string kind, grid;
    auto* norm = app.add_subcommand("normalize", "BC-Zscore normalize SampleTable CSVs");
    norm->add_option("--input", norm_inputs, "Input CSV (repeatable)")->required();
    norm->add_option("--kind", kind, "Source kind for every input (default: from file name)");
    norm->add_option("--lambda-grid", grid, "Lambda search grid lo:hi:step within [-5,5]");
    norm->add_option("--reuse-params", reuse, "Sidecar JSON to apply instead of fitting (one per input)");
    norm->add_option("--out", out_dir, "Output directory");

    FuseFlags fuse_flags;
    auto* fuse_cmd = app.add_subcommand("fuse", "Combine evidence with Dempster's rule or PCA-DS");
    fuse_cmd->add_option("--mass", fuse_flags.mass_files, "Mass function JSON (repeatable)");
    fuse_cmd->add_option("--csv", fuse_flags.csv_files, "Normalized source CSV (repeatable, source order)");
    fuse_cmd->add_option("--prototypes", fuse_flags.prototypes, "Evidence prototypes JSON written by eval");
    fuse_cmd->add_option("--row", fuse_flags.row, "Observation row for CSV input")->capture_default_str();
    fuse_cmd->add_option("--method", fuse_flags.method, "ds or pca-ds")->capture_default_str();
    fuse_cmd->add_option("--threshold", fuse_flags.threshold, "Retained variance share")->capture_default_str();
    fuse_cmd->add_option("--watch", fuse_flags.watch, "Hypothesis whose interval trace is reported");
    fuse_cmd->add_option("--out", out_dir, "Output directory");

    EvalFlags eval_flags;
    auto* eval_cmd = app.add_subcommand("eval", "Run the normalization and DS vs PCA-DS experiments");
    eval_flags.scenario.add_to(*eval_cmd, false);
    eval_cmd->add_option("--data", eval_flags.data, "Directory with source CSVs and labels.csv");
    eval_cmd->add_flag("--normalized", eval_flags.normalized, "Read <kind>.normalized.csv and skip BC-Zscore");
    eval_cmd->add_option("--labels-file", eval_flags.labels_file, "Labels CSV (default <data>/labels.csv)");
    eval_cmd->add_option("--sizes", eval_flags.sizes, "Observation counts for the accuracy series")->delimiter(',');
    eval_cmd->add_option("--split-seed", eval_flags.split_seed, "Train/test split seed")->capture_default_str();
    eval_cmd->add_option("--threshold", eval_flags.threshold, "Retained variance share")->capture_default_str();
    eval_cmd->add_option("--temperature", eval_flags.temperature, "Evidence softness")->capture_default_str();
    eval_cmd->add_option("--floor", eval_flags.floor, "Ignorance mass on the frame")->capture_default_str();
    eval_cmd->add_option("--lambda-grid", eval_flags.grid, "Lambda search grid lo:hi:step");
    eval_cmd->add_option("--out", out_dir, "Output directory");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    if (!argv_rev.empty()) argv_rev.pop_back();
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << version_string() << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(gen_flags, out_dir, out);
        if (norm->parsed()) return cmd_normalize(norm_inputs, kind, grid, reuse, out_dir, out);
        if (fuse_cmd->parsed()) return cmd_fuse(fuse_flags, out_dir, out);
        if (eval_cmd->parsed()) return cmd_eval(eval_flags, out_dir, out);
    } catch (const CommandError& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kParse;
    }
    return kUsage;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace pdfuse::cli
