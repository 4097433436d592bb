#include "pdfuse/json_io.h"

#include "pdfuse/error.h"
#include "pdfuse/tabular.h"

#include <cmath>
#include <set>

namespace pdfuse {

namespace {

void dump(const Json& v, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (v.type()) {
        case Json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += inner + Json(it.key()).dump() + ": ";
                dump(it.value(), out, indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += inner;
                dump(v[i], out, indent + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double d = v.get<double>();
            out += std::isfinite(d) ? format_real(d) : "null";
            return;
        }
        default:
            out += v.dump();
    }
}

double require_number(const Json& j, const char* what) {
    if (!j.is_number()) throw Error(Errc::ParseError, std::string(what) + " must be a number");
    return j.get<double>();
}

}  // namespace

std::string canonical_dump(const Json& value) {
    std::string out;
    dump(value, out, 0);
    out += '\n';
    return out;
}

Json mass_to_json(const MassFunction& m) {
    Json masses = Json::object();
    for (const auto& [set, value] : m.masses()) masses[focal_set_name(m.frame(), set)] = value;
    return Json{{"frame", m.frame().labels()}, {"masses", masses}};
}

MassFunction mass_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("frame") || !j.contains("masses")) {
        throw Error(Errc::ParseError, "mass JSON needs 'frame' and 'masses'");
    }
    if (!j["frame"].is_array() || !j["masses"].is_object()) {
        throw Error(Errc::ParseError, "'frame' must be an array and 'masses' an object");
    }
    std::vector<std::string> labels;
    for (const auto& l : j["frame"]) {
        if (!l.is_string()) throw Error(Errc::ParseError, "frame labels must be strings");
        labels.push_back(l.get<std::string>());
    }
    auto frame = make_frame(std::move(labels));
    MassAssignment a;
    for (auto it = j["masses"].begin(); it != j["masses"].end(); ++it) {
        FocalSet set;
        try {
            set = parse_focal_set(*frame, it.key());
        } catch (const Error& e) {
            throw Error(Errc::ParseError, e.what());
        }
        a[set] += require_number(it.value(), "mass value");
    }
    return MassFunction(frame, a);
}

Json fusion_report_to_json(const FusionReport& report, std::optional<std::size_t> watch) {
    const auto& frame = report.combined.frame();
    Json weights = Json::object();
    for (std::size_t h = 0; h < report.reliability_weights.size(); ++h)
        weights[frame.label(h)] = report.reliability_weights[h];
    Json steps = Json::array();
    for (const auto& s : report.step_intervals) {
        if (watch && s.hypothesis != *watch) continue;
        steps.push_back(Json{{"step", s.step},
                             {"hypothesis", frame.label(s.hypothesis)},
                             {"bel", s.interval.bel},
                             {"pl", s.interval.pl},
                             {"mu", s.interval.mu}});
    }
    return Json{{"method", std::string(to_string(report.method))},
                {"conflict_total", report.conflict_total},
                {"retained_components", report.retained_components},
                {"weights", weights},
                {"steps", steps},
                {"combined", mass_to_json(report.combined)}};
}

Json evidence_builder_to_json(const EvidenceBuilder& builder) {
    Json sources = Json::array();
    for (const auto& per_source : builder.prototypes) {
        Json protos = Json::object();
        for (std::size_t h = 0; h < per_source.size(); ++h) {
            protos[builder.frame->label(h)] = per_source[h].empty() ? Json(nullptr) : Json(per_source[h]);
        }
        sources.push_back(protos);
    }
    return Json{{"frame", builder.frame->labels()},
                {"temperature", builder.temperature},
                {"ignorance_floor", builder.ignorance_floor},
                {"prototypes", sources}};
}

EvidenceBuilder evidence_builder_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("frame") || !j.contains("prototypes")) {
        throw Error(Errc::ParseError, "prototype JSON needs 'frame' and 'prototypes'");
    }
    EvidenceBuilder b;
    try {
        b.frame = make_frame(j.at("frame").get<std::vector<std::string>>());
        b.temperature = j.value("temperature", 1.0);
        b.ignorance_floor = j.value("ignorance_floor", 0.1);
        for (const auto& src : j.at("prototypes")) {
            std::vector<std::vector<double>> per_source(b.frame->size());
            for (std::size_t h = 0; h < b.frame->size(); ++h) {
                const auto& v = src.at(b.frame->label(h));
                if (!v.is_null()) per_source[h] = v.get<std::vector<double>>();
            }
            b.prototypes.push_back(std::move(per_source));
        }
    } catch (const Json::exception& e) {
        throw Error(Errc::ParseError, e.what());
    }
    b.validate();
    return b;
}

Json sidecar_to_json(const std::vector<SidecarEntry>& entries) {
    Json out = Json::object();
    for (const auto& e : entries) {
        out[e.column] = Json{{"lambda", e.param.lambda}, {"shift", e.param.shift},   {"mean", e.mean},
                             {"std", e.std},             {"skew_before", e.skew_before}, {"skew_after", e.skew_after},
                             {"degenerate", e.degenerate}};
    }
    return out;
}

BoxCoxParams params_from_sidecar(const Json& j, const std::vector<std::string>& columns) {
    if (!j.is_object()) throw Error(Errc::ParseError, "sidecar must be a JSON object");
    if (j.size() != columns.size()) {
        throw Error(Errc::DimensionMismatch, "sidecar covers " + std::to_string(j.size()) + " columns, input has " +
                                                 std::to_string(columns.size()));
    }
    BoxCoxParams out;
    for (const auto& c : columns) {
        if (!j.contains(c)) throw Error(Errc::DimensionMismatch, "sidecar has no entry for column '" + c + "'");
        const auto& e = j[c];
        if (!e.is_object() || !e.contains("lambda") || !e.contains("shift")) {
            throw Error(Errc::ParseError, "sidecar entry '" + c + "' needs lambda and shift");
        }
        out.push_back(BoxCoxParam{require_number(e["lambda"], "lambda"), require_number(e["shift"], "shift")});
    }
    return out;
}

Json experiment_to_json(const ExperimentResult& r) {
    const auto& frame = *r.builder.frame;
    Json methods = Json::object();
    for (const auto& m : r.methods) {
        Json trace = Json::array();
        for (const auto& p : m.mean_trace)
            trace.push_back(Json{{"step", p.step}, {"bel", p.interval.bel}, {"pl", p.interval.pl}, {"mu", p.interval.mu}});
        methods[std::string(to_string(m.method))] = Json{{"accuracy", m.accuracy},
                                                         {"correct", m.correct},
                                                         {"total", m.total},
                                                         {"total_conflict_failures", m.total_conflict_failures},
                                                         {"mean_interval_trace", trace}};
    }
    Json series = Json::array();
    for (const auto& s : r.series)
        series.push_back(Json{{"size", s.size}, {"method", std::string(to_string(s.method))}, {"accuracy", s.accuracy}});

    Json columns = Json::array();
    for (const auto& c : r.normalization) {
        auto stats = [](const ColumnStats& s) {
            return Json{{"mean", s.mean}, {"std", s.sample_std}, {"skewness", s.skewness}, {"kurtosis", s.kurtosis}};
        };
        columns.push_back(Json{{"source", std::string(to_string(c.source))},
                               {"column", c.name},
                               {"lambda", c.param.lambda},
                               {"shift", c.param.shift},
                               {"before", stats(c.before)},
                               {"after", stats(c.after)},
                               {"degenerate", c.degenerate}});
    }
    Json excerpt_rows = Json::array();
    for (std::size_t i = 0; i < r.excerpt.rows(); ++i) {
        Json row = Json::object();
        row["timestamp"] = format_timestamp(r.excerpt_timestamps[i]);
        for (std::size_t c = 0; c < r.excerpt.cols(); ++c) row[r.excerpt_columns[c]] = r.excerpt(i, c);
        excerpt_rows.push_back(row);
    }

    return Json{{"frame", frame.labels()},
                {"train_rows", r.train_rows},
                {"test_rows", r.test_rows},
                {"mean_conflict", r.mean_conflict},
                {"methods", methods},
                {"accuracy_series", series},
                {"normalization", Json{{"columns", columns}, {"excerpt", excerpt_rows}}}};
}

}  // namespace pdfuse
