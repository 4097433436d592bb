#include "pdfuse/simgen.h"

#include "pdfuse/error.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string_view>

namespace pdfuse {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::uint64_t SplitMix64::next() noexcept {
    state_ += kGolden;
    return mix64(state_);
}

double SplitMix64::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t SplitMix64::below(std::uint64_t n) noexcept {
    if (n <= 1) return 0;
    // Reject the low 2^64 mod n values so every residue is equally likely.
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % n;
    }
}

double SplitMix64::normal() noexcept {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SplitMix64 make_stream(std::uint64_t seed, RngStream purpose) noexcept {
    return SplitMix64(mix64(seed + static_cast<std::uint64_t>(purpose) * kGolden));
}

std::vector<std::size_t> seeded_permutation(std::size_t n, SplitMix64& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

void ScenarioConfig::validate() const {
    if (n_observations < 10) throw Error(Errc::InvalidConfig, "n_observations must be >= 10");
    if (hypotheses.size() < 2 || hypotheses.size() > 8) throw Error(Errc::InvalidConfig, "need 2 to 8 hypotheses");
    auto sorted = hypotheses;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw Error(Errc::InvalidConfig, "hypothesis labels must be unique");
    }
    for (const auto& h : hypotheses)
        if (h.empty() || h.find_first_of("|,\n\r") != std::string::npos) {
            throw Error(Errc::InvalidConfig, "hypothesis labels must be nonempty without '|' or ','");
        }
    if (!(skew_severity >= 0.0) || !std::isfinite(skew_severity)) {
        throw Error(Errc::InvalidConfig, "skew_severity must be >= 0");
    }
    if (!(conflict_rate >= 0.0 && conflict_rate <= 1.0)) throw Error(Errc::InvalidConfig, "conflict_rate must lie in [0, 1]");
    for (double s : source_noise)
        if (!(s >= 0.0) || !std::isfinite(s)) throw Error(Errc::InvalidConfig, "source_noise must be >= 0");
    if (span_seconds < 1) throw Error(Errc::InvalidConfig, "span_seconds must be positive");
}

std::int64_t ScenarioConfig::cadence_seconds() const noexcept {
    return std::max<std::int64_t>(1, span_seconds / static_cast<std::int64_t>(std::max<std::size_t>(1, n_observations)));
}

std::vector<std::string> default_hypotheses(std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back("F" + std::to_string(i + 1));
    return out;
}

std::vector<std::array<double, 2>> class_prototypes(std::size_t classes) {
    if (classes < 1) throw Error(Errc::InvalidArgument, "need at least one class");
    const double centre = (static_cast<double>(classes) - 1.0) / 2.0;
    auto build = [&](std::size_t a) {
        std::vector<std::array<double, 2>> pts(classes);
        for (std::size_t h = 0; h < classes; ++h) {
            pts[h] = {static_cast<double>(h) - centre, static_cast<double>((a * h) % classes) - centre};
        }
        return pts;
    };
    auto min_distance = [](const std::vector<std::array<double, 2>>& pts) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                best = std::min(best, std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]));
        return best;
    };

    std::size_t best_a = 1;
    double best_d = classes > 1 ? min_distance(build(1)) : 1.0;
    for (std::size_t a = 2; a < classes; ++a) {
        if (std::gcd(a, classes) != 1) continue;
        const double d = min_distance(build(a));
        if (d > best_d) {
            best_d = d;
            best_a = a;
        }
    }
    auto pts = build(best_a);
    if (classes > 1)
        for (auto& p : pts) {
            p[0] /= best_d;
            p[1] /= best_d;
        }
    return pts;
}

std::size_t CorruptionPlan::flagged() const noexcept {
    return static_cast<std::size_t>(std::count_if(source.begin(), source.end(), [](int s) { return s != kNone; }));
}

CorruptionPlan corrupt_source(const std::vector<std::size_t>& labels, double conflict_rate, std::uint64_t seed,
                              std::size_t classes) {
    if (!(conflict_rate >= 0.0 && conflict_rate <= 1.0)) throw Error(Errc::InvalidConfig, "conflict_rate must lie in [0, 1]");
    const std::size_t n = labels.size();
    CorruptionPlan plan{std::vector<int>(n, CorruptionPlan::kNone), labels};
    const auto count = static_cast<std::size_t>(std::llround(conflict_rate * static_cast<double>(n)));
    if (count == 0 || classes < 2) return plan;

    auto rng = make_stream(seed, RngStream::corruption);
    auto order = seeded_permutation(n, rng);
    std::vector<bool> flagged(n, false);
    for (std::size_t i = 0; i < count; ++i) flagged[order[i]] = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (!flagged[i]) continue;
        plan.source[i] = static_cast<int>(rng.below(kSourceCount));
        // Uniform over the classes other than the true one.
        auto wrong = static_cast<std::size_t>(rng.below(classes - 1));
        if (wrong >= labels[i]) ++wrong;
        plan.target[i] = wrong;
    }
    return plan;
}

const std::array<std::array<ColumnSpec, 2>, kSourceCount>& column_specs() {
    static const std::array<std::array<ColumnSpec, 2>, kSourceCount> specs{{
        {{{{SourceKind::operation, "Line voltage", "kV"}, 10.5, 0.15, false},
          {{SourceKind::operation, "Line current", "A"}, 120.0, 18.0, true}}},
        {{{{SourceKind::monitoring, "Electric energy", "kWh"}, 850.0, 90.0, true},
          {{SourceKind::monitoring, "Power factor", ""}, 0.92, 0.02, false}}},
        {{{{SourceKind::environment, "Temperature", "degC"}, 18.0, 4.0, false},
          {{SourceKind::environment, "Wind speed", "m/s"}, 4.5, 0.8, true}}},
    }};
    return specs;
}

Scenario generate_scenario(const ScenarioConfig& config) {
    config.validate();
    const std::size_t n = config.n_observations;
    const std::size_t k = config.hypotheses.size();

    auto label_rng = make_stream(config.seed, RngStream::labels);
    std::vector<std::size_t> labels(n);
    for (auto& l : labels) l = static_cast<std::size_t>(label_rng.below(k));

    auto plan = corrupt_source(labels, config.conflict_rate, config.seed, k);
    const auto protos = class_prototypes(k);
    const auto& specs = column_specs();

    std::vector<Timestamp> ts(n);
    for (std::size_t i = 0; i < n; ++i) ts[i] = config.start + static_cast<Timestamp>(i) * config.cadence_seconds();

    std::array<Matrix, kSourceCount> values;
    for (auto& v : values) v = Matrix(n, 2);
    // Population spread of each prototype coordinate under uniform classes.
    std::array<double, 2> proto_var{0.0, 0.0};
    for (std::size_t d = 0; d < 2; ++d) {
        double mean = 0.0;
        for (const auto& p : protos) mean += p[d];
        mean /= static_cast<double>(k);
        for (const auto& p : protos) proto_var[d] += (p[d] - mean) * (p[d] - mean);
        proto_var[d] /= static_cast<double>(k);
    }

    auto feature_rng = make_stream(config.seed, RngStream::features);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < kSourceCount; ++s) {
            const bool corrupted = plan.source[i] == static_cast<int>(s);
            const auto& proto = protos[corrupted ? plan.target[i] : labels[i]];
            for (std::size_t d = 0; d < 2; ++d) {
                const double z = proto[d] + config.source_noise[s] * feature_rng.normal();
                const auto& spec = specs[s][d];
                if (spec.heavy_tailed && config.skew_severity > 0.0) {
                    // log(x / base) has standard deviation skew_severity
                    const double sd = std::sqrt(proto_var[d] + config.source_noise[s] * config.source_noise[s]);
                    values[s](i, d) = spec.base * std::exp(config.skew_severity * z / sd);
                } else {
                    values[s](i, d) = spec.base + spec.scale * z;
                }
            }
        }
    }

    Scenario out{config, {}, std::move(labels), std::move(plan)};
    for (std::size_t s = 0; s < kSourceCount; ++s) {
        out.sources.emplace_back(ts, std::move(values[s]),
                                 std::vector<AttributeMeta>{specs[s][0].meta, specs[s][1].meta});
    }
    return out;
}

std::string labels_csv(const Scenario& scenario) {
    std::string out = "timestamp,label,corrupted_source,imitated_label\n";
    const auto& ts = scenario.sources.front().timestamps();
    for (std::size_t i = 0; i < scenario.labels.size(); ++i) {
        out += format_timestamp(ts[i]);
        out += ',';
        out += scenario.config.hypotheses[scenario.labels[i]];
        out += ',';
        const int src = scenario.corruption.source[i];
        if (src != CorruptionPlan::kNone) {
            out += to_string(kSourceOrder[static_cast<std::size_t>(src)]);
            out += ',';
            out += scenario.config.hypotheses[scenario.corruption.target[i]];
        } else {
            out += ',';
        }
        out += '\n';
    }
    return out;
}

std::vector<std::pair<Timestamp, std::size_t>> parse_labels_csv(std::string_view text,
                                                                const std::vector<std::string>& hypotheses) {
    std::vector<std::pair<Timestamp, std::size_t>> out;
    bool header = true;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() < 2) throw Error(Errc::ParseError, "labels row needs timestamp and label");
        const auto t = parse_timestamp(fields[0]);
        if (!t) throw Error(Errc::ParseError, "bad timestamp in labels file");
        const auto it = std::find(hypotheses.begin(), hypotheses.end(), fields[1]);
        if (it == hypotheses.end()) {
            throw Error(Errc::ParseError, "unknown label '" + std::string(fields[1]) + "' in labels file");
        }
        out.emplace_back(*t, static_cast<std::size_t>(it - hypotheses.begin()));
    }
    return out;
}

}  // namespace pdfuse
