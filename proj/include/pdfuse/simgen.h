#pragma once

#include "pdfuse/tabular.h"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pdfuse {

/// SplitMix64 (Steele, Lea & Flood 2014): 64-bit state, increment
/// 0x9E3779B97F4A7C15, output mix (x ^ x>>30) * 0xBF58476D1CE4E5B9,
/// (x ^ x>>27) * 0x94D049BB133111EB, x ^ x>>31.
/// Derived draws are specified here too so ports can match fixtures:
///   uniform()  = (next() >> 11) * 2^-53
///   below(n)   = rejection sampling on next() % n above 2^64 mod n
///   normal()   = Box-Muller cosine branch on (1 - uniform(), uniform())
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    std::uint64_t next() noexcept;
    double uniform() noexcept;
    std::uint64_t below(std::uint64_t n) noexcept;
    double normal() noexcept;

private:
    std::uint64_t state_;
};

/// Independent streams per purpose: state = mix(seed + purpose * 0x9E3779B97F4A7C15).
enum class RngStream : std::uint64_t { labels = 1, features = 2, corruption = 3, split = 4, excerpt = 5 };

SplitMix64 make_stream(std::uint64_t seed, RngStream purpose) noexcept;

/// Seeded Fisher-Yates permutation of [0, n).
std::vector<std::size_t> seeded_permutation(std::size_t n, SplitMix64& rng);

inline constexpr std::size_t kSourceCount = 3;
inline constexpr std::array<SourceKind, kSourceCount> kSourceOrder{SourceKind::operation, SourceKind::monitoring,
                                                                  SourceKind::environment};

/// Latent noise per source, in units of the closest prototype spacing.
inline constexpr double kDefaultNoise = 0.2;

struct ScenarioConfig {
    std::size_t n_observations = 1000;
    std::vector<std::string> hypotheses{"F1", "F2", "F3"};
    std::uint64_t seed = 42;
    double skew_severity = 1.0;  // standard deviation of log(x / base) in heavy-tailed columns
    double conflict_rate = 0.0;
    std::array<double, kSourceCount> source_noise{kDefaultNoise, kDefaultNoise, kDefaultNoise};
    Timestamp start = 1704067200;       // 2024-01-01T00:00:00Z
    std::int64_t span_seconds = 604800;  // observations spread over one week

    void validate() const;
    std::int64_t cadence_seconds() const noexcept;
};

/// Default class labels F1..Fk.
std::vector<std::string> default_hypotheses(std::size_t count);

/// Latent 2-D class prototypes: coordinate u_h = h - (k-1)/2 and v_h = u_{a*h mod k},
/// with a coprime to k maximizing the closest pair, scaled to unit minimum
/// spacing. Both coordinate marginals are symmetric under uniform classes.
std::vector<std::array<double, 2>> class_prototypes(std::size_t classes);

struct CorruptionPlan {
    static constexpr int kNone = -1;
    std::vector<int> source;          // corrupted source index per observation, or kNone
    std::vector<std::size_t> target;  // class the corrupted source imitates (true class otherwise)
    std::size_t flagged() const noexcept;
};

/// Flags exactly round(rate * n) observations; each gets one uniformly chosen
/// source that imitates a uniformly chosen wrong class.
CorruptionPlan corrupt_source(const std::vector<std::size_t>& labels, double conflict_rate, std::uint64_t seed,
                              std::size_t classes);

/// Physical column layout per source (two columns each).
struct ColumnSpec {
    AttributeMeta meta;
    double base;
    double scale;
    bool heavy_tailed;
};

const std::array<std::array<ColumnSpec, 2>, kSourceCount>& column_specs();

struct Scenario {
    ScenarioConfig config;
    std::vector<SampleTable> sources;  // operation, monitoring, environment
    std::vector<std::size_t> labels;
    CorruptionPlan corruption;
};

Scenario generate_scenario(const ScenarioConfig& config);

/// `timestamp,label,corrupted_source,imitated_label`.
std::string labels_csv(const Scenario& scenario);

/// Reads labels_csv output back into per-timestamp class indices.
std::vector<std::pair<Timestamp, std::size_t>> parse_labels_csv(std::string_view text,
                                                                const std::vector<std::string>& hypotheses);

}  // namespace pdfuse
