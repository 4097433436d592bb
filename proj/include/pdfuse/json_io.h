#pragma once

#include "pdfuse/eval.h"
#include "pdfuse/evidence.h"
#include "pdfuse/fusion.h"
#include "pdfuse/normalize.h"

#include <json.hpp>

#include <optional>
#include <string>

namespace pdfuse {

using Json = nlohmann::json;

/// Sorted keys, two-space indent, reals as %.17g, trailing newline.
std::string canonical_dump(const Json& value);

/// {"frame": [labels], "masses": {"A|B": value}}
Json mass_to_json(const MassFunction& m);
/// Throws ParseError on malformed input, InvalidMass on invalid masses.
MassFunction mass_from_json(const Json& j);

/// `watch` restricts the step list to one hypothesis.
Json fusion_report_to_json(const FusionReport& report, std::optional<std::size_t> watch = std::nullopt);

Json evidence_builder_to_json(const EvidenceBuilder& builder);
EvidenceBuilder evidence_builder_from_json(const Json& j);

/// Per-column normalization sidecar entry.
struct SidecarEntry {
    std::string column;
    BoxCoxParam param;
    double mean = 0.0;  // of the Box-Cox output, before Z-scoring
    double std = 0.0;
    double skew_before = 0.0;
    double skew_after = 0.0;
    bool degenerate = false;
};

Json sidecar_to_json(const std::vector<SidecarEntry>& entries);
/// Box-Cox params in the order of `columns`; DimensionMismatch when the
/// sidecar does not cover exactly those columns.
BoxCoxParams params_from_sidecar(const Json& j, const std::vector<std::string>& columns);

Json experiment_to_json(const ExperimentResult& result);

}  // namespace pdfuse
