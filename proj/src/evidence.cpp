#include "pdfuse/evidence.h"

#include "pdfuse/error.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace pdfuse {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kTotalConflict = 1e-12;

void check_in_frame(const Frame& frame, FocalSet a) {
    if (!a.subset_of(FocalSet::universe(frame.size()))) {
        throw Error(Errc::FrameMismatch, "focal set has bits outside a frame of size " + std::to_string(frame.size()));
    }
}

void check_same_frame(const MassFunction& a, const MassFunction& b) {
    if (!same_frame(a, b)) throw Error(Errc::FrameMismatch, "mass functions are defined over different frames");
}

}  // namespace

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty() || labels_.size() > kMaxSize) {
        throw Error(Errc::InvalidArgument, "frame must hold between 1 and 16 hypotheses");
    }
    std::set<std::string_view> seen;
    for (const auto& l : labels_) {
        if (l.empty() || l.find('|') != std::string::npos) {
            throw Error(Errc::InvalidArgument, "hypothesis labels must be nonempty and free of '|'");
        }
        if (!seen.insert(l).second) throw Error(Errc::InvalidArgument, "duplicate hypothesis label '" + l + "'");
    }
}

std::size_t Frame::index_of(std::string_view label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw Error(Errc::InvalidArgument, "unknown hypothesis '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

FramePtr make_frame(std::vector<std::string> labels) {
    return std::make_shared<const Frame>(std::move(labels));
}

std::size_t FocalSet::cardinality() const noexcept { return static_cast<std::size_t>(std::popcount(bits_)); }

std::string describe(const MassViolation& v) {
    switch (v.kind) {
        case MassViolationKind::EmptySetMass: return "empty set carries mass " + std::to_string(v.value);
        case MassViolationKind::NegativeMass: return "negative mass " + std::to_string(v.value);
        case MassViolationKind::NonFiniteMass: return "non-finite mass";
        case MassViolationKind::OutsideFrame: return "focal set outside the frame";
        case MassViolationKind::SumNotOne: return "masses sum to " + std::to_string(v.value);
    }
    return "unknown violation";
}

std::vector<MassViolation> validate_mass(const Frame& frame, const MassAssignment& assignment) {
    std::vector<MassViolation> out;
    const auto universe = FocalSet::universe(frame.size());
    double sum = 0.0;
    for (const auto& [set, value] : assignment) {
        if (!std::isfinite(value)) {
            out.push_back({MassViolationKind::NonFiniteMass, set, value});
            continue;
        }
        if (!set.subset_of(universe)) out.push_back({MassViolationKind::OutsideFrame, set, value});
        if (set.empty() && value != 0.0) out.push_back({MassViolationKind::EmptySetMass, set, value});
        if (value < 0.0) out.push_back({MassViolationKind::NegativeMass, set, value});
        sum += value;
    }
    if (std::isfinite(sum) && std::abs(sum - 1.0) > kSumTolerance) {
        out.push_back({MassViolationKind::SumNotOne, universe, sum});
    }
    return out;
}

MassFunction::MassFunction(FramePtr frame, const MassAssignment& assignment) : frame_(std::move(frame)) {
    if (!frame_) throw Error(Errc::InvalidArgument, "mass function needs a frame");
    const auto violations = validate_mass(*frame_, assignment);
    if (!violations.empty()) throw Error(Errc::InvalidMass, describe(violations.front()));
    double sum = 0.0;
    for (const auto& [set, value] : assignment) sum += value;
    for (const auto& [set, value] : assignment) {
        if (value != 0.0) masses_.emplace(set, value / sum);
    }
}

MassFunction MassFunction::vacuous(FramePtr frame) {
    const auto u = FocalSet::universe(frame->size());
    return MassFunction(std::move(frame), MassAssignment{{u, 1.0}});
}

double MassFunction::mass(FocalSet a) const noexcept {
    const auto it = masses_.find(a);
    return it == masses_.end() ? 0.0 : it->second;
}

std::vector<MassViolation> validate_mass(const MassFunction& m) { return validate_mass(m.frame(), m.masses()); }

bool same_frame(const MassFunction& a, const MassFunction& b) noexcept {
    return a.frame_ptr() == b.frame_ptr() || a.frame() == b.frame();
}

double belief(const MassFunction& m, FocalSet a) {
    check_in_frame(m.frame(), a);
    double bel = 0.0;
    for (const auto& [set, value] : m.masses())
        if (!set.empty() && set.subset_of(a)) bel += value;
    return bel;
}

BeliefInterval uncertainty_interval(const MassFunction& m, FocalSet a) {
    check_in_frame(m.frame(), a);
    BeliefInterval iv;
    for (const auto& [set, value] : m.masses()) {
        if (set.empty() || !set.intersects(a)) continue;
        if (set.subset_of(a)) {
            iv.bel += value;
        } else {
            iv.mu += value;
        }
    }
    // Accumulated apart so pl >= bel holds exactly.
    iv.pl = iv.bel + iv.mu;
    return iv;
}

double plausibility(const MassFunction& m, FocalSet a) { return uncertainty_interval(m, a).pl; }

double ConjunctiveProducts::agreement() const noexcept {
    double k = 0.0;
    for (const auto& t : intersecting) k += t.mass;
    return k;
}

double ConjunctiveProducts::conflict() const noexcept {
    double c = 0.0;
    for (const auto& t : conflicting) c += t.mass;
    return c;
}

MassAssignment ConjunctiveProducts::intersections() const {
    MassAssignment out;
    for (const auto& t : intersecting) out[t.first & t.second] += t.mass;
    return out;
}

ConjunctiveProducts conjunctive_products(const MassFunction& m1, const MassFunction& m2) {
    check_same_frame(m1, m2);
    ConjunctiveProducts out;
    for (const auto& [a, ma] : m1.masses()) {
        for (const auto& [b, mb] : m2.masses()) {
            const double product = ma * mb;
            if (product == 0.0) continue;
            auto& bucket = a.intersects(b) ? out.intersecting : out.conflicting;
            bucket.push_back(ProductTerm{a, b, product});
        }
    }
    return out;
}

MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2) {
    const auto products = conjunctive_products(m1, m2);
    const double k = products.agreement();
    if (k <= kTotalConflict) {
        throw Error(Errc::TotalConflict, "agreement K = " + std::to_string(k) + " leaves nothing to normalize");
    }
    auto combined = products.intersections();
    for (auto& [set, value] : combined) value /= k;
    return MassFunction(m1.frame_ptr(), combined);
}

MassFunction dempster_combine(std::span<const MassFunction> masses) {
    if (masses.size() < 2) throw Error(Errc::InvalidArgument, "combination needs at least two mass functions");
    MassFunction acc = dempster_combine(masses[0], masses[1]);
    for (std::size_t i = 2; i < masses.size(); ++i) acc = dempster_combine(acc, masses[i]);
    return acc;
}

double joint_conflict(std::span<const MassFunction> masses) {
    if (masses.empty()) return 0.0;
    MassAssignment acc = masses.front().masses();
    for (std::size_t i = 1; i < masses.size(); ++i) {
        check_same_frame(masses.front(), masses[i]);
        MassAssignment next;
        for (const auto& [a, ma] : acc)
            for (const auto& [b, mb] : masses[i].masses()) next[a & b] += ma * mb;
        acc = std::move(next);
    }
    double k = 0.0;
    for (const auto& [set, value] : acc)
        if (!set.empty()) k += value;
    return 1.0 - k;
}

std::vector<double> pignistic(const MassFunction& m) {
    std::vector<double> betp(m.frame().size(), 0.0);
    for (const auto& [set, value] : m.masses()) {
        const auto card = set.cardinality();
        if (card == 0) continue;
        const double share = value / static_cast<double>(card);
        for (std::size_t h = 0; h < betp.size(); ++h)
            if (set.contains(h)) betp[h] += share;
    }
    return betp;
}

std::string focal_set_name(const Frame& frame, FocalSet a) {
    check_in_frame(frame, a);
    std::vector<std::string_view> names;
    for (std::size_t i = 0; i < frame.size(); ++i)
        if (a.contains(i)) names.push_back(frame.label(i));
    std::sort(names.begin(), names.end());
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += '|';
        out += names[i];
    }
    return out;
}

FocalSet parse_focal_set(const Frame& frame, std::string_view name) {
    std::uint32_t bits = 0;
    if (name.empty()) return FocalSet{};
    std::size_t start = 0;
    while (true) {
        const auto pos = name.find('|', start);
        const auto part = name.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        bits |= std::uint32_t{1} << frame.index_of(part);
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return FocalSet{bits};
}

}  // namespace pdfuse
