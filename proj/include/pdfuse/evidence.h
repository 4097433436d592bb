#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdfuse {

/// Ordered hypothesis labels; position i is bit i of every FocalSet.
class Frame {
public:
    static constexpr std::size_t kMaxSize = 16;

    explicit Frame(std::vector<std::string> labels);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    /// Throws InvalidArgument for unknown labels.
    std::size_t index_of(std::string_view label) const;

    friend bool operator==(const Frame&, const Frame&) = default;

private:
    std::vector<std::string> labels_;
};

using FramePtr = std::shared_ptr<const Frame>;

FramePtr make_frame(std::vector<std::string> labels);

/// Subset of a frame as a bitmask.
class FocalSet {
public:
    constexpr FocalSet() = default;
    constexpr explicit FocalSet(std::uint32_t bits) : bits_(bits) {}

    static constexpr FocalSet empty_set() { return FocalSet{}; }
    static constexpr FocalSet singleton(std::size_t i) { return FocalSet{std::uint32_t{1} << i}; }
    static constexpr FocalSet universe(std::size_t frame_size) {
        return FocalSet{(std::uint32_t{1} << frame_size) - 1u};
    }

    constexpr std::uint32_t bits() const noexcept { return bits_; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr bool contains(std::size_t i) const noexcept { return (bits_ >> i) & 1u; }
    constexpr bool subset_of(FocalSet other) const noexcept { return (bits_ & ~other.bits_) == 0; }
    constexpr bool intersects(FocalSet other) const noexcept { return (bits_ & other.bits_) != 0; }
    std::size_t cardinality() const noexcept;

    constexpr FocalSet operator&(FocalSet o) const noexcept { return FocalSet{bits_ & o.bits_}; }
    constexpr FocalSet operator|(FocalSet o) const noexcept { return FocalSet{bits_ | o.bits_}; }
    constexpr FocalSet complement(std::size_t frame_size) const noexcept {
        return FocalSet{~bits_ & universe(frame_size).bits_};
    }

    friend constexpr auto operator<=>(FocalSet, FocalSet) = default;

private:
    std::uint32_t bits_ = 0;
};

/// Raw focal-set → mass map, possibly invalid; see validate_mass.
using MassAssignment = std::map<FocalSet, double>;

enum class MassViolationKind { EmptySetMass, NegativeMass, NonFiniteMass, OutsideFrame, SumNotOne };

struct MassViolation {
    MassViolationKind kind;
    FocalSet focal;
    double value;
};

std::string describe(const MassViolation& v);

/// Diagnostic check of the basic probability assignment axioms:
/// m(empty) = 0, m >= 0, sum of masses = 1 (within 1e-9).
std::vector<MassViolation> validate_mass(const Frame& frame, const MassAssignment& assignment);

/// Basic probability assignment over a frame. Always valid: zero entries are
/// dropped and a sum within 1e-9 of one is renormalized exactly; anything
/// else throws InvalidMass.
class MassFunction {
public:
    MassFunction(FramePtr frame, const MassAssignment& assignment);

    static MassFunction vacuous(FramePtr frame);

    const FramePtr& frame_ptr() const noexcept { return frame_; }
    const Frame& frame() const noexcept { return *frame_; }
    const MassAssignment& masses() const noexcept { return masses_; }
    double mass(FocalSet a) const noexcept;
    FocalSet universe() const noexcept { return FocalSet::universe(frame_->size()); }

private:
    FramePtr frame_;
    MassAssignment masses_;
};

std::vector<MassViolation> validate_mass(const MassFunction& m);

bool same_frame(const MassFunction& a, const MassFunction& b) noexcept;

double belief(const MassFunction& m, FocalSet a);
double plausibility(const MassFunction& m, FocalSet a);

struct BeliefInterval {
    double bel = 0.0;
    double pl = 0.0;
    double mu = 0.0;  // pl - bel
};

BeliefInterval uncertainty_interval(const MassFunction& m, FocalSet a);

struct ProductTerm {
    FocalSet first;
    FocalSet second;
    double mass;
};

/// All pairwise products of focal sets of two masses.
struct ConjunctiveProducts {
    std::vector<ProductTerm> intersecting;
    std::vector<ProductTerm> conflicting;

    /// Total product mass on nonempty intersections.
    double agreement() const noexcept;
    /// Total product mass on empty intersections.
    double conflict() const noexcept;
    /// Unnormalized conjunctive mass on nonempty sets.
    MassAssignment intersections() const;
};

ConjunctiveProducts conjunctive_products(const MassFunction& m1, const MassFunction& m2);

/// Dempster's rule for a pair; TotalConflict when agreement <= 1e-12.
MassFunction dempster_combine(const MassFunction& m1, const MassFunction& m2);
/// Left fold of the pairwise rule over two or more masses.
MassFunction dempster_combine(std::span<const MassFunction> masses);

/// Classical n-ary conflict 1 - K, K being the product mass on nonempty
/// joint intersections of all inputs.
double joint_conflict(std::span<const MassFunction> masses);

/// Pignistic transform: BetP(h) = sum over A containing h of m(A) / |A|.
std::vector<double> pignistic(const MassFunction& m);

/// Focal set as `|`-joined labels in lexicographic order; "" for the empty set.
std::string focal_set_name(const Frame& frame, FocalSet a);
FocalSet parse_focal_set(const Frame& frame, std::string_view name);

}  // namespace pdfuse
