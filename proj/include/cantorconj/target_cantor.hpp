#pragma once

#include "cantorconj/interval.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cantorconj {

// Explicit binary tree of removed gaps. gaps[k] holds the 2^k gaps removed
// at refinement step k + 1, ordered left to right; gap j of a step lies
// strictly inside segment j of the previous level.
struct GapTree {
    Interval hull;
    std::vector<std::vector<Interval>> gaps;

    [[nodiscard]] int depth() const noexcept { return static_cast<int>(gaps.size()); }

    friend bool operator==(const GapTree&, const GapTree&) = default;
};

// Throws SpecError naming the first offending level/gap.
void validate_gap_tree(const GapTree& tree);

// Constructive description of a Cantor set Λ* ⊂ [a, b] with a, b ∈ Λ*.
// Every family is given by its defining ("natural") gap tree: a segment is
// split by removing one open gap, recursively. Endpoint arithmetic is carried
// in long double and rounded once, so nodes reached along different paths
// round to identical doubles.
class CantorSpec {
public:
    // Remove the central proportion alpha of every segment.
    struct MiddleAlpha {
        long double alpha;
    };
    // Attractor of x -> r1 x and x -> r2 x + (1 - r2), rescaled to the hull.
    struct AffineIFS2 {
        long double r1;
        long double r2;
    };
    // Remove the central proportion g0 * decay^n at step n.
    struct FatCantor {
        long double g0;
        long double decay;
    };
    // File-backed tree; below its last stored level segments are completed by
    // removing their middle third.
    struct ExplicitGapTree {
        std::shared_ptr<const GapTree> tree;
    };
    using Family = std::variant<MiddleAlpha, AffineIFS2, FatCantor, ExplicitGapTree>;

    // Node of the natural tree.
    struct Node {
        long double lo;
        long double hi;
        int level;
        std::uint64_t index; // 1-based, wraps harmlessly past level 63

        [[nodiscard]] Interval rounded() const noexcept {
            return {static_cast<double>(lo), static_cast<double>(hi)};
        }
    };
    struct NodeGap {
        long double lo;
        long double hi;

        [[nodiscard]] Interval rounded() const noexcept {
            return {static_cast<double>(lo), static_cast<double>(hi)};
        }
    };

    static CantorSpec middle_thirds(Interval hull = {0.0, 1.0});
    static CantorSpec middle_alpha(long double alpha, Interval hull = {0.0, 1.0});
    static CantorSpec affine_ifs2(long double r1, long double r2, Interval hull = {0.0, 1.0});
    static CantorSpec fat_cantor(long double g0, long double decay, Interval hull = {0.0, 1.0});
    static CantorSpec explicit_tree(GapTree tree);

    [[nodiscard]] const Family& family() const noexcept { return family_; }
    [[nodiscard]] Interval hull() const noexcept { return hull_; }

    // Canonical command-line spelling, e.g. "middle-alpha:0.5".
    [[nodiscard]] std::string describe() const;

    [[nodiscard]] Node root() const noexcept;
    [[nodiscard]] NodeGap principal_gap(const Node& node) const;
    [[nodiscard]] std::pair<Node, Node> children(const Node& node) const;

    // Supremum over the natural tree of child length / parent length.
    [[nodiscard]] double max_child_ratio() const;

private:
    CantorSpec(Family family, Interval hull) : family_(std::move(family)), hull_(hull) {}

    Family family_;
    Interval hull_;
};

enum class Membership { in, out };

// Descends `depth` levels of the natural tree; endpoints count as members.
// DomainError for depth < 1.
Membership membership(const CantorSpec& spec, double x, int depth);

// Gap (e, f) of Λ* inside the segment [c, d] (c, d ∈ Λ*) that meets the open
// middle third (c + L/3, d - L/3): the shallowest natural gap with that
// property, which is unique. Both pieces [c, e], [f, d] are shorter than
// 2L/3. SpecError if none is found within 64 levels; DomainError if [c, d]
// is not a segment with member endpoints.
Interval find_gap_in_middle_third(const CantorSpec& spec, Interval segment);

// Widens a gap (e, f) with (e, f) ∩ Λ* = ∅ to the maximal one:
// e' = sup{x ∈ Λ* : x <= e}, f' = inf{x ∈ Λ* : x >= f}. The input may
// overshoot the true gap boundaries by at most `tol`. DomainError for
// tol <= 0 or when (e, f) meets Λ*.
Interval tighten_gap(const CantorSpec& spec, Interval gap, double tol);

// Default tolerance for tighten_gap: 1e-12 (b - a).
double default_tighten_tol(const CantorSpec& spec);

enum class BuildMode { strict, natural };

const char* to_string(BuildMode mode) noexcept;

struct TargetSystem {
    CantorSpec spec;
    BuildMode mode = BuildMode::strict;
    IntervalSystem system;
};

// C*_0 = hull; each level-n segment is split at find_gap_in_middle_third
// (strict: lengths <= (2/3)^n (b - a)) or at its natural gap (natural).
// RegimeError for natural mode when the natural tree does not contract.
TargetSystem build_target_system(const CantorSpec& spec, int depth, BuildMode mode);

} // namespace cantorconj
