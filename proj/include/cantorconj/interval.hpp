#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cantorconj {

// Closed segment [lo, hi] or, when used as a gap, the open interval (lo, hi).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] constexpr double length() const noexcept { return hi - lo; }
    [[nodiscard]] constexpr double midpoint() const noexcept { return lo + 0.5 * (hi - lo); }
    [[nodiscard]] constexpr bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    [[nodiscard]] constexpr bool contains_open(double x) const noexcept { return lo < x && x < hi; }
    [[nodiscard]] constexpr bool contains(const Interval& o) const noexcept {
        return lo <= o.lo && o.hi <= hi;
    }

    friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

// Position of a segment in a binary refinement: level n, index j in [1, 2^n],
// counted left to right. The binary word of (j - 1) spelled with n digits is
// the itinerary (0 = left child, 1 = right child) from the root.
struct Address {
    int level = 0;
    std::uint64_t index = 1;

    [[nodiscard]] constexpr Address parent() const noexcept {
        return {level - 1, (index + 1) / 2};
    }
    [[nodiscard]] constexpr Address left_child() const noexcept { return {level + 1, 2 * index - 1}; }
    [[nodiscard]] constexpr Address right_child() const noexcept { return {level + 1, 2 * index}; }
    [[nodiscard]] constexpr bool valid() const noexcept {
        return level >= 0 && level < 64 && index >= 1 && index <= (std::uint64_t{1} << level);
    }

    friend constexpr bool operator==(const Address&, const Address&) = default;
};

enum class SystemKind { model, target };

// Nested closed sets C_0 ⊇ C_1 ⊇ ... ⊇ C_N. Level n holds 2^n sorted disjoint
// segments; level n >= 1 holds the 2^(n-1) open gaps removed from level n - 1,
// gap j being the hole between segments 2j - 1 and 2j.
//
// Children always inherit their parent's outer endpoints bit-for-bit, so the
// boundary points of every level reappear unchanged at all deeper levels.
class IntervalSystem {
public:
    IntervalSystem() = default;
    explicit IntervalSystem(Interval hull);

    // Appends level depth() + 1. Throws DomainError if the segments do not
    // refine the current deepest level (count, order, nesting, inheritance).
    void push_level(std::vector<Interval> segments);

    [[nodiscard]] int depth() const noexcept { return static_cast<int>(levels_.size()) - 1; }
    [[nodiscard]] Interval hull() const { return levels_.front().front(); }

    [[nodiscard]] std::span<const Interval> level(int n) const;
    [[nodiscard]] std::span<const Interval> gaps(int n) const;
    [[nodiscard]] Interval segment(Address a) const;
    [[nodiscard]] Interval gap(Address parent) const; // gap removed from the segment at `parent`

    // Address of the level-n segment containing x, if any.
    [[nodiscard]] std::optional<Address> locate(double x, int n) const;

    [[nodiscard]] double max_segment_length(int n) const;
    [[nodiscard]] double min_segment_length(int n) const;

    // All segment endpoints of level n in increasing order (2^(n+1) values).
    [[nodiscard]] std::vector<double> endpoints(int n) const;

    friend bool operator==(const IntervalSystem&, const IntervalSystem&) = default;

private:
    void check_level(int n) const;

    std::vector<std::vector<Interval>> levels_;
    std::vector<std::vector<Interval>> gaps_;
};

} // namespace cantorconj
