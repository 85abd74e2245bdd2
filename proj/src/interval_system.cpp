#include "cantorconj/interval.hpp"

#include "cantorconj/errors.hpp"

#include <limits>
#include <string>

namespace cantorconj {

IntervalSystem::IntervalSystem(Interval hull) {
    if (!(hull.lo < hull.hi)) {
        throw DomainError("hull must satisfy lo < hi");
    }
    levels_.push_back({hull});
    gaps_.emplace_back();
}

void IntervalSystem::push_level(std::vector<Interval> segments) {
    if (levels_.empty()) {
        throw DomainError("push_level on an empty system");
    }
    const auto& parents = levels_.back();
    const int n = depth() + 1;
    if (n > 62 || segments.size() != 2 * parents.size()) {
        throw DomainError("level " + std::to_string(n) + " must hold exactly " +
                          std::to_string(2 * parents.size()) + " segments");
    }
    std::vector<Interval> gaps;
    gaps.reserve(parents.size());
    for (std::size_t j = 0; j < parents.size(); ++j) {
        const Interval& left = segments[2 * j];
        const Interval& right = segments[2 * j + 1];
        const Interval& parent = parents[j];
        const std::string where = "level " + std::to_string(n) + ", parent " + std::to_string(j + 1);
        if (!(left.lo < left.hi) || !(right.lo < right.hi)) {
            throw DomainError(where + ": segment of non-positive length");
        }
        if (left.lo != parent.lo || right.hi != parent.hi) {
            throw DomainError(where + ": children must inherit the parent's outer endpoints");
        }
        if (!(left.hi < right.lo)) {
            throw DomainError(where + ": children overlap or touch");
        }
        gaps.push_back({left.hi, right.lo});
    }
    levels_.push_back(std::move(segments));
    gaps_.push_back(std::move(gaps));
}

void IntervalSystem::check_level(int n) const {
    if (n < 0 || n > depth()) {
        throw DomainError("level " + std::to_string(n) + " outside [0, " + std::to_string(depth()) + "]");
    }
}

std::span<const Interval> IntervalSystem::level(int n) const {
    check_level(n);
    return levels_[static_cast<std::size_t>(n)];
}

std::span<const Interval> IntervalSystem::gaps(int n) const {
    check_level(n);
    return gaps_[static_cast<std::size_t>(n)];
}

Interval IntervalSystem::segment(Address a) const {
    check_level(a.level);
    if (!a.valid()) {
        throw DomainError("invalid address");
    }
    return levels_[static_cast<std::size_t>(a.level)][a.index - 1];
}

Interval IntervalSystem::gap(Address parent) const {
    check_level(parent.level + 1);
    if (!parent.valid()) {
        throw DomainError("invalid address");
    }
    return gaps_[static_cast<std::size_t>(parent.level + 1)][parent.index - 1];
}

std::optional<Address> IntervalSystem::locate(double x, int n) const {
    const auto segs = level(n);
    // First segment whose right end is >= x.
    auto it = std::lower_bound(segs.begin(), segs.end(), x,
                               [](const Interval& s, double v) { return s.hi < v; });
    if (it == segs.end() || !it->contains(x)) {
        return std::nullopt;
    }
    return Address{n, static_cast<std::uint64_t>(it - segs.begin()) + 1};
}

double IntervalSystem::max_segment_length(int n) const {
    double best = 0.0;
    for (const auto& s : level(n)) {
        best = std::max(best, s.length());
    }
    return best;
}

double IntervalSystem::min_segment_length(int n) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : level(n)) {
        best = std::min(best, s.length());
    }
    return best;
}

std::vector<double> IntervalSystem::endpoints(int n) const {
    const auto segs = level(n);
    std::vector<double> out;
    out.reserve(2 * segs.size());
    for (const auto& s : segs) {
        out.push_back(s.lo);
        out.push_back(s.hi);
    }
    return out;
}

} // namespace cantorconj
