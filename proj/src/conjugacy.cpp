#include "cantorconj/conjugacy.hpp"

#include "cantorconj/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace cantorconj {

namespace {

// Linear interpolation on piece [i, i + 1] of (from, to), clamped so that
// rounding never carries the result past the next knot.
double interpolate(std::span<const double> from, std::span<const double> to, std::size_t i, double v) {
    const double slope = (to[i + 1] - to[i]) / (from[i + 1] - from[i]);
    return std::min(to[i] + (v - from[i]) * slope, to[i + 1]);
}

double piecewise(std::span<const double> from, std::span<const double> to, double v) {
    if (std::isnan(v)) {
        return v;
    }
    if (v < from.front()) {
        return v + (to.front() - from.front());
    }
    if (v > from.back()) {
        return v + (to.back() - from.back());
    }
    // Last knot <= v.
    const auto it = std::upper_bound(from.begin(), from.end(), v) - 1;
    const auto i = static_cast<std::size_t>(it - from.begin());
    if (*it == v) {
        return to[i];
    }
    return interpolate(from, to, i, v);
}

} // namespace

MonotonePLMap::MonotonePLMap(std::vector<double> xs, std::vector<double> ys, double err_bound)
    : xs_(std::move(xs)), ys_(std::move(ys)), err_bound_(err_bound) {
    if (xs_.size() != ys_.size() || xs_.size() < 2) {
        throw DomainError("MonotonePLMap: need at least two knots with matching coordinates");
    }
    min_spacing_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < xs_.size(); ++i) {
        if (!(xs_[i - 1] < xs_[i]) || !(ys_[i - 1] < ys_[i])) {
            throw DomainError("MonotonePLMap: knots must be strictly increasing in x and y (knot " +
                              std::to_string(i) + ")");
        }
        min_spacing_ = std::min(min_spacing_, xs_[i] - xs_[i - 1]);
    }
}

double MonotonePLMap::operator()(double x) const noexcept { return piecewise(xs_, ys_, x); }

double MonotonePLMap::inverse(double y) const noexcept { return piecewise(ys_, xs_, y); }

std::optional<std::size_t> MonotonePLMap::knot_index(double x) const noexcept {
    const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.end() || *it != x) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - xs_.begin());
}

MonotonePLMap build_phi(const IntervalSystem& model, const IntervalSystem& target, int depth) {
    if (depth < 0 || model.depth() < depth || target.depth() < depth) {
        std::ostringstream msg;
        msg << "build_phi: depth " << depth << " exceeds model depth " << model.depth()
            << " or target depth " << target.depth();
        throw DomainError(msg.str());
    }
    // Level-N endpoints contain every endpoint of every shallower level, and
    // the address order is the left-to-right order on both sides.
    return MonotonePLMap(model.endpoints(depth), target.endpoints(depth),
                         target.max_segment_length(depth));
}

MonotonePLMap build_phi(const IntervalSystem& model, const TargetSystem& target, int depth) {
    return build_phi(model, target.system, depth);
}

double eval_fstar(const MonotonePLMap& map, const QuadraticParams& params, double y) noexcept {
    return map(eval_map(params, map.inverse(y)));
}

SegmentCheckReport segment_mapping_check(const MonotonePLMap& map, const IntervalSystem& model,
                                         const IntervalSystem& target, int depth, int samples,
                                         std::uint64_t seed) {
    if (samples < 0 || depth < 0 || depth > std::min(model.depth(), target.depth())) {
        throw DomainError("segment_mapping_check: bad depth or sample count");
    }
    SegmentCheckReport report;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto check = [&](double x, Interval expected, const char* what, int n, std::size_t j) {
        ++report.checked;
        const double y = map(x);
        if (!expected.contains(y)) {
            ++report.violations;
            if (report.first_violations.size() < 16) {
                std::ostringstream msg;
                msg.precision(17);
                msg << what << " level " << n << " index " << j + 1 << ": phi(" << x << ") = " << y
                    << " not in [" << expected.lo << ", " << expected.hi << "]";
                report.first_violations.push_back(msg.str());
            }
        }
    };
    auto sample_in = [&](Interval s) { return std::min(s.hi, s.lo + unit(rng) * s.length()); };

    for (int n = 0; n <= depth; ++n) {
        const auto segs = model.level(n);
        const auto tsegs = target.level(n);
        for (std::size_t j = 0; j < segs.size(); ++j) {
            check(segs[j].lo, tsegs[j], "segment", n, j);
            check(segs[j].hi, tsegs[j], "segment", n, j);
            for (int k = 0; k < samples; ++k) {
                check(sample_in(segs[j]), tsegs[j], "segment", n, j);
            }
        }
        if (n == 0) {
            continue;
        }
        const auto gaps = model.gaps(n);
        const auto tgaps = target.gaps(n);
        for (std::size_t j = 0; j < gaps.size(); ++j) {
            for (int k = 0; k < samples; ++k) {
                check(sample_in(gaps[j]), tgaps[j], "gap", n, j);
            }
        }
    }
    return report;
}

} // namespace cantorconj
