#include "cantorconj/model_cantor.hpp"

#include "cantorconj/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cantorconj {

namespace {

// Slack for endpoints that should sit exactly on ±p but carry a rounding error.
double hull_slack(double p) { return 8.0 * std::numeric_limits<double>::epsilon() * p; }

} // namespace

std::pair<Interval, Interval> preimage_interval(const QuadraticParams& params, Interval target) {
    const double p = params.p;
    const double slack = hull_slack(p);
    if (!(target.lo <= target.hi) || target.lo < -p - slack || target.hi > p + slack) {
        throw DomainError("preimage_interval: [u, v] must lie inside [-p, p]");
    }
    const double lo2 = target.lo - params.c;
    const double hi2 = target.hi - params.c;
    if (lo2 < 0.0) {
        throw DomainError("preimage_interval: u - c < 0, branches merge (c >= -2?)");
    }
    const double inner = std::sqrt(lo2);
    const double outer = std::sqrt(hi2);
    return {Interval{-outer, -inner}, Interval{inner, outer}};
}

IntervalSystem build_model_system(const QuadraticParams& params, int depth) {
    if (!expansion_bound(params).certified) {
        throw RegimeError("c = " + std::to_string(params.c) +
                          " is not certified: expansion bound 2s = " + std::to_string(params.lambda) +
                          " <= 1");
    }
    if (depth < 0 || depth > kMaxDepth) {
        throw DomainError("depth must lie in [0, " + std::to_string(kMaxDepth) + "]");
    }
    IntervalSystem system(params.invariant_interval());
    for (int n = 0; n < depth; ++n) {
        const auto parents = system.level(n);
        const std::size_t count = parents.size();
        std::vector<Interval> next(2 * count);
        // The left branch reverses order, the right branch preserves it, so
        // sorted(C_{n+1}) = reversed(left preimages) ++ right preimages.
        for (std::size_t j = 0; j < count; ++j) {
            auto [left, right] = preimage_interval(params, parents[j]);
            next[count - 1 - j] = left;
            next[count + j] = right;
        }
        // Outer endpoints of each sibling pair are preimages of earlier
        // endpoints; reuse the stored values so boundaries persist bit-exactly.
        for (std::size_t j = 0; j < count; ++j) {
            if (std::abs(next[2 * j].lo - parents[j].lo) > 1e-9 * params.p ||
                std::abs(next[2 * j + 1].hi - parents[j].hi) > 1e-9 * params.p) {
                throw std::logic_error("model refinement lost the sibling pairing at level " +
                                       std::to_string(n + 1));
            }
            next[2 * j].lo = parents[j].lo;
            next[2 * j + 1].hi = parents[j].hi;
        }
        system.push_level(std::move(next));
    }
    return system;
}

double max_segment_length(const IntervalSystem& system, int n) {
    return system.max_segment_length(n);
}

} // namespace cantorconj
