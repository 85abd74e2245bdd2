#include "cantorconj/quadratic_map.hpp"

#include "cantorconj/errors.hpp"

#include <cmath>
#include <string>

namespace cantorconj {

FixedPoints fixed_points(double c) {
    if (!(c <= 0.25)) {
        throw NoRealFixedPoint("x^2 + c = x has no real root for c = " + std::to_string(c));
    }
    const double upper = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * c));
    // Vieta: lower * upper = c. Avoids the cancellation in (1 - sqrt(1 - 4c)) / 2.
    const double lower = c / upper;
    return {lower, upper};
}

QuadraticParams QuadraticParams::from_c(double c) {
    QuadraticParams params;
    params.c = c;
    // Above 1/4 there is no real fixed point and every orbit diverges; 1/2,
    // the tangency point at c = 1/4, remains a valid escape radius since
    // x^2 + c > x^2 + 1/4 >= |x| there.
    params.p = c > 0.25 ? 0.5 : fixed_points(c).upper;
    const double s2 = -params.p - c;
    params.s = s2 > 0.0 ? std::sqrt(s2) : 0.0;
    params.lambda = 2.0 * params.s;
    params.escape_radius = params.p;
    return params;
}

std::optional<Interval> escape_gap(const QuadraticParams& params) {
    if (params.s <= 0.0) {
        return std::nullopt;
    }
    return Interval{-params.s, params.s};
}

ExpansionBound expansion_bound(const QuadraticParams& params) noexcept {
    return {params.lambda, params.lambda > 1.0};
}

} // namespace cantorconj
