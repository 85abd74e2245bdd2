#pragma once

#include "cantorconj/interval.hpp"

#include <optional>

namespace cantorconj {

// Roots of x^2 + c = x, lower first.
struct FixedPoints {
    double lower = 0.0;
    double upper = 0.0;
};

// Throws NoRealFixedPoint for c > 1/4.
FixedPoints fixed_points(double c);

// F_c(x) = x^2 + c together with the constants derived from c.
//
//   p              larger fixed point; I = [-p, p] holds every bounded orbit
//                  (1/2 for c > 1/4, where no orbit is bounded)
//   s              half-width of the first escape gap A0 = (-s, s), 0 if empty
//   lambda         2s, the minimum of |F'| over I \ A0
//   escape_radius  p: once |x| > p the orbit increases monotonically to infinity
struct QuadraticParams {
    double c = -3.0;
    double p = 0.0;
    double s = 0.0;
    double lambda = 0.0;
    double escape_radius = 0.0;

    static QuadraticParams from_c(double c);

    [[nodiscard]] Interval invariant_interval() const noexcept { return {-p, p}; }
};

[[nodiscard]] inline double eval_map(const QuadraticParams& params, double x) noexcept {
    return x * x + params.c;
}

// A0 = {x in I : F_c(x) < -p}; empty for c >= -2.
std::optional<Interval> escape_gap(const QuadraticParams& params);

struct ExpansionBound {
    double lambda = 0.0;
    // lambda > 1: F_c expands uniformly on I \ A0, which certifies that the
    // bounded set is a Cantor set.
    bool certified = false;
};

ExpansionBound expansion_bound(const QuadraticParams& params) noexcept;

} // namespace cantorconj
