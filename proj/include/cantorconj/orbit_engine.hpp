#pragma once

#include "cantorconj/conjugacy.hpp"
#include "cantorconj/interval.hpp"
#include "cantorconj/quadratic_map.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace cantorconj {

// Not escaped within the iteration budget. A finite-horizon verdict: no
// finite computation proves that an orbit stays bounded forever.
struct Bounded {
    int iterations_run = 0;
    friend bool operator==(const Bounded&, const Bounded&) = default;
};

// First n with |x_n| > p (model coordinates). Past the radius p the orbit
// increases monotonically, so escape is certain.
struct Escaped {
    int first_exit_iteration = 0;
    friend bool operator==(const Escaped&, const Escaped&) = default;
};

struct OrbitResult {
    std::variant<Bounded, Escaped> outcome;
    std::vector<double> trajectory; // x_0, x_1, ... when requested, capped at kTrajectoryCap

    [[nodiscard]] bool escaped() const noexcept { return std::holds_alternative<Escaped>(outcome); }
    [[nodiscard]] int iterations() const noexcept {
        return escaped() ? std::get<Escaped>(outcome).first_exit_iteration
                         : std::get<Bounded>(outcome).iterations_run;
    }
};

inline constexpr std::size_t kTrajectoryCap = 1u << 16;

// Iterates F_c from x0. Orbits starting at ±p are recognized as landing on
// the fixed point p and reported Bounded without drifting off it.
// DomainError for max_iter < 1.
OrbitResult iterate_model(const QuadraticParams& params, double x0, int max_iter, bool keep_trajectory = false);

// Iterates F* = φ ∘ F_c ∘ φ^{-1} from y0; the escape test |φ^{-1}(y_n)| > p is
// made in model coordinates. Knots of φ (model endpoints) map to knots under
// F_c, so an orbit that starts on a knot is re-snapped onto the knot set
// after every step instead of accumulating rounding drift.
OrbitResult iterate_target(const MonotonePLMap& map, const QuadraticParams& params, double y0, int max_iter,
                           bool keep_trajectory = false);

struct PlaneSegment {
    double x0;
    double y0;
    double x1;
    double y1;
};

// Graphical analysis: for k = 1..steps a horizontal move (x_{k-1}, x_k) ->
// (x_k, x_k) onto the diagonal followed by a vertical move to (x_k, x_{k+1})
// on the graph. DomainError for steps < 1.
std::vector<PlaneSegment> cobweb_trace(const std::function<double(double)>& f, double x0, int steps);

struct GridSample {
    double x;
    OrbitResult result;
};

// Uniform grid lo + i (hi - lo) / (n_points - 1). Rows are partitioned over
// `threads` workers; the output never depends on the partition.
std::vector<GridSample> classify_grid(const std::function<OrbitResult(double)>& classify, Interval range,
                                      int n_points, unsigned threads = 1);

struct EscapeTime {
    std::optional<int> escaped_at; // empty: inside after max_iter iterations

    [[nodiscard]] bool inside() const noexcept { return !escaped_at.has_value(); }
};

// z <- z^2 + c from z = 0; escaped at the first n with |z_n| > bailout.
EscapeTime mandelbrot_escape(double c_re, double c_im, int max_iter, double bailout = 2.0);

struct Region {
    double re_min = -2.5;
    double re_max = 1.0;
    double im_min = -1.75;
    double im_max = 1.75;
};

struct EscapeImage {
    int width = 0;
    int height = 0;
    int max_iter = 0;
    std::vector<int> escape; // row-major, top row first; -1 for inside

    [[nodiscard]] int at(int col, int row) const { return escape[static_cast<std::size_t>(row) * width + col]; }
};

// Pixel (col, row) samples the centre of its cell; row 0 is im_max.
[[nodiscard]] inline double pixel_re(const Region& r, int width, int col) noexcept {
    return r.re_min + (col + 0.5) * (r.re_max - r.re_min) / width;
}
[[nodiscard]] inline double pixel_im(const Region& r, int height, int row) noexcept {
    return r.im_max - (row + 0.5) * (r.im_max - r.im_min) / height;
}

EscapeImage render_escape_image(const Region& region, int width, int height, int max_iter, unsigned threads = 1);

} // namespace cantorconj
