#pragma once

#include "cantorconj/interval.hpp"
#include "cantorconj/quadratic_map.hpp"
#include "cantorconj/target_cantor.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cantorconj {

// Strictly increasing piecewise-linear map R -> R with unit-slope tails:
// y = x + (y_0 - x_0) left of the first knot, y = x + (y_K - x_K) right of
// the last. Evaluation is exact at knots in both directions.
class MonotonePLMap {
public:
    // Throws DomainError unless xs, ys have equal length >= 2 and are both
    // strictly increasing.
    MonotonePLMap(std::vector<double> xs, std::vector<double> ys, double err_bound);

    [[nodiscard]] double operator()(double x) const noexcept;
    [[nodiscard]] double inverse(double y) const noexcept;

    [[nodiscard]] std::span<const double> knots_x() const noexcept { return xs_; }
    [[nodiscard]] std::span<const double> knots_y() const noexcept { return ys_; }
    [[nodiscard]] double left_shift() const noexcept { return ys_.front() - xs_.front(); }
    [[nodiscard]] double right_shift() const noexcept { return ys_.back() - xs_.back(); }

    // Sup-distance to the exact homeomorphism on the level-N segments.
    [[nodiscard]] double err_bound() const noexcept { return err_bound_; }
    [[nodiscard]] double min_knot_spacing() const noexcept { return min_spacing_; }

    // Index of x among the knot abscissae (bit-exact match).
    [[nodiscard]] std::optional<std::size_t> knot_index(double x) const noexcept;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
    double err_bound_ = 0.0;
    double min_spacing_ = 0.0;
};

// φ_N: pairs every level-N endpoint of the model with the endpoint of the
// same address in the target and interpolates linearly in between. On each
// gap (c_{n,j}, d_{n,j}) with n <= N this is exactly the affine gap map
// onto (c*_{n,j}, d*_{n,j}); on level-N segments it approximates the limit
// construction to within the max level-N target segment length.
// DomainError if either system is shallower than N or N < 0.
MonotonePLMap build_phi(const IntervalSystem& model, const IntervalSystem& target, int depth);
MonotonePLMap build_phi(const IntervalSystem& model, const TargetSystem& target, int depth);

[[nodiscard]] inline double eval_phi(const MonotonePLMap& map, double x) noexcept { return map(x); }
[[nodiscard]] inline double eval_phi_inverse(const MonotonePLMap& map, double y) noexcept {
    return map.inverse(y);
}

// F* = φ ∘ F_c ∘ φ^{-1}.
[[nodiscard]] double eval_fstar(const MonotonePLMap& map, const QuadraticParams& params, double y) noexcept;

struct SegmentCheckReport {
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::vector<std::string> first_violations; // at most 16

    [[nodiscard]] bool ok() const noexcept { return violations == 0; }
};

// For every level n <= depth of the map: sampled points (and both endpoints)
// of each model segment must land in the same-address target segment, and
// sampled points of each model gap in the paired target gap.
SegmentCheckReport segment_mapping_check(const MonotonePLMap& map, const IntervalSystem& model,
                                         const IntervalSystem& target, int depth, int samples,
                                         std::uint64_t seed = 0x5eed);

} // namespace cantorconj
