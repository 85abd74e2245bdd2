#pragma once

#include "cantorconj/interval.hpp"
#include "cantorconj/quadratic_map.hpp"

#include <utility>

namespace cantorconj {

inline constexpr int kMaxDepth = 48;

// The two branches of F_c^{-1}([u, v]): F_c maps each monotonically onto [u, v].
// Requires [u, v] ⊆ [-p, p] and u - c >= 0; throws DomainError otherwise.
std::pair<Interval, Interval> preimage_interval(const QuadraticParams& params, Interval target);

// C_0 = [-p, p], C_{n+1} = F_c^{-1}(C_n) ∩ I, built by square roots so that
// rounding errors contract at every level. Throws RegimeError unless the
// expansion bound is certified, DomainError for depth outside [0, kMaxDepth].
IntervalSystem build_model_system(const QuadraticParams& params, int depth);

// max_j (b_{n,j} - a_{n,j}); DomainError if n is outside [0, depth].
double max_segment_length(const IntervalSystem& system, int n);

} // namespace cantorconj
