#pragma once

// Reference computations used by the tests. None of these call into the
// library's construction code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Largest root of x^2 + c = x by bisection on the completed square
// (x - 1/2)^2 - (1/4 - c), which stays exact in the tangent case c = 1/4.
inline double bisect_upper_fixed_point(double c) {
    auto g = [c](double x) { return (x - 0.5) * (x - 0.5) - (0.25 - c); };
    double lo = 0.5;
    double hi = 1.5 + std::sqrt(std::max(0.0, 0.25 - c));
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            return mid;
        }
        (g(mid) > 0.0 ? hi : lo) = mid;
    }
}

// Smaller root by bisection on [-(1/2 + sqrt(1/4 - c)) - 1, 1/2].
inline double bisect_lower_fixed_point(double c) {
    auto g = [c](double x) { return (x - 0.5) * (x - 0.5) - (0.25 - c); };
    double lo = -1.5 - std::sqrt(std::max(0.0, 0.25 - c));
    double hi = 0.5;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            return mid;
        }
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
}

inline std::int64_t pow3(int n) {
    std::int64_t r = 1;
    while (n-- > 0) {
        r *= 3;
    }
    return r;
}

// True when the base-3 digits of k (exactly n of them, leading zeros
// included) avoid the digit 1.
inline bool ternary_digits_avoid_one(std::int64_t k, int n) {
    for (int i = 0; i < n; ++i) {
        if (k % 3 == 1) {
            return false;
        }
        k /= 3;
    }
    return true;
}

// Membership of x in the depth-n middle-thirds set C_n by base-3 digits:
// C_n is the union of [k/3^n, (k+1)/3^n] over k whose n digits avoid 1.
// x * 3^n is formed exactly (hi + lo via fma); values within 1e-6 of an
// integer m are treated as the grid point m, which belongs to the segments
// starting at m or at m - 1.
inline bool middle_thirds_member(double x, int n) {
    if (x < 0.0 || x > 1.0) {
        return false;
    }
    const auto scale = static_cast<double>(pow3(n));
    const double hi = x * scale;
    const double lo = std::fma(x, scale, -hi);
    const double m = std::nearbyint(hi);
    const auto total = static_cast<std::int64_t>(scale);
    if (std::abs((hi - m) + lo) < 1e-6) {
        const auto k = static_cast<std::int64_t>(m);
        return (k < total && ternary_digits_avoid_one(k, n)) || (k >= 1 && ternary_digits_avoid_one(k - 1, n));
    }
    const auto k = static_cast<std::int64_t>(std::floor(hi + lo));
    return k >= 0 && k < total && ternary_digits_avoid_one(k, n);
}

// True when x is the double nearest to k / 3^n for some integer k (returned
// through k_out): |x * 3^n - k| <= ulp(x) * 3^n / 2, with x * 3^n formed
// exactly.
inline bool is_rounded_third_power_fraction(double x, int n, std::int64_t* k_out = nullptr) {
    const auto scale = static_cast<double>(pow3(n));
    const double hi = x * scale;
    const double lo = std::fma(x, scale, -hi);
    const double k = std::nearbyint(hi);
    const double err = std::abs((hi - k) + lo);
    const double half_ulp = 0.5 * (std::nextafter(x, 2.0) - x) * scale;
    if (k_out != nullptr) {
        *k_out = static_cast<std::int64_t>(k);
    }
    return x == 0.0 ? k == 0.0 : err <= half_ulp;
}

struct Gap {
    double lo;
    double hi;
    int level; // refinement step at which the gap is removed, counted from 0
};

// Every gap of the two-map affine IFS x -> r1 x, x -> r2 x + (1 - r2) on
// [0, 1] down to `levels` steps: the images of the base gap (r1, 1 - r2)
// under every composition of at most levels - 1 maps.
inline std::vector<Gap> ifs2_gaps(double r1, double r2, int levels) {
    struct Word {
        double scale;
        double shift;
    };
    std::vector<Gap> out;
    std::vector<Word> words{{1.0, 0.0}};
    for (int k = 0; k < levels; ++k) {
        std::vector<Word> next;
        for (const auto& w : words) {
            out.push_back({w.shift + w.scale * r1, w.shift + w.scale * (1.0 - r2), k});
            next.push_back({w.scale * r1, w.shift});
            next.push_back({w.scale * r2, w.shift + w.scale * (1.0 - r2)});
        }
        words = std::move(next);
    }
    return out;
}

} // namespace oracle
