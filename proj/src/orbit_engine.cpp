#include "cantorconj/orbit_engine.hpp"

#include "cantorconj/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>

namespace cantorconj {

namespace {

// Snaps images of knots back onto the (forward-invariant) knot set. Only
// points already known to be knots are ever snapped, so an orbit that starts
// off the knot set is iterated without interference.
class KnotSnapper {
public:
    KnotSnapper(std::span<const double> knots, double min_spacing, double scale)
        : knots_(knots), tol_(std::min(1e-11 * std::max(1.0, scale), 0.25 * min_spacing)) {}

    [[nodiscard]] bool is_knot(double x) const noexcept {
        return std::binary_search(knots_.begin(), knots_.end(), x);
    }

    [[nodiscard]] std::optional<double> snap(double x) const noexcept {
        const auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
        double best = std::numeric_limits<double>::infinity();
        double nearest = x;
        if (it != knots_.end() && *it - x < best) {
            best = *it - x;
            nearest = *it;
        }
        if (it != knots_.begin() && x - *(it - 1) < best) {
            best = x - *(it - 1);
            nearest = *(it - 1);
        }
        if (best <= tol_) {
            return nearest;
        }
        return std::nullopt;
    }

private:
    std::span<const double> knots_;
    double tol_;
};

template <class ToModel, class FromModel>
OrbitResult run_orbit(const QuadraticParams& params, const KnotSnapper& snapper, ToModel to_model,
                      FromModel from_model, double start, int max_iter, bool keep_trajectory) {
    if (max_iter < 1) {
        throw DomainError("max_iter must be >= 1");
    }
    OrbitResult result{Bounded{max_iter}, {}};
    auto record = [&](double v, std::size_t times = 1) {
        if (!keep_trajectory) {
            return;
        }
        const std::size_t room = kTrajectoryCap - result.trajectory.size();
        result.trajectory.insert(result.trajectory.end(), std::min(times, room), v);
    };
    const double radius = params.escape_radius;
    auto outside = [radius](double x) { return !(std::abs(x) <= radius); };

    double v = start;
    double x = to_model(v);
    bool on_knot = snapper.is_knot(x);
    record(v);
    if (outside(x)) {
        result.outcome = Escaped{0};
        return result;
    }
    for (int n = 1; n <= max_iter; ++n) {
        double fx = eval_map(params, x);
        if (on_knot) {
            if (auto snapped = snapper.snap(fx)) {
                fx = *snapped;
                if (fx == x) {
                    // Fixed point of the knot dynamics: the orbit is constant from here on.
                    record(v, static_cast<std::size_t>(max_iter - n + 1));
                    return result;
                }
            } else {
                on_knot = false;
            }
        }
        v = from_model(fx);
        x = to_model(v);
        on_knot = on_knot && snapper.is_knot(x);
        record(v);
        if (outside(x)) {
            result.outcome = Escaped{n};
            return result;
        }
    }
    return result;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, count))));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        workers.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) {
                fn(i);
            }
        });
    }
}

} // namespace

OrbitResult iterate_model(const QuadraticParams& params, double x0, int max_iter, bool keep_trajectory) {
    const std::array<double, 2> fixed{-params.p, params.p};
    const KnotSnapper snapper(fixed, 2.0 * params.p, params.p);
    auto identity = [](double v) { return v; };
    return run_orbit(params, snapper, identity, identity, x0, max_iter, keep_trajectory);
}

OrbitResult iterate_target(const MonotonePLMap& map, const QuadraticParams& params, double y0, int max_iter,
                           bool keep_trajectory) {
    const KnotSnapper snapper(map.knots_x(), map.min_knot_spacing(), params.p);
    return run_orbit(
        params, snapper, [&map](double y) { return map.inverse(y); }, [&map](double x) { return map(x); }, y0,
        max_iter, keep_trajectory);
}

std::vector<PlaneSegment> cobweb_trace(const std::function<double(double)>& f, double x0, int steps) {
    if (steps < 1) {
        throw DomainError("cobweb_trace: steps must be >= 1");
    }
    std::vector<PlaneSegment> trace;
    trace.reserve(2 * static_cast<std::size_t>(steps));
    double prev = x0;
    double cur = f(prev);
    for (int k = 1; k <= steps; ++k) {
        const double next = f(cur);
        trace.push_back({prev, cur, cur, cur});
        trace.push_back({cur, cur, cur, next});
        prev = cur;
        cur = next;
    }
    return trace;
}

std::vector<GridSample> classify_grid(const std::function<OrbitResult(double)>& classify, Interval range,
                                      int n_points, unsigned threads) {
    if (n_points < 2) {
        throw DomainError("classify_grid: n_points must be >= 2");
    }
    std::vector<GridSample> out(static_cast<std::size_t>(n_points));
    const double step = (range.hi - range.lo) / (n_points - 1);
    parallel_for(out.size(), threads, [&](std::size_t i) {
        const double x = i + 1 == out.size() ? range.hi : range.lo + static_cast<double>(i) * step;
        out[i] = GridSample{x, classify(x)};
    });
    return out;
}

EscapeTime mandelbrot_escape(double c_re, double c_im, int max_iter, double bailout) {
    if (max_iter < 1) {
        throw DomainError("max_iter must be >= 1");
    }
    const double limit = bailout * bailout;
    double zr = 0.0;
    double zi = 0.0;
    for (int n = 1; n <= max_iter; ++n) {
        const double r2 = zr * zr - zi * zi + c_re;
        zi = 2.0 * zr * zi + c_im;
        zr = r2;
        if (zr * zr + zi * zi > limit) {
            return {n};
        }
    }
    return {};
}

EscapeImage render_escape_image(const Region& region, int width, int height, int max_iter, unsigned threads) {
    if (width < 1 || height < 1) {
        throw DomainError("image dimensions must be >= 1");
    }
    if (max_iter < 1) {
        throw DomainError("max_iter must be >= 1");
    }
    EscapeImage image{width, height, max_iter,
                      std::vector<int>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height))};
    parallel_for(static_cast<std::size_t>(height), threads, [&](std::size_t row) {
        const double im = pixel_im(region, height, static_cast<int>(row));
        for (int col = 0; col < width; ++col) {
            const EscapeTime t = mandelbrot_escape(pixel_re(region, width, col), im, max_iter);
            image.escape[row * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)] =
                t.escaped_at.value_or(-1);
        }
    });
    return image;
}

} // namespace cantorconj
