#include "cantorconj/verify.hpp"

#include "cantorconj/conjugacy.hpp"
#include "cantorconj/errors.hpp"
#include "cantorconj/io.hpp"
#include "cantorconj/model_cantor.hpp"
#include "cantorconj/orbit_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <sstream>

namespace cantorconj {

namespace {

struct Failure {
    std::ostringstream text;
    int count = 0;

    template <class... Args>
    void add(const Args&... args) {
        if (count++ < 3) {
            text.precision(17);
            if (count > 1) {
                text << "; ";
            }
            (text << ... << args);
        }
    }
};

CheckResult timed(const std::string& name, const std::function<void(Failure&, std::ostringstream&)>& body) {
    const auto start = std::chrono::steady_clock::now();
    Failure failure;
    std::ostringstream info;
    info.precision(6);
    CheckResult result{name, false, {}, 0.0};
    try {
        body(failure, info);
        result.pass = failure.count == 0;
        result.detail = result.pass ? info.str() : std::to_string(failure.count) + " violation(s): " + failure.text.str();
    } catch (const std::exception& e) {
        result.detail = std::string("exception: ") + e.what();
    }
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

// Largest root of x^2 + c - x = (x - 1/2)^2 - (1/4 - c) by bisection on
// [1/2, 3/2 + sqrt(1/4 - c)]; the completed square keeps the tangent case c = 1/4 exact.
double bisect_upper_fixed_point(double c) {
    auto g = [c](double x) { return (x - 0.5) * (x - 0.5) - (0.25 - c); };
    double lo = 0.5;
    double hi = 1.5 + std::sqrt(std::max(0.0, 0.25 - c));
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        (g(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<CheckResult> run_verification(double c, const CantorSpec& spec, BuildMode mode, int depth) {
    depth = std::clamp(depth, 1, 20);
    std::vector<CheckResult> results;
    const QuadraticParams params = QuadraticParams::from_c(c);

    results.push_back(timed("fixed-points", [&](Failure& fail, std::ostringstream& info) {
        for (double cc : {0.25, -1.0, -3.0, c}) {
            const FixedPoints fp = fixed_points(cc);
            for (double r : {fp.lower, fp.upper}) {
                if (std::abs(r * r + cc - r) > 1e-12 * std::max(1.0, std::abs(r))) {
                    fail.add("c=", cc, " residual at ", r);
                }
            }
            if (!(fp.lower <= fp.upper)) {
                fail.add("c=", cc, " roots out of order");
            }
            if (std::abs(fp.upper - bisect_upper_fixed_point(cc)) > 1e-10) {
                fail.add("c=", cc, " disagrees with bisection");
            }
        }
        if (fixed_points(0.25).upper != 0.5 || fixed_points(0.25).lower != 0.5) {
            fail.add("c=1/4 must give exactly 0.5");
        }
        info << "p=" << params.p;
    }));

    results.push_back(timed("escape-gap", [&](Failure& fail, std::ostringstream& info) {
        for (double cc : {-2.0, -1.0}) {
            if (escape_gap(QuadraticParams::from_c(cc))) {
                fail.add("c=", cc, " must have an empty escape gap");
            }
        }
        const auto gap = escape_gap(params);
        if (gap.has_value() != (c < -2.0)) {
            fail.add("escape gap presence must match c < -2");
        }
        if (gap) {
            for (double e : {gap->lo, gap->hi}) {
                if (std::abs(eval_map(params, e) + params.p) > 1e-12 * params.p) {
                    fail.add("F(", e, ") != -p");
                }
            }
            info << "A0=(" << gap->lo << ", " << gap->hi << ")";
        }
    }));

    const int model_depth = std::max(depth + 1, std::min(20, std::max(depth, 12)));
    IntervalSystem model;
    results.push_back(timed("model-structure", [&](Failure& fail, std::ostringstream& info) {
        model = build_model_system(params, model_depth);
        const double lambda = expansion_bound(params).lambda;
        for (int n = 0; n <= model_depth; ++n) {
            const auto segs = model.level(n);
            if (segs.size() != (std::size_t{1} << n)) {
                fail.add("level ", n, " has ", segs.size(), " segments");
            }
            for (std::size_t j = 0; j < segs.size(); ++j) {
                if (!(segs[j].lo < segs[j].hi) || (j > 0 && !(segs[j - 1].hi < segs[j].lo))) {
                    fail.add("level ", n, " segment ", j + 1, " unsorted or degenerate");
                }
                if (n > 0 && !model.level(n - 1)[j / 2].contains(segs[j])) {
                    fail.add("level ", n, " segment ", j + 1, " not nested");
                }
            }
            const double bound = 2.0 * params.p * std::pow(lambda, -n) * (1.0 + 1e-9);
            if (model.max_segment_length(n) > bound) {
                fail.add("level ", n, " max length ", model.max_segment_length(n), " > ", bound);
            }
        }
        info << "depth " << model_depth << ", max length at depth " << model.max_segment_length(model_depth);
    }));

    results.push_back(timed("endpoint-orbits", [&](Failure& fail, std::ostringstream& info) {
        double worst = 0.0;
        for (int n = 0; n <= std::min(12, model.depth()); ++n) {
            for (double e : model.endpoints(n)) {
                double x = e;
                for (int k = 0; k < n; ++k) {
                    x = eval_map(params, x);
                }
                const double dist = std::min(std::abs(x - params.p), std::abs(x + params.p));
                worst = std::max(worst, dist);
                if (dist > 1e-6) {
                    fail.add("level ", n, " endpoint ", e, " lands at ", x);
                }
            }
        }
        info << "worst distance " << worst;
    }));

    TargetSystem target{spec, mode, IntervalSystem(spec.hull())};
    results.push_back(timed("target-construction", [&](Failure& fail, std::ostringstream& info) {
        target = build_target_system(spec, model_depth, mode);
        const double width = spec.hull().length();
        const int member_depth = std::min(64, depth + 8);
        for (int n = 0; n <= depth; ++n) {
            const auto segs = target.system.level(n);
            if (segs.size() != (std::size_t{1} << n)) {
                fail.add("level ", n, " count");
            }
            if (mode == BuildMode::strict && target.system.max_segment_length(n) > std::pow(2.0 / 3.0, n) * width) {
                fail.add("level ", n, " exceeds the (2/3)^n bound");
            }
            if (n > 0 && !(target.system.max_segment_length(n) < target.system.max_segment_length(n - 1))) {
                fail.add("level ", n, " max length does not decrease");
            }
            for (const auto& s : segs) {
                if (!(s.lo < s.hi)) {
                    fail.add("level ", n, " degenerate segment");
                }
                for (double e : {s.lo, s.hi}) {
                    if (membership(spec, e, member_depth) != Membership::in) {
                        fail.add("endpoint ", e, " not a member");
                    }
                }
            }
            if (n == 0) {
                continue;
            }
            for (const auto& g : target.system.gaps(n)) {
                for (double t : {0.25, 0.5, 0.75}) {
                    const double x = g.lo + t * g.length();
                    if (membership(spec, x, 64) != Membership::out) {
                        fail.add("gap point ", x, " is a member");
                    }
                }
            }
        }
        info << spec.describe() << " " << to_string(mode) << ", max length at depth " << depth << " = "
             << target.system.max_segment_length(depth);
    }));

    results.push_back(timed("phi", [&](Failure& fail, std::ostringstream& info) {
        const MonotonePLMap phi = build_phi(model, target, depth);
        const MonotonePLMap finer = build_phi(model, target, depth + 1);
        const Interval hull = model.hull();
        constexpr int grid = 100000;
        double prev = -std::numeric_limits<double>::infinity();
        double worst_roundtrip = 0.0;
        double worst_stability = 0.0;
        for (int i = 0; i < grid; ++i) {
            const double x = (hull.lo - 1.0) + (hull.length() + 2.0) * i / (grid - 1);
            const double y = phi(x);
            if (!(y > prev)) {
                fail.add("not strictly increasing at x=", x);
            }
            prev = y;
            const double back = phi.inverse(y);
            worst_roundtrip = std::max(worst_roundtrip, std::abs(back - x) / std::max(1.0, std::abs(x)));
            worst_stability = std::max(worst_stability, std::abs(y - finer(x)));
        }
        if (worst_roundtrip > 1e-12) {
            fail.add("round trip error ", worst_roundtrip);
        }
        if (worst_stability > target.system.max_segment_length(depth)) {
            fail.add("depth stability ", worst_stability, " > ", target.system.max_segment_length(depth));
        }
        for (int n = 0; n <= depth; ++n) {
            const auto ms = model.level(n);
            const auto ts = target.system.level(n);
            for (std::size_t j = 0; j < ms.size(); ++j) {
                if (phi(ms[j].lo) != ts[j].lo || phi(ms[j].hi) != ts[j].hi || phi.inverse(ts[j].lo) != ms[j].lo ||
                    phi.inverse(ts[j].hi) != ms[j].hi) {
                    fail.add("knot mismatch at level ", n, " index ", j + 1);
                }
            }
        }
        const SegmentCheckReport report = segment_mapping_check(phi, model, target.system, depth, 4);
        if (!report.ok()) {
            fail.add("segment mapping: ", report.first_violations.front());
        }
        info << "round trip " << worst_roundtrip << ", stability " << worst_stability << ", "
             << report.checked << " segment samples";
    }));

    const MonotonePLMap phi = build_phi(model, target, depth);
    results.push_back(timed("conjugacy", [&](Failure& fail, std::ostringstream& info) {
        const Interval th = target.system.hull();
        if (std::abs(eval_fstar(phi, params, th.hi) - th.hi) > 1e-9) {
            fail.add("F*(b*) != b*");
        }
        if (std::abs(eval_fstar(phi, params, th.lo) - th.hi) > 1e-9) {
            fail.add("F*(a*) != b*");
        }
        // F(0) = c lies left of the hull, so F*(phi(0)) = c + (a* + p).
        const double expected = c + (th.lo + params.p);
        if (std::abs(eval_fstar(phi, params, phi(0.0)) - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
            fail.add("F*(phi(0)) != phi(c)");
        }
        info << "F*(phi(0)) = " << eval_fstar(phi, params, phi(0.0));
    }));

    results.push_back(timed("dichotomy", [&](Failure& fail, std::ostringstream& info) {
        std::size_t escaped = 0;
        std::size_t bounded = 0;
        for (int n = 1; n <= std::min(5, depth); ++n) {
            for (const auto& g : target.system.gaps(n)) {
                if (!iterate_target(phi, params, g.midpoint(), 200).escaped()) {
                    fail.add("gap midpoint ", g.midpoint(), " did not escape");
                }
                ++escaped;
            }
        }
        for (int n = 0; n <= std::min(8, depth); ++n) {
            for (const auto& s : target.system.level(n)) {
                for (double e : {s.lo, s.hi}) {
                    if (iterate_target(phi, params, e, 25).escaped()) {
                        fail.add("endpoint ", e, " escaped");
                    }
                    ++bounded;
                }
            }
        }
        info << escaped << " gap midpoints escaped, " << bounded << " endpoints bounded";
    }));

    results.push_back(timed("mandelbrot", [&](Failure& fail, std::ostringstream& info) {
        if (!mandelbrot_escape(0.0, 0.0, 1000).inside()) {
            fail.add("c=0 must be inside");
        }
        if (mandelbrot_escape(1.0, 0.0, 1000).escaped_at != 3) {
            fail.add("c=1 must escape at 3");
        }
        if (!mandelbrot_escape(-1.0, 0.0, 1000).inside()) {
            fail.add("c=-1 must be inside");
        }
        const Region region{};
        const std::string a = encode_ppm(render_escape_image(region, 200, 200, 256));
        const std::string b = encode_ppm(render_escape_image(region, 200, 200, 256));
        if (a != b) {
            fail.add("escape image is not deterministic");
        }
        if (a.rfind("P6\n200 200\n255\n", 0) != 0 || a.size() != 15 + 3 * 200 * 200) {
            fail.add("bad PPM header or size");
        }
        info << a.size() << " bytes";
    }));

    return results;
}

} // namespace cantorconj
