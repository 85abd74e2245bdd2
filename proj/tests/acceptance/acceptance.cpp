// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include "cantorconj/conjugacy.hpp"
#include "cantorconj/io.hpp"
#include "cantorconj/model_cantor.hpp"
#include "cantorconj/orbit_engine.hpp"
#include "cantorconj/quadratic_map.hpp"
#include "cantorconj/target_cantor.hpp"
#include "support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>

using namespace cantorconj;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.pass && secs >= limit_seconds) {
        out.pass = false;
        std::ostringstream msg;
        msg << "took " << secs << " s, limit " << limit_seconds << " s";
        out.detail = msg.str();
    }
    failures += out.pass ? 0 : 1;
    std::printf("%s %2d %s (%.3f s)%s%s\n", out.pass ? "PASS" : "FAIL", id, title, secs,
                out.detail.empty() ? "" : ": ", out.detail.c_str());
    std::fflush(stdout);
}

std::string num(double v) { return format_17(v); }

} // namespace

int main() {
    criterion(1, "fixed points", 1.0, [] {
        Outcome o;
        for (double c : {0.25, -1.0, -3.0}) {
            const double p = QuadraticParams::from_c(c).p;
            o.require(std::abs(p * p + c - p) <= 1e-12, "c=" + num(c) + ": |F(p)-p| too large");
            o.require(std::abs(p - oracle::bisect_upper_fixed_point(c)) <= 1e-10,
                      "c=" + num(c) + ": bisection oracle disagrees");
        }
        o.require(QuadraticParams::from_c(0.25).p == 0.5, "c=1/4 does not give exactly 0.5");
        return o;
    });

    criterion(2, "escape gap", 1.0, [] {
        Outcome o;
        const auto gap = escape_gap(QuadraticParams::from_c(-3.0));
        o.require(gap.has_value(), "empty for c=-3");
        if (gap) {
            o.require(std::abs(gap->hi - 0.834999618124466781) <= 1e-9 && gap->lo == -gap->hi,
                      "endpoints " + num(gap->lo) + ", " + num(gap->hi));
            o.require(std::abs(gap->hi - 0.835) < 5e-4, "does not match the drawn 0.835");
        }
        o.require(!escape_gap(QuadraticParams::from_c(-2.0)), "nonempty for c=-2");
        o.require(!escape_gap(QuadraticParams::from_c(-1.0)), "nonempty for c=-1");
        return o;
    });

    criterion(3, "model structure", 5.0, [] {
        Outcome o;
        const auto q = QuadraticParams::from_c(-3.0);
        const auto sys = build_model_system(q, 20);
        for (int n = 0; n <= 20 && o.pass; ++n) {
            const auto lv = sys.level(n);
            o.require(lv.size() == (std::size_t{1} << n), "level " + std::to_string(n) + " count");
            for (std::size_t j = 0; j < lv.size() && o.pass; ++j) {
                o.require(lv[j].lo < lv[j].hi, "degenerate segment");
                o.require(j == 0 || lv[j - 1].hi < lv[j].lo, "overlap at level " + std::to_string(n));
                o.require(n == 0 || sys.level(n - 1)[j / 2].contains(lv[j]), "nesting at level " + std::to_string(n));
            }
            const double bound = 2.0 * q.p * std::pow(1.6699, -n) * (1 + 1e-9);
            o.require(max_segment_length(sys, n) <= bound, "length bound at level " + std::to_string(n));
        }
        return o;
    });

    criterion(4, "endpoint orbits", 5.0, [] {
        Outcome o;
        const auto q = QuadraticParams::from_c(-3.0);
        const auto sys = build_model_system(q, 12);
        double worst = 0.0;
        for (int n = 0; n <= 12; ++n) {
            for (double e : sys.endpoints(n)) {
                double x = e;
                for (int k = 0; k < n; ++k) {
                    x = x * x + q.c;
                }
                worst = std::max(worst, std::min(std::abs(x - q.p), std::abs(x + q.p)));
            }
        }
        o.require(worst <= 1e-6, "worst distance " + num(worst));
        o.detail = o.pass ? "worst distance " + num(worst) : o.detail;
        return o;
    });

    criterion(5, "target construction", 5.0, [] {
        Outcome o;
        const auto ts = build_target_system(CantorSpec::middle_thirds(), 12, BuildMode::strict);
        for (int n = 0; n <= 12 && o.pass; ++n) {
            for (const auto& seg : ts.system.level(n)) {
                std::int64_t ka = 0;
                std::int64_t kb = 0;
                o.require(oracle::is_rounded_third_power_fraction(seg.lo, n, &ka) &&
                              oracle::is_rounded_third_power_fraction(seg.hi, n, &kb) && kb == ka + 1,
                          "level " + std::to_string(n) + ": endpoints are not neighbouring k/3^n");
                o.require(seg.length() <= std::pow(2.0 / 3.0, n), "length exceeds (2/3)^n");
                o.require(oracle::middle_thirds_member(seg.lo, 20) && oracle::middle_thirds_member(seg.hi, 20),
                          "endpoint fails the ternary oracle");
            }
            if (n > 0) {
                for (const auto& g : ts.system.gaps(n)) {
                    o.require(!oracle::middle_thirds_member(g.midpoint(), 20), "gap midpoint passes the oracle");
                }
            }
        }
        return o;
    });

    criterion(6, "phi properties", 10.0, [] {
        Outcome o;
        const auto q = QuadraticParams::from_c(-3.0);
        const auto model = build_model_system(q, 13);
        const auto target = build_target_system(CantorSpec::middle_thirds(), 13, BuildMode::strict);
        const auto phi = build_phi(model, target, 12);
        const auto phi13 = build_phi(model, target, 13);
        const double bound = target.system.max_segment_length(12);
        o.require(std::abs(bound - std::pow(3.0, -12)) <= 1e-15, "level-12 length is not 3^-12");
        constexpr int n = 100000;
        double prev = -INFINITY;
        for (int i = 0; i < n && o.pass; ++i) {
            const double x = -3.0 + 6.0 * i / (n - 1);
            const double y = phi(x);
            o.require(y > prev, "not strictly increasing at " + num(x));
            prev = y;
            o.require(std::abs(phi.inverse(y) - x) <= 1e-12 * std::max(1.0, std::abs(x)), "round trip at " + num(x));
            o.require(std::abs(y - phi13(x)) <= bound, "depth stability at " + num(x));
        }
        for (int lv = 0; lv <= 12 && o.pass; ++lv) {
            const auto a = model.level(lv);
            const auto b = target.system.level(lv);
            for (std::size_t j = 0; j < a.size(); ++j) {
                o.require(phi(a[j].lo) == b[j].lo && phi(a[j].hi) == b[j].hi, "knot exactness at level " + std::to_string(lv));
            }
        }
        return o;
    });

    criterion(7, "conjugacy spot values", 1.0, [] {
        Outcome o;
        const auto q = QuadraticParams::from_c(-3.0);
        const auto phi = build_phi(build_model_system(q, 12),
                                   build_target_system(CantorSpec::middle_thirds(), 12, BuildMode::strict), 12);
        const double f1 = eval_fstar(phi, q, 1.0);
        const double fh = eval_fstar(phi, q, 0.5);
        const double ft = eval_fstar(phi, q, 1.0 / 3.0);
        o.require(std::abs(f1 - 1.0) <= 1e-9, "F*(1) = " + num(f1));
        o.require(std::abs(fh + 0.6972244) <= 1e-6, "F*(1/2) = " + num(fh));
        o.require(std::abs(ft) <= 1e-6, "F*(1/3) = " + num(ft));
        return o;
    });

    criterion(8, "bounded/escaping dichotomy", 10.0, [] {
        Outcome o;
        const auto q = QuadraticParams::from_c(-3.0);
        const auto target = build_target_system(CantorSpec::middle_thirds(), 12, BuildMode::strict);
        const auto phi = build_phi(build_model_system(q, 12), target, 12);
        int escaped = 0;
        int bounded = 0;
        for (int n = 1; n <= 5; ++n) {
            for (const auto& g : target.system.gaps(n)) {
                const bool esc = iterate_target(phi, q, g.midpoint(), 200).escaped();
                o.require(esc, "gap midpoint " + num(g.midpoint()) + " stayed bounded");
                escaped += esc ? 1 : 0;
            }
        }
        for (int n = 0; n <= 8; ++n) {
            for (double e : target.system.endpoints(n)) {
                const bool esc = iterate_target(phi, q, e, 25).escaped();
                o.require(!esc, "endpoint " + num(e) + " escaped");
                bounded += esc ? 0 : 1;
            }
        }
        if (o.pass) {
            o.detail = std::to_string(escaped) + " midpoints escaped, " + std::to_string(bounded) + " endpoints bounded";
        }
        return o;
    });

    criterion(9, "escape-time demo", 2.0, [] {
        Outcome o;
        o.require(mandelbrot_escape(0.0, 0.0, 1000).inside(), "c=0 not inside");
        const auto one = mandelbrot_escape(1.0, 0.0, 1000);
        o.require(one.escaped_at == 3, "c=1 does not escape at 3");
        o.require(mandelbrot_escape(-1.0, 0.0, 1000).inside(), "c=-1 not inside");
        const auto a = encode_ppm(render_escape_image(Region{}, 200, 200, 256, 1));
        const auto b = encode_ppm(render_escape_image(Region{}, 200, 200, 256, 1));
        o.require(a == b, "render is not deterministic");
        o.require(a.rfind("P6\n200 200\n255\n", 0) == 0, "bad PPM header");
        o.require(a.size() == 15 + 3 * 200 * 200, "bad PPM size");
        return o;
    });

    criterion(10, "serialization and verify", 30.0, [] {
        Outcome o;
        const auto dir = std::filesystem::temp_directory_path() / "cantorconj_acceptance";
        std::filesystem::create_directories(dir);
        const auto q = QuadraticParams::from_c(-3.0);
        const auto model_doc = make_document(q, build_model_system(q, 12));
        const auto target_doc = make_document(build_target_system(CantorSpec::middle_thirds(), 12, BuildMode::strict));
        for (const auto* doc : {&model_doc, &target_doc}) {
            const auto path = dir / "system.json";
            save_system(path, *doc);
            const auto first = read_file(path);
            const auto loaded = load_system(path);
            o.require(loaded.system == doc->system, "loaded system differs");
            save_system(path, loaded);
            o.require(read_file(path) == first, "save/load/save bytes differ");
        }
#ifdef CANTORCONJ_CLI
        const auto log = dir / "verify.txt";
        const std::string cmd = std::string("\"") + CANTORCONJ_CLI +
                                "\" verify --c -3 --depth 12 --target middle-thirds > \"" + log.string() + "\" 2>&1";
        const int rc = std::system(cmd.c_str());
        const std::string text = read_file(log);
        o.require(rc == 0, "verify exited with " + std::to_string(rc) + ":\n" + text);
        o.require(text.find("FAIL") == std::string::npos, "verify reported a failure");
        int lines = 0;
        for (char ch : text) {
            lines += ch == '\n' ? 1 : 0;
        }
        o.require(lines >= 9, "verify ran fewer than 9 suites");
#else
        o.require(false, "command-line tool not built");
#endif
        return o;
    });

    std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
