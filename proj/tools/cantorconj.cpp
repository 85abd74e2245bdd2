// cantorconj: command-line front end for the Cantor set / conjugacy library.

#include "cantorconj/conjugacy.hpp"
#include "cantorconj/errors.hpp"
#include "cantorconj/io.hpp"
#include "cantorconj/model_cantor.hpp"
#include "cantorconj/orbit_engine.hpp"
#include "cantorconj/quadratic_map.hpp"
#include "cantorconj/target_cantor.hpp"
#include "cantorconj/verify.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cc = cantorconj;

namespace {

struct RunConfig {
    double c = -3.0;
    int depth = 12;
    std::string target = "middle-thirds";
    std::string mode = "strict";
    std::vector<double> hull;
    std::string out;

    std::vector<double> eval;
    std::vector<double> inverse;
    int samples = 0;

    double x0 = 0.0;
    int max_iter = 100;
    std::string space = "model";
    bool trajectory = false;

    double lo = 0.0;
    double hi = 1.0;
    int points = 1001;

    int steps = 5;
    std::string format = "csv";

    int width = 200;
    int height = 200;
    double re_min = -2.5;
    double re_max = 1.0;
    double im_min = -1.75;
    double im_max = 1.75;
    std::vector<double> point;
    unsigned threads = 1;
};

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        cc::write_file(cfg.out, text);
    }
}

cc::BuildMode build_mode(const RunConfig& cfg) {
    return cfg.mode == "natural" ? cc::BuildMode::natural : cc::BuildMode::strict;
}

cc::CantorSpec target_spec(const RunConfig& cfg) {
    std::optional<cc::Interval> hull;
    if (!cfg.hull.empty()) {
        hull = cc::Interval{cfg.hull.at(0), cfg.hull.at(1)};
    }
    return cc::parse_cantor_spec(cfg.target, hull);
}

struct Conjugacy {
    cc::QuadraticParams params;
    cc::IntervalSystem model;
    cc::TargetSystem target;
    cc::MonotonePLMap phi;
};

Conjugacy make_conjugacy(const RunConfig& cfg) {
    const auto params = cc::QuadraticParams::from_c(cfg.c);
    auto model = cc::build_model_system(params, cfg.depth);
    auto target = cc::build_target_system(target_spec(cfg), cfg.depth, build_mode(cfg));
    auto phi = cc::build_phi(model, target, cfg.depth);
    return {params, std::move(model), std::move(target), std::move(phi)};
}

std::string outcome_text(const cc::OrbitResult& r) {
    return r.escaped() ? "escaped " + std::to_string(r.iterations()) : "bounded " + std::to_string(r.iterations());
}

// `samples` rows over the span of `knots` widened by a quarter on each side.
std::string sampled_table(std::span<const double> knots, const std::function<double(double)>& fn, int samples,
                          const std::string& header) {
    const double lo = knots.front() - 0.25 * (knots.back() - knots.front());
    const double hi = knots.back() + 0.25 * (knots.back() - knots.front());
    std::string out = header;
    for (int i = 0; i < samples; ++i) {
        const double v = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
        out += cc::format_17(v) + "," + cc::format_17(fn(v)) + "\n";
    }
    return out;
}

int run(const std::string& command, const RunConfig& cfg) {
    if (command == "build-model") {
        const auto params = cc::QuadraticParams::from_c(cfg.c);
        emit(cfg, cc::serialize_system(cc::make_document(params, cc::build_model_system(params, cfg.depth))));
        return 0;
    }
    if (command == "build-target") {
        emit(cfg, cc::serialize_system(cc::make_document(cc::build_target_system(target_spec(cfg), cfg.depth, build_mode(cfg)))));
        return 0;
    }
    if (command == "phi" || command == "fstar") {
        const Conjugacy conj = make_conjugacy(cfg);
        std::function<double(double)> fn;
        if (command == "phi") {
            fn = [&](double x) { return cc::eval_phi(conj.phi, x); };
        } else {
            fn = [&](double y) { return cc::eval_fstar(conj.phi, conj.params, y); };
        }
        for (double v : cfg.eval) {
            std::cout << cc::format_17(fn(v)) << "\n";
        }
        for (double v : cfg.inverse) {
            std::cout << cc::format_17(cc::eval_phi_inverse(conj.phi, v)) << "\n";
        }
        if (cfg.samples > 0) {
            if (command == "phi") {
                emit(cfg, sampled_table(conj.phi.knots_x(), fn, cfg.samples, "x,phi\n"));
            } else {
                emit(cfg, sampled_table(conj.phi.knots_y(), fn, cfg.samples, "y,fstar\n"));
            }
        }
        return 0;
    }
    if (command == "iterate") {
        cc::OrbitResult r;
        if (cfg.space == "model") {
            r = cc::iterate_model(cc::QuadraticParams::from_c(cfg.c), cfg.x0, cfg.max_iter, cfg.trajectory);
        } else {
            const Conjugacy conj = make_conjugacy(cfg);
            r = cc::iterate_target(conj.phi, conj.params, cfg.x0, cfg.max_iter, cfg.trajectory);
        }
        std::cout << outcome_text(r) << "\n";
        for (double v : r.trajectory) {
            std::cout << cc::format_17(v) << "\n";
        }
        return 0;
    }
    if (command == "classify") {
        std::optional<Conjugacy> conj;
        const auto params = cc::QuadraticParams::from_c(cfg.c);
        if (cfg.space != "model") {
            conj = make_conjugacy(cfg);
        }
        auto classify = [&](double v) {
            return conj ? cc::iterate_target(conj->phi, params, v, cfg.max_iter)
                        : cc::iterate_model(params, v, cfg.max_iter);
        };
        const auto table = cc::classify_grid(classify, {cfg.lo, cfg.hi}, cfg.points, cfg.threads);
        std::string out = "x,outcome,iterations\n";
        for (const auto& s : table) {
            out += cc::format_17(s.x) + (s.result.escaped() ? ",escaped," : ",bounded,") +
                   std::to_string(s.result.iterations()) + "\n";
        }
        emit(cfg, out);
        return 0;
    }
    if (command == "cobweb") {
        const auto params = cc::QuadraticParams::from_c(cfg.c);
        std::optional<Conjugacy> conj;
        std::function<double(double)> f = [&](double x) { return cc::eval_map(params, x); };
        if (cfg.space != "model") {
            conj = make_conjugacy(cfg);
            f = [&](double y) { return cc::eval_fstar(conj->phi, params, y); };
        }
        const auto trace = cc::cobweb_trace(f, cfg.x0, cfg.steps);
        emit(cfg, cfg.format == "svg" ? cc::render_cobweb_svg(trace, f) : cc::render_cobweb_csv(trace));
        return 0;
    }
    if (command == "mandelbrot") {
        if (!cfg.point.empty()) {
            const auto t = cc::mandelbrot_escape(cfg.point.at(0), cfg.point.at(1), cfg.max_iter);
            std::cout << (t.inside() ? std::string("inside") : "escaped " + std::to_string(*t.escaped_at)) << "\n";
            return 0;
        }
        if (cfg.out.empty()) {
            throw CLI::ValidationError("--out", "mandelbrot image needs --out");
        }
        const cc::Region region{cfg.re_min, cfg.re_max, cfg.im_min, cfg.im_max};
        cc::export_escape_image(cc::render_escape_image(region, cfg.width, cfg.height, cfg.max_iter, cfg.threads),
                                cfg.out);
        return 0;
    }
    if (command == "verify") {
        const auto results = cc::run_verification(cfg.c, target_spec(cfg), build_mode(cfg), cfg.depth);
        bool all = true;
        for (const auto& r : results) {
            all = all && r.pass;
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.seconds << " s): " << r.detail << "\n";
        }
        return all ? 0 : 2;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cantor sets of x^2 + c, target Cantor sets and the conjugacy between them"};
    app.set_config("--config", "", "file of key=value lines; command-line flags take precedence");
    app.require_subcommand(1, 1);

    RunConfig cfg;
    app.add_option("--c", cfg.c, "map parameter c (Cantor regime needs 2 sqrt(-p - c) > 1)")->capture_default_str();
    app.add_option("--depth", cfg.depth, "refinement depth N")->check(CLI::Range(0, 48))->capture_default_str();
    app.add_option("--target", cfg.target,
                   "middle-thirds | middle-alpha:A | affine-ifs2:R1,R2 | fat:G0,DECAY | gaps:PATH")
        ->capture_default_str();
    app.add_option("--mode", cfg.mode, "target refinement mode")
        ->check(CLI::IsMember({"strict", "natural"}))
        ->capture_default_str();
    app.add_option("--hull", cfg.hull, "hull a,b of a family target")->expected(2)->delimiter(',');
    app.add_option("--out", cfg.out, "output file (default: standard output)");
    app.add_option("--max-iter", cfg.max_iter, "iteration budget")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads for grids and images")->check(CLI::Range(1u, 256u));

    std::map<std::string, CLI::App*> commands;
    auto add = [&](const char* name, const char* help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        commands[name] = sub;
        return sub;
    };

    add("build-model", "write the model interval system (cantor-system/1)");
    add("build-target", "write the target interval system (cantor-system/1)");
    for (const char* name : {"phi", "fstar"}) {
        auto* sub = add(name, std::string(name) == "phi" ? "evaluate the conjugating map" : "evaluate F* = phi F phi^-1");
        sub->add_option("--eval", cfg.eval, "points to evaluate");
        sub->add_option("--samples", cfg.samples, "write a sampled CSV table with this many rows")
            ->check(CLI::NonNegativeNumber);
        if (std::string(name) == "phi") {
            sub->add_option("--inverse", cfg.inverse, "points at which to evaluate the inverse");
        }
    }
    auto* iterate = add("iterate", "iterate F_c (model space) or F* (target space)");
    iterate->add_option("--x0", cfg.x0, "starting point")->required();
    iterate->add_option("--space", cfg.space)->check(CLI::IsMember({"model", "target"}))->capture_default_str();
    iterate->add_flag("--trajectory", cfg.trajectory, "print the iterates");

    auto* classify = add("classify", "classify a uniform grid as bounded/escaped");
    classify->add_option("--lo", cfg.lo)->capture_default_str();
    classify->add_option("--hi", cfg.hi)->capture_default_str();
    classify->add_option("--points", cfg.points)->check(CLI::Range(2, 100000000))->capture_default_str();
    classify->add_option("--space", cfg.space)->check(CLI::IsMember({"model", "target"}))->capture_default_str();

    auto* cobweb = add("cobweb", "graphical-analysis trace as CSV or SVG");
    cobweb->add_option("--x0", cfg.x0)->capture_default_str();
    cobweb->add_option("--steps", cfg.steps)->check(CLI::PositiveNumber)->capture_default_str();
    cobweb->add_option("--space", cfg.space)->check(CLI::IsMember({"model", "target"}))->capture_default_str();
    cobweb->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "svg"}))->capture_default_str();

    auto* mandel = add("mandelbrot", "escape-time image (binary PPM) or a single parameter");
    mandel->add_option("--width", cfg.width)->check(CLI::PositiveNumber)->capture_default_str();
    mandel->add_option("--height", cfg.height)->check(CLI::PositiveNumber)->capture_default_str();
    mandel->add_option("--re-min", cfg.re_min)->capture_default_str();
    mandel->add_option("--re-max", cfg.re_max)->capture_default_str();
    mandel->add_option("--im-min", cfg.im_min)->capture_default_str();
    mandel->add_option("--im-max", cfg.im_max)->capture_default_str();
    mandel->add_option("--point", cfg.point, "single parameter re,im")->expected(2)->delimiter(',');

    add("verify", "run every invariant suite and report PASS/FAIL");

    std::cout.precision(6);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    std::string command;
    for (const auto& [name, sub] : commands) {
        if (sub->parsed()) {
            command = name;
        }
    }
    // --max-iter shares a default with 'iterate'; the renderer defaults to 256.
    if (command == "mandelbrot" && app.get_option("--max-iter")->count() == 0) {
        cfg.max_iter = 256;
    }
    try {
        return run(command, cfg);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const cc::RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 2;
    } catch (const cc::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return 2;
    } catch (const cc::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const cc::IOError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    }
}
