#include "cantorconj/conjugacy.hpp"
#include "cantorconj/errors.hpp"
#include "cantorconj/io.hpp"
#include "cantorconj/model_cantor.hpp"
#include "cantorconj/orbit_engine.hpp"
#include "cantorconj/quadratic_map.hpp"
#include "cantorconj/target_cantor.hpp"
#include "cantorconj/verify.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
namespace cc = cantorconj;

namespace {

std::vector<std::pair<double, double>> as_pairs(std::span<const cc::Interval> row) {
    std::vector<std::pair<double, double>> out;
    out.reserve(row.size());
    for (const auto& i : row) {
        out.emplace_back(i.lo, i.hi);
    }
    return out;
}

py::object outcome(const cc::OrbitResult& r) {
    return py::make_tuple(r.escaped() ? "escaped" : "bounded", r.iterations());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cantor sets of x^2 + c, target Cantor sets and the piecewise-linear conjugacy between them";

    auto base = py::register_exception<cc::DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<cc::NoRealFixedPoint>(m, "NoRealFixedPoint", base.ptr());
    py::register_exception<cc::RegimeError>(m, "RegimeError", PyExc_RuntimeError);
    py::register_exception<cc::SpecError>(m, "SpecError", PyExc_RuntimeError);
    py::register_exception<cc::IOError>(m, "IOError", PyExc_OSError);

    py::class_<cc::QuadraticParams>(m, "QuadraticParams")
        .def(py::init(&cc::QuadraticParams::from_c), py::arg("c"))
        .def_readonly("c", &cc::QuadraticParams::c)
        .def_readonly("p", &cc::QuadraticParams::p)
        .def_readonly("s", &cc::QuadraticParams::s)
        .def_readonly("lam", &cc::QuadraticParams::lambda)
        .def_readonly("escape_radius", &cc::QuadraticParams::escape_radius)
        .def("__repr__", [](const cc::QuadraticParams& q) {
            return "QuadraticParams(c=" + cc::format_17(q.c) + ", p=" + cc::format_17(q.p) + ")";
        });

    m.def("fixed_points", [](double c) {
        const auto fp = cc::fixed_points(c);
        return py::make_tuple(fp.lower, fp.upper);
    }, py::arg("c"));
    m.def("eval_map", &cc::eval_map, py::arg("params"), py::arg("x"));
    m.def("escape_gap", [](const cc::QuadraticParams& q) -> py::object {
        if (auto g = cc::escape_gap(q)) {
            return py::make_tuple(g->lo, g->hi);
        }
        return py::none();
    }, py::arg("params"));
    m.def("expansion_bound", [](const cc::QuadraticParams& q) {
        const auto b = cc::expansion_bound(q);
        return py::make_tuple(b.lambda, b.certified);
    }, py::arg("params"));

    py::class_<cc::IntervalSystem>(m, "IntervalSystem")
        .def_property_readonly("depth", &cc::IntervalSystem::depth)
        .def_property_readonly("hull", [](const cc::IntervalSystem& s) {
            return std::make_pair(s.hull().lo, s.hull().hi);
        })
        .def("level", [](const cc::IntervalSystem& s, int n) { return as_pairs(s.level(n)); }, py::arg("n"))
        .def("gaps", [](const cc::IntervalSystem& s, int n) { return as_pairs(s.gaps(n)); }, py::arg("n"))
        .def("max_segment_length", &cc::IntervalSystem::max_segment_length, py::arg("n"))
        .def("endpoints", &cc::IntervalSystem::endpoints, py::arg("n"));

    m.def("preimage_interval", [](const cc::QuadraticParams& q, double u, double v) {
        auto [l, r] = cc::preimage_interval(q, {u, v});
        return py::make_tuple(py::make_tuple(l.lo, l.hi), py::make_tuple(r.lo, r.hi));
    }, py::arg("params"), py::arg("u"), py::arg("v"));
    m.def("build_model_system", &cc::build_model_system, py::arg("params"), py::arg("depth"));

    py::class_<cc::CantorSpec>(m, "CantorSpec")
        .def_static("middle_thirds", [] { return cc::CantorSpec::middle_thirds(); })
        .def_static("parse", [](const std::string& text) { return cc::parse_cantor_spec(text); }, py::arg("text"))
        .def_property_readonly("hull", [](const cc::CantorSpec& s) { return std::make_pair(s.hull().lo, s.hull().hi); })
        .def("describe", &cc::CantorSpec::describe)
        .def("__repr__", [](const cc::CantorSpec& s) { return "CantorSpec('" + s.describe() + "')"; });

    m.def("membership", [](const cc::CantorSpec& s, double x, int depth) {
        return cc::membership(s, x, depth) == cc::Membership::in;
    }, py::arg("spec"), py::arg("x"), py::arg("depth"));
    m.def("find_gap_in_middle_third", [](const cc::CantorSpec& s, double c, double d) {
        const auto g = cc::find_gap_in_middle_third(s, {c, d});
        return py::make_tuple(g.lo, g.hi);
    }, py::arg("spec"), py::arg("c"), py::arg("d"));
    m.def("tighten_gap", [](const cc::CantorSpec& s, double e, double f, std::optional<double> tol) {
        const auto g = cc::tighten_gap(s, {e, f}, tol.value_or(cc::default_tighten_tol(s)));
        return py::make_tuple(g.lo, g.hi);
    }, py::arg("spec"), py::arg("e"), py::arg("f"), py::arg("tol") = py::none());

    py::class_<cc::TargetSystem>(m, "TargetSystem")
        .def_property_readonly("system", [](const cc::TargetSystem& t) { return t.system; })
        .def_property_readonly("mode", [](const cc::TargetSystem& t) { return std::string(cc::to_string(t.mode)); })
        .def_property_readonly("spec", [](const cc::TargetSystem& t) { return t.spec; });
    m.def("build_target_system", [](const cc::CantorSpec& s, int depth, const std::string& mode) {
        if (mode != "strict" && mode != "natural") {
            throw cc::DomainError("mode must be 'strict' or 'natural'");
        }
        return cc::build_target_system(s, depth, mode == "strict" ? cc::BuildMode::strict : cc::BuildMode::natural);
    }, py::arg("spec"), py::arg("depth"), py::arg("mode") = "strict");

    py::class_<cc::MonotonePLMap>(m, "MonotonePLMap")
        .def("__call__", &cc::MonotonePLMap::operator(), py::arg("x"))
        .def("inverse", &cc::MonotonePLMap::inverse, py::arg("y"))
        .def_property_readonly("err_bound", &cc::MonotonePLMap::err_bound)
        .def_property_readonly("knot_count", [](const cc::MonotonePLMap& p) { return p.knots_x().size(); });
    m.def("build_phi", [](const cc::IntervalSystem& model, const cc::TargetSystem& target, int depth) {
        return cc::build_phi(model, target, depth);
    }, py::arg("model"), py::arg("target"), py::arg("depth"));
    m.def("eval_fstar", &cc::eval_fstar, py::arg("phi"), py::arg("params"), py::arg("y"));

    m.def("iterate_model", [](const cc::QuadraticParams& q, double x0, int max_iter, bool trajectory) {
        const auto r = cc::iterate_model(q, x0, max_iter, trajectory);
        return py::make_tuple(outcome(r), r.trajectory);
    }, py::arg("params"), py::arg("x0"), py::arg("max_iter"), py::arg("trajectory") = false);
    m.def("iterate_target", [](const cc::MonotonePLMap& phi, const cc::QuadraticParams& q, double y0, int max_iter,
                               bool trajectory) {
        const auto r = cc::iterate_target(phi, q, y0, max_iter, trajectory);
        return py::make_tuple(outcome(r), r.trajectory);
    }, py::arg("phi"), py::arg("params"), py::arg("y0"), py::arg("max_iter"), py::arg("trajectory") = false);
    m.def("cobweb_trace", [](const std::function<double(double)>& f, double x0, int steps) {
        std::vector<std::tuple<double, double, double, double>> out;
        for (const auto& s : cc::cobweb_trace(f, x0, steps)) {
            out.emplace_back(s.x0, s.y0, s.x1, s.y1);
        }
        return out;
    }, py::arg("f"), py::arg("x0"), py::arg("steps"));
    m.def("mandelbrot_escape", [](double re, double im, int max_iter, double bailout) -> py::object {
        const auto t = cc::mandelbrot_escape(re, im, max_iter, bailout);
        if (t.inside()) {
            return py::none();
        }
        return py::int_(*t.escaped_at);
    }, py::arg("c_re"), py::arg("c_im"), py::arg("max_iter"), py::arg("bailout") = 2.0,
       "Escape iteration, or None when the orbit stays within the bailout for max_iter steps.");
    m.def("escape_image_ppm", [](double re_min, double re_max, double im_min, double im_max, int width, int height,
                                 int max_iter) {
        const auto image = cc::render_escape_image({re_min, re_max, im_min, im_max}, width, height, max_iter);
        return py::bytes(cc::encode_ppm(image));
    }, py::arg("re_min"), py::arg("re_max"), py::arg("im_min"), py::arg("im_max"), py::arg("width"),
       py::arg("height"), py::arg("max_iter"));

    m.def("save_model", [](const std::filesystem::path& path, const cc::QuadraticParams& q, const cc::IntervalSystem& s) {
        cc::save_system(path, cc::make_document(q, s));
    }, py::arg("path"), py::arg("params"), py::arg("system"));
    m.def("save_target", [](const std::filesystem::path& path, const cc::TargetSystem& t) {
        cc::save_system(path, cc::make_document(t));
    }, py::arg("path"), py::arg("target"));
    m.def("load_system", [](const std::filesystem::path& path) { return cc::load_system(path).system; }, py::arg("path"));

    m.def("verify", [](double c, const cc::CantorSpec& s, int depth) {
        std::vector<std::tuple<std::string, bool, std::string>> out;
        for (const auto& r : cc::run_verification(c, s, cc::BuildMode::strict, depth)) {
            out.emplace_back(r.name, r.pass, r.detail);
        }
        return out;
    }, py::arg("c") = -3.0, py::arg("spec") = cc::CantorSpec::middle_thirds(), py::arg("depth") = 12);
}
