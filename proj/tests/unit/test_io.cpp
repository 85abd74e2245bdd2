#include "cantorconj/errors.hpp"
#include "cantorconj/io.hpp"
#include "cantorconj/model_cantor.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

using namespace cantorconj;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "cantorconj_test_io";
    std::filesystem::create_directories(dir);
    return dir / name;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const SpecError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("shortest round-trip numbers") {
    CHECK(format_shortest(0.1) == "0.1");
    CHECK(format_shortest(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_shortest(-3.0) == "-3");
    CHECK_THROWS_AS(format_shortest(NAN), DomainError);
    CHECK_THROWS_AS(format_shortest(INFINITY), DomainError);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 10000; ++i) {
        const double v = dist(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        REQUIRE(std::stod(format_shortest(v)) == v);
    }
    CHECK(format_17(-0.69722436226800522) == "-0.69722436226800522");
}

TEST_CASE("parse_real and parse_cantor_spec") {
    CHECK(parse_real("1/3") == 1.0L / 3.0L);
    CHECK(parse_real("-3e-1") == -0.3L);
    CHECK_THROWS_AS(parse_real("abc"), SpecError);
    CHECK_THROWS_AS(parse_real("1/0"), SpecError);
    CHECK(parse_cantor_spec("middle-thirds").describe() == "middle-thirds");
    CHECK(parse_cantor_spec("middle-alpha:0.5").describe() == "middle-alpha:0.5");
    CHECK(parse_cantor_spec("affine-ifs2:0.8,0.1").describe() == "affine-ifs2:0.8,0.1");
    CHECK(parse_cantor_spec("fat:0.3,0.5", Interval{-1.0, 1.0}).hull() == Interval{-1.0, 1.0});
    CHECK_THROWS_AS(parse_cantor_spec("sierpinski"), SpecError);
    CHECK_THROWS_AS(parse_cantor_spec("affine-ifs2:0.8"), SpecError);
    CHECK_THROWS_AS(parse_cantor_spec("middle-alpha:2"), SpecError);
}

TEST_CASE("depth-12 model round trip is byte identical") {
    const auto q = QuadraticParams::from_c(-3.0);
    const auto doc = make_document(q, build_model_system(q, 12));
    const auto path = scratch("model12.json");
    save_system(path, doc);
    const auto first = read_file(path);
    const auto loaded = load_system(path);
    CHECK(loaded == doc);
    CHECK(loaded.system == doc.system);
    save_system(path, loaded);
    CHECK(read_file(path) == first);
    CHECK(contains(first, "\"format\": \"cantor-system/1\""));
    CHECK(contains(first, "\"kind\": \"model\""));
}

TEST_CASE("target round trips, including explicit gap trees") {
    for (const auto& spec : {CantorSpec::middle_thirds(), CantorSpec::affine_ifs2(0.8L, 0.1L),
                             CantorSpec::explicit_tree(natural_gap_tree(CantorSpec::fat_cantor(0.3L, 0.5L), 3))}) {
        const auto ts = build_target_system(spec, 12, BuildMode::strict);
        const auto text = serialize_system(make_document(ts));
        const auto doc = parse_system(text);
        CHECK(serialize_system(doc) == text);
        const auto back = to_target_system(doc);
        CHECK(back.system == ts.system);
        CHECK(back.spec.describe() == spec.describe());
    }
}

TEST_CASE("depth-0 target holds exactly the hull") {
    const auto ts = build_target_system(CantorSpec::middle_thirds(), 0, BuildMode::strict);
    const auto text = serialize_system(make_document(ts));
    CHECK(contains(text, "\"levels\": [\n    [[0, 1]]\n  ]"));
    const auto doc = parse_system(text);
    CHECK(doc.system.depth() == 0);
    CHECK(doc.system.level(0).size() == 1);
}

TEST_CASE("system documents are validated") {
    const auto q = QuadraticParams::from_c(-3.0);
    const auto text = serialize_system(make_document(q, build_model_system(q, 2)));

    std::string bad = text;
    bad.replace(bad.find("cantor-system/1"), 15, "cantor-system/2");
    CHECK(contains(error_of([&] { parse_system(bad); }), "/format"));

    bad = text.substr(0, text.size() / 2);
    CHECK(contains(error_of([&] { parse_system(bad); }), "line"));

    // Swap the two level-1 segments: no longer sorted.
    auto doc = parse_system(text);
    const auto l1 = doc.system.level(1);
    const std::string a = "[" + format_shortest(l1[0].lo) + ", " + format_shortest(l1[0].hi) + "]";
    const std::string b = "[" + format_shortest(l1[1].lo) + ", " + format_shortest(l1[1].hi) + "]";
    bad = text;
    bad.replace(bad.find(a + ", " + b), a.size() + 2 + b.size(), b + ", " + a);
    CHECK(contains(error_of([&] { parse_system(bad); }), "/levels/1"));

    bad = text;
    bad.replace(bad.find("\"depth\": 2"), 10, "\"depth\": 3");
    CHECK(contains(error_of([&] { parse_system(bad); }), "/depth"));

    CHECK_THROWS_AS(load_system(scratch("does-not-exist.json")), IOError);
}

TEST_CASE("gap tree files") {
    const auto tree = natural_gap_tree(CantorSpec::middle_thirds(), 3);
    const auto path = scratch("tree.json");
    save_gap_tree(path, tree);
    CHECK(load_gap_tree(path) == tree);
    CHECK(serialize_gap_tree(parse_gap_tree(serialize_gap_tree(tree))) == serialize_gap_tree(tree));
    CHECK(parse_cantor_spec("gaps:" + path.string()).describe() == "gap-tree(depth=3)");
    CHECK_THROWS_AS(parse_cantor_spec("gaps:" + path.string(), Interval{0.0, 2.0}), SpecError);

    GapTree bad = tree;
    bad.gaps[1][1] = {0.1, 0.2}; // outside its parent [2/3, 1]
    const std::string text = [&] {
        std::string t = serialize_gap_tree(tree);
        const auto g = tree.gaps[1][1];
        const std::string old = "[" + format_shortest(g.lo) + ", " + format_shortest(g.hi) + "]";
        t.replace(t.find(old), old.size(), "[0.1, 0.2]");
        return t;
    }();
    CHECK_THROWS_AS(parse_gap_tree(text), SpecError);
    CHECK(contains(error_of([&] { parse_gap_tree(text); }), "/gaps"));
    CHECK_THROWS_AS(natural_gap_tree(CantorSpec::middle_thirds(), 31), DomainError);
}

TEST_CASE("cobweb CSV and SVG") {
    const auto qh = QuadraticParams::from_c(0.5);
    const auto f = [&](double x) { return eval_map(qh, x); };
    const auto csv = render_cobweb_csv(cobweb_trace(f, 0.0, 5));
    CHECK(csv.rfind("x0,y0,x1,y1\n", 0) == 0);
    CHECK(contains(csv, "\n0,0.5,0.5,0.5\n"));
    CHECK(contains(csv, "\n0.5,0.75,0.75,0.75\n"));
    CHECK(contains(csv, "\n0.75,1.0625,1.0625,1.0625\n"));

    const auto svg = render_cobweb_svg(cobweb_trace(f, 0.0, 5), f);
    CHECK(contains(svg, "<svg"));
    CHECK(contains(svg, "version=\"1.1\""));
    CHECK(contains(svg, "class=\"diagonal\""));
    CHECK(contains(svg, "class=\"trace\""));
    const auto map_at = svg.find("class=\"map\"");
    REQUIRE(map_at != std::string::npos);
    const auto pts_at = svg.find("points=\"", map_at) + 8;
    const auto pts = svg.substr(pts_at, svg.find('"', pts_at) - pts_at);
    CHECK(std::count(pts.begin(), pts.end(), ',') >= 512);

    const auto q3 = QuadraticParams::from_c(-3.0);
    const auto g = [&](double x) { return eval_map(q3, x); };
    const auto pinned = render_cobweb_svg(cobweb_trace(g, q3.p, 3), g);
    CHECK(contains(pinned, "<circle"));
    CHECK_FALSE(contains(pinned, "class=\"trace\""));

    CHECK_THROWS_AS(render_cobweb_csv({}), DomainError);
    CHECK_THROWS_AS(export_cobweb(cobweb_trace(f, 0.0, 2), f, "/nonexistent-dir/x.csv", PlotFormat::csv), IOError);
}

TEST_CASE("escape-time PPM") {
    const Region region;
    const auto image = render_escape_image(region, 200, 200, 256);
    const auto ppm = encode_ppm(image);
    const std::string header = "P6\n200 200\n255\n";
    REQUIRE(ppm.rfind(header, 0) == 0);
    CHECK(ppm.size() == header.size() + 3u * 200 * 200);
    CHECK(encode_ppm(render_escape_image(region, 200, 200, 256, 4)) == ppm);

    auto nearest = [&](double re, double im) {
        int best_col = 0;
        int best_row = 0;
        for (int col = 0; col < 200; ++col) {
            if (std::abs(pixel_re(region, 200, col) - re) < std::abs(pixel_re(region, 200, best_col) - re)) {
                best_col = col;
            }
        }
        for (int row = 0; row < 200; ++row) {
            if (std::abs(pixel_im(region, 200, row) - im) < std::abs(pixel_im(region, 200, best_row) - im)) {
                best_row = row;
            }
        }
        return std::pair{best_col, best_row};
    };
    auto rgb = [&](int col, int row) {
        const std::size_t at = header.size() + 3u * (static_cast<std::size_t>(row) * 200 + col);
        return std::array<std::uint8_t, 3>{static_cast<std::uint8_t>(ppm[at]), static_cast<std::uint8_t>(ppm[at + 1]),
                                           static_cast<std::uint8_t>(ppm[at + 2])};
    };

    const auto [c0, r0] = nearest(0.0, 0.0);
    CHECK(image.at(c0, r0) == -1);
    CHECK(rgb(c0, r0) == std::array<std::uint8_t, 3>{0, 0, 0});

    const auto [c1, r1] = nearest(1.0, 0.0);
    CHECK(image.at(c1, r1) == 3);
    CHECK(rgb(c1, r1) == escape_colour(3));
    CHECK(rgb(c1, r1) != std::array<std::uint8_t, 3>{0, 0, 0});

    for (int k = 0; k < 64; ++k) {
        CHECK(escape_colour(k) != std::array<std::uint8_t, 3>{0, 0, 0});
    }

    const auto path = scratch("m.ppm");
    export_escape_image(image, path);
    CHECK(read_file(path) == ppm);
    CHECK_THROWS_AS(export_escape_image(image, "/nonexistent-dir/m.ppm"), IOError);
}
