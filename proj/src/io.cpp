#include "cantorconj/io.hpp"

#include "cantorconj/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace cantorconj {

using nlohmann::json;

std::string format_shortest(double v) {
    if (!std::isfinite(v)) {
        throw DomainError("cannot serialize a non-finite number");
    }
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

long double parse_real(std::string_view text) {
    auto parse_one = [&](std::string_view part) {
        const std::string s(part);
        char* end = nullptr;
        const long double v = std::strtold(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) {
            throw SpecError("not a number: '" + std::string(text) + "'");
        }
        return v;
    };
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const long double den = parse_one(text.substr(slash + 1));
        if (den == 0.0L) {
            throw SpecError("zero denominator in '" + std::string(text) + "'");
        }
        return parse_one(text.substr(0, slash)) / den;
    }
    return parse_one(text);
}

namespace {

std::vector<long double> parse_list(std::string_view text, std::size_t expected, std::string_view family) {
    std::vector<long double> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(parse_real(text.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    if (out.size() != expected) {
        throw SpecError(std::string(family) + ": expected " + std::to_string(expected) + " parameters");
    }
    return out;
}

} // namespace

CantorSpec parse_cantor_spec(std::string_view text, std::optional<Interval> hull) {
    const Interval h = hull.value_or(Interval{0.0, 1.0});
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (name == "middle-thirds" && colon == std::string_view::npos) {
        return CantorSpec::middle_thirds(h);
    }
    if (name == "middle-alpha") {
        return CantorSpec::middle_alpha(parse_list(args, 1, name)[0], h);
    }
    if (name == "affine-ifs2") {
        const auto r = parse_list(args, 2, name);
        return CantorSpec::affine_ifs2(r[0], r[1], h);
    }
    if (name == "fat") {
        const auto g = parse_list(args, 2, name);
        return CantorSpec::fat_cantor(g[0], g[1], h);
    }
    if (name == "gaps") {
        if (hull) {
            throw SpecError("gaps: the hull comes from the gap-tree file");
        }
        return CantorSpec::explicit_tree(load_gap_tree(std::string(args)));
    }
    throw SpecError("unknown Cantor set '" + std::string(text) +
                    "' (expected middle-thirds, middle-alpha:A, affine-ifs2:R1,R2, fat:G0,DECAY or gaps:PATH)");
}

// ---------------------------------------------------------------------------
// JSON helpers

namespace {

std::string pair_text(Interval i) { return "[" + format_shortest(i.lo) + ", " + format_shortest(i.hi) + "]"; }

void write_rows(std::ostringstream& out, const char* key, const std::vector<std::vector<Interval>>& rows, bool last) {
    out << "  \"" << key << "\": [";
    for (std::size_t n = 0; n < rows.size(); ++n) {
        out << (n == 0 ? "\n" : ",\n") << "    [";
        for (std::size_t j = 0; j < rows[n].size(); ++j) {
            out << (j == 0 ? "" : ", ") << pair_text(rows[n][j]);
        }
        out << "]";
    }
    out << (rows.empty() ? "]" : "\n  ]") << (last ? "\n" : ",\n");
}

std::vector<std::vector<Interval>> copy_levels(const IntervalSystem& s, bool gaps) {
    std::vector<std::vector<Interval>> out;
    for (int n = 0; n <= s.depth(); ++n) {
        const auto row = gaps ? s.gaps(n) : s.level(n);
        out.emplace_back(row.begin(), row.end());
    }
    return out;
}

json parse_json(std::string_view text, std::string_view what) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw SpecError(std::string(what) + ": " + e.what());
    }
}

[[noreturn]] void fail(std::string_view what, const std::string& path, const std::string& msg) {
    throw SpecError(std::string(what) + ": " + path + ": " + msg);
}

const json& member(const json& obj, const char* key, std::string_view what, const std::string& path = "") {
    if (!obj.is_object() || !obj.contains(key)) {
        fail(what, path + "/" + key, "missing");
    }
    return obj.at(key);
}

double number_at(const json& v, std::string_view what, const std::string& path) {
    if (!v.is_number()) {
        fail(what, path, "expected a number");
    }
    return v.get<double>();
}

Interval pair_at(const json& v, std::string_view what, const std::string& path) {
    if (!v.is_array() || v.size() != 2) {
        fail(what, path, "expected a [lo, hi] pair");
    }
    return {number_at(v[0], what, path + "/0"), number_at(v[1], what, path + "/1")};
}

std::vector<std::vector<Interval>> rows_at(const json& v, std::string_view what, const std::string& path) {
    if (!v.is_array()) {
        fail(what, path, "expected an array of levels");
    }
    std::vector<std::vector<Interval>> rows;
    for (std::size_t n = 0; n < v.size(); ++n) {
        const std::string p = path + "/" + std::to_string(n);
        if (!v[n].is_array()) {
            fail(what, p, "expected an array of pairs");
        }
        std::vector<Interval> row;
        row.reserve(v[n].size());
        for (std::size_t j = 0; j < v[n].size(); ++j) {
            row.push_back(pair_at(v[n][j], what, p + "/" + std::to_string(j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void check_format(const json& root, std::string_view expected, std::string_view what) {
    const json& f = member(root, "format", what);
    if (!f.is_string() || f.get<std::string>() != expected) {
        fail(what, "/format", "expected \"" + std::string(expected) + "\", found " + f.dump());
    }
}

std::string gap_tree_body(const GapTree& tree, const std::string& indent) {
    std::ostringstream out;
    out << indent << "\"hull\": " << pair_text(tree.hull) << ",\n" << indent << "\"gaps\": [";
    for (std::size_t k = 0; k < tree.gaps.size(); ++k) {
        out << (k == 0 ? "\n" : ",\n") << indent << "  [";
        for (std::size_t j = 0; j < tree.gaps[k].size(); ++j) {
            out << (j == 0 ? "" : ", ") << pair_text(tree.gaps[k][j]);
        }
        out << "]";
    }
    out << (tree.gaps.empty() ? "]" : "\n" + indent + "]");
    return out.str();
}

GapTree gap_tree_from(const json& obj, std::string_view what, const std::string& path) {
    GapTree tree;
    tree.hull = pair_at(member(obj, "hull", what, path), what, path + "/hull");
    tree.gaps = rows_at(member(obj, "gaps", what, path), what, path + "/gaps");
    try {
        validate_gap_tree(tree);
    } catch (const SpecError& e) {
        fail(what, path + "/gaps", e.what());
    }
    return tree;
}

} // namespace

SystemDocument make_document(const QuadraticParams& params, const IntervalSystem& model) {
    SystemDocument doc;
    doc.kind = SystemKind::model;
    doc.system = model;
    doc.c = params.c;
    return doc;
}

SystemDocument make_document(const TargetSystem& target) {
    SystemDocument doc;
    doc.kind = SystemKind::target;
    doc.system = target.system;
    doc.spec = target.spec.describe();
    doc.mode = target.mode;
    if (const auto* t = std::get_if<CantorSpec::ExplicitGapTree>(&target.spec.family())) {
        doc.gap_tree = *t->tree;
    }
    return doc;
}

std::string serialize_system(const SystemDocument& doc) {
    std::ostringstream out;
    out << "{\n  \"format\": \"" << kSystemFormat << "\",\n";
    out << "  \"kind\": \"" << (doc.kind == SystemKind::model ? "model" : "target") << "\",\n";
    out << "  \"parameters\": {";
    if (doc.kind == SystemKind::model) {
        out << "\"c\": " << format_shortest(doc.c) << "},\n";
    } else {
        out << "\n    \"spec\": " << json(doc.spec).dump() << ",\n";
        out << "    \"mode\": \"" << to_string(doc.mode) << "\",\n";
        out << "    \"hull\": " << pair_text(doc.system.hull());
        if (doc.gap_tree) {
            out << ",\n    \"gap_tree\": {\n      \"format\": \"" << kGapTreeFormat << "\",\n"
                << gap_tree_body(*doc.gap_tree, "      ") << "\n    }";
        }
        out << "\n  },\n";
    }
    out << "  \"depth\": " << doc.system.depth() << ",\n";
    write_rows(out, "levels", copy_levels(doc.system, false), false);
    write_rows(out, "gaps", copy_levels(doc.system, true), true);
    out << "}\n";
    return out.str();
}

SystemDocument parse_system(std::string_view text) {
    constexpr std::string_view what = "cantor-system";
    const json root = parse_json(text, what);
    check_format(root, kSystemFormat, what);

    SystemDocument doc;
    const json& kind = member(root, "kind", what);
    if (kind == "model") {
        doc.kind = SystemKind::model;
    } else if (kind == "target") {
        doc.kind = SystemKind::target;
    } else {
        fail(what, "/kind", "expected \"model\" or \"target\"");
    }
    const json& params = member(root, "parameters", what);
    if (doc.kind == SystemKind::model) {
        doc.c = number_at(member(params, "c", what, "/parameters"), what, "/parameters/c");
    } else {
        const json& spec = member(params, "spec", what, "/parameters");
        if (!spec.is_string()) {
            fail(what, "/parameters/spec", "expected a string");
        }
        doc.spec = spec.get<std::string>();
        const json& mode = member(params, "mode", what, "/parameters");
        if (mode == "strict") {
            doc.mode = BuildMode::strict;
        } else if (mode == "natural") {
            doc.mode = BuildMode::natural;
        } else {
            fail(what, "/parameters/mode", "expected \"strict\" or \"natural\"");
        }
        if (params.contains("gap_tree")) {
            const json& gt = params.at("gap_tree");
            check_format(gt, kGapTreeFormat, what);
            doc.gap_tree = gap_tree_from(gt, what, "/parameters/gap_tree");
        }
    }

    const auto levels = rows_at(member(root, "levels", what), what, "/levels");
    const auto gaps = rows_at(member(root, "gaps", what), what, "/gaps");
    const json& depth = member(root, "depth", what);
    if (!depth.is_number_integer() || depth.get<long long>() + 1 != static_cast<long long>(levels.size())) {
        fail(what, "/depth", "must equal the number of levels minus one");
    }
    if (levels.empty() || levels[0].size() != 1) {
        fail(what, "/levels/0", "level 0 must hold exactly the hull");
    }
    if (gaps.size() != levels.size()) {
        fail(what, "/gaps", "must have one entry per level");
    }
    try {
        doc.system = IntervalSystem(levels[0][0]);
    } catch (const DomainError& e) {
        fail(what, "/levels/0/0", e.what());
    }
    if (!gaps[0].empty()) {
        fail(what, "/gaps/0", "level 0 has no gaps");
    }
    for (std::size_t n = 1; n < levels.size(); ++n) {
        try {
            doc.system.push_level(levels[n]);
        } catch (const DomainError& e) {
            fail(what, "/levels/" + std::to_string(n), e.what());
        }
        const auto derived = doc.system.gaps(static_cast<int>(n));
        if (!std::equal(derived.begin(), derived.end(), gaps[n].begin(), gaps[n].end())) {
            fail(what, "/gaps/" + std::to_string(n), "gaps do not match the holes between sibling segments");
        }
    }
    if (doc.kind == SystemKind::target && doc.gap_tree && doc.gap_tree->hull != doc.system.hull()) {
        fail(what, "/parameters/gap_tree/hull", "differs from level 0");
    }
    return doc;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IOError("cannot open '" + path.string() + "' for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw IOError("write to '" + path.string() + "' failed");
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IOError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void save_system(const std::filesystem::path& path, const SystemDocument& doc) {
    write_file(path, serialize_system(doc));
}

SystemDocument load_system(const std::filesystem::path& path) { return parse_system(read_file(path)); }

TargetSystem to_target_system(const SystemDocument& doc) {
    if (doc.kind != SystemKind::target) {
        throw SpecError("cantor-system: document holds a model system, not a target");
    }
    CantorSpec spec = doc.gap_tree ? CantorSpec::explicit_tree(*doc.gap_tree)
                                   : parse_cantor_spec(doc.spec, doc.system.hull());
    return {std::move(spec), doc.mode, doc.system};
}

std::string serialize_gap_tree(const GapTree& tree) {
    return "{\n  \"format\": \"" + std::string(kGapTreeFormat) + "\",\n" + gap_tree_body(tree, "  ") + "\n}\n";
}

GapTree parse_gap_tree(std::string_view text) {
    constexpr std::string_view what = "cantor-gaps";
    const json root = parse_json(text, what);
    check_format(root, kGapTreeFormat, what);
    return gap_tree_from(root, what, "");
}

void save_gap_tree(const std::filesystem::path& path, const GapTree& tree) {
    write_file(path, serialize_gap_tree(tree));
}

GapTree load_gap_tree(const std::filesystem::path& path) { return parse_gap_tree(read_file(path)); }

GapTree natural_gap_tree(const CantorSpec& spec, int depth) {
    if (depth < 0 || depth > 30) {
        throw DomainError("natural_gap_tree: depth must lie in [0, 30]");
    }
    GapTree tree{spec.hull(), {}};
    std::vector<CantorSpec::Node> nodes{spec.root()};
    for (int k = 0; k < depth; ++k) {
        std::vector<Interval> row;
        std::vector<CantorSpec::Node> next;
        row.reserve(nodes.size());
        next.reserve(2 * nodes.size());
        for (const auto& node : nodes) {
            row.push_back(spec.principal_gap(node).rounded());
            auto [l, r] = spec.children(node);
            next.push_back(l);
            next.push_back(r);
        }
        tree.gaps.push_back(std::move(row));
        nodes = std::move(next);
    }
    return tree;
}

// ---------------------------------------------------------------------------
// Plots and images

std::string render_cobweb_csv(const std::vector<PlaneSegment>& trace) {
    if (trace.empty()) {
        throw DomainError("cobweb: empty trace");
    }
    std::string out = "x0,y0,x1,y1\n";
    for (const auto& s : trace) {
        out += format_17(s.x0) + "," + format_17(s.y0) + "," + format_17(s.x1) + "," + format_17(s.y1) + "\n";
    }
    return out;
}

std::string render_cobweb_svg(const std::vector<PlaneSegment>& trace, const std::function<double(double)>& f) {
    if (trace.empty()) {
        throw DomainError("cobweb: empty trace");
    }
    double lo = trace.front().x0;
    double hi = lo;
    for (const auto& s : trace) {
        for (double v : {s.x0, s.y0, s.x1, s.y1}) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    const double extent = hi - lo;
    const bool pinned = extent <= 1e-12 * std::max(1.0, std::abs(lo));
    const double pad = pinned ? 1.0 : 0.1 * extent;
    lo -= pad;
    hi += pad;

    constexpr double size = 512.0;
    auto px = [&](double x) { return format_17((x - lo) / (hi - lo) * size); };
    auto py = [&](double y) { return format_17(size - (y - lo) / (hi - lo) * size); };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"512\" height=\"512\" "
           "viewBox=\"0 0 512 512\">\n"
        << "  <defs><clipPath id=\"plot\"><rect x=\"0\" y=\"0\" width=\"512\" height=\"512\"/></clipPath></defs>\n"
        << "  <rect x=\"0\" y=\"0\" width=\"512\" height=\"512\" fill=\"white\"/>\n"
        << "  <g clip-path=\"url(#plot)\" fill=\"none\" stroke-width=\"1.5\">\n"
        << "    <line class=\"diagonal\" x1=\"" << px(lo) << "\" y1=\"" << py(lo) << "\" x2=\"" << px(hi)
        << "\" y2=\"" << py(hi) << "\" stroke=\"gray\"/>\n";

    constexpr int curve_samples = 512;
    out << "    <polyline class=\"map\" stroke=\"black\" points=\"";
    for (int i = 0; i < curve_samples; ++i) {
        const double x = lo + (hi - lo) * i / (curve_samples - 1);
        // Clamp far-off values so the polyline stays finite; the clip path hides them.
        const double y = std::clamp(f(x), lo - 4.0 * (hi - lo), hi + 4.0 * (hi - lo));
        out << (i == 0 ? "" : " ") << px(x) << "," << py(y);
    }
    out << "\"/>\n";

    if (pinned) {
        out << "    <circle class=\"fixed-point\" cx=\"" << px(trace.front().x0) << "\" cy=\""
            << py(trace.front().y0) << "\" r=\"4\" fill=\"red\" stroke=\"none\"/>\n";
    } else {
        out << "    <polyline class=\"trace\" stroke=\"red\" points=\"" << px(trace.front().x0) << ","
            << py(trace.front().y0);
        for (const auto& s : trace) {
            if (std::isfinite(s.x1) && std::isfinite(s.y1)) {
                out << " " << px(s.x1) << "," << py(std::clamp(s.y1, lo - 4.0 * (hi - lo), hi + 4.0 * (hi - lo)));
            }
        }
        out << "\"/>\n";
    }
    out << "  </g>\n</svg>\n";
    return out.str();
}

void export_cobweb(const std::vector<PlaneSegment>& trace, const std::function<double(double)>& f,
                   const std::filesystem::path& path, PlotFormat format) {
    if (trace.empty()) {
        throw DomainError("cobweb: empty trace");
    }
    write_file(path, format == PlotFormat::csv ? render_cobweb_csv(trace) : render_cobweb_svg(trace, f));
}

std::array<std::uint8_t, 3> escape_colour(int escape_iteration) noexcept {
    static constexpr std::array<std::array<std::uint8_t, 3>, 16> palette{{
        {66, 30, 15},    {25, 7, 26},     {9, 1, 47},      {4, 4, 73},
        {0, 7, 100},     {12, 44, 138},   {24, 82, 177},   {57, 125, 209},
        {134, 181, 229}, {211, 236, 248}, {241, 233, 191}, {248, 201, 95},
        {255, 170, 0},   {204, 128, 0},   {153, 87, 0},    {106, 52, 3},
    }};
    if (escape_iteration < 0) {
        return {0, 0, 0};
    }
    return palette[static_cast<std::size_t>(escape_iteration % 16)];
}

std::string encode_ppm(const EscapeImage& image) {
    std::string out = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + 3 * image.escape.size());
    for (int e : image.escape) {
        const auto rgb = escape_colour(e);
        out.append(reinterpret_cast<const char*>(rgb.data()), rgb.size());
    }
    return out;
}

void export_escape_image(const EscapeImage& image, const std::filesystem::path& path) {
    write_file(path, encode_ppm(image));
}

} // namespace cantorconj
