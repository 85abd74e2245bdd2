#pragma once

#include "cantorconj/interval.hpp"
#include "cantorconj/orbit_engine.hpp"
#include "cantorconj/quadratic_map.hpp"
#include "cantorconj/target_cantor.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cantorconj {

inline constexpr std::string_view kSystemFormat = "cantor-system/1";
inline constexpr std::string_view kGapTreeFormat = "cantor-gaps/1";

// Shortest decimal that reads back to the same double. Throws DomainError
// for non-finite values.
std::string format_shortest(double v);

// 17 significant digits, the form used for all printed results.
std::string format_17(double v);

// Reads "1/3", "0.25", "-3e-1", ... as long double. SpecError on junk.
long double parse_real(std::string_view text);

// "middle-thirds" | "middle-alpha:A" | "affine-ifs2:R1,R2" | "fat:G0,DECAY" | "gaps:PATH".
CantorSpec parse_cantor_spec(std::string_view text, std::optional<Interval> hull = std::nullopt);

// In-memory form of a cantor-system/1 document.
struct SystemDocument {
    SystemKind kind = SystemKind::model;
    IntervalSystem system;
    double c = 0.0;                  // model
    std::string spec;                // target: CantorSpec::describe()
    BuildMode mode = BuildMode::strict;
    std::optional<GapTree> gap_tree; // target built from an explicit tree

    friend bool operator==(const SystemDocument&, const SystemDocument&) = default;
};

SystemDocument make_document(const QuadraticParams& params, const IntervalSystem& model);
SystemDocument make_document(const TargetSystem& target);

std::string serialize_system(const SystemDocument& doc);
// SpecError on version mismatch, malformed JSON (with line/column) or a level
// that does not refine its parent (with the JSON path of the offending entry).
SystemDocument parse_system(std::string_view text);

void save_system(const std::filesystem::path& path, const SystemDocument& doc);
SystemDocument load_system(const std::filesystem::path& path);

// Rebuilds the CantorSpec recorded in a target document and pairs it with the
// stored (not recomputed) levels.
TargetSystem to_target_system(const SystemDocument& doc);

std::string serialize_gap_tree(const GapTree& tree);
GapTree parse_gap_tree(std::string_view text);
void save_gap_tree(const std::filesystem::path& path, const GapTree& tree);
GapTree load_gap_tree(const std::filesystem::path& path);

// Natural gap tree of a spec down to `depth` levels.
GapTree natural_gap_tree(const CantorSpec& spec, int depth);

enum class PlotFormat { csv, svg };

// CSV: header "x0,y0,x1,y1", one row per segment. SVG 1.1: the diagonal,
// the graph of f sampled at 512 points and the trace (a single marker when
// the trace is pinned at a fixed point).
std::string render_cobweb_csv(const std::vector<PlaneSegment>& trace);
std::string render_cobweb_svg(const std::vector<PlaneSegment>& trace, const std::function<double(double)>& f);
void export_cobweb(const std::vector<PlaneSegment>& trace, const std::function<double(double)>& f,
                   const std::filesystem::path& path, PlotFormat format);

// Colour of an escaped pixel: entry (escape_iteration mod 16) of a fixed
// 16-colour gradient (dark brown -> blue -> white -> orange). Inside is black.
std::array<std::uint8_t, 3> escape_colour(int escape_iteration) noexcept;

// Binary PPM: "P6\n<w> <h>\n255\n" then RGB24 rows top to bottom.
std::string encode_ppm(const EscapeImage& image);
void export_escape_image(const EscapeImage& image, const std::filesystem::path& path);

void write_file(const std::filesystem::path& path, std::string_view bytes);
std::string read_file(const std::filesystem::path& path);

} // namespace cantorconj
