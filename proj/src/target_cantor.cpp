#include "cantorconj/target_cantor.hpp"

#include "cantorconj/errors.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace cantorconj {

namespace {

constexpr int kMaxDescent = 64;

std::string fmt(long double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void require_hull(Interval hull) {
    if (!(hull.lo < hull.hi) || !std::isfinite(hull.lo) || !std::isfinite(hull.hi)) {
        throw SpecError("hull [a, b] must be finite with a < b");
    }
}

bool in_open_unit(long double v) { return v > 0.0L && v < 1.0L; }

} // namespace

void validate_gap_tree(const GapTree& tree) {
    require_hull(tree.hull);
    std::vector<Interval> segments{tree.hull};
    for (std::size_t k = 0; k < tree.gaps.size(); ++k) {
        const auto& row = tree.gaps[k];
        const std::string lvl = "gap level " + std::to_string(k + 1);
        if (row.size() != segments.size()) {
            throw SpecError(lvl + ": expected " + std::to_string(segments.size()) + " gaps, found " +
                            std::to_string(row.size()));
        }
        std::vector<Interval> next;
        next.reserve(2 * segments.size());
        for (std::size_t j = 0; j < row.size(); ++j) {
            const Interval& g = row[j];
            const Interval& s = segments[j];
            if (!(g.lo < g.hi)) {
                throw SpecError(lvl + ", gap " + std::to_string(j + 1) + ": empty gap");
            }
            if (!(s.lo < g.lo && g.hi < s.hi)) {
                throw SpecError(lvl + ", gap " + std::to_string(j + 1) +
                                ": not strictly inside its parent segment");
            }
            next.push_back({s.lo, g.lo});
            next.push_back({g.hi, s.hi});
        }
        segments = std::move(next);
    }
}

CantorSpec CantorSpec::middle_thirds(Interval hull) { return middle_alpha(1.0L / 3.0L, hull); }

CantorSpec CantorSpec::middle_alpha(long double alpha, Interval hull) {
    require_hull(hull);
    if (!in_open_unit(alpha)) {
        throw SpecError("middle-alpha: alpha must lie in (0, 1)");
    }
    return {MiddleAlpha{alpha}, hull};
}

CantorSpec CantorSpec::affine_ifs2(long double r1, long double r2, Interval hull) {
    require_hull(hull);
    if (!in_open_unit(r1) || !in_open_unit(r2) || !(r1 + r2 < 1.0L)) {
        throw SpecError("affine-ifs2: need r1, r2 in (0, 1) and r1 + r2 < 1");
    }
    return {AffineIFS2{r1, r2}, hull};
}

CantorSpec CantorSpec::fat_cantor(long double g0, long double decay, Interval hull) {
    require_hull(hull);
    if (!in_open_unit(g0) || !(decay > 0.0L && decay <= 1.0L)) {
        throw SpecError("fat: need g0 in (0, 1) and decay in (0, 1]");
    }
    return {FatCantor{g0, decay}, hull};
}

CantorSpec CantorSpec::explicit_tree(GapTree tree) {
    validate_gap_tree(tree);
    const Interval hull = tree.hull;
    return {ExplicitGapTree{std::make_shared<const GapTree>(std::move(tree))}, hull};
}

std::string CantorSpec::describe() const {
    struct Visitor {
        std::string operator()(const MiddleAlpha& m) const {
            if (m.alpha == 1.0L / 3.0L) {
                return "middle-thirds";
            }
            return "middle-alpha:" + fmt(m.alpha);
        }
        std::string operator()(const AffineIFS2& a) const {
            return "affine-ifs2:" + fmt(a.r1) + "," + fmt(a.r2);
        }
        std::string operator()(const FatCantor& f) const {
            return "fat:" + fmt(f.g0) + "," + fmt(f.decay);
        }
        std::string operator()(const ExplicitGapTree& t) const {
            return "gap-tree(depth=" + std::to_string(t.tree->depth()) + ")";
        }
    };
    return std::visit(Visitor{}, family_);
}

namespace {

// 3^(n+1) stays below 2^53 up to here, so k / 3^(n+1) is one correctly
// rounded division.
constexpr int kExactThirdsLevels = 33;

// Middle-thirds gap of the node at (level n, index j): the node is
// [k, k + 1] / 3^n with k spelled by the ternary digits 2 * (bits of j - 1),
// and its gap is (3k + 1, 3k + 2) / 3^(n+1), rescaled to the hull.
CantorSpec::NodeGap exact_third_gap(const CantorSpec::Node& node, Interval hull) {
    const int n = node.level;
    const std::uint64_t bits = node.index - 1;
    std::uint64_t k = 0;
    for (int i = n - 1; i >= 0; --i) {
        k = 3 * k + 2 * ((bits >> i) & 1u);
    }
    std::uint64_t scale = 3;
    for (int i = 0; i < n; ++i) {
        scale *= 3;
    }
    const auto place = [&](std::uint64_t m) -> long double {
        const double unit = static_cast<double>(m) / static_cast<double>(scale);
        if (hull.lo == 0.0 && hull.hi == 1.0) {
            return unit;
        }
        return static_cast<double>(hull.lo + static_cast<long double>(hull.hi - hull.lo) * m / scale);
    };
    return {place(3 * k + 1), place(3 * k + 2)};
}

} // namespace

CantorSpec::Node CantorSpec::root() const noexcept {
    return {static_cast<long double>(hull_.lo), static_cast<long double>(hull_.hi), 0, 1};
}

CantorSpec::NodeGap CantorSpec::principal_gap(const Node& node) const {
    const long double len = node.hi - node.lo;
    struct Visitor {
        const Node& node;
        long double len;
        Interval hull;

        NodeGap operator()(const MiddleAlpha& m) const {
            if (m.alpha == 1.0L / 3.0L && node.level < kExactThirdsLevels) {
                return exact_third_gap(node, hull);
            }
            const long double keep = 0.5L * (1.0L - m.alpha) * len;
            return {node.lo + keep, node.hi - keep};
        }
        NodeGap operator()(const AffineIFS2& a) const {
            return {node.lo + a.r1 * len, node.hi - a.r2 * len};
        }
        NodeGap operator()(const FatCantor& f) const {
            const long double g = f.g0 * std::pow(f.decay, static_cast<long double>(node.level));
            const long double keep = 0.5L * (1.0L - g) * len;
            return {node.lo + keep, node.hi - keep};
        }
        NodeGap operator()(const ExplicitGapTree& t) const {
            if (node.level < t.tree->depth()) {
                const Interval g = t.tree->gaps[static_cast<std::size_t>(node.level)][node.index - 1];
                return {g.lo, g.hi};
            }
            return {node.lo + len / 3.0L, node.hi - len / 3.0L};
        }
    };
    return std::visit(Visitor{node, len, hull_}, family_);
}

std::pair<CantorSpec::Node, CantorSpec::Node> CantorSpec::children(const Node& node) const {
    const NodeGap g = principal_gap(node);
    return {Node{node.lo, g.lo, node.level + 1, 2 * node.index - 1},
            Node{g.hi, node.hi, node.level + 1, 2 * node.index}};
}

double CantorSpec::max_child_ratio() const {
    struct Visitor {
        double operator()(const MiddleAlpha& m) const { return static_cast<double>(0.5L * (1.0L - m.alpha)); }
        double operator()(const AffineIFS2& a) const { return static_cast<double>(std::max(a.r1, a.r2)); }
        double operator()(const FatCantor& f) const {
            return f.decay < 1.0L ? 0.5 : static_cast<double>(0.5L * (1.0L - f.g0));
        }
        double operator()(const ExplicitGapTree& t) const {
            double best = 1.0 / 3.0;
            std::vector<Interval> segments{t.tree->hull};
            for (const auto& row : t.tree->gaps) {
                std::vector<Interval> next;
                next.reserve(2 * segments.size());
                for (std::size_t j = 0; j < row.size(); ++j) {
                    const Interval left{segments[j].lo, row[j].lo};
                    const Interval right{row[j].hi, segments[j].hi};
                    const double len = segments[j].length();
                    best = std::max({best, left.length() / len, right.length() / len});
                    next.push_back(left);
                    next.push_back(right);
                }
                segments = std::move(next);
            }
            return best;
        }
    };
    return std::visit(Visitor{}, family_);
}

Membership membership(const CantorSpec& spec, double x, int depth) {
    if (depth < 1) {
        throw DomainError("membership: depth must be >= 1");
    }
    if (!spec.hull().contains(x)) {
        return Membership::out;
    }
    CantorSpec::Node node = spec.root();
    for (int n = 0; n < depth; ++n) {
        const Interval gap = spec.principal_gap(node).rounded();
        if (gap.contains_open(x)) {
            return Membership::out;
        }
        auto [left, right] = spec.children(node);
        node = x <= gap.lo ? left : right;
    }
    return Membership::in;
}

Interval find_gap_in_middle_third(const CantorSpec& spec, Interval segment) {
    if (!(segment.lo < segment.hi)) {
        throw DomainError("find_gap_in_middle_third: need c < d");
    }
    const long double c = segment.lo;
    const long double d = segment.hi;
    const long double third = (d - c) / 3.0L;
    const long double g = c + third;
    const long double h = d - third;

    CantorSpec::Node node = spec.root();
    for (int n = 0; n < kMaxDescent; ++n) {
        const CantorSpec::NodeGap gap = spec.principal_gap(node);
        if (gap.lo < h && gap.hi > g) {
            const Interval found = gap.rounded();
            if (!(segment.lo <= found.lo && found.hi <= segment.hi)) {
                throw DomainError("find_gap_in_middle_third: [c, d] does not have member endpoints");
            }
            return found;
        }
        auto [left, right] = spec.children(node);
        node = gap.hi <= g ? right : left;
    }
    throw SpecError("find_gap_in_middle_third: no gap meets the middle third within 64 levels");
}

Interval tighten_gap(const CantorSpec& spec, Interval gap, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("tighten_gap: tol must be positive");
    }
    if (!(gap.lo < gap.hi)) {
        throw DomainError("tighten_gap: empty interval");
    }
    const double m = gap.midpoint();
    if (!spec.hull().contains_open(m)) {
        throw DomainError("tighten_gap: gap lies outside the hull");
    }
    // (e, f) is connected and misses Λ*, so it sits inside the one maximal
    // gap of the natural tree that contains its midpoint.
    CantorSpec::Node node = spec.root();
    for (int n = 0; n < kMaxDescent; ++n) {
        const Interval g = spec.principal_gap(node).rounded();
        if (g.contains_open(m)) {
            if (gap.lo < g.lo - tol || gap.hi > g.hi + tol) {
                throw DomainError("tighten_gap: (e, f) intersects the Cantor set");
            }
            return g;
        }
        if (m == g.lo || m == g.hi) {
            throw DomainError("tighten_gap: (e, f) intersects the Cantor set");
        }
        auto [left, right] = spec.children(node);
        node = m < g.lo ? left : right;
    }
    throw DomainError("tighten_gap: no gap of the natural tree contains (e, f) within 64 levels");
}

double default_tighten_tol(const CantorSpec& spec) { return 1e-12 * spec.hull().length(); }

const char* to_string(BuildMode mode) noexcept {
    return mode == BuildMode::strict ? "strict" : "natural";
}

TargetSystem build_target_system(const CantorSpec& spec, int depth, BuildMode mode) {
    if (depth < 0 || depth > 48) {
        throw DomainError("depth must lie in [0, 48]");
    }
    if (mode == BuildMode::natural && !(spec.max_child_ratio() < 1.0)) {
        throw RegimeError("natural mode: the natural tree does not contract (child ratio >= 1)");
    }
    IntervalSystem system(spec.hull());
    if (mode == BuildMode::natural) {
        std::vector<CantorSpec::Node> nodes{spec.root()};
        for (int n = 0; n < depth; ++n) {
            std::vector<CantorSpec::Node> next;
            next.reserve(2 * nodes.size());
            std::vector<Interval> segments;
            segments.reserve(2 * nodes.size());
            for (const auto& node : nodes) {
                auto [left, right] = spec.children(node);
                next.push_back(left);
                next.push_back(right);
                segments.push_back(left.rounded());
                segments.push_back(right.rounded());
            }
            system.push_level(std::move(segments));
            nodes = std::move(next);
        }
    } else {
        for (int n = 0; n < depth; ++n) {
            const auto parents = system.level(n);
            std::vector<Interval> segments;
            segments.reserve(2 * parents.size());
            for (const auto& seg : parents) {
                const Interval gap = find_gap_in_middle_third(spec, seg);
                segments.push_back({seg.lo, gap.lo});
                segments.push_back({gap.hi, seg.hi});
            }
            system.push_level(std::move(segments));
        }
    }
    return {spec, mode, std::move(system)};
}

} // namespace cantorconj
