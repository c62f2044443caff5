#include "inclab/planar.hpp"

#include <limits>
#include <stdexcept>
#include <string>

#include "inclab/spatial_hash.hpp"

namespace inclab {

Scale::Scale(double delta, double epsilon, double multiplier)
    : delta_(delta), epsilon_(epsilon), multiplier_(multiplier) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("scale: delta must lie in (0, 1], got " + std::to_string(delta));
    if (!(epsilon >= delta && epsilon <= 1.0))
        throw std::invalid_argument("scale: epsilon must lie in [delta, 1], got " + std::to_string(epsilon));
    if (!(multiplier >= 1.0) || !std::isfinite(multiplier))
        throw std::invalid_argument("scale: multiplier must be >= 1, got " + std::to_string(multiplier));
}

double line_metric(LineAB l1, LineAB l2) noexcept { return std::hypot(l1.a - l2.a, l1.b - l2.b); }

double vertical_deviation(Point2 p, LineAB l) noexcept { return std::abs(l.a * p.x + l.b - p.y); }

double point_line_dist(Point2 p, LineAB l) noexcept {
    return vertical_deviation(p, l) / std::sqrt(1.0 + l.a * l.a);
}

bool is_incident(Point2 p, LineAB l, const Scale& s) noexcept { return point_line_dist(p, l) <= s.radius(); }

LineAB dual_point_to_line(Point2 p) {
    if (!p.in_q0()) throw std::domain_error("dual_point_to_line: point outside Q0");
    return {-p.x, p.y};
}

Point2 dual_line_to_point(LineAB l) noexcept { return {l.a, l.b}; }

SeparationReport validate_separation(std::span<const Point2> pts, double bound) {
    SeparationReport report;
    if (!(bound > 0.0) || pts.size() < 2) return report;

    SpatialHash grid(bound);
    report.worst_distance = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point2 p = pts[i];
        grid.for_each_near(p, [&](std::uint32_t j) {
            const double d = std::hypot(p.x - pts[j].x, p.y - pts[j].y);
            if (d < bound && d < report.worst_distance) {
                report.ok = false;
                report.worst_distance = d;
                report.worst_pair = std::pair<std::size_t, std::size_t>{j, i};
            }
        });
        grid.insert(p, static_cast<std::uint32_t>(i));
    }
    if (report.ok) report.worst_distance = 0.0;
    return report;
}

SeparationReport validate_separation(const PointSet& ps) { return validate_separation(ps.points, ps.delta); }

SeparationReport validate_separation(const LineFamily& lf) {
    std::vector<Point2> duals;
    duals.reserve(lf.lines.size());
    for (const LineAB& l : lf.lines) duals.push_back(as_point(l));
    return validate_separation(duals, lf.epsilon);
}

std::vector<std::size_t> greedy_separated_subset(std::span<const Point2> pts, double bound) {
    std::vector<std::size_t> kept;
    if (!(bound > 0.0)) {
        kept.resize(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) kept[i] = i;
        return kept;
    }
    SpatialHash grid(bound);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point2 p = pts[i];
        bool clash = false;
        grid.for_each_near(p, [&](std::uint32_t j) {
            if (std::hypot(p.x - pts[j].x, p.y - pts[j].y) < bound) clash = true;
        });
        if (clash) continue;
        grid.insert(p, static_cast<std::uint32_t>(i));
        kept.push_back(i);
    }
    return kept;
}

}  // namespace inclab
