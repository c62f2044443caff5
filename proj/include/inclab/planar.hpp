#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace inclab {

/// A point of the plane. Points used as incidence data live in the square
/// Q0 = [-1,1]^2.
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    [[nodiscard]] bool in_q0() const noexcept { return std::abs(x) <= 1.0 && std::abs(y) <= 1.0; }
    friend bool operator==(const Point2&, const Point2&) = default;
};

/// The line {y = a*x + b}, stored by its dual coordinates (a, b). Lines of
/// the working family have |a| <= 1 and |b| <= 1.
struct LineAB {
    double a = 0.0;
    double b = 0.0;

    [[nodiscard]] bool in_q0() const noexcept { return std::abs(a) <= 1.0 && std::abs(b) <= 1.0; }
    friend bool operator==(const LineAB&, const LineAB&) = default;
};

/// Discretization scale: incidence radius delta, line separation epsilon
/// and the incidence multiplier C (a point is incident to a line when it
/// lies in the closed C*delta neighbourhood).
class Scale {
public:
    /// Throws std::invalid_argument unless 0 < delta <= epsilon <= 1 and C >= 1.
    Scale(double delta, double epsilon, double multiplier = 1.0);

    static Scale at(double delta, double multiplier = 1.0) { return {delta, delta, multiplier}; }

    [[nodiscard]] double delta() const noexcept { return delta_; }
    [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
    [[nodiscard]] double multiplier() const noexcept { return multiplier_; }
    /// The incidence radius C*delta.
    [[nodiscard]] double radius() const noexcept { return multiplier_ * delta_; }

    [[nodiscard]] Scale with_multiplier(double multiplier) const { return {delta_, epsilon_, multiplier}; }

private:
    double delta_;
    double epsilon_;
    double multiplier_;
};

/// Points that are meant to be pairwise at least `delta` apart.
struct PointSet {
    std::vector<Point2> points;
    double delta = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return points.size(); }
};

/// Lines that are meant to be pairwise at least `epsilon` apart in the line
/// metric.
struct LineFamily {
    std::vector<LineAB> lines;
    double epsilon = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return lines.size(); }
};

/// d(l1, l2) = |(a1, b1) - (a2, b2)|.
[[nodiscard]] double line_metric(LineAB l1, LineAB l2) noexcept;

/// Euclidean distance from p to the infinite line l.
[[nodiscard]] double point_line_dist(Point2 p, LineAB l) noexcept;

/// |a*x + b - y|, the distance measured along the y axis.
[[nodiscard]] double vertical_deviation(Point2 p, LineAB l) noexcept;

/// True iff point_line_dist(p, l) <= C * delta. Ties count as incident.
[[nodiscard]] bool is_incident(Point2 p, LineAB l, const Scale& s) noexcept;

/// (x, y) -> {Y = -x X + y}. Throws std::domain_error for p outside Q0.
[[nodiscard]] LineAB dual_point_to_line(Point2 p);

/// {y = a x + b} -> (a, b).
[[nodiscard]] Point2 dual_line_to_point(LineAB l) noexcept;

[[nodiscard]] inline Point2 as_point(LineAB l) noexcept { return {l.a, l.b}; }

struct SeparationReport {
    bool ok = true;
    /// Closest offending pair (indices into the input) when !ok.
    std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
    double worst_distance = 0.0;
};

/// Checks that all pairwise distances are >= bound, using exact comparisons.
/// Runs in expected linear time through a uniform hash grid of side `bound`.
[[nodiscard]] SeparationReport validate_separation(std::span<const Point2> pts, double bound);
[[nodiscard]] SeparationReport validate_separation(const PointSet& ps);
[[nodiscard]] SeparationReport validate_separation(const LineFamily& lf);

/// Greedy first-come selection of a bound-separated subset: a point is kept
/// when it is at distance >= bound from every point kept before it. The
/// result is maximal: every input point lies within distance < bound of a
/// kept point or is itself kept. Returns indices into `pts`.
[[nodiscard]] std::vector<std::size_t> greedy_separated_subset(std::span<const Point2> pts, double bound);

}  // namespace inclab
