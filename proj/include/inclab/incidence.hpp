#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "inclab/planar.hpp"

namespace inclab {

/// Result of counting delta-incidences between a point set and a line family.
struct IncidenceReport {
    std::uint64_t count = 0;
    /// richness[i] = number of lines incident to point i.
    std::vector<std::uint32_t> richness;
    /// count / (|P|^{2/3} |L|^{2/3} delta^{-1/3}); zero when either set is empty.
    double normalized_ratio = 0.0;
    /// (point index, line index), point-major, line indices ascending.
    std::optional<std::vector<std::pair<std::uint32_t, std::uint32_t>>> pairs;

    /// h[r] = number of points with richness r.
    [[nodiscard]] std::vector<std::uint64_t> k_histogram() const;

    friend bool operator==(const IncidenceReport&, const IncidenceReport&) = default;
};

[[nodiscard]] nlohmann::json to_json(const IncidenceReport& report);

struct CountOptions {
    bool materialize_pairs = false;
    /// 0 selects default_threads().
    unsigned threads = 0;
};

enum class Engine { naive, bucketed };

[[nodiscard]] double normalized_ratio(std::uint64_t count, std::size_t n_points, std::size_t n_lines, double delta);

/// Tests every (point, line) pair.
[[nodiscard]] IncidenceReport count_naive(const PointSet& P, const LineFamily& L, const Scale& s,
                                          const CountOptions& opt = {});

/// Same report as count_naive. Lines are bucketed by their dual point (a, b):
/// columns in a, sorted by b inside a column. A line incident to p = (x0, y0)
/// has |b - (y0 - a x0)| <= C delta sqrt(1 + a^2), so each point only scans
/// the b-window of that dual strip (widened by one extra C delta) per column.
[[nodiscard]] IncidenceReport count_bucketed(const PointSet& P, const LineFamily& L, const Scale& s,
                                             const CountOptions& opt = {});

[[nodiscard]] IncidenceReport count(Engine engine, const PointSet& P, const LineFamily& L, const Scale& s,
                                    const CountOptions& opt = {});

struct RichOptions {
    /// Scan the candidate grid at multiplier C + 1. Every k-rich point of the
    /// plane then lies within delta / sqrt(2) of a reported grid point.
    bool offgrid_certificate = false;
    unsigned threads = 0;
};

struct RichPointResult {
    int k = 2;
    /// delta-separated k-rich grid points, row-major first-come.
    PointSet points;
    /// Richness of each returned point at scan_multiplier.
    std::vector<std::uint32_t> richness;
    /// |points| * k^3 * epsilon / |L|^2.
    double bound_constant = 0.0;
    double scan_multiplier = 1.0;
};

/// Scans the delta-grid of Q0 for points incident to >= k lines, then keeps a
/// delta-separated subset greedily in row-major order (y outer, x inner).
/// Throws std::invalid_argument for k < 2.
[[nodiscard]] RichPointResult k_rich_points(const LineFamily& L, int k, const Scale& s, const RichOptions& opt = {});

/// One grid scan shared by several thresholds.
[[nodiscard]] std::vector<RichPointResult> k_rich_points(const LineFamily& L, std::span<const int> ks,
                                                         const Scale& s, const RichOptions& opt = {});

/// Number of lines of L incident to p.
[[nodiscard]] std::size_t max_concurrency(const LineFamily& L, Point2 p, const Scale& s);

/// |arctan a1 - arctan a2|.
[[nodiscard]] double line_angle(LineAB l1, LineAB l2) noexcept;

struct AngularSplit {
    std::vector<std::size_t> low;   // smallest slopes
    std::vector<std::size_t> high;  // largest slopes
    double min_angle = 0.0;
};

/// Sorts the lines by slope and returns the bottom and top quarters (each of
/// size ceil(N/4)) with the smallest angle between the two groups.
/// Throws std::invalid_argument when N < 2 or a line is not incident to p.
[[nodiscard]] AngularSplit angular_split(const LineFamily& lines_at_p, Point2 p, const Scale& s);

}  // namespace inclab
