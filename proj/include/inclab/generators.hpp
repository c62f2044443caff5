#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "inclab/planar.hpp"
#include "inclab/planar_io.hpp"

namespace inclab {

enum class GeneratorKind { grid_packing, tube, rectangle, k_star, concurrent_star, random };

[[nodiscard]] const char* to_string(GeneratorKind kind) noexcept;
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] GeneratorKind parse_generator_kind(std::string_view name);

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Region {
    double x0 = -1.0, y0 = -1.0, x1 = 1.0, y1 = 1.0;
};

/// Every parameter a named configuration family can take. Fields a kind does
/// not use are ignored.
struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::random;
    double delta = 1.0 / 64;
    double epsilon = 0.0;  // 0 means "same as delta"
    double r = 1.0, s = 1.0;
    int k = 2, m = 1;
    std::size_t n_points = 0, n_lines = 0;
    Point2 center{};
    Region region{};
    std::uint64_t seed = 0;
};

/// A generated point set and line family with provenance.
struct Configuration {
    PointSet points;
    LineFamily lines;
    SetMetadata meta;
};

/// Square lattice of spacing delta anchored at the region's lower-left
/// corner. An inverted region yields an empty set.
[[nodiscard]] PointSet gen_grid_packing(double delta, Region region);

/// delta-packing of the centre row of the tube [0, sqrt(delta)] x [0, delta]
/// with the lines of slope 2*delta*j (|slope| <= sqrt(delta)) through the
/// tube centre. Every point is incident to every line. Requires delta <= 2^-4.
[[nodiscard]] Configuration gen_tube_example(double delta);

/// delta-packing of R = [0, r] x [0, s] and the epsilon-lattice of dual
/// points (a, b) whose line meets R. Requires delta <= s <= r <= 1.
[[nodiscard]] Configuration gen_rectangle_example(double delta, double r, double s, double epsilon = 0.0);

/// m centres on a coarse lattice inside [-1/2, 1/2]^2 (snapped to the
/// delta-grid of Q0), each with k lines through it of slopes -1 + (2j+1)/k.
/// Lines from different centres that come closer than epsilon are moved by
/// intercept shifts of +-delta, +-2 delta, ... (recorded in the metadata).
[[nodiscard]] Configuration gen_kstar(int k, int m, double delta, double epsilon = 0.0);

/// n lines through `center` with slopes spaced so consecutive dual points
/// are exactly epsilon apart, centred on slope 0 and clipped to Q0.
[[nodiscard]] LineFamily gen_concurrent_star(int n, Point2 center, double epsilon);

/// Greedy maximal epsilon-separated family of lines delta-incident to
/// `center`: candidates sweep the dual strip around the dual line of the
/// centre in slope order, accepted first-come.
[[nodiscard]] LineFamily gen_greedy_concurrent(Point2 center, const Scale& s);

/// Jittered lattice: distinct random nodes of the 2*delta lattice of Q0,
/// each moved by at most delta/4 per coordinate. Lines use the same recipe
/// in the dual plane at scale epsilon. Throws when a count exceeds the
/// number of lattice nodes.
[[nodiscard]] Configuration gen_random(std::size_t n_points, std::size_t n_lines, double delta, std::uint64_t seed,
                                       double epsilon = 0.0);

/// Dispatch on spec.kind. concurrent_star uses n_lines, center and epsilon;
/// its point set is the centre alone. grid_packing has no lines.
[[nodiscard]] Configuration generate(const GeneratorSpec& spec);

}  // namespace inclab
