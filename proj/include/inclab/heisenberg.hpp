#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "inclab/planar.hpp"

namespace inclab {

/// A point of the Heisenberg group, R^3 with the product
/// (x,y,t)(x',y',t') = (x+x', y+y', t+t' + (xy' - yx')/2).
struct HPoint {
    double x = 0.0, y = 0.0, t = 0.0;
    friend bool operator==(const HPoint&, const HPoint&) = default;
};

enum class Plane { W_x, W_y };

/// (u, 0, t) on W_x or (0, u, t) on W_y. Planar interop uses (u, t) as the
/// plane coordinates.
struct VerticalPlanePoint {
    Plane plane = Plane::W_x;
    double u = 0.0, t = 0.0;

    [[nodiscard]] HPoint embed() const noexcept {
        return plane == Plane::W_x ? HPoint{u, 0.0, t} : HPoint{0.0, u, t};
    }
    [[nodiscard]] Point2 coords() const noexcept { return {u, t}; }
    [[nodiscard]] bool in_q0() const noexcept { return std::abs(u) <= 1.0 && std::abs(t) <= 1.0; }
    friend bool operator==(const VerticalPlanePoint&, const VerticalPlanePoint&) = default;
};

/// Upper bounds for the tube constant A1 and the core projection constant A,
/// rounded up from tube_inclusion_check / core_projection_check sweeps.
inline constexpr double kTubeConstant = 2.0;
inline constexpr double kCoreConstant = 2.0;

[[nodiscard]] HPoint h_mul(HPoint p, HPoint q) noexcept;
[[nodiscard]] HPoint h_inv(HPoint p) noexcept;
/// (lam x, lam y, lam^2 t). Throws std::invalid_argument for lam <= 0.
[[nodiscard]] HPoint dilate(double lam, HPoint p);
/// Dilation restricted to a vertical plane: (lam u, lam^2 t).
[[nodiscard]] VerticalPlanePoint dilate(double lam, VerticalPlanePoint w);

/// pi_x(x,y,t) = (x, 0, t - xy/2).
[[nodiscard]] VerticalPlanePoint proj_x(HPoint p) noexcept;
/// pi_y(x,y,t) = (0, y, t + xy/2).
[[nodiscard]] VerticalPlanePoint proj_y(HPoint p) noexcept;
[[nodiscard]] VerticalPlanePoint project(Plane plane, HPoint p) noexcept;

/// The coset w L through w: s -> w (0,s,0) for w on W_x, s -> w (s,0,0) for
/// w on W_y. It is the fibre of the projection onto w's plane.
struct HorizontalFiber {
    VerticalPlanePoint w;
    [[nodiscard]] HPoint operator()(double s) const noexcept;
    /// Unit direction of the fibre as a Euclidean line in R^3.
    [[nodiscard]] HPoint direction() const noexcept;
    /// Euclidean distance from q to the fibre.
    [[nodiscard]] double distance(HPoint q) const noexcept;
};

[[nodiscard]] HorizontalFiber horizontal_fiber(VerticalPlanePoint w) noexcept;
/// n >= 2 evenly spaced samples of the fibre over [lo, hi].
[[nodiscard]] std::vector<HPoint> sample_fiber(VerticalPlanePoint w, double lo, double hi, std::size_t n);

/// For w = (a, 0, b) on W_x: the image pi_y(w L_y) = {t = a y + b} in the
/// (y, t) coordinates of W_y, returned as LineAB(a, b). For w = (0, c, d)
/// on W_y: pi_x(w L_x) = {t = -c x + d} in W_x, returned as LineAB(-c, d).
/// Throws std::domain_error when the line leaves the unit parameter square.
[[nodiscard]] LineAB project_fiber_to_line(VerticalPlanePoint w);

/// ((x^2 + y^2)^2 + 16 t^2)^(1/4).
[[nodiscard]] double koranyi_norm(HPoint p) noexcept;
/// |q^-1 p|.
[[nodiscard]] double koranyi_distance(HPoint p, HPoint q) noexcept;

/// Samples the preimage tube of the delta-disk around w intersected with
/// [-1,1]^3 and returns the largest Euclidean distance to the fibre through
/// w, divided by delta. `resolution` sets the number of radii, angles and
/// fibre parameters sampled.
[[nodiscard]] double tube_inclusion_check(VerticalPlanePoint w, double delta, std::size_t resolution = 16);

/// Same preimage samples pushed to the other vertical plane: largest
/// distance to the projected fibre line divided by delta.
[[nodiscard]] double core_projection_check(VerticalPlanePoint w, double delta, std::size_t resolution = 16);

/// A planar incidence instance equivalent, up to the multiplier, to counting
/// pairs of tubes that meet.
struct Reduction {
    PointSet points;   // P_y in (y, t) coordinates
    LineFamily lines;  // images of the fibres through P_x
    double multiplier = 1.0;
};

/// Maps P_y to points of the (y, t) plane and each w in P_x to the line of
/// its fibre, using multiplier 1 + core_constant. Throws
/// std::invalid_argument when an input is on the wrong plane, outside the
/// unit square, or not delta-separated.
[[nodiscard]] Reduction reduce_to_incidences(const std::vector<VerticalPlanePoint>& P_x,
                                             const std::vector<VerticalPlanePoint>& P_y, double delta,
                                             double core_constant = kCoreConstant);

/// CSV with header "x,y,t".
void write_hpoints_csv(std::ostream& out, const std::vector<HPoint>& pts);
[[nodiscard]] std::vector<HPoint> read_hpoints_csv(std::istream& in);

}  // namespace inclab
