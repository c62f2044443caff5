#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "inclab/heisenberg.hpp"
#include "inclab/planar.hpp"

namespace inclab {

/// Half-open integer box [lo, hi) in N dimensions.
template <std::size_t N>
struct IndexBox {
    std::array<std::int64_t, N> lo{}, hi{};

    [[nodiscard]] std::int64_t extent(std::size_t d) const noexcept { return hi[d] > lo[d] ? hi[d] - lo[d] : 0; }
    [[nodiscard]] std::size_t cells() const noexcept {
        std::size_t n = 1;
        for (std::size_t d = 0; d < N; ++d) n *= static_cast<std::size_t>(extent(d));
        return n;
    }
    friend bool operator==(const IndexBox&, const IndexBox&) = default;
};

using IndexBox3 = IndexBox<3>;
using IndexBox2 = IndexBox<2>;

/// Occupancy grid over R^3. Voxel (i,j,k) is [i h, (i+1) h) x [j h, (j+1) h)
/// x [k ht, (k+1) ht). ht defaults to h; dilation tests use ht scaled by
/// lambda^2 so that dilations map the grid onto a grid.
class VoxelSet {
public:
    VoxelSet() = default;
    VoxelSet(double h, double ht, IndexBox3 bounds);

    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double ht() const noexcept { return ht_; }
    [[nodiscard]] const IndexBox3& bounds() const noexcept { return bounds_; }

    [[nodiscard]] bool in_bounds(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept;
    /// False outside the bounds.
    [[nodiscard]] bool test(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept;
    /// Throws std::out_of_range outside the bounds.
    void set(std::int64_t i, std::int64_t j, std::int64_t k, bool on = true);

    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] bool empty() const noexcept { return count() == 0; }
    /// count() * h^2 * ht.
    [[nodiscard]] double volume() const noexcept;
    [[nodiscard]] HPoint center(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept;

    /// fn(i, j, k) over occupied voxels, k outermost, i innermost.
    template <class Fn>
    void for_each(Fn&& fn) const {
        std::size_t idx = 0;
        for (std::int64_t k = bounds_.lo[2]; k < bounds_.hi[2]; ++k)
            for (std::int64_t j = bounds_.lo[1]; j < bounds_.hi[1]; ++j)
                for (std::int64_t i = bounds_.lo[0]; i < bounds_.hi[0]; ++i, ++idx)
                    if (bits_[idx]) fn(i, j, k);
    }

    [[nodiscard]] const std::vector<std::uint8_t>& raw() const noexcept { return bits_; }
    [[nodiscard]] std::vector<std::uint8_t>& raw() noexcept { return bits_; }
    [[nodiscard]] std::size_t linear(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept;

    friend bool operator==(const VoxelSet&, const VoxelSet&) = default;

private:
    double h_ = 1.0, ht_ = 1.0;
    IndexBox3 bounds_{};
    std::vector<std::uint8_t> bits_;
};

/// Occupancy grid over a vertical plane in its (u, t) coordinates, cells of
/// size h x ht.
class PlaneRegion {
public:
    PlaneRegion() = default;
    PlaneRegion(Plane plane, double h, double ht, IndexBox2 bounds);

    [[nodiscard]] Plane plane() const noexcept { return plane_; }
    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double ht() const noexcept { return ht_; }
    [[nodiscard]] const IndexBox2& bounds() const noexcept { return bounds_; }

    [[nodiscard]] bool test(std::int64_t i, std::int64_t k) const noexcept;
    void set(std::int64_t i, std::int64_t k, bool on = true);
    [[nodiscard]] std::size_t count() const noexcept;
    /// count() * h * ht.
    [[nodiscard]] double area() const noexcept;

    template <class Fn>
    void for_each(Fn&& fn) const {
        std::size_t idx = 0;
        for (std::int64_t k = bounds_.lo[1]; k < bounds_.hi[1]; ++k)
            for (std::int64_t i = bounds_.lo[0]; i < bounds_.hi[0]; ++i, ++idx)
                if (bits_[idx]) fn(i, k);
    }

    [[nodiscard]] const std::vector<std::uint8_t>& raw() const noexcept { return bits_; }
    [[nodiscard]] std::vector<std::uint8_t>& raw() noexcept { return bits_; }

    friend bool operator==(const PlaneRegion&, const PlaneRegion&) = default;

private:
    Plane plane_ = Plane::W_x;
    double h_ = 1.0, ht_ = 1.0;
    IndexBox2 bounds_{};
    std::vector<std::uint8_t> bits_;
};

/// Axis-aligned bounding box in R^3.
struct Bounds3 {
    HPoint min, max;
};

/// Point-membership shapes in R^3, composed as an immutable tree.
class Shape {
public:
    struct Node;

    [[nodiscard]] bool contains(HPoint p) const;
    [[nodiscard]] Bounds3 bounds() const;
    [[nodiscard]] bool is_empty() const;

    /// [cx - ax, cx + ax] x [cy - ay, cy + ay] x [ct - at, ct + at].
    static Shape box(HPoint center, HPoint half_widths);
    /// [-r, r]^2 x [-r^2, r^2].
    static Shape heisenberg_box(double r);
    /// {p : |center^-1 p| <= radius} in the Koranyi gauge.
    static Shape koranyi_ball(HPoint center, double radius);
    static Shape euclidean_ball(HPoint center, double radius);
    static Shape union_of(std::vector<Shape> parts);
    static Shape difference(Shape keep, Shape remove);
    /// The image of `base` under the dilation by lambda.
    static Shape dilated(double lambda, Shape base);
    /// The image of `base` under (x, y, t) -> (x, y, t + xy/2).
    static Shape sheared(Shape base);

private:
    explicit Shape(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct NamedShape {
    std::string name;
    Shape shape;
};

/// Boxes, balls in both gauges, a union, a difference and a sheared box, all
/// inside [-1/2, 1/2]^3.
[[nodiscard]] std::vector<NamedShape> shape_zoo();

/// Centre rule: a voxel is occupied iff its centre lies in the shape. The
/// index bounds cover the shape's bounding box. ht = 0 means ht = h.
[[nodiscard]] VoxelSet voxelize(const Shape& shape, double h, double ht = 0.0, unsigned threads = 0);

enum class Axis { x, y };

/// Projects an s^3 lattice of interior samples of every occupied voxel and
/// marks the plane cells (side h by ht) that receive a sample.
[[nodiscard]] PlaneRegion project_voxels(const VoxelSet& K, Axis which, int oversample = 2, unsigned threads = 0);

/// |K| / (|pi_x K|^(2/3) |pi_y K|^(2/3)). Throws std::invalid_argument for an
/// empty K.
[[nodiscard]] double lw_ratio(const VoxelSet& K, int oversample = 2);

/// Voxel volume of the intersection of the Euclidean (a1 delta)-neighbourhoods
/// of the fibres through w_x and w_y, restricted to [-1,1]^3, at h = delta/4.
[[nodiscard]] double tube_intersection_volume(VerticalPlanePoint w_x, VerticalPlanePoint w_y, double delta,
                                              double a1 = kTubeConstant);

/// Occupied voxels with at least one unoccupied 6-neighbour. Neighbours
/// outside the bounds count as unoccupied.
[[nodiscard]] VoxelSet boundary(const VoxelSet& E);

/// Greedy first-come cover of the voxel centres of B by Koranyi balls of
/// radius h; returns (number of balls) * h^3.
[[nodiscard]] double h3_surrogate(const VoxelSet& B);

/// Every cell of project_voxels(E) lies within one cell (8-neighbourhood)
/// of project_voxels(boundary(E)).
[[nodiscard]] bool boundary_projection_inclusion(const VoxelSet& E, Axis which, int oversample = 2);

/// |E|^(3/4) / h3_surrogate(boundary(E)). Throws for an empty E.
[[nodiscard]] double weak_isoperimetric_ratio(const VoxelSet& E);

// Run-length encoded binary: magic "VXS1", h and ht as little-endian
// doubles, bounds as six little-endian int64, run count as uint64, then
// alternating empty / occupied run lengths (uint64) over k-j-i order,
// starting with an empty run. PlaneRegion uses magic "PLR1", one plane
// byte, h, ht, four int64 bounds and the same runs.
void write_voxels_rle(std::ostream& out, const VoxelSet& K);
[[nodiscard]] VoxelSet read_voxels_rle(std::istream& in);
void write_region_rle(std::ostream& out, const PlaneRegion& R);
[[nodiscard]] PlaneRegion read_region_rle(std::istream& in);

/// CSV "i,j,k" of occupied voxels.
void write_voxels_csv(std::ostream& out, const VoxelSet& K);
/// Bounds are the tight box around the listed voxels.
[[nodiscard]] VoxelSet read_voxels_csv(std::istream& in, double h, double ht);

}  // namespace inclab
