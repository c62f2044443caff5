#include "inclab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <variant>

#include "inclab/parallel.hpp"

namespace inclab {

// ---------------------------------------------------------------- grids

VoxelSet::VoxelSet(double h, double ht, IndexBox3 bounds) : h_(h), ht_(ht), bounds_(bounds) {
    if (!(h > 0.0) || !(ht > 0.0)) throw std::invalid_argument("VoxelSet: voxel sides must be positive");
    bits_.assign(bounds_.cells(), 0);
}

bool VoxelSet::in_bounds(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept {
    return i >= bounds_.lo[0] && i < bounds_.hi[0] && j >= bounds_.lo[1] && j < bounds_.hi[1] && k >= bounds_.lo[2] &&
           k < bounds_.hi[2];
}

std::size_t VoxelSet::linear(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept {
    const auto nx = static_cast<std::size_t>(bounds_.extent(0));
    const auto ny = static_cast<std::size_t>(bounds_.extent(1));
    return (static_cast<std::size_t>(k - bounds_.lo[2]) * ny + static_cast<std::size_t>(j - bounds_.lo[1])) * nx +
           static_cast<std::size_t>(i - bounds_.lo[0]);
}

bool VoxelSet::test(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept {
    return in_bounds(i, j, k) && bits_[linear(i, j, k)] != 0;
}

void VoxelSet::set(std::int64_t i, std::int64_t j, std::int64_t k, bool on) {
    if (!in_bounds(i, j, k)) throw std::out_of_range("VoxelSet::set: index outside bounds");
    bits_[linear(i, j, k)] = on ? 1 : 0;
}

std::size_t VoxelSet::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double VoxelSet::volume() const noexcept { return static_cast<double>(count()) * h_ * h_ * ht_; }

HPoint VoxelSet::center(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept {
    return {(static_cast<double>(i) + 0.5) * h_, (static_cast<double>(j) + 0.5) * h_,
            (static_cast<double>(k) + 0.5) * ht_};
}

PlaneRegion::PlaneRegion(Plane plane, double h, double ht, IndexBox2 bounds)
    : plane_(plane), h_(h), ht_(ht), bounds_(bounds) {
    if (!(h > 0.0) || !(ht > 0.0)) throw std::invalid_argument("PlaneRegion: cell sides must be positive");
    bits_.assign(bounds_.cells(), 0);
}

bool PlaneRegion::test(std::int64_t i, std::int64_t k) const noexcept {
    if (i < bounds_.lo[0] || i >= bounds_.hi[0] || k < bounds_.lo[1] || k >= bounds_.hi[1]) return false;
    return bits_[static_cast<std::size_t>(k - bounds_.lo[1]) * static_cast<std::size_t>(bounds_.extent(0)) +
                 static_cast<std::size_t>(i - bounds_.lo[0])] != 0;
}

void PlaneRegion::set(std::int64_t i, std::int64_t k, bool on) {
    if (i < bounds_.lo[0] || i >= bounds_.hi[0] || k < bounds_.lo[1] || k >= bounds_.hi[1])
        throw std::out_of_range("PlaneRegion::set: index outside bounds");
    bits_[static_cast<std::size_t>(k - bounds_.lo[1]) * static_cast<std::size_t>(bounds_.extent(0)) +
          static_cast<std::size_t>(i - bounds_.lo[0])] = on ? 1 : 0;
}

std::size_t PlaneRegion::count() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double PlaneRegion::area() const noexcept { return static_cast<double>(count()) * h_ * ht_; }

// ---------------------------------------------------------------- shapes

namespace {

struct BoxNode {
    HPoint c, a;
};
struct KoranyiNode {
    HPoint c;
    double r;
};
struct EuclidNode {
    HPoint c;
    double r;
};
struct UnionNode {
    std::vector<Shape> parts;
};
struct DiffNode {
    std::vector<Shape> pair;  // keep, remove
};
struct DilateNode {
    double lambda;
    std::vector<Shape> base;
};
struct ShearNode {
    std::vector<Shape> base;
};

Bounds3 empty_bounds() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {{inf, inf, inf}, {-inf, -inf, -inf}};
}

}  // namespace

struct Shape::Node {
    std::variant<BoxNode, KoranyiNode, EuclidNode, UnionNode, DiffNode, DilateNode, ShearNode> v;
};

bool Shape::contains(HPoint p) const {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BoxNode>) {
                return std::abs(p.x - n.c.x) <= n.a.x && std::abs(p.y - n.c.y) <= n.a.y &&
                       std::abs(p.t - n.c.t) <= n.a.t;
            } else if constexpr (std::is_same_v<T, KoranyiNode>) {
                return koranyi_distance(p, n.c) <= n.r;
            } else if constexpr (std::is_same_v<T, EuclidNode>) {
                const double dx = p.x - n.c.x, dy = p.y - n.c.y, dt = p.t - n.c.t;
                return dx * dx + dy * dy + dt * dt <= n.r * n.r;
            } else if constexpr (std::is_same_v<T, UnionNode>) {
                return std::any_of(n.parts.begin(), n.parts.end(), [&](const Shape& s) { return s.contains(p); });
            } else if constexpr (std::is_same_v<T, DiffNode>) {
                return n.pair[0].contains(p) && !n.pair[1].contains(p);
            } else if constexpr (std::is_same_v<T, DilateNode>) {
                return n.base[0].contains(dilate(1.0 / n.lambda, p));
            } else {
                return n.base[0].contains({p.x, p.y, p.t - 0.5 * p.x * p.y});
            }
        },
        node_->v);
}

Bounds3 Shape::bounds() const {
    return std::visit(
        [&](const auto& n) -> Bounds3 {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BoxNode>) {
                return {{n.c.x - n.a.x, n.c.y - n.a.y, n.c.t - n.a.t}, {n.c.x + n.a.x, n.c.y + n.a.y, n.c.t + n.a.t}};
            } else if constexpr (std::is_same_v<T, KoranyiNode>) {
                // c . B(0, r) with |x|, |y| <= r and |t| <= r^2 / 4 in B(0, r).
                const double dt = n.r * n.r / 4.0 + 0.5 * (std::abs(n.c.x) + std::abs(n.c.y)) * n.r;
                return {{n.c.x - n.r, n.c.y - n.r, n.c.t - dt}, {n.c.x + n.r, n.c.y + n.r, n.c.t + dt}};
            } else if constexpr (std::is_same_v<T, EuclidNode>) {
                return {{n.c.x - n.r, n.c.y - n.r, n.c.t - n.r}, {n.c.x + n.r, n.c.y + n.r, n.c.t + n.r}};
            } else if constexpr (std::is_same_v<T, UnionNode>) {
                Bounds3 b = empty_bounds();
                for (const Shape& s : n.parts) {
                    if (s.is_empty()) continue;
                    const Bounds3 c = s.bounds();
                    b.min = {std::min(b.min.x, c.min.x), std::min(b.min.y, c.min.y), std::min(b.min.t, c.min.t)};
                    b.max = {std::max(b.max.x, c.max.x), std::max(b.max.y, c.max.y), std::max(b.max.t, c.max.t)};
                }
                return b;
            } else if constexpr (std::is_same_v<T, DiffNode>) {
                return n.pair[0].bounds();
            } else if constexpr (std::is_same_v<T, DilateNode>) {
                const Bounds3 b = n.base[0].bounds();
                const double l = n.lambda, l2 = l * l;
                return {{l * b.min.x, l * b.min.y, l2 * b.min.t}, {l * b.max.x, l * b.max.y, l2 * b.max.t}};
            } else {
                const Bounds3 b = n.base[0].bounds();
                const double mx = std::max(std::abs(b.min.x), std::abs(b.max.x));
                const double my = std::max(std::abs(b.min.y), std::abs(b.max.y));
                return {{b.min.x, b.min.y, b.min.t - 0.5 * mx * my}, {b.max.x, b.max.y, b.max.t + 0.5 * mx * my}};
            }
        },
        node_->v);
}

bool Shape::is_empty() const {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BoxNode>) {
                return n.a.x < 0 || n.a.y < 0 || n.a.t < 0;
            } else if constexpr (std::is_same_v<T, KoranyiNode> || std::is_same_v<T, EuclidNode>) {
                return n.r < 0;
            } else if constexpr (std::is_same_v<T, UnionNode>) {
                return std::all_of(n.parts.begin(), n.parts.end(), [](const Shape& s) { return s.is_empty(); });
            } else if constexpr (std::is_same_v<T, DiffNode>) {
                return n.pair[0].is_empty();
            } else {
                return n.base[0].is_empty();
            }
        },
        node_->v);
}

Shape Shape::box(HPoint center, HPoint half_widths) {
    return Shape(std::make_shared<const Node>(Node{BoxNode{center, half_widths}}));
}

Shape Shape::heisenberg_box(double r) { return box({}, {r, r, r * r}); }

Shape Shape::koranyi_ball(HPoint center, double radius) {
    return Shape(std::make_shared<const Node>(Node{KoranyiNode{center, radius}}));
}

Shape Shape::euclidean_ball(HPoint center, double radius) {
    return Shape(std::make_shared<const Node>(Node{EuclidNode{center, radius}}));
}

Shape Shape::union_of(std::vector<Shape> parts) {
    return Shape(std::make_shared<const Node>(Node{UnionNode{std::move(parts)}}));
}

Shape Shape::difference(Shape keep, Shape remove) {
    return Shape(std::make_shared<const Node>(Node{DiffNode{{std::move(keep), std::move(remove)}}}));
}

Shape Shape::dilated(double lambda, Shape base) {
    if (!(lambda > 0.0)) throw std::invalid_argument("Shape::dilated: lambda must be positive");
    return Shape(std::make_shared<const Node>(Node{DilateNode{lambda, {std::move(base)}}}));
}

Shape Shape::sheared(Shape base) { return Shape(std::make_shared<const Node>(Node{ShearNode{{std::move(base)}}})); }

std::vector<NamedShape> shape_zoo() {
    return {
        {"heisenberg_box", Shape::heisenberg_box(0.5)},
        {"flat_box", Shape::box({0.05, -0.1, 0.0}, {0.4, 0.25, 0.05})},
        {"koranyi_ball", Shape::koranyi_ball({0.1, -0.05, 0.02}, 0.4)},
        {"euclidean_ball", Shape::euclidean_ball({}, 0.4)},
        {"box_union", Shape::union_of({Shape::box({-0.2, -0.2, 0.0}, {0.2, 0.15, 0.1}),
                                       Shape::box({0.15, 0.2, 0.05}, {0.2, 0.2, 0.08})})},
        {"hollow_box", Shape::difference(Shape::heisenberg_box(0.45), Shape::heisenberg_box(0.25))},
        {"sheared_box", Shape::sheared(Shape::box({}, {0.4, 0.4, 0.1}))},
    };
}

// ---------------------------------------------------------------- voxels

VoxelSet voxelize(const Shape& shape, double h, double ht, unsigned threads) {
    if (!(h > 0.0)) throw std::invalid_argument("voxelize: h must be positive");
    if (ht <= 0.0) ht = h;
    if (shape.is_empty()) return VoxelSet(h, ht, {});
    const Bounds3 b = shape.bounds();
    // One empty layer of margin around the bounding box.
    auto lo = [](double v, double side) { return static_cast<std::int64_t>(std::floor(v / side)) - 1; };
    auto hi = [](double v, double side) { return static_cast<std::int64_t>(std::ceil(v / side)) + 1; };
    const IndexBox3 box{{lo(b.min.x, h), lo(b.min.y, h), lo(b.min.t, ht)}, {hi(b.max.x, h), hi(b.max.y, h), hi(b.max.t, ht)}};
    VoxelSet K(h, ht, box);
    auto& bits = K.raw();
    const auto nz = static_cast<std::size_t>(box.extent(2));
    parallel_chunks(nz, threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        for (std::size_t kz = begin; kz < end; ++kz) {
            const std::int64_t k = box.lo[2] + static_cast<std::int64_t>(kz);
            for (std::int64_t j = box.lo[1]; j < box.hi[1]; ++j)
                for (std::int64_t i = box.lo[0]; i < box.hi[0]; ++i)
                    if (shape.contains(K.center(i, j, k))) bits[K.linear(i, j, k)] = 1;
        }
    });
    return K;
}

namespace {

// Plane bounds large enough to hold the projection of every sample point of
// every voxel in K's bounds.
IndexBox2 projection_bounds(const VoxelSet& K, Axis which) {
    const IndexBox3& b = K.bounds();
    const double x0 = static_cast<double>(b.lo[0]) * K.h(), x1 = static_cast<double>(b.hi[0]) * K.h();
    const double y0 = static_cast<double>(b.lo[1]) * K.h(), y1 = static_cast<double>(b.hi[1]) * K.h();
    const double t0 = static_cast<double>(b.lo[2]) * K.ht(), t1 = static_cast<double>(b.hi[2]) * K.ht();
    const double mxy = std::max(std::abs(x0), std::abs(x1)) * std::max(std::abs(y0), std::abs(y1)) / 2.0;
    const auto tlo = static_cast<std::int64_t>(std::floor((t0 - mxy) / K.ht())) - 1;
    const auto thi = static_cast<std::int64_t>(std::ceil((t1 + mxy) / K.ht())) + 1;
    const int d = which == Axis::x ? 0 : 1;
    return {{b.lo[d], tlo}, {b.hi[d], thi}};
}

}  // namespace

PlaneRegion project_voxels(const VoxelSet& K, Axis which, int oversample, unsigned threads) {
    if (oversample < 1) throw std::invalid_argument("project_voxels: oversample must be >= 1");
    const Plane plane = which == Axis::x ? Plane::W_x : Plane::W_y;
    const IndexBox2 pb = projection_bounds(K, which);
    PlaneRegion R(plane, K.h(), K.ht(), pb);
    const IndexBox3& b = K.bounds();
    const auto nz = static_cast<std::size_t>(b.extent(2));
    if (nz == 0 || b.cells() == 0) return R;

    const std::size_t chunks = chunk_count(nz, threads);
    std::vector<std::vector<std::uint8_t>> partial(chunks);
    const auto pw = static_cast<std::size_t>(pb.extent(0));
    std::vector<double> offs(static_cast<std::size_t>(oversample));
    for (int a = 0; a < oversample; ++a) offs[static_cast<std::size_t>(a)] = (a + 0.5) / oversample;

    parallel_chunks(nz, threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        auto& bits = partial[chunk];
        bits.assign(R.raw().size(), 0);
        for (std::size_t kz = begin; kz < end; ++kz) {
            const std::int64_t k = b.lo[2] + static_cast<std::int64_t>(kz);
            for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j)
                for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i) {
                    if (!K.test(i, j, k)) continue;
                    for (double ox : offs)
                        for (double oy : offs)
                            for (double ot : offs) {
                                const HPoint q{(static_cast<double>(i) + ox) * K.h(), (static_cast<double>(j) + oy) * K.h(),
                                               (static_cast<double>(k) + ot) * K.ht()};
                                const VerticalPlanePoint w = project(plane, q);
                                const auto ci = static_cast<std::int64_t>(std::floor(w.u / K.h()));
                                const auto ck = static_cast<std::int64_t>(std::floor(w.t / K.ht()));
                                bits[static_cast<std::size_t>(ck - pb.lo[1]) * pw + static_cast<std::size_t>(ci - pb.lo[0])] = 1;
                            }
                }
        }
    });
    auto& out = R.raw();
    for (const auto& bits : partial)
        for (std::size_t n = 0; n < out.size(); ++n) out[n] |= bits[n];
    return R;
}

double lw_ratio(const VoxelSet& K, int oversample) {
    if (K.empty()) throw std::invalid_argument("lw_ratio: empty set");
    const double ax = project_voxels(K, Axis::x, oversample).area();
    const double ay = project_voxels(K, Axis::y, oversample).area();
    if (ax <= 0.0 || ay <= 0.0) throw std::logic_error("lw_ratio: empty projection of a nonempty set");
    return K.volume() / std::cbrt(ax * ax * ay * ay);
}

double tube_intersection_volume(VerticalPlanePoint w_x, VerticalPlanePoint w_y, double delta, double a1) {
    if (w_x.plane != Plane::W_x || w_y.plane != Plane::W_y)
        throw std::invalid_argument("tube_intersection_volume: expected w_x on W_x and w_y on W_y");
    const double h = delta / 4.0;
    const double radius = a1 * delta;
    const HorizontalFiber fx{w_x}, fy{w_y};
    // The fibre of w_x has constant x = w_x.u and that of w_y constant y = w_y.u.
    auto range = [&](double c) {
        const double lo = std::max(-1.0, c - radius), hi = std::min(1.0, c + radius);
        return std::pair{static_cast<std::int64_t>(std::floor(lo / h - 0.5)),
                         static_cast<std::int64_t>(std::ceil(hi / h - 0.5))};
    };
    const auto [i0, i1] = range(w_x.u);
    const auto [j0, j1] = range(w_y.u);
    const auto k0 = static_cast<std::int64_t>(std::floor(-1.0 / h - 0.5));
    const auto k1 = static_cast<std::int64_t>(std::ceil(1.0 / h - 0.5));
    std::size_t hits = 0;
    for (std::int64_t i = i0; i <= i1; ++i)
        for (std::int64_t j = j0; j <= j1; ++j)
            for (std::int64_t k = k0; k <= k1; ++k) {
                const HPoint p{(static_cast<double>(i) + 0.5) * h, (static_cast<double>(j) + 0.5) * h,
                               (static_cast<double>(k) + 0.5) * h};
                if (std::abs(p.x) > 1.0 || std::abs(p.y) > 1.0 || std::abs(p.t) > 1.0) continue;
                if (fx.distance(p) <= radius && fy.distance(p) <= radius) ++hits;
            }
    return static_cast<double>(hits) * h * h * h;
}

VoxelSet boundary(const VoxelSet& E) {
    VoxelSet B(E.h(), E.ht(), E.bounds());
    E.for_each([&](std::int64_t i, std::int64_t j, std::int64_t k) {
        if (!E.test(i - 1, j, k) || !E.test(i + 1, j, k) || !E.test(i, j - 1, k) || !E.test(i, j + 1, k) ||
            !E.test(i, j, k - 1) || !E.test(i, j, k + 1))
            B.set(i, j, k);
    });
    return B;
}

double h3_surrogate(const VoxelSet& B) {
    const double h = B.h();
    VoxelSet centres(B.h(), B.ht(), B.bounds());
    std::size_t balls = 0;
    B.for_each([&](std::int64_t i, std::int64_t j, std::int64_t k) {
        const HPoint p = B.center(i, j, k);
        // A ball c . B(0, h) containing p has |x - cx|, |y - cy| <= h and
        // |t - ct| <= h^2/4 + h (|cx| + |cy|) / 2.
        const double reach = h * h / 4.0 + 0.5 * h * (std::abs(p.x) + std::abs(p.y) + 2.0 * h);
        const auto dk = static_cast<std::int64_t>(std::ceil(reach / B.ht()));
        for (std::int64_t c = k - dk; c <= k + dk; ++c)
            for (std::int64_t b = j - 1; b <= j + 1; ++b)
                for (std::int64_t a = i - 1; a <= i + 1; ++a)
                    if (centres.test(a, b, c) && koranyi_distance(p, B.center(a, b, c)) <= h) return;
        centres.set(i, j, k);
        ++balls;
    });
    return static_cast<double>(balls) * h * h * h;
}

bool boundary_projection_inclusion(const VoxelSet& E, Axis which, int oversample) {
    const PlaneRegion full = project_voxels(E, which, oversample);
    const PlaneRegion edge = project_voxels(boundary(E), which, oversample);
    bool ok = true;
    full.for_each([&](std::int64_t i, std::int64_t k) {
        if (!ok) return;
        bool near = false;
        for (std::int64_t dk = -1; dk <= 1 && !near; ++dk)
            for (std::int64_t di = -1; di <= 1 && !near; ++di) near = edge.test(i + di, k + dk);
        ok = near;
    });
    return ok;
}

double weak_isoperimetric_ratio(const VoxelSet& E) {
    if (E.empty()) throw std::invalid_argument("weak_isoperimetric_ratio: empty set");
    return std::pow(E.volume(), 0.75) / h3_surrogate(boundary(E));
}

}  // namespace inclab
