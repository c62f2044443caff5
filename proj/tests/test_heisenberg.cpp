#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "inclab/heisenberg.hpp"
#include "inclab/incidence.hpp"
#include "inclab/rng.hpp"

using namespace inclab;

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Upper unitriangular model of the group: (x,y,t) -> [[1, x, t + xy/2], [0, 1, y], [0, 0, 1]].
Mat3 to_matrix(HPoint p) { return {{{1, p.x, p.t + 0.5 * p.x * p.y}, {0, 1, p.y}, {0, 0, 1}}}; }

HPoint from_matrix(const Mat3& m) { return {m[0][1], m[1][2], m[0][2] - 0.5 * m[0][1] * m[1][2]}; }

Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

HPoint random_point(SplitMix64& rng, double r = 1.0) {
    return {rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r, r)};
}

bool close(HPoint a, HPoint b, double tol = 1e-12) {
    const double scale = std::max({1.0, std::abs(a.x), std::abs(a.y), std::abs(a.t)});
    return std::abs(a.x - b.x) <= tol * scale && std::abs(a.y - b.y) <= tol * scale && std::abs(a.t - b.t) <= tol * scale;
}

}  // namespace

TEST_CASE("group law examples") {
    const HPoint p{0.3, -0.7, 1.9};
    CHECK(h_mul(p, {}) == p);
    CHECK(h_mul(HPoint{1, 0, 0}, HPoint{0, 1, 0}) == HPoint{1, 1, 0.5});
    CHECK(h_mul(HPoint{1, 1, 0}, HPoint{-1, -1, 0}) == HPoint{0, 0, 0});
    CHECK(h_inv({}) == HPoint{});
    CHECK(h_inv({1, 2, 3}) == HPoint{-1, -2, -3});
    CHECK(h_mul(HPoint{1, 2, 3}, h_inv({1, 2, 3})) == HPoint{});
}

TEST_CASE("group law matches the matrix model") {
    SplitMix64 rng(101);
    for (int i = 0; i < 5000; ++i) {
        const HPoint p = random_point(rng, 3), q = random_point(rng, 3);
        CHECK(close(h_mul(p, q), from_matrix(matmul(to_matrix(p), to_matrix(q)))));
    }
}

TEST_CASE("group axioms") {
    SplitMix64 rng(7);
    for (int i = 0; i < 5000; ++i) {
        const HPoint p = random_point(rng), q = random_point(rng), r = random_point(rng);
        CHECK(close(h_mul(h_mul(p, q), r), h_mul(p, h_mul(q, r))));
        CHECK(close(h_mul(h_inv(q), q), {}));
        CHECK(close(h_mul(q, h_inv(q)), {}));
    }
}

TEST_CASE("dilations") {
    const HPoint p{0.4, 0.1, -0.3};
    CHECK(dilate(1.0, p) == p);
    CHECK(dilate(2.0, HPoint{1, 1, 1}) == HPoint{2, 2, 4});
    CHECK_THROWS_AS((void)dilate(0.0, p), std::invalid_argument);
    CHECK_THROWS_AS((void)dilate(-1.0, p), std::invalid_argument);
    SplitMix64 rng(8);
    for (int i = 0; i < 2000; ++i) {
        const double lam = rng.uniform(0.1, 4);
        const HPoint a = random_point(rng), b = random_point(rng);
        CHECK(close(dilate(lam, h_mul(a, b)), h_mul(dilate(lam, a), dilate(lam, b))));
        const VerticalPlanePoint px = proj_x(dilate(lam, a)), dx = dilate(lam, proj_x(a));
        CHECK(close(px.embed(), dx.embed()));
        const VerticalPlanePoint py = proj_y(dilate(lam, a)), dy = dilate(lam, proj_y(a));
        CHECK(close(py.embed(), dy.embed()));
    }
}

TEST_CASE("vertical projections") {
    CHECK(proj_x({0.25, 0, -0.5}) == VerticalPlanePoint{Plane::W_x, 0.25, -0.5});
    CHECK(proj_y({1, 1, 0}) == VerticalPlanePoint{Plane::W_y, 1, 0.5});
    CHECK(proj_x({1, 1, 0}) == VerticalPlanePoint{Plane::W_x, 1, -0.5});

    SplitMix64 rng(9);
    for (int i = 0; i < 5000; ++i) {
        const HPoint p = random_point(rng, 2);
        // p = pi_x(p) . (0, y, 0) and p = pi_y(p) . (x, 0, 0)
        CHECK(close(h_mul(proj_x(p).embed(), {0, p.y, 0}), p));
        CHECK(close(h_mul(proj_y(p).embed(), {p.x, 0, 0}), p));
        const VerticalPlanePoint wx{Plane::W_x, p.x, p.t}, wy{Plane::W_y, p.y, p.t};
        CHECK(proj_x(wx.embed()) == wx);
        CHECK(proj_y(wy.embed()) == wy);
    }
}

TEST_CASE("fibres") {
    const auto axis = sample_fiber({Plane::W_x, 0, 0}, -1, 1, 9);
    for (const HPoint& q : axis) {
        CHECK(q.x == 0.0);
        CHECK(q.t == 0.0);
    }
    CHECK(horizontal_fiber({Plane::W_x, 1, 0})(1.0) == HPoint{1, 1, 0.5});

    SplitMix64 rng(10);
    for (int i = 0; i < 500; ++i) {
        const VerticalPlanePoint wx{Plane::W_x, rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const VerticalPlanePoint wy{Plane::W_y, rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const LineAB lx = project_fiber_to_line(wx);
        const LineAB ly = project_fiber_to_line(wy);
        for (const HPoint& q : sample_fiber(wx, -1, 1, 21)) {
            CHECK(close(proj_x(q).embed(), wx.embed()));
            const Point2 img = proj_y(q).coords();
            CHECK(std::abs(lx.a * img.x + lx.b - img.y) <= 1e-14);
            CHECK(horizontal_fiber(wx).distance(q) <= 1e-14);
        }
        for (const HPoint& q : sample_fiber(wy, -1, 1, 21)) {
            CHECK(close(proj_y(q).embed(), wy.embed()));
            const Point2 img = proj_x(q).coords();
            CHECK(std::abs(ly.a * img.x + ly.b - img.y) <= 1e-14);
        }
    }
    CHECK(project_fiber_to_line({Plane::W_x, 0, 0}) == LineAB{0, 0});
    CHECK(project_fiber_to_line({Plane::W_x, 0.5, 0.25}) == LineAB{0.5, 0.25});
    CHECK_THROWS_AS((void)project_fiber_to_line({Plane::W_x, 1.5, 0}), std::domain_error);
    CHECK_THROWS_AS((void)sample_fiber({}, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("fibre to line is an isometry onto the parameter metric") {
    SplitMix64 rng(12);
    for (int i = 0; i < 1000; ++i) {
        const VerticalPlanePoint a{Plane::W_x, rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const VerticalPlanePoint b{Plane::W_x, rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(line_metric(project_fiber_to_line(a), project_fiber_to_line(b)) ==
              doctest::Approx(std::hypot(a.u - b.u, a.t - b.t)).epsilon(1e-15));
    }
}

TEST_CASE("koranyi gauge") {
    CHECK(koranyi_norm({}) == 0.0);
    CHECK(koranyi_norm({1, 0, 0}) == 1.0);
    CHECK(koranyi_norm({0, 0, 1.0 / 16}) == doctest::Approx(0.5));
    SplitMix64 rng(13);
    for (int i = 0; i < 5000; ++i) {
        const HPoint p = random_point(rng), q = random_point(rng), r = random_point(rng);
        const double lam = rng.uniform(0.1, 5);
        CHECK(koranyi_norm(dilate(lam, p)) == doctest::Approx(lam * koranyi_norm(p)).epsilon(1e-12));
        CHECK(koranyi_norm(h_inv(p)) == koranyi_norm(p));
        // Left invariance and the triangle inequality of the induced distance.
        CHECK(koranyi_distance(h_mul(r, p), h_mul(r, q)) == doctest::Approx(koranyi_distance(p, q)).epsilon(1e-9));
        CHECK(koranyi_distance(p, r) <= koranyi_distance(p, q) + koranyi_distance(q, r) + 1e-12);
    }
}

TEST_CASE("tube constants") {
    CHECK(tube_inclusion_check({Plane::W_x, 0, 0}, 1.0 / 32) >= 1.0);
    CHECK(tube_inclusion_check({Plane::W_y, 0, 0}, 1.0 / 32) >= 1.0);
    SplitMix64 rng(14);
    double worst_tube = 0, worst_core = 0;
    for (int e = 4; e <= 10; ++e) {
        const double delta = std::ldexp(1.0, -e);
        for (int i = 0; i < 6; ++i) {
            for (Plane plane : {Plane::W_x, Plane::W_y}) {
                const VerticalPlanePoint w{plane, rng.uniform(-1, 1), rng.uniform(-1, 1)};
                worst_tube = std::max(worst_tube, tube_inclusion_check(w, delta, 8));
                worst_core = std::max(worst_core, core_projection_check(w, delta, 8));
            }
        }
    }
    CHECK(worst_tube <= kTubeConstant);
    CHECK(worst_core <= kCoreConstant);
    CHECK(worst_tube >= 1.0);
}

TEST_CASE("reduction to planar incidences") {
    const Reduction one = reduce_to_incidences({{Plane::W_x, 0, 0}}, {}, 0.1);
    REQUIRE(one.lines.size() == 1);
    CHECK(one.lines.lines[0] == LineAB{0, 0});
    CHECK(one.multiplier == 1.0 + kCoreConstant);

    CHECK_THROWS_AS((void)reduce_to_incidences({{Plane::W_y, 0, 0}}, {}, 0.1), std::invalid_argument);
    CHECK_THROWS_AS((void)reduce_to_incidences({{Plane::W_x, 0, 0}, {Plane::W_x, 0.05, 0}}, {}, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)reduce_to_incidences({}, {{Plane::W_y, 0, 0}, {Plane::W_y, 0, 0.01}}, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)reduce_to_incidences({{Plane::W_x, 1.2, 0}}, {}, 0.1), std::invalid_argument);

    // Whenever the two preimage tubes share a point of [-1,1]^3, the pair is
    // an incidence of the reduced instance.
    SplitMix64 rng(15);
    const double delta = 1.0 / 64;
    int checked = 0;
    for (int i = 0; i < 20000; ++i) {
        const HPoint q = random_point(rng, 0.5);
        auto jitter = [&](VerticalPlanePoint w) {
            const double r = delta * std::sqrt(rng.uniform()), th = rng.uniform(0, 2 * std::numbers::pi);
            return VerticalPlanePoint{w.plane, w.u + r * std::cos(th), w.t + r * std::sin(th)};
        };
        const VerticalPlanePoint wx = jitter(proj_x(q)), wy = jitter(proj_y(q));
        if (!wx.in_q0() || !wy.in_q0()) continue;
        const Reduction red = reduce_to_incidences({wx}, {wy}, delta);
        CHECK(count_naive(red.points, red.lines, Scale::at(delta, red.multiplier)).count == 1);
        ++checked;
    }
    CHECK(checked > 10000);
}

TEST_CASE("hpoint csv round trip") {
    const std::vector<HPoint> pts{{0.1, -0.2, 0.3}, {1.0 / 3, 2.0 / 7, -5.0 / 11}};
    std::stringstream ss;
    write_hpoints_csv(ss, pts);
    CHECK(read_hpoints_csv(ss) == pts);
}
