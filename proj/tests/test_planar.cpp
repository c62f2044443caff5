#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "inclab/generators.hpp"
#include "inclab/planar.hpp"
#include "inclab/planar_io.hpp"
#include "inclab/rng.hpp"

using namespace inclab;

namespace {

// Distance to the line by brute minimization over a fine parametrization.
double sampled_distance(Point2 p, LineAB l) {
    double best = std::numeric_limits<double>::infinity();
    const int n = 200000;
    for (int i = 0; i <= n; ++i) {
        const double x = -4.0 + 8.0 * i / n;
        best = std::min(best, std::hypot(p.x - x, p.y - (l.a * x + l.b)));
    }
    return best;
}

std::pair<double, std::size_t> brute_min_distance(const std::vector<Point2>& pts) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            best = std::min(best, std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
            ++count;
        }
    return {best, count};
}

}  // namespace

TEST_CASE("line metric") {
    CHECK(line_metric({0, 0}, {0, 0}) == 0.0);
    CHECK(line_metric({0, 0}, {0, 1}) == 1.0);
    CHECK(line_metric({0.3, 0.4}, {0, 0}) == doctest::Approx(0.5).epsilon(1e-15));

    SplitMix64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const LineAB u{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const LineAB v{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const LineAB w{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(line_metric(u, v) == line_metric(v, u));
        CHECK(line_metric(u, w) <= line_metric(u, v) + line_metric(v, w) + 1e-15);
        CHECK(line_metric(u, u) == 0.0);
        if (!(u == v)) CHECK(line_metric(u, v) > 0.0);
    }
}

TEST_CASE("point to line distance") {
    CHECK(point_line_dist({1, 1}, {1, 0}) == 0.0);
    CHECK(point_line_dist({0, 0.5}, {0, 0}) == 0.5);
    const double d = point_line_dist({0, 0}, {1, 1});
    CHECK(d == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(d == doctest::Approx(sampled_distance({0, 0}, {1, 1})).epsilon(1e-6));

    SplitMix64 rng(11);
    for (int i = 0; i < 20; ++i) {
        const Point2 p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const LineAB l{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(point_line_dist(p, l) == doctest::Approx(sampled_distance(p, l)).epsilon(1e-5));
    }
}

TEST_CASE("vertical and euclidean distance sandwich") {
    SplitMix64 rng(3);
    for (int i = 0; i < 10000; ++i) {
        const Point2 p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const LineAB l{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double e = point_line_dist(p, l);
        const double v = vertical_deviation(p, l);
        CHECK(e <= v);
        CHECK(v <= std::sqrt(2.0) * e * (1 + 1e-15));
    }
}

TEST_CASE("closed incidence") {
    const Scale s = Scale::at(0.1);
    CHECK(is_incident({0, 0}, {0, 0}, s));
    CHECK_FALSE(is_incident({0, 0.2}, {0, 0}, s));
    CHECK(is_incident({0, 0.1}, {0, 0}, s));
    CHECK(is_incident({0, 0.2}, {0, 0}, s.with_multiplier(2.0)));
}

TEST_CASE("scale validation") {
    CHECK_THROWS_AS(Scale(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(Scale(0.5, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(Scale(0.1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(Scale(0.1, 0.1, 0.5), std::invalid_argument);
    CHECK_NOTHROW(Scale(1.0, 1.0, 1.0));
}

TEST_CASE("duality maps") {
    CHECK(dual_point_to_line({0, 0}) == LineAB{0, 0});
    CHECK(dual_point_to_line({0.5, 0.25}) == LineAB{-0.5, 0.25});
    CHECK(dual_point_to_line({1, -1}) == LineAB{-1, -1});
    CHECK_THROWS_AS((void)dual_point_to_line({1.5, 0}), std::domain_error);
    CHECK(dual_line_to_point({0, 0}) == Point2{0, 0});
    CHECK(dual_line_to_point({0.7, -0.2}) == Point2{0.7, -0.2});

    // Composing both maps flips the sign of the first coordinate; applying
    // the pair twice is the identity.
    SplitMix64 rng(5);
    for (int i = 0; i < 1000; ++i) {
        const Point2 p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Point2 q = dual_line_to_point(dual_point_to_line(p));
        CHECK(q == Point2{-p.x, p.y});
        CHECK(dual_line_to_point(dual_point_to_line(q)) == p);
    }
}

TEST_CASE("duality transfers incidence with multiplier two") {
    SplitMix64 rng(2024);
    const double delta = 1.0 / 64;
    const Scale one = Scale::at(delta), two = Scale::at(delta, 2.0);
    int tested = 0;
    while (tested < 10000) {
        const LineAB l{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double x = rng.uniform(-1, 1);
        const double y = l.a * x + l.b + rng.uniform(-delta, delta) * std::sqrt(1 + l.a * l.a);
        const Point2 p{x, y};
        if (!p.in_q0() || !is_incident(p, l, one)) continue;
        ++tested;
        REQUIRE(is_incident(dual_line_to_point(l), dual_point_to_line(p), two));
    }
}

TEST_CASE("duality preserves separation") {
    const Configuration cfg = gen_random(400, 400, 1.0 / 64, 99);
    LineFamily from_points{{}, cfg.points.delta};
    for (const Point2& p : cfg.points.points) from_points.lines.push_back(dual_point_to_line(p));
    CHECK(validate_separation(from_points).ok);

    std::vector<Point2> from_lines;
    for (const LineAB& l : cfg.lines.lines) from_lines.push_back(dual_line_to_point(l));
    CHECK(validate_separation(from_lines, cfg.lines.epsilon).ok);
}

TEST_CASE("separation validation") {
    CHECK(validate_separation(PointSet{{{0, 0}, {1, 0}}, 0.5}).ok);
    const SeparationReport bad = validate_separation(PointSet{{{0, 0}, {0.1, 0}}, 0.5});
    CHECK_FALSE(bad.ok);
    CHECK(bad.worst_distance == doctest::Approx(0.1));
    REQUIRE(bad.worst_pair);
    CHECK(bad.worst_pair->first == 0);
    CHECK(bad.worst_pair->second == 1);

    const PointSet packing = gen_grid_packing(1.0 / 32, {});
    CHECK(packing.size() == 4225);
    CHECK(validate_separation(packing).ok);

    // Against an all-pairs scan on random clouds.
    SplitMix64 rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Point2> pts(150);
        for (auto& p : pts) p = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double bound = rng.uniform(0.01, 0.2);
        const auto [best, pairs] = brute_min_distance(pts);
        const SeparationReport r = validate_separation(pts, bound);
        CHECK(r.ok == (best >= bound));
        if (!r.ok) {
            CHECK(r.worst_distance == best);
        }
        CHECK(pairs > 0);
    }
}

TEST_CASE("greedy separated subset is separated and maximal") {
    SplitMix64 rng(23);
    std::vector<Point2> pts(800);
    for (auto& p : pts) p = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const double bound = 0.07;
    const auto kept = greedy_separated_subset(pts, bound);
    std::vector<Point2> sub;
    for (auto i : kept) sub.push_back(pts[i]);
    CHECK(validate_separation(sub, bound).ok);
    for (const Point2& p : pts) {
        double nearest = std::numeric_limits<double>::infinity();
        for (const Point2& q : sub) nearest = std::min(nearest, std::hypot(p.x - q.x, p.y - q.y));
        CHECK(nearest < bound + 1e-300);
    }
}

TEST_CASE("csv and metadata round trip") {
    const Configuration cfg = gen_random(50, 40, 1.0 / 32, 8);
    std::stringstream ps, ls;
    write_points_csv(ps, cfg.points);
    write_lines_csv(ls, cfg.lines);
    CHECK(ps.str().rfind("x,y\n", 0) == 0);
    CHECK(ls.str().rfind("a,b\n", 0) == 0);
    const PointSet P = read_points_csv(ps, cfg.points.delta);
    const LineFamily L = read_lines_csv(ls, cfg.lines.epsilon);
    CHECK(P.points == cfg.points.points);
    CHECK(L.lines == cfg.lines.lines);

    const SetMetadata back = metadata_from_json(to_json(cfg.meta));
    CHECK(back.delta == cfg.meta.delta);
    CHECK(back.epsilon == cfg.meta.epsilon);
    CHECK(back.generator == "random");
    CHECK(back.seed == 8);
}

TEST_CASE("csv rejects malformed rows") {
    std::stringstream bad("x,y\n0.1,zz\n");
    CHECK_THROWS_AS((void)read_points_csv(bad, 0.1), std::invalid_argument);
    std::stringstream wrong_header("a,b\n0,0\n");
    CHECK_THROWS((void)read_points_csv(wrong_header, 0.1));
}
