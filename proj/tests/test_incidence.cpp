#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "inclab/generators.hpp"
#include "inclab/incidence.hpp"
#include "inclab/rng.hpp"

using namespace inclab;

namespace {

// Independent pair test written out longhand: squared vertical deviation
// against (C delta)^2 (1 + a^2).
std::uint64_t longhand_count(const PointSet& P, const LineFamily& L, double radius) {
    std::uint64_t n = 0;
    for (const Point2& p : P.points)
        for (const LineAB& l : L.lines) {
            const double dev = l.a * p.x + l.b - p.y;
            if (std::abs(dev) / std::sqrt(1.0 + l.a * l.a) <= radius) ++n;
        }
    return n;
}

}  // namespace

TEST_CASE("naive count examples") {
    const Scale s = Scale::at(0.1);
    CHECK(count_naive({{{0, 0}}, 0.1}, {{{0, 0}}, 0.1}, s).count == 1);
    CHECK(count_naive({{{0, 1}}, 0.1}, {{{0, 0}}, 0.1}, s).count == 0);
    const IncidenceReport empty = count_bucketed({{}, 0.1}, {{{0, 0}}, 0.1}, s);
    CHECK(empty.count == 0);
    CHECK(empty.normalized_ratio == 0.0);
}

TEST_CASE("report bookkeeping") {
    const Configuration cfg = gen_random(300, 300, 1.0 / 32, 4);
    const Scale s = Scale::at(1.0 / 32, 2.0);
    CountOptions opt;
    opt.materialize_pairs = true;
    const IncidenceReport r = count_naive(cfg.points, cfg.lines, s, opt);
    std::uint64_t sum = 0;
    for (auto v : r.richness) sum += v;
    CHECK(sum == r.count);
    REQUIRE(r.pairs);
    CHECK(r.pairs->size() == r.count);
    CHECK(std::is_sorted(r.pairs->begin(), r.pairs->end()));
    CHECK(r.count <= cfg.points.size() * cfg.lines.size());
    CHECK(r.count == longhand_count(cfg.points, cfg.lines, s.radius()));

    const auto h = r.k_histogram();
    std::uint64_t points = 0, weighted = 0;
    for (std::size_t k = 0; k < h.size(); ++k) {
        points += h[k];
        weighted += k * h[k];
    }
    CHECK(points == cfg.points.size());
    CHECK(weighted == r.count);

    const auto j = to_json(r);
    CHECK(j.at("count").get<std::uint64_t>() == r.count);
    CHECK(j.at("k_histogram").size() == h.size());
}

TEST_CASE("bucketed engine equals naive engine") {
    SplitMix64 pick(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const int e = 4 + static_cast<int>(pick.below(7));
        const double delta = std::ldexp(1.0, -e);
        const double epsilon = delta * static_cast<double>(1 + pick.below(3));
        const auto np = static_cast<std::size_t>(pick.below(std::min<std::uint64_t>(501, (1ull << (2 * e - 2)) + 1)));
        const auto nl = static_cast<std::size_t>(
            pick.below(std::min<std::uint64_t>(501, static_cast<std::uint64_t>(std::pow(1.0 / epsilon, 2) / 4) + 1)));
        const Configuration cfg = gen_random(np, nl, delta, pick.next(), epsilon);
        const Scale s(delta, epsilon, 1.0 + static_cast<double>(pick.below(3)));
        CountOptions opt;
        opt.materialize_pairs = true;
        opt.threads = 1 + static_cast<unsigned>(pick.below(4));
        const IncidenceReport a = count_naive(cfg.points, cfg.lines, s, opt);
        const IncidenceReport b = count_bucketed(cfg.points, cfg.lines, s, opt);
        CHECK(a == b);
    }
}

TEST_CASE("bucketed engine on dense concurrent data") {
    // Many lines through few points: every candidate window is crowded.
    const double delta = 1.0 / 256;
    const Scale s(delta, delta, 1.5);
    LineFamily L = gen_concurrent_star(400, {0.25, -0.1}, delta);
    const LineFamily other = gen_concurrent_star(300, {-0.5, 0.3}, delta * 2);
    L.lines.insert(L.lines.end(), other.lines.begin(), other.lines.end());
    PointSet P = gen_grid_packing(delta, {0.2, -0.15, 0.3, -0.05});
    P.points.push_back({-0.5, 0.3});
    CHECK(count_naive(P, L, s) == count_bucketed(P, L, s));
}

TEST_CASE("results do not depend on the worker count") {
    const Configuration cfg = gen_random(500, 500, 1.0 / 128, 77);
    const Scale s = Scale::at(1.0 / 128, 3.0);
    CountOptions one, many;
    one.threads = 1;
    many.threads = 7;
    one.materialize_pairs = many.materialize_pairs = true;
    CHECK(count_bucketed(cfg.points, cfg.lines, s, one) == count_bucketed(cfg.points, cfg.lines, s, many));
}

TEST_CASE("monotone in delta, multiplier and data") {
    const Configuration cfg = gen_random(300, 300, 1.0 / 64, 31);
    std::uint64_t prev = 0;
    for (double c : {1.0, 1.5, 2.0, 4.0}) {
        const auto n = count_bucketed(cfg.points, cfg.lines, Scale::at(1.0 / 64, c)).count;
        CHECK(n >= prev);
        prev = n;
    }
    PointSet fewer = cfg.points;
    fewer.points.resize(150);
    CHECK(count_bucketed(fewer, cfg.lines, Scale::at(1.0 / 64)).count <=
          count_bucketed(cfg.points, cfg.lines, Scale::at(1.0 / 64)).count);
    CHECK(count_bucketed(cfg.points, cfg.lines, Scale(1.0 / 64, 1.0 / 64)).count <=
          count_bucketed(cfg.points, cfg.lines, Scale(1.0 / 32, 1.0 / 32)).count);
}

TEST_CASE("normalized ratio formula") {
    const double r = normalized_ratio(1000, 8, 27, 1.0 / 8);
    // 8^{2/3} 27^{2/3} 8^{1/3} = 4 * 9 * 2
    CHECK(r == doctest::Approx(1000.0 / 72.0).epsilon(1e-14));
}

TEST_CASE("max concurrency") {
    const double eps = 1.0 / 64;
    const LineFamily star = gen_concurrent_star(32, {0, 0}, eps);
    REQUIRE(star.size() == 32);
    CHECK(validate_separation(star).ok);
    const Scale s(1.0 / 256, eps);
    CHECK(max_concurrency(star, {0, 0}, s) == 32);
    const double angle = 0.7;
    const Point2 far{std::cos(angle), std::sin(angle)};
    const auto at_far = max_concurrency(star, far, s);
    CHECK(at_far <= 2);
    std::size_t brute = 0;
    for (const LineAB& l : star.lines) brute += point_line_dist(far, l) <= s.radius() ? 1 : 0;
    CHECK(at_far == brute);
}

TEST_CASE("greedy concurrent family is within the two sided band") {
    const double eps = 1.0 / 64;
    const Scale s(eps / 4, eps);
    const LineFamily f = gen_greedy_concurrent({0.1, -0.2}, s);
    CHECK(validate_separation(f).ok);
    const auto n = max_concurrency(f, {0.1, -0.2}, s);
    CHECK(n == f.size());
    CHECK(static_cast<double>(n) >= 0.5 / eps);
    CHECK(static_cast<double>(n) <= 4.0 / eps);
}

TEST_CASE("k-rich points") {
    SUBCASE("parallel lines have no 2-rich point") {
        const LineFamily L{{{0, 0}, {0, 0.1}}, 0.05};
        CHECK(k_rich_points(L, 2, Scale(1.0 / 32, 1.0 / 32)).points.size() == 0);
    }
    SUBCASE("k below two is rejected") {
        CHECK_THROWS_AS((void)k_rich_points({{{0, 0}}, 0.1}, 1, Scale::at(0.1)), std::invalid_argument);
    }
    SUBCASE("planted stars are recovered") {
        const double delta = 1.0 / 1024;
        const Configuration cfg = gen_kstar(16, 8, delta);
        const RichPointResult r = k_rich_points(cfg.lines, 16, Scale::at(delta));
        CHECK(r.points.size() >= 8);
        CHECK(validate_separation(r.points).ok);
        for (const Point2& c : cfg.points.points) {
            const bool near = std::any_of(r.points.points.begin(), r.points.points.end(), [&](Point2 q) {
                return std::hypot(q.x - c.x, q.y - c.y) <= delta;
            });
            CHECK(near);
        }
        for (std::size_t i = 0; i < r.points.size(); ++i) {
            CHECK(r.richness[i] >= 16);
            CHECK(max_concurrency(cfg.lines, r.points.points[i], Scale::at(delta)) == r.richness[i]);
        }
        const double expected = static_cast<double>(r.points.size()) * 4096.0 * delta / (128.0 * 128.0);
        CHECK(r.bound_constant == doctest::Approx(expected));
    }
    SUBCASE("multi-threshold scan agrees with single scans") {
        const Configuration cfg = gen_random(0, 600, 1.0 / 64, 5);
        const Scale s = Scale::at(1.0 / 64, 2.0);
        const int ks[] = {2, 3, 5};
        const auto multi = k_rich_points(cfg.lines, ks, s);
        for (std::size_t i = 0; i < 3; ++i) {
            const auto single = k_rich_points(cfg.lines, ks[i], s);
            CHECK(multi[i].points.points == single.points.points);
            CHECK(multi[i].richness == single.richness);
        }
    }
    SUBCASE("offgrid certificate scans at C + 1") {
        const LineFamily star = gen_concurrent_star(6, {0.0037, 0.0051}, 1.0 / 16);
        const Scale s = Scale::at(1.0 / 128);
        RichOptions opt;
        opt.offgrid_certificate = true;
        const auto r = k_rich_points(star, 6, s, opt);
        CHECK(r.scan_multiplier == 2.0);
        // The node nearest the centre is rich at C + 1 and lies within
        // delta of some kept point.
        const bool near = std::any_of(r.points.points.begin(), r.points.points.end(), [&](Point2 q) {
            return std::hypot(q.x - 0.0037, q.y - 0.0051) <= (1.0 + std::sqrt(0.5)) * s.delta();
        });
        CHECK(near);
    }
}

TEST_CASE("rich scan matches brute force on the grid") {
    const double delta = 1.0 / 32;
    const Configuration cfg = gen_random(0, 200, delta, 12, 2 * delta);
    const Scale s(delta, 2 * delta, 2.0);
    const auto r = k_rich_points(cfg.lines, 3, s);
    // Every reported point must truly be rich; every rich grid node must be
    // within delta of a reported point.
    for (std::size_t i = 0; i < r.points.size(); ++i)
        CHECK(max_concurrency(cfg.lines, r.points.points[i], s) >= 3);
    for (int j = 0; j <= 64; ++j)
        for (int i = 0; i <= 64; ++i) {
            const Point2 q{-1.0 + i * delta, -1.0 + j * delta};
            if (max_concurrency(cfg.lines, q, s) < 3) continue;
            const bool covered = std::any_of(r.points.points.begin(), r.points.points.end(), [&](Point2 c) {
                return std::hypot(q.x - c.x, q.y - c.y) < delta;
            });
            CHECK(covered);
        }
}

TEST_CASE("angular split") {
    const Point2 p{0, 0};
    const Scale s = Scale::at(1.0 / 64);
    const LineFamily four{{{0.1, 0}, {-0.3, 0}, {0.3, 0}, {-0.1, 0}}, 0.1};
    const AngularSplit sp = angular_split(four, p, s);
    REQUIRE(sp.low.size() == 1);
    REQUIRE(sp.high.size() == 1);
    CHECK(four.lines[sp.low[0]].a == -0.3);
    CHECK(four.lines[sp.high[0]].a == 0.3);
    CHECK(sp.min_angle == doctest::Approx(std::atan(0.3) - std::atan(-0.3)));

    const LineFamily two{{{0.2, 0}, {-0.4, 0}}, 0.1};
    const AngularSplit sp2 = angular_split(two, p, s);
    CHECK(sp2.min_angle == doctest::Approx(std::atan(0.2) + std::atan(0.4)));

    CHECK_THROWS_AS((void)angular_split({{{0, 0}}, 0.1}, p, s), std::invalid_argument);
    CHECK_THROWS_AS((void)angular_split({{{0, 0}, {0, 0.5}}, 0.1}, p, s), std::invalid_argument);

    // Concurrent star at eps = 2^-8: exhaustive scan of the cross pairs.
    const double eps = 1.0 / 256;
    const LineFamily star = gen_concurrent_star(64, {0.2, 0.1}, eps);
    REQUIRE(star.size() == 64);
    const AngularSplit big = angular_split(star, {0.2, 0.1}, Scale(eps / 2, eps));
    double brute = std::numbers::pi;
    for (auto i : big.low)
        for (auto j : big.high) brute = std::min(brute, line_angle(star.lines[i], star.lines[j]));
    CHECK(big.min_angle == brute);
    CHECK(big.min_angle >= 0.1 * 64 * eps);
}
