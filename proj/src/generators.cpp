#include "inclab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "inclab/rng.hpp"
#include "inclab/spatial_hash.hpp"
#include "inclab/text.hpp"

namespace inclab {

namespace {

// Relative widening applied to constructed spacings so that rounding never
// pushes a pair below the declared separation.
constexpr double kSpacingSlack = 1.0 + 1e-12;

double resolve_epsilon(double delta, double epsilon) { return epsilon > 0.0 ? epsilon : delta; }

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// Lattice nodes lo, lo + step, ... that do not exceed hi.
std::vector<double> lattice(double lo, double hi, double step) {
    std::vector<double> out;
    if (hi < lo) return out;
    for (std::int64_t i = 0;; ++i) {
        const double v = lo + static_cast<double>(i) * step;
        if (v > hi) break;
        out.push_back(v);
    }
    return out;
}

// Distinct integers in [0, n), k of them, by Floyd's sampling. The order is
// the insertion order, which depends only on the stream.
std::vector<std::uint64_t> sample_distinct(std::uint64_t n, std::size_t k, SplitMix64& rng) {
    std::vector<std::uint64_t> out;
    out.reserve(k);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(k * 2);
    for (std::uint64_t j = n - k; j < n; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        const std::uint64_t pick = seen.contains(t) ? j : t;
        seen.insert(pick);
        out.push_back(pick);
    }
    return out;
}

std::vector<Point2> jittered_lattice(std::size_t count, double spacing, double jitter, SplitMix64& rng,
                                     const char* what) {
    const auto per_axis = static_cast<std::uint64_t>(std::floor(2.0 / spacing)) + 1;
    const std::uint64_t nodes = per_axis * per_axis;
    require(count <= nodes, std::string("gen_random: ") + what + " count " + std::to_string(count) +
                                " exceeds the " + std::to_string(nodes) + " lattice nodes available");
    std::vector<Point2> out;
    out.reserve(count);
    for (const std::uint64_t cell : sample_distinct(nodes, count, rng)) {
        const double x = -1.0 + static_cast<double>(cell % per_axis) * spacing;
        const double y = -1.0 + static_cast<double>(cell / per_axis) * spacing;
        const double jx = rng.uniform(-jitter, jitter);
        const double jy = rng.uniform(-jitter, jitter);
        out.push_back({std::clamp(x + jx, -1.0, 1.0), std::clamp(y + jy, -1.0, 1.0)});
    }
    return out;
}

}  // namespace

const char* to_string(GeneratorKind kind) noexcept {
    switch (kind) {
        case GeneratorKind::grid_packing: return "grid_packing";
        case GeneratorKind::tube: return "tube";
        case GeneratorKind::rectangle: return "rectangle";
        case GeneratorKind::k_star: return "k_star";
        case GeneratorKind::concurrent_star: return "concurrent_star";
        case GeneratorKind::random: return "random";
    }
    return "unknown";
}

GeneratorKind parse_generator_kind(std::string_view name) {
    name = trim(name);
    for (auto kind : {GeneratorKind::grid_packing, GeneratorKind::tube, GeneratorKind::rectangle,
                      GeneratorKind::k_star, GeneratorKind::concurrent_star, GeneratorKind::random})
        if (name == to_string(kind)) return kind;
    if (name == "kstar") return GeneratorKind::k_star;
    throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
}

PointSet gen_grid_packing(double delta, Region region) {
    require(delta > 0.0 && delta <= 1.0, "gen_grid_packing: delta must lie in (0, 1]");
    PointSet ps{{}, delta};
    const auto xs = lattice(region.x0, region.x1, delta);
    const auto ys = lattice(region.y0, region.y1, delta);
    ps.points.reserve(xs.size() * ys.size());
    for (double y : ys)
        for (double x : xs) ps.points.push_back({x, y});
    return ps;
}

Configuration gen_tube_example(double delta) {
    require(delta > 0.0 && delta <= 0.0625, "gen_tube_example: delta must lie in (0, 2^-4]");
    const double width = std::sqrt(delta);
    const Point2 centre{width / 2.0, delta / 2.0};

    Configuration cfg;
    cfg.points.delta = delta;
    for (double x : lattice(0.0, width, delta)) cfg.points.points.push_back({x, centre.y});

    // Lines through the centre with slopes 2*delta*j. Two of them differ in
    // the dual plane by |da| * sqrt(1 + cx^2) >= 2 delta, and a point of the
    // row deviates from each by at most |a| * width / 2 <= delta / 2.
    cfg.lines.epsilon = delta;
    const double step = 2.0 * delta;
    const auto jmax = static_cast<std::int64_t>(std::floor(width / step));
    for (std::int64_t j = -jmax; j <= jmax; ++j) {
        const double a = static_cast<double>(j) * step;
        cfg.lines.lines.push_back({a, centre.y - a * centre.x});
    }

    cfg.meta = {delta, delta, "tube", 0,
                {{"width", width}, {"centre", {centre.x, centre.y}}, {"slope_step", step}, {"rows", 1}}};
    return cfg;
}

Configuration gen_rectangle_example(double delta, double r, double s, double epsilon) {
    epsilon = resolve_epsilon(delta, epsilon);
    require(delta > 0.0 && delta <= s && s <= r && r <= 1.0, "gen_rectangle_example: need delta <= s <= r <= 1");
    require(epsilon >= delta && epsilon <= 1.0, "gen_rectangle_example: epsilon must lie in [delta, 1]");

    Configuration cfg;
    cfg.points = gen_grid_packing(delta, {0.0, 0.0, r, s});
    cfg.lines.epsilon = epsilon;
    const auto nodes = lattice(-1.0, 1.0, epsilon);
    for (double a : nodes) {
        for (double b : nodes) {
            // Over x in [0, r] the line sweeps y between b and a*r + b.
            const double lo = std::min(b, a * r + b);
            const double hi = std::max(b, a * r + b);
            if (hi >= 0.0 && lo <= s) cfg.lines.lines.push_back({a, b});
        }
    }
    cfg.meta = {delta, epsilon, "rectangle", 0, {{"r", r}, {"s", s}}};
    return cfg;
}

Configuration gen_kstar(int k, int m, double delta, double epsilon) {
    epsilon = resolve_epsilon(delta, epsilon);
    require(k >= 2, "gen_kstar: k must be >= 2");
    require(m >= 1, "gen_kstar: m must be >= 1");
    require(delta > 0.0 && epsilon >= delta && epsilon <= 1.0, "gen_kstar: need 0 < delta <= epsilon <= 1");
    const double slope_step = 2.0 / k;
    require(slope_step >= epsilon, "gen_kstar: k = " + std::to_string(k) + " slopes spaced 2/k are closer than epsilon " +
                                       format_double(epsilon));
    const int g = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m))));
    const double spacing = 1.0 / g;
    require(spacing - 2.0 * delta >= 2.0 * delta * k,
            "gen_kstar: " + std::to_string(m) + " centres on a " + std::to_string(g) + "x" + std::to_string(g) +
                " lattice are closer than 2*delta*k");

    Configuration cfg;
    cfg.points.delta = delta;
    cfg.lines.epsilon = epsilon;
    for (int c = 0; c < m; ++c) {
        const double gx = -0.5 + (c % g + 0.5) * spacing;
        const double gy = -0.5 + (c / g + 0.5) * spacing;
        cfg.points.points.push_back({std::round(gx / delta) * delta, std::round(gy / delta) * delta});
    }

    SpatialHash index(epsilon);
    std::vector<Point2> duals;
    std::size_t shifted = 0;
    double max_shift = 0.0;
    const int max_steps = static_cast<int>(std::ceil(2.0 / delta));
    auto separated = [&](Point2 q) {
        bool ok = true;
        index.for_each_near(q, [&](std::uint32_t id) {
            if (std::hypot(q.x - duals[id].x, q.y - duals[id].y) < epsilon) ok = false;
        });
        return ok;
    };

    for (const Point2& c : cfg.points.points) {
        for (int j = 0; j < k; ++j) {
            const double a = -1.0 + (2 * j + 1) * (1.0 / k);
            const double b0 = c.y - a * c.x;
            double b = b0;
            int step = 0;
            // Shift order +delta, -delta, +2 delta, -2 delta, ...
            while (!(std::abs(b) <= 1.0 && separated({a, b}))) {
                ++step;
                require(step <= 2 * max_steps, "gen_kstar: cannot place an epsilon-separated line through centre (" +
                                                   format_double(c.x) + ", " + format_double(c.y) + ")");
                const int mag = (step + 1) / 2;
                b = b0 + (step % 2 == 1 ? 1.0 : -1.0) * mag * delta;
            }
            if (step > 0) {
                ++shifted;
                max_shift = std::max(max_shift, std::abs(b - b0));
            }
            index.insert({a, b}, static_cast<std::uint32_t>(duals.size()));
            duals.push_back({a, b});
            cfg.lines.lines.push_back({a, b});
        }
    }
    cfg.meta = {delta, epsilon, "k_star", 0,
                {{"k", k}, {"m", m}, {"lattice", g}, {"shifted_lines", shifted}, {"max_shift", max_shift}}};
    return cfg;
}

LineFamily gen_concurrent_star(int n, Point2 center, double epsilon) {
    require(n >= 0, "gen_concurrent_star: n must be >= 0");
    require(epsilon > 0.0 && epsilon <= 1.0, "gen_concurrent_star: epsilon must lie in (0, 1]");
    require(center.in_q0(), "gen_concurrent_star: centre outside Q0");
    LineFamily lf{{}, epsilon};
    // Dual points of lines through the centre lie on b = y0 - a x0, so a
    // slope gap da is a dual gap da * sqrt(1 + x0^2).
    const double da = epsilon / std::sqrt(1.0 + center.x * center.x) * kSpacingSlack;
    for (int j = 0; j < n; ++j) {
        const double a = (j - (n - 1) / 2.0) * da;
        const LineAB l{a, center.y - a * center.x};
        if (l.in_q0()) lf.lines.push_back(l);
    }
    return lf;
}

LineFamily gen_greedy_concurrent(Point2 center, const Scale& s) {
    const double eps = s.epsilon();
    const double step = eps / 8.0;
    LineFamily lf{{}, eps};
    SpatialHash index(eps);
    std::vector<Point2> duals;
    for (double a : lattice(-1.0, 1.0, step)) {
        const double b0 = center.y - a * center.x;
        const double half = s.radius() * std::sqrt(1.0 + a * a);
        const auto jmax = static_cast<std::int64_t>(std::floor(half / step));
        for (std::int64_t j = -jmax; j <= jmax; ++j) {
            const LineAB l{a, b0 + static_cast<double>(j) * step};
            if (!l.in_q0() || !is_incident(center, l, s)) continue;
            const Point2 q = as_point(l);
            bool ok = true;
            index.for_each_near(q, [&](std::uint32_t id) {
                if (std::hypot(q.x - duals[id].x, q.y - duals[id].y) < eps) ok = false;
            });
            if (!ok) continue;
            index.insert(q, static_cast<std::uint32_t>(duals.size()));
            duals.push_back(q);
            lf.lines.push_back(l);
        }
    }
    return lf;
}

Configuration gen_random(std::size_t n_points, std::size_t n_lines, double delta, std::uint64_t seed,
                         double epsilon) {
    epsilon = resolve_epsilon(delta, epsilon);
    require(delta > 0.0 && delta <= epsilon && epsilon <= 1.0, "gen_random: need 0 < delta <= epsilon <= 1");
    SplitMix64 rng(seed);
    Configuration cfg;
    // Nodes 2*delta apart moved by at most delta/4 per axis stay >= 1.5 delta
    // apart along the axis in which they differ.
    cfg.points = {jittered_lattice(n_points, 2.0 * delta, delta / 4.0, rng, "point"), delta};
    cfg.lines.epsilon = epsilon;
    for (const Point2& q : jittered_lattice(n_lines, 2.0 * epsilon, epsilon / 4.0, rng, "line"))
        cfg.lines.lines.push_back({q.x, q.y});
    cfg.meta = {delta, epsilon, "random", seed, {{"n_points", n_points}, {"n_lines", n_lines}}};
    return cfg;
}

Configuration generate(const GeneratorSpec& spec) {
    const double eps = resolve_epsilon(spec.delta, spec.epsilon);
    switch (spec.kind) {
        case GeneratorKind::grid_packing: {
            Configuration cfg;
            cfg.points = gen_grid_packing(spec.delta, spec.region);
            cfg.lines.epsilon = eps;
            cfg.meta = {spec.delta,
                        eps,
                        "grid_packing",
                        spec.seed,
                        {{"region", {spec.region.x0, spec.region.y0, spec.region.x1, spec.region.y1}}}};
            return cfg;
        }
        case GeneratorKind::tube: {
            Configuration cfg = gen_tube_example(spec.delta);
            cfg.meta.seed = spec.seed;
            return cfg;
        }
        case GeneratorKind::rectangle: {
            Configuration cfg = gen_rectangle_example(spec.delta, spec.r, spec.s, eps);
            cfg.meta.seed = spec.seed;
            return cfg;
        }
        case GeneratorKind::k_star: {
            Configuration cfg = gen_kstar(spec.k, spec.m, spec.delta, eps);
            cfg.meta.seed = spec.seed;
            return cfg;
        }
        case GeneratorKind::concurrent_star: {
            Configuration cfg;
            cfg.points = {{spec.center}, spec.delta};
            cfg.lines = gen_concurrent_star(static_cast<int>(spec.n_lines), spec.center, eps);
            cfg.meta = {spec.delta, eps, "concurrent_star", spec.seed,
                        {{"n", spec.n_lines}, {"centre", {spec.center.x, spec.center.y}}}};
            return cfg;
        }
        case GeneratorKind::random: return gen_random(spec.n_points, spec.n_lines, spec.delta, spec.seed, eps);
    }
    throw std::invalid_argument("generate: unknown kind");
}

}  // namespace inclab
