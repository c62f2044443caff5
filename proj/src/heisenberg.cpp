#include "inclab/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "inclab/text.hpp"

namespace inclab {

HPoint h_mul(HPoint p, HPoint q) noexcept {
    return {p.x + q.x, p.y + q.y, p.t + q.t + 0.5 * (p.x * q.y - p.y * q.x)};
}

HPoint h_inv(HPoint p) noexcept { return {-p.x, -p.y, -p.t}; }

HPoint dilate(double lam, HPoint p) {
    if (!(lam > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
    return {lam * p.x, lam * p.y, lam * lam * p.t};
}

VerticalPlanePoint dilate(double lam, VerticalPlanePoint w) {
    if (!(lam > 0.0)) throw std::invalid_argument("dilate: lambda must be positive");
    return {w.plane, lam * w.u, lam * lam * w.t};
}

VerticalPlanePoint proj_x(HPoint p) noexcept { return {Plane::W_x, p.x, p.t - 0.5 * p.x * p.y}; }

VerticalPlanePoint proj_y(HPoint p) noexcept { return {Plane::W_y, p.y, p.t + 0.5 * p.x * p.y}; }

VerticalPlanePoint project(Plane plane, HPoint p) noexcept { return plane == Plane::W_x ? proj_x(p) : proj_y(p); }

HPoint HorizontalFiber::operator()(double s) const noexcept {
    return w.plane == Plane::W_x ? h_mul(w.embed(), {0.0, s, 0.0}) : h_mul(w.embed(), {s, 0.0, 0.0});
}

HPoint HorizontalFiber::direction() const noexcept {
    const HPoint d = w.plane == Plane::W_x ? HPoint{0.0, 1.0, 0.5 * w.u} : HPoint{1.0, 0.0, -0.5 * w.u};
    const double n = std::sqrt(d.x * d.x + d.y * d.y + d.t * d.t);
    return {d.x / n, d.y / n, d.t / n};
}

double HorizontalFiber::distance(HPoint q) const noexcept {
    const HPoint o = w.embed();
    const HPoint d = direction();
    const double vx = q.x - o.x, vy = q.y - o.y, vt = q.t - o.t;
    // |v x d| for unit d.
    const double cx = vy * d.t - vt * d.y;
    const double cy = vt * d.x - vx * d.t;
    const double ct = vx * d.y - vy * d.x;
    return std::sqrt(cx * cx + cy * cy + ct * ct);
}

HorizontalFiber horizontal_fiber(VerticalPlanePoint w) noexcept { return {w}; }

std::vector<HPoint> sample_fiber(VerticalPlanePoint w, double lo, double hi, std::size_t n) {
    if (n < 2) throw std::invalid_argument("sample_fiber: need at least two samples");
    const HorizontalFiber f{w};
    std::vector<HPoint> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1)));
    return out;
}

LineAB project_fiber_to_line(VerticalPlanePoint w) {
    if (!w.in_q0()) throw std::domain_error("project_fiber_to_line: w outside the unit square of its plane");
    return w.plane == Plane::W_x ? LineAB{w.u, w.t} : LineAB{-w.u, w.t};
}

double koranyi_norm(HPoint p) noexcept {
    const double r2 = p.x * p.x + p.y * p.y;
    return std::pow(r2 * r2 + 16.0 * p.t * p.t, 0.25);
}

double koranyi_distance(HPoint p, HPoint q) noexcept { return koranyi_norm(h_mul(h_inv(q), p)); }

namespace {

// Calls fn(q) for samples q of the preimage of the delta-disk around w that
// lie in [-1,1]^3. Radii and angles include 0, fibre parameters include 0.
template <class Fn>
void for_each_tube_sample(VerticalPlanePoint w, double delta, std::size_t n, Fn&& fn) {
    n = std::max<std::size_t>(n, 1);
    const std::size_t angles = 4 * n;
    for (std::size_t i = 0; i <= n; ++i) {
        const double r = delta * static_cast<double>(i) / static_cast<double>(n);
        for (std::size_t j = 0; j < (i == 0 ? 1 : angles); ++j) {
            const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(angles);
            const VerticalPlanePoint base{w.plane, w.u + r * std::cos(th), w.t + r * std::sin(th)};
            const HorizontalFiber f{base};
            for (std::size_t k = 0; k <= 2 * n; ++k) {
                const double s = -1.0 + static_cast<double>(k) / static_cast<double>(n);
                const HPoint q = f(s);
                if (std::abs(q.x) <= 1.0 && std::abs(q.y) <= 1.0 && std::abs(q.t) <= 1.0) fn(q);
            }
        }
    }
}

}  // namespace

double tube_inclusion_check(VerticalPlanePoint w, double delta, std::size_t resolution) {
    const HorizontalFiber f{w};
    double worst = 0.0;
    for_each_tube_sample(w, delta, resolution, [&](HPoint q) { worst = std::max(worst, f.distance(q)); });
    return worst / delta;
}

double core_projection_check(VerticalPlanePoint w, double delta, std::size_t resolution) {
    const LineAB line = w.plane == Plane::W_x ? LineAB{w.u, w.t} : LineAB{-w.u, w.t};
    const Plane other = w.plane == Plane::W_x ? Plane::W_y : Plane::W_x;
    double worst = 0.0;
    for_each_tube_sample(w, delta, resolution, [&](HPoint q) {
        worst = std::max(worst, point_line_dist(project(other, q).coords(), line));
    });
    return worst / delta;
}

Reduction reduce_to_incidences(const std::vector<VerticalPlanePoint>& P_x, const std::vector<VerticalPlanePoint>& P_y,
                               double delta, double core_constant) {
    if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("reduce_to_incidences: delta must lie in (0, 1]");
    Reduction red;
    red.multiplier = 1.0 + core_constant;
    red.points.delta = delta;
    red.lines.epsilon = delta;
    for (const auto& w : P_x) {
        if (w.plane != Plane::W_x || !w.in_q0())
            throw std::invalid_argument("reduce_to_incidences: P_x must lie in W_x within the unit square");
        red.lines.lines.push_back(project_fiber_to_line(w));
    }
    for (const auto& w : P_y) {
        if (w.plane != Plane::W_y || !w.in_q0())
            throw std::invalid_argument("reduce_to_incidences: P_y must lie in W_y within the unit square");
        red.points.points.push_back(w.coords());
    }
    if (const auto rep = validate_separation(red.lines); !rep.ok)
        throw std::invalid_argument("reduce_to_incidences: P_x is not delta-separated (distance " +
                                    format_double(rep.worst_distance) + ")");
    if (const auto rep = validate_separation(red.points); !rep.ok)
        throw std::invalid_argument("reduce_to_incidences: P_y is not delta-separated (distance " +
                                    format_double(rep.worst_distance) + ")");
    return red;
}

void write_hpoints_csv(std::ostream& out, const std::vector<HPoint>& pts) {
    out << "x,y,t\n";
    for (const HPoint& p : pts) out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.t) << '\n';
}

std::vector<HPoint> read_hpoints_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "x,y,t") throw std::runtime_error("csv: expected header 'x,y,t'");
    std::vector<HPoint> pts;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 3) throw std::runtime_error("csv: expected 3 columns in '" + line + "'");
        pts.push_back({parse_double(cols[0]), parse_double(cols[1]), parse_double(cols[2])});
    }
    return pts;
}

}  // namespace inclab
