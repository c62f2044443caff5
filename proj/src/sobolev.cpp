#include "inclab/sobolev.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace inclab {

GridFunction::GridFunction(double h, double ht, IndexBox3 bounds) : h_(h), ht_(ht), bounds_(bounds) {
    if (!(h > 0.0) || !(ht > 0.0)) throw std::invalid_argument("GridFunction: cell sides must be positive");
    v_.assign(bounds_.cells(), 0.0);
}

std::size_t GridFunction::linear(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept {
    const auto nx = static_cast<std::size_t>(bounds_.extent(0));
    const auto ny = static_cast<std::size_t>(bounds_.extent(1));
    return (static_cast<std::size_t>(k - bounds_.lo[2]) * ny + static_cast<std::size_t>(j - bounds_.lo[1])) * nx +
           static_cast<std::size_t>(i - bounds_.lo[0]);
}

HPoint GridFunction::center(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept {
    return {(static_cast<double>(i) + 0.5) * h_, (static_cast<double>(j) + 0.5) * h_,
            (static_cast<double>(k) + 0.5) * ht_};
}

double GridFunction::at(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept {
    if (i < bounds_.lo[0] || i >= bounds_.hi[0] || j < bounds_.lo[1] || j >= bounds_.hi[1] || k < bounds_.lo[2] ||
        k >= bounds_.hi[2])
        return 0.0;
    return v_[linear(i, j, k)];
}

double& GridFunction::ref(std::int64_t i, std::int64_t j, std::int64_t k) {
    if (i < bounds_.lo[0] || i >= bounds_.hi[0] || j < bounds_.lo[1] || j >= bounds_.hi[1] || k < bounds_.lo[2] ||
        k >= bounds_.hi[2])
        throw std::out_of_range("GridFunction::ref: index outside bounds");
    return v_[linear(i, j, k)];
}

bool GridFunction::margin_ok() const noexcept {
    bool ok = true;
    for_each_cell([&](std::int64_t i, std::int64_t j, std::int64_t k, double v) {
        const bool edge = i == bounds_.lo[0] || i == bounds_.hi[0] - 1 || j == bounds_.lo[1] || j == bounds_.hi[1] - 1 ||
                          k == bounds_.lo[2] || k == bounds_.hi[2] - 1;
        if (edge && v != 0.0) ok = false;
    });
    return ok;
}

void GridFunction::validate() const {
    if (!margin_ok()) throw std::domain_error("GridFunction: support touches the boundary of the box");
}

GridFunction sample(const ScalarFn& fn, double h, double ht, double L) {
    if (!(h > 0.0) || !(L > 0.0)) throw std::invalid_argument("sample: h and L must be positive");
    if (ht <= 0.0) ht = h;
    auto lo = [&](double side) { return static_cast<std::int64_t>(std::floor(-L / side)) - 1; };
    auto hi = [&](double side) { return static_cast<std::int64_t>(std::ceil(L / side)) + 1; };
    GridFunction f(h, ht, {{lo(h), lo(h), lo(ht)}, {hi(h), hi(h), hi(ht)}});
    auto& v = f.values();
    std::size_t idx = 0;
    const IndexBox3 b = f.bounds();
    for (std::int64_t k = b.lo[2]; k < b.hi[2]; ++k)
        for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j)
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i, ++idx) v[idx] = fn(f.center(i, j, k));
    f.validate();
    return f;
}

namespace {

GridFunction horizontal_field(const GridFunction& f, bool is_x) {
    f.validate();
    GridFunction g(f.h(), f.ht(), f.bounds());
    const double h2 = 2.0 * f.h(), t2 = 2.0 * f.ht();
    auto& out = g.values();
    std::size_t idx = 0;
    const IndexBox3 b = f.bounds();
    for (std::int64_t k = b.lo[2]; k < b.hi[2]; ++k)
        for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j)
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i, ++idx) {
                const HPoint c = f.center(i, j, k);
                const double ft = (f.at(i, j, k + 1) - f.at(i, j, k - 1)) / t2;
                out[idx] = is_x ? (f.at(i + 1, j, k) - f.at(i - 1, j, k)) / h2 - 0.5 * c.y * ft
                                : (f.at(i, j + 1, k) - f.at(i, j - 1, k)) / h2 + 0.5 * c.x * ft;
            }
    return g;
}

double l1(const GridFunction& f) { return lp_norm(f, 1.0); }

}  // namespace

GridFunction field_X(const GridFunction& f) { return horizontal_field(f, true); }
GridFunction field_Y(const GridFunction& f) { return horizontal_field(f, false); }

double lp_norm(const GridFunction& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double s = 0.0;
    if (p == 1.0)
        for (double v : f.values()) s += std::abs(v);
    else
        for (double v : f.values()) s += std::pow(std::abs(v), p);
    return std::pow(s * f.h() * f.h() * f.ht(), 1.0 / p);
}

GnsResult gns_check(const GridFunction& f) {
    GnsResult r;
    r.lhs = lp_norm(f, 4.0 / 3.0);
    r.rhs = std::sqrt(l1(field_X(f)) * l1(field_Y(f)));
    r.ratio = r.lhs == 0.0 ? 0.0 : r.lhs / r.rhs;
    return r;
}

std::vector<LevelSet> level_sets(const GridFunction& f) {
    // |f| = m 2^e with m in [1/2, 1) lies in F_e, and also in F_(e-1) when m = 1/2.
    int kmin = 0, kmax = 0;
    bool any = false;
    for (double v : f.values()) {
        if (v == 0.0 || !std::isfinite(v)) continue;
        int e = 0;
        const double m = std::frexp(std::abs(v), &e);
        const int lo = m == 0.5 ? e - 1 : e;
        if (!any) kmin = lo, kmax = e, any = true;
        kmin = std::min(kmin, lo);
        kmax = std::max(kmax, e);
    }
    std::vector<LevelSet> out;
    if (!any) return out;
    std::vector<VoxelSet> sets(static_cast<std::size_t>(kmax - kmin + 1), VoxelSet(f.h(), f.ht(), f.bounds()));
    std::size_t idx = 0;
    for (double v : f.values()) {
        if (v != 0.0 && std::isfinite(v)) {
            int e = 0;
            const double m = std::frexp(std::abs(v), &e);
            sets[static_cast<std::size_t>(e - kmin)].raw()[idx] = 1;
            if (m == 0.5) sets[static_cast<std::size_t>(e - 1 - kmin)].raw()[idx] = 1;
        }
        ++idx;
    }
    for (std::size_t n = 0; n < sets.size(); ++n)
        if (!sets[n].empty()) out.push_back({kmin + static_cast<int>(n), std::move(sets[n])});
    return out;
}

LevelSetCheck levelset_lemma_check(const std::vector<LevelSet>& levels, const GridFunction& field, int k, Axis which) {
    auto find = [&](int kk) -> const LevelSet* {
        for (const auto& l : levels)
            if (l.k == kk) return &l;
        return nullptr;
    };
    const LevelSet* Fk = find(k);
    if (Fk == nullptr || Fk->cells.empty())
        throw std::invalid_argument("levelset_lemma_check: level " + std::to_string(k) + " is empty");
    LevelSetCheck c;
    c.k = k;
    c.lhs = project_voxels(Fk->cells, which).area();
    double mass = 0.0;
    if (const LevelSet* prev = find(k - 1)) {
        const auto& bits = prev->cells.raw();
        const auto& v = field.values();
        for (std::size_t n = 0; n < bits.size(); ++n)
            if (bits[n]) mass += std::abs(v[n]);
        mass *= field.h() * field.h() * field.ht();
    }
    c.rhs = std::ldexp(mass, 2 - k);
    c.holds = c.lhs <= kLevelSetSlack * c.rhs;
    return c;
}

LevelSetCheck levelset_lemma_check(const GridFunction& f, int k, Axis which) {
    return levelset_lemma_check(level_sets(f), which == Axis::x ? field_Y(f) : field_X(f), k, which);
}

LevelChain level_chain(const GridFunction& f) {
    LevelChain c;
    const double p = 4.0 / 3.0;
    c.integral = std::pow(lp_norm(f, p), p);
    for (const auto& l : level_sets(f)) {
        const double w = std::pow(2.0, p * l.k);
        c.level_sum += w * l.cells.volume();
        const double ax = project_voxels(l.cells, Axis::x).area();
        const double ay = project_voxels(l.cells, Axis::y).area();
        c.projection_sum += w * std::pow(ax * ay, 2.0 / 3.0);
    }
    c.gradient_bound = std::pow(l1(field_X(f)) * l1(field_Y(f)), 2.0 / 3.0);
    return c;
}

GridFunction shear_change_of_variables(const GridFunction& f, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("shear_change_of_variables: sign must be +1 or -1");
    f.validate();
    GridFunction g(f.h(), f.ht(), f.bounds());
    auto& out = g.values();
    std::size_t idx = 0;
    const IndexBox3 b = f.bounds();
    for (std::int64_t k = b.lo[2]; k < b.hi[2]; ++k)
        for (std::int64_t j = b.lo[1]; j < b.hi[1]; ++j)
            for (std::int64_t i = b.lo[0]; i < b.hi[0]; ++i, ++idx) {
                const HPoint c = f.center(i, j, k);
                // Only t moves, so interpolation is linear in the t index.
                const double s = (c.t + sign * 0.5 * c.x * c.y) / f.ht() - 0.5;
                const double k0 = std::floor(s);
                const double w = s - k0;
                const auto kk = static_cast<std::int64_t>(k0);
                out[idx] = (1.0 - w) * f.at(i, j, kk) + w * f.at(i, j, kk + 1);
            }
    if (!g.margin_ok()) throw std::domain_error("shear_change_of_variables: sheared support leaves the box");
    return g;
}

ScalarFn bump(double width, HPoint c, int power) {
    if (!(width > 0.0) || power < 1) throw std::invalid_argument("bump: width and power must be positive");
    return [=](HPoint p) {
        const double dx = p.x - c.x, dy = p.y - c.y, dt = p.t - c.t;
        const double s = 1.0 - (dx * dx + dy * dy + dt * dt) / (width * width);
        return s > 0.0 ? std::pow(s, power) : 0.0;
    };
}

ScalarFn dilated(double lambda, ScalarFn fn) {
    if (!(lambda > 0.0)) throw std::invalid_argument("dilated: lambda must be positive");
    return [lambda, fn = std::move(fn)](HPoint p) { return fn(dilate(1.0 / lambda, p)); };
}

namespace {

// C^1 ramp from 0 at |s| = a + w to 1 at |s| = a.
double soft_step(double s, double a, double w) {
    const double u = std::clamp((a + w - std::abs(s)) / w, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

}  // namespace

std::vector<NamedFunction> function_zoo() {
    const ScalarFn base = bump(0.3);
    return {
        {"bump_w40", bump(0.4)},
        {"bump_w20", bump(0.2)},
        {"bump_w40_p4", bump(0.4, {}, 4)},
        {"offset_bump", bump(0.25, {0.1, -0.1, 0.05})},
        {"sharp_bump", [](HPoint p) { return 8.0 * bump(0.3, {}, 6)(p); }},
        {"anisotropic_bump",
         [](HPoint p) {
             const double s = 1.0 - (p.x * p.x / 0.16 + p.y * p.y / 0.0625 + p.t * p.t / 0.0225);
             return s > 0.0 ? s * s : 0.0;
         }},
        {"sheared_bump", [base](HPoint p) { return base({p.x, p.y, p.t + 0.5 * p.x * p.y}); }},
        {"smoothed_box",
         [](HPoint p) { return soft_step(p.x, 0.2, 0.1) * soft_step(p.y, 0.2, 0.1) * soft_step(p.t, 0.1, 0.1); }},
    };
}

void write_grid_function(std::ostream& out, const GridFunction& f) {
    const IndexBox3& b = f.bounds();
    nlohmann::json head = {{"dims", {b.extent(0), b.extent(1), b.extent(2)}},
                           {"h", f.h()},
                           {"ht", f.ht()},
                           {"origin",
                            {static_cast<double>(b.lo[0]) * f.h(), static_cast<double>(b.lo[1]) * f.h(),
                             static_cast<double>(b.lo[2]) * f.ht()}}};
    out << head.dump() << '\n';
    for (double v : f.values()) {
        const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        const char buf[4] = {static_cast<char>(bits & 0xFF), static_cast<char>((bits >> 8) & 0xFF),
                             static_cast<char>((bits >> 16) & 0xFF), static_cast<char>((bits >> 24) & 0xFF)};
        out.write(buf, 4);
    }
}

GridFunction read_grid_function(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("grid function: missing header");
    nlohmann::json head;
    try {
        head = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("grid function: bad header: ") + e.what());
    }
    const double h = head.at("h").get<double>();
    const double ht = head.value("ht", h);
    const auto dims = head.at("dims").get<std::vector<std::int64_t>>();
    const auto origin = head.at("origin").get<std::vector<double>>();
    if (dims.size() != 3 || origin.size() != 3) throw std::runtime_error("grid function: dims and origin need 3 entries");
    IndexBox3 b;
    const double sides[3] = {h, h, ht};
    for (std::size_t d = 0; d < 3; ++d) {
        if (dims[d] < 0 || dims[d] > (std::int64_t{1} << 16)) throw std::runtime_error("grid function: bad dims");
        b.lo[d] = static_cast<std::int64_t>(std::llround(origin[d] / sides[d]));
        b.hi[d] = b.lo[d] + dims[d];
    }
    GridFunction f(h, ht, b);
    for (double& v : f.values()) {
        unsigned char buf[4];
        if (!in.read(reinterpret_cast<char*>(buf), 4)) throw std::runtime_error("grid function: truncated data");
        const std::uint32_t bits = std::uint32_t{buf[0]} | (std::uint32_t{buf[1]} << 8) |
                                   (std::uint32_t{buf[2]} << 16) | (std::uint32_t{buf[3]} << 24);
        v = static_cast<double>(std::bit_cast<float>(bits));
    }
    return f;
}

}  // namespace inclab
