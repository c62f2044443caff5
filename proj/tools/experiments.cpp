#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>
#include <type_traits>

#include "inclab/acceptance.hpp"
#include "inclab/generators.hpp"
#include "inclab/heisenberg.hpp"
#include "inclab/incidence.hpp"
#include "inclab/measure.hpp"
#include "inclab/rng.hpp"
#include "inclab/sobolev.hpp"
#include "inclab/text.hpp"
#include "inclab/version.hpp"

namespace inclab::cli {

namespace {

std::string cell(double v) { return format_double(v); }
template <class I>
    requires std::is_integral_v<I>
std::string cell(I v) {
    return std::to_string(v);
}
template <>
std::string cell(bool v) { return v ? "true" : "false"; }
std::string cell(const char* v) { return v; }
std::string cell(const std::string& v) { return v; }

template <class... T>
void add_row(Table& t, const T&... v) {
    t.rows.push_back({cell(v)...});
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double slope_of(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

// Epsilon per delta: an explicit list (one value or one per delta), a list
// of multiples of delta, or delta itself.
std::vector<double> epsilons_for(const Section& sec, const std::vector<double>& deltas) {
    std::vector<double> eps;
    if (sec.has("epsilon")) {
        eps = sec.get_numbers("epsilon", {});
        if (eps.size() == 1) eps.assign(deltas.size(), eps[0]);
        require(eps.size() == deltas.size(), "[" + sec.name() + "] epsilon needs one value or one per delta");
    } else {
        eps = deltas;
    }
    for (std::size_t i = 0; i < deltas.size(); ++i)
        require(deltas[i] > 0.0 && deltas[i] <= eps[i] && eps[i] <= 1.0,
                "[" + sec.name() + "] need 0 < delta <= epsilon <= 1 elementwise");
    return eps;
}

std::vector<double> positive_list(const Section& sec, const std::string& key, const std::vector<double>& fallback) {
    auto v = sec.get_numbers(key, fallback);
    for (double x : v) require(x > 0.0, "[" + sec.name() + "] " + key + " entries must be positive");
    return v;
}

// ---------------------------------------------------------------- incidence-sweep

Configuration make_family(const std::string& family, double delta, double eps, const Section& sec, std::uint64_t seed) {
    if (family == "tube") return gen_tube_example(delta);
    if (family == "rectangle")
        return gen_rectangle_example(delta, sec.get_number("r", 0.5), sec.get_number("s", 0.25), eps);
    if (family == "kstar")
        return gen_kstar(static_cast<int>(sec.get_int("k", 8)), static_cast<int>(sec.get_int("m", 8)), delta, eps);
    if (family == "random")
        return gen_random(static_cast<std::size_t>(sec.get_int("points", 500)),
                          static_cast<std::size_t>(sec.get_int("lines", 500)), delta, seed, eps);
    throw ConfigError("unknown family '" + family + "' (tube, rectangle, kstar, random)");
}

RunResult incidence_sweep(const Section& sec, const RunOptions& opt) {
    RunResult res;
    const std::string family = sec.get_string("family", "tube");
    const auto deltas = positive_list(sec, "delta", {std::ldexp(1.0, -6), std::ldexp(1.0, -7), std::ldexp(1.0, -8),
                                                     std::ldexp(1.0, -9), std::ldexp(1.0, -10), std::ldexp(1.0, -11),
                                                     std::ldexp(1.0, -12)});
    const auto eps = epsilons_for(sec, deltas);
    const double mult = sec.get_number("multiplier", 1.0);
    const std::string engine_name = sec.get_string("engine", "bucketed");
    require(engine_name == "bucketed" || engine_name == "naive", "[incidence-sweep] engine must be bucketed or naive");
    const Engine engine = engine_name == "naive" ? Engine::naive : Engine::bucketed;
    const double band = sec.get_number("band", 100.0);
    // Touch the family-specific keys so they are not reported as unknown.
    (void)sec.get_number("r", 0.5), (void)sec.get_number("s", 0.25), (void)sec.get_int("k", 8), (void)sec.get_int("m", 8);
    (void)sec.get_int("points", 500), (void)sec.get_int("lines", 500);
    require(mult >= 1.0, "[incidence-sweep] multiplier must be >= 1");

    res.generator = family;
    Table t{"incidence-sweep", {"delta", "epsilon", "points", "lines", "count", "ratio", "naive_match", "error"}, {}};
    std::vector<double> ratios, xs, ys;
    bool all_match = true;
    SplitMix64 seeds(opt.seed);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const std::uint64_t row_seed = seeds.next();
        Configuration cfg;
        try {
            cfg = make_family(family, deltas[i], eps[i], sec, row_seed);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            add_row(t, deltas[i], eps[i], "", "", "", "", "", std::string(e.what()));
            continue;
        }
        const Scale s(deltas[i], eps[i], mult);
        const auto rep = count(engine, cfg.points, cfg.lines, s, {false, opt.threads});
        std::string match;
        if (opt.verify) {
            const auto other = count(engine == Engine::naive ? Engine::bucketed : Engine::naive, cfg.points, cfg.lines, s,
                                     {false, opt.threads});
            match = cell(other == rep);
            all_match = all_match && other == rep;
        }
        add_row(t, deltas[i], eps[i], cfg.points.size(), cfg.lines.size(), rep.count, rep.normalized_ratio, match, "");
        if (rep.count > 0) {
            ratios.push_back(rep.normalized_ratio);
            xs.push_back(std::log2(1.0 / deltas[i]));
            ys.push_back(std::log2(static_cast<double>(rep.count)));
        }
    }
    res.tables.push_back(std::move(t));
    if (!ratios.empty()) {
        const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
        res.measured["ratio_min"] = *lo;
        res.measured["ratio_max"] = *hi;
        res.measured["count_slope"] = slope_of(xs, ys);
        res.invariants.push_back({"normalized ratio band", *hi / *lo <= band,
                                  "ratio in [" + fmt(*lo) + ", " + fmt(*hi) + "], limit " + fmt(band) + "x"});
    } else {
        res.invariants.push_back({"normalized ratio band", false, "no row produced incidences"});
    }
    if (opt.verify) res.invariants.push_back({"naive and bucketed agree", all_match, all_match ? "all rows" : "mismatch"});
    return res;
}

// Largest count * epsilon of lines through one point: maximal families built
// greedily around a few centres and the full epsilon lattice probed near them.
double measured_star_constant(const Scale& s, const std::vector<Point2>& centres) {
    const double eps = s.epsilon();
    LineFamily lattice{{}, eps};
    const auto n = static_cast<int>(std::floor(2.0 / eps));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) lattice.lines.push_back({-1.0 + i * eps, -1.0 + j * eps});
    std::size_t most = 0;
    for (const Point2& centre : centres) {
        most = std::max(most, gen_greedy_concurrent(centre, s).size());
        for (int dy = -2; dy <= 2; ++dy)
            for (int dx = -2; dx <= 2; ++dx)
                most = std::max(most, max_concurrency(lattice, {centre.x + dx * s.delta() / 2, centre.y + dy * s.delta() / 2}, s));
    }
    return static_cast<double>(most) * eps;
}

const std::vector<Point2> kStarCentres{{0.0, 0.0}, {0.3, -0.2}, {-0.7, 0.5}};

// ---------------------------------------------------------------- rich-points

RunResult rich_points(const Section& sec, const RunOptions& opt) {
    RunResult res;
    const std::string family = sec.get_string("family", "kstar");
    const auto deltas = positive_list(sec, "delta", {std::ldexp(1.0, -6), std::ldexp(1.0, -7), std::ldexp(1.0, -8)});
    const auto mults = positive_list(sec, "epsilon_multiple", {1, 4, 16});
    const auto ks = sec.get_ints("k", {2, 4, 8, 16});
    const double ceiling = sec.get_number("ceiling", 8.0);
    const double growth_limit = sec.get_number("growth", 2.0);
    const bool offgrid = sec.get_bool("offgrid", false);
    (void)sec.get_number("r", 0.5), (void)sec.get_number("s", 0.25), (void)sec.get_int("m", 4);
    (void)sec.get_int("points", 500), (void)sec.get_int("lines", 500);
    for (int k : ks) require(k >= 2, "[rich-points] k must be >= 2");
    res.generator = family;

    Table t{"rich-points", {"family", "delta", "epsilon", "k", "lines", "rich", "max_richness", "star_constant", "bound_constant", "error"}, {}};
    std::map<std::string, std::map<double, double>> series;
    double top = 0.0;
    bool richness_ok = true;
    std::string worst;
    std::map<std::tuple<double, double, double>, double> star_cache;
    SplitMix64 seeds(opt.seed);
    for (double delta : deltas)
        for (double m : mults) {
            const double eps = m * delta;
            require(eps <= 1.0, "[rich-points] epsilon_multiple * delta must be <= 1");
            const Scale s(delta, eps);
            const std::uint64_t row_seed = seeds.next();
            // k-stars depend on k; the other families are shared across k.
            std::vector<std::tuple<int, Configuration, std::string>> fams;
            try {
                if (family == "kstar") {
                    for (int k : ks) {
                        try {
                            fams.emplace_back(k, gen_kstar(k, static_cast<int>(sec.get_int("m", 4)), delta, eps), "");
                        } catch (const std::invalid_argument& e) {
                            fams.emplace_back(k, Configuration{}, e.what());
                        }
                    }
                } else {
                    fams.emplace_back(0, make_family(family, delta, eps, sec, row_seed), "");
                }
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                for (int k : ks) add_row(t, family, delta, eps, k, "", "", "", "", "", std::string(e.what()));
                continue;
            }
            for (const auto& [fk, cfg, error] : fams) {
                if (!error.empty()) {
                    add_row(t, family, delta, eps, fk, "", "", "", "", "", error);
                    continue;
                }
                std::vector<int> wanted = fk == 0 ? ks : std::vector<int>{fk};
                const auto results = k_rich_points(cfg.lines, wanted, s, {offgrid, opt.threads});
                for (const auto& rr : results) {
                    const std::uint32_t most =
                        rr.richness.empty() ? 0 : *std::max_element(rr.richness.begin(), rr.richness.end());
                    const Scale scan = s.with_multiplier(rr.scan_multiplier);
                    auto& A = star_cache[{delta, eps, rr.scan_multiplier}];
                    if (A == 0.0) A = measured_star_constant(scan, kStarCentres);
                    const double limit = std::min(static_cast<double>(cfg.lines.size()), A / eps);
                    richness_ok = richness_ok && most <= limit;
                    if (most > limit) worst = "richness " + std::to_string(most) + " at delta " + fmt(delta) + ", epsilon " + fmt(eps);
                    add_row(t, family, delta, eps, rr.k, cfg.lines.size(), rr.points.size(), most, A, rr.bound_constant, "");
                    series[std::to_string(rr.k) + "/" + fmt(m)][delta] = rr.bound_constant;
                    top = std::max(top, rr.bound_constant);
                }
            }
        }
    res.tables.push_back(std::move(t));
    // Growth from the coarsest delta of the sweep ceiling and of each nonzero series.
    std::map<double, double> per_delta;
    for (const auto& [name, by_d] : series)
        for (const auto& [d, v] : by_d) per_delta[d] = std::max(per_delta[d], v);
    double growth = 0.0;
    if (!per_delta.empty() && per_delta.rbegin()->second > 0.0)
        for (const auto& [d, v] : per_delta) growth = std::max(growth, v / per_delta.rbegin()->second);
    for (const auto& [name, by_d] : series) {
        const double first = by_d.rbegin()->second;  // largest delta
        if (by_d.size() < 2 || first <= 0.0) continue;
        for (const auto& [d, v] : by_d) growth = std::max(growth, v / first);
    }
    res.measured["bound_constant_max"] = top;
    res.measured["growth"] = growth;
    res.invariants.push_back({"bound constant ceiling", top <= ceiling, "max " + fmt(top) + ", ceiling " + fmt(ceiling)});
    res.invariants.push_back({"growth across delta", growth <= growth_limit, fmt(growth) + "x, limit " + fmt(growth_limit)});
    res.invariants.push_back(
        {"richness ceiling", richness_ok,
         richness_ok ? "max richness <= min(|L|, A/epsilon) with A measured at each scale" : worst});
    return res;
}

// ---------------------------------------------------------------- duality-check

RunResult duality_check(const Section& sec, const RunOptions& opt) {
    RunResult res;
    res.generator = "uniform random pairs";
    const auto deltas = positive_list(sec, "delta", {std::ldexp(1.0, -2), std::ldexp(1.0, -4), std::ldexp(1.0, -6),
                                                     std::ldexp(1.0, -8), std::ldexp(1.0, -10)});
    const long long pairs = sec.get_int("pairs", 2000);
    const long long sets = sec.get_int("sets", 40);
    require(pairs > 0 && sets > 0, "[duality-check] pairs and sets must be positive");
    Table t{"duality-check", {"delta", "pairs", "transferred", "sets", "preserved"}, {}};
    SplitMix64 rng(opt.seed);
    bool ok = true;
    for (double delta : deltas) {
        require(delta <= 1.0, "[duality-check] delta must be <= 1");
        const Scale s = Scale::at(delta);
        long long moved = 0;
        for (long long n = 0; n < pairs; ++n) {
            const LineAB l{rng.uniform(-1, 1), rng.uniform(-1, 1)};
            Point2 p;
            do {
                const double x = rng.uniform(-1, 1);
                p = {x, l.a * x + l.b + rng.uniform(-1, 1) * delta * std::sqrt(1 + l.a * l.a)};
            } while (!p.in_q0() || !is_incident(p, l, s));
            moved += is_incident(dual_line_to_point(l), dual_point_to_line(p), s.with_multiplier(2.0));
        }
        long long kept = 0;
        for (long long n = 0; n < sets; ++n) {
            std::vector<Point2> pts(2 + rng.below(60)), duals;
            for (auto& q : pts) q = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
            for (const auto& q : pts) duals.push_back(as_point(dual_point_to_line(q)));
            kept += validate_separation(pts, delta).ok == validate_separation(duals, delta).ok;
        }
        ok = ok && moved == pairs && kept == sets;
        add_row(t, delta, pairs, moved, sets, kept);
    }
    res.tables.push_back(std::move(t));
    res.invariants.push_back({"incidences transfer at 2 delta and separation is preserved", ok, ok ? "all rows" : "see CSV"});
    return res;
}

// ---------------------------------------------------------------- star-bound

RunResult star_bound(const Section& sec, const RunOptions& opt) {
    (void)opt;
    RunResult res;
    res.generator = "greedy concurrent, epsilon lattice";
    const auto epsilons = positive_list(sec, "epsilon", {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256});
    const double ratio = sec.get_number("delta_ratio", 0.25);
    const auto cx = sec.get_numbers("center_x", {0.0, 0.3, -0.7});
    const auto cy = sec.get_numbers("center_y", {0.0, -0.2, 0.5});
    const double lower = sec.get_number("lower", 0.5), upper = sec.get_number("upper", 4.0);
    require(cx.size() == cy.size(), "[star-bound] center_x and center_y need the same length");
    require(ratio > 0.0 && ratio <= 1.0, "[star-bound] delta_ratio must lie in (0, 1]");
    Table t{"star-bound", {"epsilon", "delta", "center_x", "center_y", "greedy", "greedy_eps", "max_concurrency", "max_eps"}, {}};
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double eps : epsilons) {
        require(eps <= 1.0, "[star-bound] epsilon must be <= 1");
        const Scale s(ratio * eps, eps);
        LineFamily lattice{{}, eps};
        const auto n = static_cast<int>(std::floor(2.0 / eps));
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) lattice.lines.push_back({-1.0 + i * eps, -1.0 + j * eps});
        for (std::size_t c = 0; c < cx.size(); ++c) {
            const Point2 centre{cx[c], cy[c]};
            require(centre.in_q0(), "[star-bound] centres must lie in [-1,1]^2");
            const LineFamily greedy = gen_greedy_concurrent(centre, s);
            std::size_t most = 0;
            for (int dy = -2; dy <= 2; ++dy)
                for (int dx = -2; dx <= 2; ++dx) {
                    const Point2 q{centre.x + dx * s.delta() / 2, centre.y + dy * s.delta() / 2};
                    most = std::max({most, max_concurrency(greedy, q, s), max_concurrency(lattice, q, s)});
                }
            const double g = static_cast<double>(greedy.size()) * eps, mx = static_cast<double>(most) * eps;
            lo = std::min(lo, g);
            hi = std::max(hi, mx);
            add_row(t, eps, s.delta(), centre.x, centre.y, greedy.size(), g, most, mx);
        }
    }
    res.tables.push_back(std::move(t));
    res.measured["greedy_times_eps_min"] = lo;
    res.measured["star_constant"] = hi;
    res.invariants.push_back({"greedy lower bound", lo >= lower, "min |L| eps = " + fmt(lo) + ", need " + fmt(lower)});
    res.invariants.push_back({"concurrency upper bound", hi <= upper, "max count eps = " + fmt(hi) + ", limit " + fmt(upper)});
    return res;
}

// ---------------------------------------------------------------- shapes

Shape shape_by_name(const std::string& name) {
    for (auto& s : shape_zoo())
        if (s.name == name) return s.shape;
    if (name.rfind("box_r", 0) == 0) return Shape::heisenberg_box(parse_number(name.substr(5)));
    if (name.rfind("koranyi_r", 0) == 0) return Shape::koranyi_ball({}, parse_number(name.substr(9)));
    std::string known;
    for (auto& s : shape_zoo()) known += s.name + ", ";
    throw ConfigError("unknown shape '" + name + "' (" + known + "box_r<r>, koranyi_r<r>)");
}

std::vector<std::string> zoo_names() {
    std::vector<std::string> out;
    for (auto& s : shape_zoo()) out.push_back(s.name);
    return out;
}

RunResult lw_sweep(const Section& sec, const RunOptions& opt) {
    RunResult res;
    auto names = sec.get_strings("shapes", zoo_names());
    const auto radii = positive_list(sec, "box_r", {0.25, 0.5});
    const auto hs = positive_list(sec, "h", {1.0 / 32, 1.0 / 64});
    const int oversample = static_cast<int>(sec.get_int("oversample", 2));
    const double ceiling = sec.get_number("lw_ceiling", 2.0);
    require(oversample >= 1, "[lw-sweep] oversample must be >= 1");
    for (double r : radii) names.push_back("box_r" + format_double(r));
    res.generator = "shape zoo";
    Table t{"lw-sweep", {"shape", "h", "volume", "area_x", "area_y", "lw_ratio"}, {}};
    double top = 0.0;
    bool box_ok = true;
    const double box_target = 8.0 * std::pow(5.0, -4.0 / 3.0);
    for (const auto& name : names) {
        const Shape shape = shape_by_name(name);
        for (double h : hs) {
            const VoxelSet K = voxelize(shape, h, 0.0, opt.threads);
            if (K.empty()) {
                add_row(t, name, h, 0.0, 0.0, 0.0, "");
                continue;
            }
            const double ax = project_voxels(K, Axis::x, oversample, opt.threads).area();
            const double ay = project_voxels(K, Axis::y, oversample, opt.threads).area();
            const double q = K.volume() / std::cbrt(ax * ax * ay * ay);
            top = std::max(top, q);
            if (name.rfind("box_r", 0) == 0 && h == hs.back()) box_ok = box_ok && std::abs(q / box_target - 1) <= 0.1;
            add_row(t, name, h, K.volume(), ax, ay, q);
        }
    }
    res.tables.push_back(std::move(t));
    res.measured["lw_ceiling"] = top;
    res.measured["box_closed_form"] = box_target;
    res.invariants.push_back({"Loomis-Whitney ratio bounded", top <= ceiling, "max " + fmt(top) + ", ceiling " + fmt(ceiling)});
    if (!radii.empty())
        res.invariants.push_back({"box ratio near 8*5^(-4/3)", box_ok, "within 10% at the finest h"});
    return res;
}

// ---------------------------------------------------------------- tube-volume

RunResult tube_volume(const Section& sec, const RunOptions& opt) {
    RunResult res;
    res.generator = "random plane points";
    const auto deltas = positive_list(sec, "delta", {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128});
    const long long samples = sec.get_int("samples", 12);
    const long long pairs = sec.get_int("pairs", 4);
    const auto resolution = static_cast<std::size_t>(sec.get_int("resolution", 8));
    const double stability = sec.get_number("stability", 4.0);
    require(samples > 0 && pairs > 0 && resolution > 0, "[tube-volume] samples, pairs and resolution must be positive");
    Table t{"tube-volume", {"delta", "A1", "A", "intersection_max", "intersection_mean"}, {}};
    SplitMix64 rng(opt.seed);
    double a1 = 0.0, a = 0.0, vmin = std::numeric_limits<double>::infinity(), vmax = 0.0;
    for (double delta : deltas) {
        require(delta <= 0.25, "[tube-volume] delta must be <= 1/4");
        double ra1 = 0.0, ra = 0.0;
        for (long long n = 0; n < samples; ++n) {
            const Plane pl = n % 2 == 0 ? Plane::W_x : Plane::W_y;
            const VerticalPlanePoint w{pl, rng.uniform(-1, 1), rng.uniform(-1, 1)};
            ra1 = std::max(ra1, tube_inclusion_check(w, delta, resolution));
            ra = std::max(ra, core_projection_check(w, delta, resolution));
        }
        // Pairs whose fibres meet: t_y - t_x = u_x u_y.
        double vm = 0.0, vs = 0.0;
        for (long long n = 0; n < pairs; ++n) {
            const double ux = rng.uniform(-0.5, 0.5), uy = rng.uniform(-0.5, 0.5), tx = rng.uniform(-0.5, 0.5);
            const double v = tube_intersection_volume({Plane::W_x, ux, tx}, {Plane::W_y, uy, tx + ux * uy}, delta) /
                             (delta * delta * delta);
            vm = std::max(vm, v);
            vs += v;
        }
        a1 = std::max(a1, ra1);
        a = std::max(a, ra);
        vmin = std::min(vmin, vs / static_cast<double>(pairs));
        vmax = std::max(vmax, vs / static_cast<double>(pairs));
        add_row(t, delta, ra1, ra, vm, vs / static_cast<double>(pairs));
    }
    res.tables.push_back(std::move(t));
    res.measured["A1"] = a1;
    res.measured["A"] = a;
    res.measured["A1_configured"] = kTubeConstant;
    res.measured["A_configured"] = kCoreConstant;
    res.invariants.push_back({"tube constant", a1 <= kTubeConstant, "measured A1 " + fmt(a1) + " <= " + fmt(kTubeConstant)});
    res.invariants.push_back({"core projection constant", a <= kCoreConstant, "measured A " + fmt(a) + " <= " + fmt(kCoreConstant)});
    res.invariants.push_back({"intersection volume ~ delta^3", vmax / vmin <= stability,
                              "mean volume / delta^3 in [" + fmt(vmin) + ", " + fmt(vmax) + "]"});
    return res;
}

// ---------------------------------------------------------------- sobolev-check

RunResult sobolev_check(const Section& sec, const RunOptions& opt) {
    RunResult res;
    std::vector<std::string> names;
    if (opt.function) {
        names = {*opt.function};
        (void)sec.get_strings("functions", {});
    } else {
        std::vector<std::string> all;
        for (const auto& f : function_zoo()) all.push_back(f.name);
        names = sec.get_strings("functions", all);
    }
    const double width = opt.width.value_or(sec.get_number("width", 0.4));
    std::vector<double> hs = positive_list(sec, "h", {1.0 / 64});
    if (opt.h) hs = {*opt.h};
    const double ceiling = sec.get_number("gns_ceiling", 0.5);
    const bool assert_levels = sec.get_bool("assert_levels", false);
    const bool save = sec.get_bool("save_grids", false);
    require(width > 0.0 && width < 0.5, "[sobolev-check] width must lie in (0, 0.5)");
    res.generator = "function zoo";

    auto resolve = [&](const std::string& name) -> ScalarFn {
        if (name == "bump") return bump(width);
        for (auto& f : function_zoo())
            if (f.name == name) return f.fn;
        throw ConfigError("unknown function '" + name + "'");
    };
    Table t{"sobolev-check",
            {"function", "h", "lp43", "x_l1", "y_l1", "ratio", "levels", "level_checks", "level_fails", "integral",
             "level_sum", "projection_sum", "gradient_bound"},
            {}};
    double top = 0.0;
    int fails = 0;
    bool chain_ok = true;
    for (const auto& name : names) {
        const ScalarFn fn = resolve(name);
        for (double h : hs) {
            GridFunction f;
            try {
                f = sample(fn, h);
            } catch (const std::domain_error& e) {
                throw ConfigError("[sobolev-check] " + name + ": " + e.what());
            }
            const GridFunction X = field_X(f), Y = field_Y(f);
            const double l43 = lp_norm(f, 4.0 / 3.0), xl = lp_norm(X, 1.0), yl = lp_norm(Y, 1.0);
            const double ratio = gns_check(f).ratio;
            const auto levels = level_sets(f);
            int checks = 0, bad = 0;
            for (const auto& l : levels)
                for (Axis ax : {Axis::x, Axis::y}) {
                    ++checks;
                    bad += !levelset_lemma_check(levels, ax == Axis::x ? Y : X, l.k, ax).holds;
                }
            const LevelChain c = level_chain(f);
            chain_ok = chain_ok && c.integral <= c.level_sum * (1 + 1e-12) &&
                       c.level_sum <= std::pow(2.0, 4.0 / 3.0) * c.integral * (1 + 1e-12);
            top = std::max(top, ratio);
            fails += bad;
            add_row(t, name, h, l43, xl, yl, ratio, levels.size(), checks, bad, c.integral, c.level_sum, c.projection_sum,
                    c.gradient_bound);
            if (save) {
                std::filesystem::create_directories("grids");
                std::ofstream out("grids/" + name + "_h" + format_double(h) + ".grid", std::ios::binary);
                write_grid_function(out, f);
            }
        }
    }
    res.tables.push_back(std::move(t));
    res.measured["gns_ceiling"] = top;
    res.measured["level_failures"] = fails;
    res.invariants.push_back({"GNS ratio bounded", top <= ceiling, "max " + fmt(top) + ", ceiling " + fmt(ceiling)});
    res.invariants.push_back({"level sums match the 4/3 integral", chain_ok, "within the factor 2^(4/3)"});
    res.invariants.push_back({"level-set projection bound", !assert_levels || fails == 0,
                              std::to_string(fails) + " failing level checks" +
                                  (assert_levels ? std::string() : " (reported, not asserted)")});
    return res;
}

// ---------------------------------------------------------------- isoperimetric

RunResult isoperimetric(const Section& sec, const RunOptions& opt) {
    RunResult res;
    res.generator = "shapes and random box unions";
    const auto names = sec.get_strings("shapes", {"box_r0.25", "koranyi_r0.3", "box_union"});
    const auto hs = positive_list(sec, "h", {1.0 / 32, 1.0 / 64});
    const auto lambdas = positive_list(sec, "lambda", {0.5, 2.0});
    const long long unions = sec.get_int("unions", 100);
    const double union_h = sec.get_number("union_h", 1.0 / 48);
    const double limit = sec.get_number("stability", 2.0);
    require(unions >= 0 && union_h > 0.0, "[isoperimetric] unions must be >= 0 and union_h positive");

    // Parabolic grids: t side h^2.
    Table t{"isoperimetric", {"shape", "lambda", "h", "ht", "volume", "boundary_voxels", "surrogate", "ratio"}, {}};
    double spread = 1.0;
    for (const auto& name : names) {
        const Shape base = shape_by_name(name);
        std::vector<double> ratios;
        std::vector<double> all_l{1.0};
        all_l.insert(all_l.end(), lambdas.begin(), lambdas.end());
        for (double lam : all_l) {
            const Shape s = lam == 1.0 ? base : Shape::dilated(lam, base);
            for (double h : hs) {
                const VoxelSet E = voxelize(s, h, h * h, opt.threads);
                if (E.empty()) continue;
                const VoxelSet B = boundary(E);
                const double sur = h3_surrogate(B);
                const double q = std::pow(E.volume(), 0.75) / sur;
                ratios.push_back(q);
                add_row(t, name, lam, h, h * h, E.volume(), B.count(), sur, q);
            }
        }
        if (!ratios.empty()) {
            const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
            spread = std::max(spread, *hi / *lo);
        }
    }
    res.tables.push_back(std::move(t));

    Table u{"inclusion", {"index", "boxes", "voxels", "inclusion_x", "inclusion_y"}, {}};
    SplitMix64 rng(opt.seed);
    long long good = 0;
    for (long long n = 0; n < unions; ++n) {
        std::vector<Shape> parts;
        const auto m = 1 + static_cast<int>(rng.below(4));
        for (int b = 0; b < m; ++b)
            parts.push_back(Shape::box({rng.uniform(-0.25, 0.25), rng.uniform(-0.25, 0.25), rng.uniform(-0.1, 0.1)},
                                       {rng.uniform(0.04, 0.2), rng.uniform(0.04, 0.2), rng.uniform(0.02, 0.1)}));
        const VoxelSet E = voxelize(Shape::union_of(std::move(parts)), union_h, 0.0, opt.threads);
        const bool ix = boundary_projection_inclusion(E, Axis::x), iy = boundary_projection_inclusion(E, Axis::y);
        good += ix && iy;
        add_row(u, n, m, E.count(), ix, iy);
    }
    res.tables.push_back(std::move(u));
    res.measured["isoperimetric_spread"] = spread;
    res.invariants.push_back({"isoperimetric ratio stable", spread <= limit, "spread " + fmt(spread) + ", limit " + fmt(limit)});
    res.invariants.push_back({"boundary projections cover projections", good == unions,
                              std::to_string(good) + "/" + std::to_string(unions) + " unions"});
    return res;
}

// ---------------------------------------------------------------- reduce-pipeline

RunResult reduce_pipeline(const Section& sec, const RunOptions& opt) {
    RunResult res;
    res.generator = "voxelized Heisenberg boxes";
    const auto radii = positive_list(sec, "r", {0.25, 0.5});
    const auto deltas = positive_list(sec, "delta", {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128});
    const double h = sec.get_number("h", 1.0 / 128);
    const double limit = sec.get_number("stability", 4.0);
    require(h > 0.0, "[reduce-pipeline] h must be positive");
    for (double r : radii) require(r <= 0.5, "[reduce-pipeline] r must be <= 1/2 so projections stay in the unit square");
    Table t{"reduce-pipeline", {"r", "delta", "P_x", "P_y", "multiplier", "count", "volume", "bound", "overshoot", "naive_match"}, {}};
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    bool covered = true, match_all = true;
    for (double r : radii) {
        const VoxelSet K = voxelize(Shape::heisenberg_box(r), h, 0.0, opt.threads);
        auto centres = [&](Axis a) {
            const PlaneRegion R = project_voxels(K, a, 2, opt.threads);
            std::vector<Point2> out;
            R.for_each([&](std::int64_t i, std::int64_t k) {
                out.push_back({(static_cast<double>(i) + 0.5) * R.h(), (static_cast<double>(k) + 0.5) * R.ht()});
            });
            return out;
        };
        const auto cx = centres(Axis::x), cy = centres(Axis::y);
        for (double delta : deltas) {
            require(delta <= 1.0, "[reduce-pipeline] delta must be <= 1");
            std::vector<VerticalPlanePoint> Px, Py;
            for (std::size_t i : greedy_separated_subset(cx, delta)) Px.push_back({Plane::W_x, cx[i].x, cx[i].y});
            for (std::size_t i : greedy_separated_subset(cy, delta)) Py.push_back({Plane::W_y, cy[i].x, cy[i].y});
            const Reduction red = reduce_to_incidences(Px, Py, delta);
            const Scale s = Scale::at(delta, red.multiplier);
            const auto rep = count_bucketed(red.points, red.lines, s, {false, opt.threads});
            std::string match;
            if (opt.verify) {
                const bool same = count_naive(red.points, red.lines, s, {false, opt.threads}) == rep;
                match_all = match_all && same;
                match = cell(same);
            }
            const double bound = delta * delta * delta * static_cast<double>(rep.count);
            const double over = bound / K.volume();
            covered = covered && bound >= K.volume();
            lo = std::min(lo, over);
            hi = std::max(hi, over);
            add_row(t, r, delta, Px.size(), Py.size(), red.multiplier, rep.count, K.volume(), bound, over, match);
        }
    }
    res.tables.push_back(std::move(t));
    res.measured["overshoot_min"] = lo;
    res.measured["overshoot_max"] = hi;
    res.invariants.push_back({"delta^3 * count >= volume", covered, covered ? "every row" : "violated on some row"});
    res.invariants.push_back({"overshoot stable", hi / lo <= limit, "[" + fmt(lo) + ", " + fmt(hi) + "], limit " + fmt(limit) + "x"});
    if (opt.verify) res.invariants.push_back({"naive and bucketed agree", match_all, match_all ? "all rows" : "mismatch"});
    return res;
}

// ---------------------------------------------------------------- verify-all

RunResult verify_all(const Section& sec, const RunOptions& opt) {
    RunResult res;
    res.generator = "acceptance suite";
    std::vector<int> all(kCriterionCount);
    std::iota(all.begin(), all.end(), 1);
    const auto ids = sec.get_ints("criteria", all);
    const auto expected = sec.get_ints("expect_fail", {0});
    for (int id : ids) require(id >= 1 && id <= kCriterionCount, "[verify-all] criteria must lie in 1..12");
    Table t{"verify-all", {"criterion", "title", "pass", "detail"}, {}};
    AcceptanceOptions ao;
    ao.seed = opt.seed;
    ao.threads = opt.threads;
    for (int id : ids) {
        const CriterionResult r = run_criterion(id, ao);
        add_row(t, "C" + std::to_string(id), r.title, r.pass, r.detail);
        const bool known = std::find(expected.begin(), expected.end(), id) != expected.end();
        res.invariants.push_back({"C" + std::to_string(id) + " " + r.title, r.pass || known,
                                  r.detail + (known && !r.pass ? " (expected failure)" : "")});
        res.measured["C" + std::to_string(id)] = r.measured;
        res.measured["C" + std::to_string(id)]["seconds"] = r.seconds;
    }
    res.tables.push_back(std::move(t));
    return res;
}

using Runner = std::function<RunResult(const Section&, const RunOptions&)>;

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> table{
        {"incidence-sweep", incidence_sweep}, {"rich-points", rich_points},   {"duality-check", duality_check},
        {"star-bound", star_bound},           {"lw-sweep", lw_sweep},         {"tube-volume", tube_volume},
        {"sobolev-check", sobolev_check},     {"isoperimetric", isoperimetric}, {"reduce-pipeline", reduce_pipeline},
        {"verify-all", verify_all}};
    return table;
}

}  // namespace

bool RunResult::pass() const {
    return std::all_of(invariants.begin(), invariants.end(), [](const Invariant& i) { return i.pass; });
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"incidence-sweep", "rich-points",   "duality-check", "star-bound",
                                                "lw-sweep",        "tube-volume",   "sobolev-check", "isoperimetric",
                                                "reduce-pipeline", "verify-all"};
    return names;
}

RunResult run_experiment(const std::string& name, const Section& section, const RunOptions& opt) {
    const auto it = runners().find(name);
    if (it == runners().end()) throw ConfigError("unknown experiment '" + name + "'");
    RunResult r = it->second(section, opt);
    section.reject_unused();
    r.experiment = name;
    return r;
}

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void write_artifacts(const std::string& dir, const RunResult& result, const RunOptions& opt,
                     const std::string& config_path, double seconds) {
    std::filesystem::create_directories(dir);
    nlohmann::json files = nlohmann::json::array();
    for (const Table& t : result.tables) {
        const std::string file = t.name + ".csv";
        std::ofstream out(std::filesystem::path(dir) / file);
        out << "# experiment: " << result.experiment << '\n'
            << "# generator: " << result.generator << '\n'
            << "# seed: " << opt.seed << '\n'
            << "# engine: " << kEngineVersion << '\n'
            << "# config: " << (config_path.empty() ? "defaults" : config_path) << '\n';
        for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(row[c]);
            out << '\n';
        }
        if (!out) throw std::runtime_error("cannot write " + file);
        files.push_back(file);
    }
    nlohmann::json inv = nlohmann::json::array();
    for (const auto& i : result.invariants) inv.push_back({{"name", i.name}, {"pass", i.pass}, {"detail", i.detail}});
    const nlohmann::json summary = {{"experiment", result.experiment},
                                    {"engine", kEngineVersion},
                                    {"seed", opt.seed},
                                    {"config", config_path},
                                    {"generator", result.generator},
                                    {"pass", result.pass()},
                                    {"invariants", inv},
                                    {"measured", result.measured},
                                    {"files", files},
                                    {"seconds", seconds}};
    std::ofstream(std::filesystem::path(dir) / "summary.json") << summary.dump(2) << '\n';

    std::ofstream rep(std::filesystem::path(dir) / "report.txt");
    rep << result.experiment << " (" << kEngineVersion << ", seed " << opt.seed << ")\n\n";
    for (const auto& i : result.invariants) rep << (i.pass ? "ok    " : "FAIL  ") << i.name << ": " << i.detail << '\n';
    rep << '\n';
    for (const auto& [key, value] : result.measured.items())
        if (value.is_number()) rep << key << " = " << value.dump() << '\n';
    rep << "\nfiles:";
    for (const auto& f : files) rep << ' ' << f.get<std::string>();
    rep << "\nwall time " << fmt(seconds, 3) << " s\n"
        << (result.pass() ? "all invariants hold\n" : "invariant violation\n");
}

}  // namespace inclab::cli
