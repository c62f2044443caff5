#include "inclab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "inclab/parallel.hpp"

namespace inclab {

std::vector<std::uint64_t> IncidenceReport::k_histogram() const {
    std::vector<std::uint64_t> h;
    for (std::uint32_t r : richness) {
        if (r >= h.size()) h.resize(r + 1, 0);
        ++h[r];
    }
    return h;
}

nlohmann::json to_json(const IncidenceReport& report) {
    return {{"count", report.count}, {"ratio", report.normalized_ratio}, {"k_histogram", report.k_histogram()}};
}

double normalized_ratio(std::uint64_t count, std::size_t n_points, std::size_t n_lines, double delta) {
    if (n_points == 0 || n_lines == 0) return 0.0;
    const double denom = std::cbrt(static_cast<double>(n_points) * static_cast<double>(n_points) *
                                   static_cast<double>(n_lines) * static_cast<double>(n_lines) / delta);
    return static_cast<double>(count) / denom;
}

namespace {

using PairList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Shared driver: per-point candidate search, chunked over points, merged in
// point order so the report does not depend on the worker count.
template <class Search>
IncidenceReport run_count(const PointSet& P, const LineFamily& L, const Scale& s, const CountOptions& opt,
                          Search&& search) {
    IncidenceReport report;
    const std::size_t n = P.size();
    report.richness.assign(n, 0);
    std::vector<PairList> chunk_pairs(chunk_count(n, opt.threads));

    parallel_chunks(n, opt.threads, [&](std::size_t begin, std::size_t end, std::size_t chunk) {
        PairList& local = chunk_pairs[chunk];
        std::vector<std::uint32_t> hits;
        for (std::size_t i = begin; i < end; ++i) {
            hits.clear();
            search(P.points[i], hits);
            report.richness[i] = static_cast<std::uint32_t>(hits.size());
            if (opt.materialize_pairs)
                for (std::uint32_t j : hits) local.emplace_back(static_cast<std::uint32_t>(i), j);
        }
    });

    report.count = std::accumulate(report.richness.begin(), report.richness.end(), std::uint64_t{0});
    report.normalized_ratio = normalized_ratio(report.count, P.size(), L.size(), s.delta());
    if (opt.materialize_pairs) {
        PairList all;
        all.reserve(report.count);
        for (auto& c : chunk_pairs) all.insert(all.end(), c.begin(), c.end());
        report.pairs = std::move(all);
    }
    return report;
}

// Lines grouped into columns of the dual a-axis, sorted by b inside each.
class DualColumns {
public:
    DualColumns(const LineFamily& L, double cell) {
        const std::size_t m = L.size();
        if (m == 0) return;
        // Column width at least one cell; about sqrt(|L|) columns keeps both
        // the column walk and the per-column window short.
        const double target = 2.0 / std::ceil(std::sqrt(static_cast<double>(m)));
        width_ = std::max(cell, target);
        const auto col_of = [&](double a) {
            return static_cast<std::int64_t>(std::floor((a + 1.0) / width_));
        };
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
            const auto cu = col_of(L.lines[u].a), cv = col_of(L.lines[v].a);
            if (cu != cv) return cu < cv;
            if (L.lines[u].b != L.lines[v].b) return L.lines[u].b < L.lines[v].b;
            return u < v;
        });
        for (std::size_t pos = 0; pos < m;) {
            const std::int64_t c = col_of(L.lines[order[pos]].a);
            Column col;
            col.begin = entries_.size();
            col.a_min = col.a_max = L.lines[order[pos]].a;
            while (pos < m && col_of(L.lines[order[pos]].a) == c) {
                const LineAB& l = L.lines[order[pos]];
                col.a_min = std::min(col.a_min, l.a);
                col.a_max = std::max(col.a_max, l.a);
                entries_.push_back({l.b, static_cast<std::uint32_t>(order[pos])});
                ++pos;
            }
            col.end = entries_.size();
            columns_.push_back(col);
        }
    }

    // Calls fn(line index) for every line whose dual point lies in the
    // widened strip around the dual line of p.
    template <class Fn>
    void for_each_candidate(Point2 p, double radius, Fn&& fn) const {
        for (const Column& col : columns_) {
            const double c1 = p.y - col.a_min * p.x;
            const double c2 = p.y - col.a_max * p.x;
            const double amax = std::max(std::abs(col.a_min), std::abs(col.a_max));
            const double half = radius * std::sqrt(1.0 + amax * amax) + radius;
            const double lo = std::min(c1, c2) - half;
            const double hi = std::max(c1, c2) + half;
            auto first = std::lower_bound(entries_.begin() + static_cast<std::ptrdiff_t>(col.begin),
                                          entries_.begin() + static_cast<std::ptrdiff_t>(col.end), lo,
                                          [](const Entry& e, double v) { return e.b < v; });
            for (auto it = first; it != entries_.begin() + static_cast<std::ptrdiff_t>(col.end) && it->b <= hi; ++it)
                fn(it->index);
        }
    }

private:
    struct Entry {
        double b;
        std::uint32_t index;
    };
    struct Column {
        std::size_t begin = 0, end = 0;
        double a_min = 0.0, a_max = 0.0;
    };
    double width_ = 1.0;
    std::vector<Entry> entries_;
    std::vector<Column> columns_;
};

}  // namespace

IncidenceReport count_naive(const PointSet& P, const LineFamily& L, const Scale& s, const CountOptions& opt) {
    return run_count(P, L, s, opt, [&](Point2 p, std::vector<std::uint32_t>& hits) {
        for (std::size_t j = 0; j < L.size(); ++j)
            if (is_incident(p, L.lines[j], s)) hits.push_back(static_cast<std::uint32_t>(j));
    });
}

IncidenceReport count_bucketed(const PointSet& P, const LineFamily& L, const Scale& s, const CountOptions& opt) {
    const DualColumns columns(L, s.radius());
    return run_count(P, L, s, opt, [&](Point2 p, std::vector<std::uint32_t>& hits) {
        columns.for_each_candidate(p, s.radius(), [&](std::uint32_t j) {
            if (is_incident(p, L.lines[j], s)) hits.push_back(j);
        });
        std::sort(hits.begin(), hits.end());
    });
}

IncidenceReport count(Engine engine, const PointSet& P, const LineFamily& L, const Scale& s,
                      const CountOptions& opt) {
    return engine == Engine::naive ? count_naive(P, L, s, opt) : count_bucketed(P, L, s, opt);
}

namespace {

struct RichCandidate {
    std::int64_t i, j;
    std::uint32_t richness;
};

// Richness of every node of the delta-grid of Q0 that reaches min_k, found by
// walking each line across the grid columns.
std::vector<RichCandidate> scan_grid(const LineFamily& L, const Scale& scan, int min_k, unsigned threads) {
    const double delta = scan.delta();
    std::int64_t n = static_cast<std::int64_t>(std::floor(2.0 / delta)) + 1;
    while (n > 1 && -1.0 + static_cast<double>(n - 1) * delta > 1.0) --n;
    const double radius = scan.radius();

    std::vector<std::vector<RichCandidate>> per_column(static_cast<std::size_t>(n));
    parallel_chunks(static_cast<std::size_t>(n), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
        std::vector<std::uint32_t> counts(static_cast<std::size_t>(n), 0);
        std::vector<std::int64_t> touched;
        for (std::size_t ci = begin; ci < end; ++ci) {
            const double x = -1.0 + static_cast<double>(ci) * delta;
            for (const LineAB& l : L.lines) {
                const double yc = l.a * x + l.b;
                const double half = radius * std::sqrt(1.0 + l.a * l.a);
                const auto jlo = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((yc - half + 1.0) / delta)) - 1);
                const auto jhi = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::ceil((yc + half + 1.0) / delta)) + 1);
                for (std::int64_t j = jlo; j <= jhi; ++j) {
                    const Point2 q{x, -1.0 + static_cast<double>(j) * delta};
                    if (!is_incident(q, l, scan)) continue;
                    if (counts[static_cast<std::size_t>(j)]++ == 0) touched.push_back(j);
                }
            }
            auto& out = per_column[ci];
            for (std::int64_t j : touched) {
                auto& c = counts[static_cast<std::size_t>(j)];
                if (c >= static_cast<std::uint32_t>(min_k))
                    out.push_back({static_cast<std::int64_t>(ci), j, c});
                c = 0;
            }
            touched.clear();
        }
    });

    std::vector<RichCandidate> all;
    for (auto& col : per_column) all.insert(all.end(), col.begin(), col.end());
    std::sort(all.begin(), all.end(), [](const RichCandidate& u, const RichCandidate& v) {
        return u.j != v.j ? u.j < v.j : u.i < v.i;
    });
    return all;
}

}  // namespace

std::vector<RichPointResult> k_rich_points(const LineFamily& L, std::span<const int> ks, const Scale& s,
                                           const RichOptions& opt) {
    if (ks.empty()) return {};
    for (int k : ks)
        if (k < 2) throw std::invalid_argument("k_rich_points: k must be >= 2");
    const Scale scan = opt.offgrid_certificate ? s.with_multiplier(s.multiplier() + 1.0) : s;
    const int min_k = *std::min_element(ks.begin(), ks.end());
    const auto candidates = scan_grid(L, scan, min_k, opt.threads);

    std::vector<RichPointResult> results;
    for (int k : ks) {
        RichPointResult r;
        r.k = k;
        r.scan_multiplier = scan.multiplier();
        r.points.delta = s.delta();
        std::vector<Point2> pts;
        std::vector<std::uint32_t> rich;
        for (const RichCandidate& c : candidates) {
            if (c.richness < static_cast<std::uint32_t>(k)) continue;
            pts.push_back({-1.0 + static_cast<double>(c.i) * s.delta(), -1.0 + static_cast<double>(c.j) * s.delta()});
            rich.push_back(c.richness);
        }
        for (std::size_t idx : greedy_separated_subset(pts, s.delta())) {
            r.points.points.push_back(pts[idx]);
            r.richness.push_back(rich[idx]);
        }
        if (!L.lines.empty()) {
            const double m = static_cast<double>(L.size());
            r.bound_constant = static_cast<double>(r.points.size()) * std::pow(static_cast<double>(k), 3) *
                               s.epsilon() / (m * m);
        }
        results.push_back(std::move(r));
    }
    return results;
}

RichPointResult k_rich_points(const LineFamily& L, int k, const Scale& s, const RichOptions& opt) {
    const int ks[] = {k};
    return std::move(k_rich_points(L, ks, s, opt).front());
}

std::size_t max_concurrency(const LineFamily& L, Point2 p, const Scale& s) {
    return static_cast<std::size_t>(
        std::count_if(L.lines.begin(), L.lines.end(), [&](const LineAB& l) { return is_incident(p, l, s); }));
}

double line_angle(LineAB l1, LineAB l2) noexcept { return std::abs(std::atan(l1.a) - std::atan(l2.a)); }

AngularSplit angular_split(const LineFamily& lines_at_p, Point2 p, const Scale& s) {
    const std::size_t n = lines_at_p.size();
    if (n < 2) throw std::invalid_argument("angular_split: need at least two lines");
    for (const LineAB& l : lines_at_p.lines)
        if (!is_incident(p, l, s)) throw std::invalid_argument("angular_split: line not incident to p");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t u, std::size_t v) { return lines_at_p.lines[u].a < lines_at_p.lines[v].a; });
    const std::size_t q = (n + 3) / 4;
    AngularSplit split;
    split.low.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(q));
    split.high.assign(order.end() - static_cast<std::ptrdiff_t>(q), order.end());
    // arctan is increasing, so the closest cross pair is the innermost one.
    split.min_angle = line_angle(lines_at_p.lines[split.low.back()], lines_at_p.lines[split.high.front()]);
    return split;
}

}  // namespace inclab
