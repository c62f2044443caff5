// Times the naive and bucketed counters on stacked copies of the tube
// instance and checks that both report the same incidences.
#include <chrono>
#include <cmath>
#include <cstdio>

#include <CLI11.hpp>

#include "inclab/generators.hpp"
#include "inclab/incidence.hpp"

using namespace inclab;

namespace {

// Copies of the tube shifted vertically by 1/16 apart. Lines have slope at
// most sqrt(delta), so a copy's lines stay clear of the other copies' points.
Configuration stacked_tubes(double delta, int copies) {
    const Configuration one = gen_tube_example(delta);
    Configuration out;
    out.points.delta = delta;
    out.lines.epsilon = one.lines.epsilon;
    for (int c = 0; c < copies; ++c) {
        const double dy = (c - copies / 2) / 16.0;
        for (const auto& p : one.points.points) out.points.points.push_back({p.x, p.y + dy});
        for (const auto& l : one.lines.lines) out.lines.lines.push_back({l.a, l.b + dy});
    }
    return out;
}

template <class Fn>
double best_seconds(int repeat, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < repeat; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"naive vs bucketed incidence counting on stacked tube instances"};
    int exponent = 12, copies = 30, repeat = 3;
    unsigned threads = 1;
    double min_speedup = 5.0;
    app.add_option("--delta-exp", exponent, "delta = 2^-e")->check(CLI::Range(4, 20));
    app.add_option("--copies", copies, "stacked tube copies")->check(CLI::Range(1, 30));
    app.add_option("--repeat", repeat, "timing repetitions, best kept")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "threads for both counters");
    app.add_option("--min-speedup", min_speedup, "required naive / bucketed time ratio");
    CLI11_PARSE(app, argc, argv);

    const double delta = std::ldexp(1.0, -exponent);
    const Configuration cfg = stacked_tubes(delta, copies);
    const Scale s = Scale::at(delta);
    const CountOptions opt{false, threads};
    IncidenceReport naive, bucketed;
    const double tn = best_seconds(repeat, [&] { naive = count_naive(cfg.points, cfg.lines, s, opt); });
    const double tb = best_seconds(repeat, [&] { bucketed = count_bucketed(cfg.points, cfg.lines, s, opt); });
    const double pairs = static_cast<double>(cfg.points.size()) * static_cast<double>(cfg.lines.size());
    const bool same = naive == bucketed;
    const double speedup = tn / tb;
    std::printf("delta 2^-%d, %d copies: |P| = %zu, |L| = %zu, |P||L| = %.3g\n", exponent, copies, cfg.points.size(),
                cfg.lines.size(), pairs);
    std::printf("count %llu (naive %s bucketed)\n", static_cast<unsigned long long>(bucketed.count), same ? "==" : "!=");
    std::printf("naive %.4f s, bucketed %.4f s, speedup %.1fx (need %.1fx)\n", tn, tb, speedup, min_speedup);
    return same && speedup >= min_speedup ? 0 : 1;
}
