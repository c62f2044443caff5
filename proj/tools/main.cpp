#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "config.hpp"
#include "experiments.hpp"
#include "inclab/parallel.hpp"
#include "inclab/version.hpp"

namespace {

std::string names_list() {
    std::string out;
    for (const auto& n : inclab::cli::experiment_names()) out += (out.empty() ? "" : ", ") + n;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace inclab::cli;
    CLI::App app{"inclab: delta-discretized incidence and Heisenberg measure experiments"};
    app.set_help_flag("--help", "print this help");
    app.set_version_flag("--version", inclab::kEngineVersion);
    std::string experiment, config_path, out_dir, function;
    std::optional<std::uint64_t> seed;
    std::string width, h;
    bool verify = false;
    unsigned threads = 0;
    app.add_option("experiment", experiment, "one of: " + names_list())->required();
    app.add_option("--config,-c", config_path, "config file");
    app.add_option("--out,-o", out_dir, "output directory (default out/<experiment>)");
    app.add_option("--seed", seed, "RNG seed");
    app.add_flag("--verify", verify, "cross-check against the naive engine");
    app.add_option("--threads", threads, "worker threads (default LAB_THREADS or hardware)");
    app.add_option("--function", function, "sobolev-check: function name or 'bump'");
    app.add_option("--width", width, "sobolev-check: bump width (number, a/b or 2^e)");
    app.add_option("--h", h, "sobolev-check: grid side (number, a/b or 2^e)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto& names = experiment_names();
        if (std::find(names.begin(), names.end(), experiment) == names.end())
            throw ConfigError("unknown experiment '" + experiment + "' (" + names_list() + ")");
        Config cfg;
        if (!config_path.empty()) cfg = Config::load(config_path);
        for (const auto& s : cfg.section_names())
            if (s != "global" && std::find(names.begin(), names.end(), s) == names.end())
                throw ConfigError("unknown section [" + s + "]");

        const Section& global = cfg.section("global");
        const Section& sec = cfg.section(experiment);
        RunOptions opt;
        const long long global_seed = global.get_int("seed", 1);
        const long long section_seed = sec.get_int("seed", global_seed);
        opt.seed = seed ? *seed : static_cast<std::uint64_t>(section_seed);
        const long long cfg_threads = global.get_int("threads", 0);
        opt.threads = threads ? threads : static_cast<unsigned>(cfg_threads);
        if (opt.threads == 0) opt.threads = inclab::default_threads();
        opt.verify = verify || sec.get_bool("verify", false);
        if (!function.empty()) opt.function = function;
        if (!width.empty()) opt.width = parse_number(width);
        if (!h.empty()) opt.h = parse_number(h);
        if ((opt.function || opt.width || opt.h) && experiment != "sobolev-check")
            throw ConfigError("--function, --width and --h apply to sobolev-check only");
        global.reject_unused();

        const auto start = std::chrono::steady_clock::now();
        const RunResult result = run_experiment(experiment, sec, opt);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out_dir.empty()) out_dir = (std::filesystem::path("out") / experiment).string();
        write_artifacts(out_dir, result, opt, config_path, seconds);

        for (const auto& inv : result.invariants)
            std::cout << (inv.pass ? "ok    " : "FAIL  ") << inv.name << ": " << inv.detail << '\n';
        std::cout << "wrote " << out_dir << '\n';
        return result.pass() ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
