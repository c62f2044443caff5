// One line per criterion. Exit status is 0 when the failing criteria are
// exactly those listed with --expect-fail, 1 otherwise.
#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "inclab/acceptance.hpp"
#include "inclab/parallel.hpp"

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only, expect_fail;
    std::string json_out;
    std::uint64_t seed = inclab::AcceptanceOptions{}.seed;
    app.add_option("--only", only, "criteria to run (default all)")->delimiter(',')->check(CLI::Range(1, inclab::kCriterionCount));
    app.add_option("--expect-fail", expect_fail, "criteria known to fail")->delimiter(',')->check(CLI::Range(1, inclab::kCriterionCount));
    app.add_option("--json", json_out, "write measured values to this file");
    app.add_option("--seed", seed, "seed for the randomized criteria");
    CLI11_PARSE(app, argc, argv);

    if (only.empty())
        for (int id = 1; id <= inclab::kCriterionCount; ++id) only.push_back(id);
    inclab::AcceptanceOptions opt;
    opt.seed = seed;
    opt.threads = inclab::default_threads();

    std::set<int> failed;
    nlohmann::json all = nlohmann::json::array();
    for (int id : only) {
        const auto r = inclab::run_criterion(id, opt);
        std::cout << inclab::format_line(r) << std::endl;
        if (!r.pass) failed.insert(id);
        all.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail},
                       {"seconds", r.seconds}, {"measured", r.measured}});
    }
    if (!json_out.empty()) std::ofstream(json_out) << all.dump(2) << '\n';

    std::set<int> expected;
    for (int id : expect_fail)
        if (std::find(only.begin(), only.end(), id) != only.end()) expected.insert(id);
    std::cout << (only.size() - failed.size()) << "/" << only.size() << " criteria pass";
    if (!expected.empty()) {
        std::cout << "; expected failures:";
        for (int id : expected) std::cout << " C" << id;
    }
    std::cout << '\n';
    return failed == expected ? 0 : 1;
}
