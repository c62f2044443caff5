#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "experiments.hpp"

using namespace inclab::cli;

namespace {

Config parse(const std::string& text) {
    std::istringstream in(text);
    return Config::parse(in);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("numbers and lists") {
    CHECK(parse_number("0.25") == 0.25);
    CHECK(parse_number("1/64") == 1.0 / 64);
    CHECK(parse_number("2^-6") == std::ldexp(1.0, -6));
    CHECK(parse_number(" 3 ") == 3.0);
    CHECK_THROWS_AS(parse_number("abc"), ConfigError);
    CHECK_THROWS_AS(parse_number("1/0"), ConfigError);

    const auto r = parse_number_list("2^-6..2^-9");
    REQUIRE(r.size() == 4);
    CHECK(r.front() == std::ldexp(1.0, -6));
    CHECK(r.back() == std::ldexp(1.0, -9));
    CHECK(parse_number_list("2^-2..2^-1").size() == 2);
    CHECK(parse_number_list("1, 1/2, 2^-3") == std::vector<double>{1.0, 0.5, 0.125});
    CHECK_THROWS_AS(parse_number_list("1..4"), ConfigError);
    CHECK_THROWS_AS(parse_number_list("1,,2"), ConfigError);
}

TEST_CASE("config sections") {
    const Config c = parse("seed = 3\n# comment\n[incidence-sweep]\ndelta = 2^-6, 2^-7  # trailing\nfamily = tube\n\n[empty]\n");
    CHECK(c.section("global").get_int("seed", 1) == 3);
    const Section& s = c.section("incidence-sweep");
    CHECK(s.get_numbers("delta", {}).size() == 2);
    CHECK(s.get_string("family", "") == "tube");
    CHECK(s.get_int("missing", 42) == 42);
    CHECK_NOTHROW(s.reject_unused());
    CHECK(c.section("nope").get_number("x", 1.5) == 1.5);
    CHECK(c.section_names() == std::vector<std::string>{"empty", "global", "incidence-sweep"});

    CHECK_THROWS_AS(parse("[a]\nx = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse("[a\n"), ConfigError);
    CHECK_THROWS_AS(parse("no equals sign\n"), ConfigError);
    CHECK_THROWS_AS(parse("[]\n"), ConfigError);
    CHECK_THROWS_AS(Config::load("/nonexistent/x.cfg"), ConfigError);
}

TEST_CASE("config getters reject bad values") {
    const Config c = parse("[s]\nempty =\nflag = maybe\nn = 1.5\nlist = 1, x\n");
    const Section& s = c.section("s");
    CHECK_THROWS_AS((void)s.get_numbers("empty", {1.0}), ConfigError);
    CHECK_THROWS_AS((void)s.get_ints("empty", {1}), ConfigError);
    CHECK_THROWS_AS((void)s.get_strings("empty", {"a"}), ConfigError);
    CHECK_THROWS_AS((void)s.get_bool("flag", false), ConfigError);
    CHECK_THROWS_AS((void)s.get_int("n", 0), ConfigError);
    CHECK_THROWS_AS((void)s.get_numbers("list", {}), ConfigError);

    const Config d = parse("[s]\nused = 1\nunused = 2\n");
    (void)d.section("s").get_int("used", 0);
    CHECK_THROWS_WITH_AS(d.section("s").reject_unused(), doctest::Contains("unused"), ConfigError);
}

TEST_CASE("csv escaping") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("x,\"y\"") == "\"x,\"\"y\"\"\"");
}

TEST_CASE("experiments reject bad settings") {
    RunOptions opt;
    opt.threads = 2;
    CHECK_THROWS_AS((void)run_experiment("nope", Section{}, opt), ConfigError);
    const Config c = parse("[incidence-sweep]\nfamily = spiral\n[star-bound]\ncenter_x = 0, 0.5\ncenter_y = 0\n"
                           "[duality-check]\npairs = 10\ntypo = 1\n");
    CHECK_THROWS_AS((void)run_experiment("incidence-sweep", c.section("incidence-sweep"), opt), ConfigError);
    CHECK_THROWS_AS((void)run_experiment("star-bound", c.section("star-bound"), opt), ConfigError);
    CHECK_THROWS_WITH_AS((void)run_experiment("duality-check", c.section("duality-check"), opt),
                         doctest::Contains("typo"), ConfigError);
}

TEST_CASE("small runs are reproducible") {
    const Config c = parse("[incidence-sweep]\nfamily = random\npoints = 200\nlines = 200\ndelta = 2^-5..2^-7\n"
                           "[duality-check]\ndelta = 2^-4\npairs = 50\nsets = 5\n");
    RunOptions a;
    a.seed = 11;
    a.verify = true;
    a.threads = 1;
    RunOptions b = a;
    b.threads = 4;

    const RunResult r1 = run_experiment("incidence-sweep", c.section("incidence-sweep"), a);
    const RunResult r2 = run_experiment("incidence-sweep", c.section("incidence-sweep"), b);
    CHECK(r1.pass());
    REQUIRE(r1.tables.size() == 1);
    CHECK(r1.tables[0].rows.size() == 3);
    CHECK(r1.tables[0].rows == r2.tables[0].rows);
    CHECK(r1.invariants.size() == 2);

    RunOptions other = a;
    other.seed = 12;
    const RunResult r3 = run_experiment("incidence-sweep", c.section("incidence-sweep"), other);
    CHECK(r3.tables[0].rows != r1.tables[0].rows);

    const auto dir = std::filesystem::temp_directory_path() / "inclab_test_cli";
    std::filesystem::remove_all(dir);
    const RunResult d1 = run_experiment("duality-check", c.section("duality-check"), a);
    write_artifacts((dir / "one").string(), d1, a, "x.cfg", 0.1);
    write_artifacts((dir / "two").string(), run_experiment("duality-check", c.section("duality-check"), a), a, "x.cfg",
                    0.2);
    const std::string csv = slurp(dir / "one" / "duality-check.csv");
    CHECK(csv == slurp(dir / "two" / "duality-check.csv"));
    CHECK(csv.rfind("# experiment: duality-check\n", 0) == 0);
    CHECK(csv.find("# seed: 11\n") != std::string::npos);
    CHECK(csv.find("# engine: inclab") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "one" / "summary.json"));
    CHECK(std::filesystem::exists(dir / "one" / "report.txt"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("sobolev overrides") {
    RunOptions opt;
    opt.threads = 2;
    opt.function = "bump";
    opt.width = 0.3;
    opt.h = 1.0 / 24;
    const RunResult r = run_experiment("sobolev-check", Section{}, opt);
    REQUIRE(r.tables[0].rows.size() == 1);
    CHECK(r.tables[0].rows[0][0] == "bump");
    CHECK(r.pass());
    opt.width = 0.6;
    CHECK_THROWS_AS((void)run_experiment("sobolev-check", Section{}, opt), ConfigError);
}
