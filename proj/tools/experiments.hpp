#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace inclab::cli {

/// A CSV table whose cells are already formatted.
struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct Invariant {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct RunOptions {
    std::uint64_t seed = 1;
    bool verify = false;
    unsigned threads = 0;
    // sobolev-check overrides from the command line
    std::optional<std::string> function;
    std::optional<double> width;
    std::optional<double> h;
};

struct RunResult {
    std::string experiment;
    std::string generator;  // provenance: the families or shapes used
    std::vector<Table> tables;
    std::vector<Invariant> invariants;
    nlohmann::json measured = nlohmann::json::object();

    [[nodiscard]] bool pass() const;
};

[[nodiscard]] const std::vector<std::string>& experiment_names();

/// Throws ConfigError for invalid settings.
[[nodiscard]] RunResult run_experiment(const std::string& name, const Section& section, const RunOptions& opt);

/// Writes one CSV per table, summary.json and report.txt into dir.
void write_artifacts(const std::string& dir, const RunResult& result, const RunOptions& opt,
                     const std::string& config_path, double seconds);

/// "a,b" -> "\"a,b\"" and doubled inner quotes.
[[nodiscard]] std::string csv_escape(const std::string& cell);

}  // namespace inclab::cli
