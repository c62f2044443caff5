#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace inclab {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    nlohmann::json measured = nlohmann::json::object();
    double seconds = 0.0;
};

struct AcceptanceOptions {
    unsigned threads = 0;
    std::uint64_t seed = 0x5EED;
};

inline constexpr int kCriterionCount = 12;

/// Runs criterion id in 1..12. Throws std::out_of_range for other ids.
[[nodiscard]] CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

/// "PASS  C3  rich points: ... (1.2 s)".
[[nodiscard]] std::string format_line(const CriterionResult& r);

}  // namespace inclab
