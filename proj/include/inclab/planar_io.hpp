#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "inclab/planar.hpp"

namespace inclab {

/// Sidecar record written next to every point or line CSV.
struct SetMetadata {
    double delta = 0.0;
    double epsilon = 0.0;
    std::string generator;
    std::uint64_t seed = 0;
    nlohmann::json extra = nlohmann::json::object();
};

[[nodiscard]] nlohmann::json to_json(const SetMetadata& meta);
[[nodiscard]] SetMetadata metadata_from_json(const nlohmann::json& j);

// CSV with header "x,y" (points) or "a,b" (lines), one row per element.
void write_points_csv(std::ostream& out, const PointSet& ps);
void write_lines_csv(std::ostream& out, const LineFamily& lf);
[[nodiscard]] PointSet read_points_csv(std::istream& in, double delta);
[[nodiscard]] LineFamily read_lines_csv(std::istream& in, double epsilon);

/// Writes `path` (CSV) and `path` + ".json" (metadata).
void save_points(const std::filesystem::path& path, const PointSet& ps, const SetMetadata& meta);
void save_lines(const std::filesystem::path& path, const LineFamily& lf, const SetMetadata& meta);

}  // namespace inclab
