#include "inclab/planar_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "inclab/text.hpp"

namespace inclab {

nlohmann::json to_json(const SetMetadata& meta) {
    nlohmann::json j = meta.extra.is_object() ? meta.extra : nlohmann::json::object();
    j["delta"] = meta.delta;
    j["epsilon"] = meta.epsilon;
    j["generator"] = meta.generator;
    j["seed"] = meta.seed;
    return j;
}

SetMetadata metadata_from_json(const nlohmann::json& j) {
    SetMetadata meta;
    meta.delta = j.at("delta").get<double>();
    meta.epsilon = j.at("epsilon").get<double>();
    meta.generator = j.at("generator").get<std::string>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    meta.extra = j;
    for (const char* k : {"delta", "epsilon", "generator", "seed"}) meta.extra.erase(k);
    return meta;
}

namespace {

template <class Row>
void write_rows(std::ostream& out, const char* header, const std::vector<Row>& rows) {
    out << header << '\n';
    for (const Row& r : rows) {
        const auto [u, v] = r;
        out << format_double(u) << ',' << format_double(v) << '\n';
    }
}

std::vector<std::pair<double, double>> read_rows(std::istream& in, std::string_view header) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != header)
        throw std::runtime_error("csv: expected header '" + std::string(header) + "'");
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 2) throw std::runtime_error("csv: expected 2 columns in '" + line + "'");
        rows.emplace_back(parse_double(cols[0]), parse_double(cols[1]));
    }
    return rows;
}

void write_sidecar(const std::filesystem::path& path, const SetMetadata& meta) {
    std::ofstream js(path.string() + ".json");
    if (!js) throw std::runtime_error("cannot write " + path.string() + ".json");
    js << to_json(meta).dump(2) << '\n';
}

}  // namespace

void write_points_csv(std::ostream& out, const PointSet& ps) { write_rows(out, "x,y", ps.points); }

void write_lines_csv(std::ostream& out, const LineFamily& lf) { write_rows(out, "a,b", lf.lines); }

PointSet read_points_csv(std::istream& in, double delta) {
    PointSet ps{{}, delta};
    for (const auto& [x, y] : read_rows(in, "x,y")) ps.points.push_back({x, y});
    return ps;
}

LineFamily read_lines_csv(std::istream& in, double epsilon) {
    LineFamily lf{{}, epsilon};
    for (const auto& [a, b] : read_rows(in, "a,b")) lf.lines.push_back({a, b});
    return lf;
}

void save_points(const std::filesystem::path& path, const PointSet& ps, const SetMetadata& meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_points_csv(out, ps);
    write_sidecar(path, meta);
}

void save_lines(const std::filesystem::path& path, const LineFamily& lf, const SetMetadata& meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_lines_csv(out, lf);
    write_sidecar(path, meta);
}

}  // namespace inclab
