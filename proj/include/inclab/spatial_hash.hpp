#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "inclab/planar.hpp"

namespace inclab {

// Uniform planar hash grid. Any two points at distance < side sit in the
// same or in adjacent cells.
class SpatialHash {
public:
    explicit SpatialHash(double side) : side_(side) {}

    void insert(Point2 p, std::uint32_t id) { cells_[key(cell_of(p.x), cell_of(p.y))].push_back(id); }

    // Calls fn(id) for every stored id in the 3x3 block of cells around p.
    template <class Fn>
    void for_each_near(Point2 p, Fn&& fn) const {
        const std::int64_t cx = cell_of(p.x);
        const std::int64_t cy = cell_of(p.y);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                const auto it = cells_.find(key(cx + dx, cy + dy));
                if (it == cells_.end()) continue;
                for (std::uint32_t id : it->second) fn(id);
            }
        }
    }

private:
    [[nodiscard]] std::int64_t cell_of(double v) const noexcept {
        return static_cast<std::int64_t>(std::floor(v / side_));
    }
    static std::uint64_t key(std::int64_t cx, std::int64_t cy) noexcept {
        return (static_cast<std::uint64_t>(cx) << 32) ^ (static_cast<std::uint64_t>(cy) & 0xffffffffull);
    }

    double side_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace inclab
