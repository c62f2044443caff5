#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "inclab/measure.hpp"
#include "inclab/text.hpp"

namespace inclab {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
    char buf[8];
    for (int b = 0; b < 8; ++b) buf[b] = static_cast<char>((v >> (8 * b)) & 0xFF);
    out.write(buf, 8);
}

std::uint64_t get_u64(std::istream& in) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), 8)) throw std::runtime_error("rle: truncated input");
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) v = (v << 8) | buf[b];
    return v;
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }
void put_i64(std::ostream& out, std::int64_t v) { put_u64(out, static_cast<std::uint64_t>(v)); }
std::int64_t get_i64(std::istream& in) { return static_cast<std::int64_t>(get_u64(in)); }

void put_runs(std::ostream& out, const std::vector<std::uint8_t>& bits) {
    std::vector<std::uint64_t> runs;
    std::uint8_t cur = 0;
    std::uint64_t len = 0;
    for (std::uint8_t b : bits) {
        if ((b != 0) != (cur != 0)) {
            runs.push_back(len);
            cur = b != 0;
            len = 0;
        }
        ++len;
    }
    runs.push_back(len);
    put_u64(out, runs.size());
    for (std::uint64_t r : runs) put_u64(out, r);
}

void get_runs(std::istream& in, std::vector<std::uint8_t>& bits) {
    const std::uint64_t n = get_u64(in);
    std::size_t pos = 0;
    for (std::uint64_t r = 0; r < n; ++r) {
        const std::uint64_t len = get_u64(in);
        if (len > bits.size() - pos) throw std::runtime_error("rle: runs exceed grid size");
        if (r % 2 == 1) std::fill_n(bits.begin() + static_cast<std::ptrdiff_t>(pos), len, std::uint8_t{1});
        pos += static_cast<std::size_t>(len);
    }
    if (pos != bits.size()) throw std::runtime_error("rle: runs do not cover the grid");
}

void expect_magic(std::istream& in, const char* magic) {
    char buf[4];
    if (!in.read(buf, 4) || std::memcmp(buf, magic, 4) != 0)
        throw std::runtime_error(std::string("rle: expected magic ") + magic);
}

template <std::size_t N>
IndexBox<N> get_box(std::istream& in) {
    IndexBox<N> b;
    for (auto& v : b.lo) v = get_i64(in);
    for (auto& v : b.hi) v = get_i64(in);
    for (std::size_t d = 0; d < N; ++d)
        if (b.hi[d] < b.lo[d] || b.hi[d] - b.lo[d] > (std::int64_t{1} << 20))
            throw std::runtime_error("rle: implausible bounds");
    return b;
}

}  // namespace

void write_voxels_rle(std::ostream& out, const VoxelSet& K) {
    out.write("VXS1", 4);
    put_f64(out, K.h());
    put_f64(out, K.ht());
    for (auto v : K.bounds().lo) put_i64(out, v);
    for (auto v : K.bounds().hi) put_i64(out, v);
    put_runs(out, K.raw());
}

VoxelSet read_voxels_rle(std::istream& in) {
    expect_magic(in, "VXS1");
    const double h = get_f64(in);
    const double ht = get_f64(in);
    VoxelSet K(h, ht, get_box<3>(in));
    get_runs(in, K.raw());
    return K;
}

void write_region_rle(std::ostream& out, const PlaneRegion& R) {
    out.write("PLR1", 4);
    out.put(R.plane() == Plane::W_x ? 'x' : 'y');
    put_f64(out, R.h());
    put_f64(out, R.ht());
    for (auto v : R.bounds().lo) put_i64(out, v);
    for (auto v : R.bounds().hi) put_i64(out, v);
    put_runs(out, R.raw());
}

PlaneRegion read_region_rle(std::istream& in) {
    expect_magic(in, "PLR1");
    const int c = in.get();
    if (c != 'x' && c != 'y') throw std::runtime_error("rle: bad plane tag");
    const double h = get_f64(in);
    const double ht = get_f64(in);
    PlaneRegion R(c == 'x' ? Plane::W_x : Plane::W_y, h, ht, get_box<2>(in));
    get_runs(in, R.raw());
    return R;
}

void write_voxels_csv(std::ostream& out, const VoxelSet& K) {
    out << "i,j,k\n";
    K.for_each([&](std::int64_t i, std::int64_t j, std::int64_t k) { out << i << ',' << j << ',' << k << '\n'; });
}

VoxelSet read_voxels_csv(std::istream& in, double h, double ht) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "i,j,k") throw std::runtime_error("csv: expected header 'i,j,k'");
    std::vector<std::array<std::int64_t, 3>> cells;
    IndexBox3 b{{std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::max(),
                 std::numeric_limits<std::int64_t>::max()},
                {std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::min(),
                 std::numeric_limits<std::int64_t>::min()}};
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 3) throw std::runtime_error("csv: expected 3 columns in '" + line + "'");
        std::array<std::int64_t, 3> c{parse_int(cols[0]), parse_int(cols[1]), parse_int(cols[2])};
        for (std::size_t d = 0; d < 3; ++d) {
            b.lo[d] = std::min(b.lo[d], c[d]);
            b.hi[d] = std::max(b.hi[d], c[d] + 1);
        }
        cells.push_back(c);
    }
    if (cells.empty()) return VoxelSet(h, ht, {});
    VoxelSet K(h, ht, b);
    for (const auto& c : cells) K.set(c[0], c[1], c[2]);
    return K;
}

}  // namespace inclab
