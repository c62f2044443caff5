#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "inclab/measure.hpp"

namespace inclab {

/// Samples of a compactly supported function at voxel centres, on the same
/// index conventions as VoxelSet. The outermost layer of the box must be
/// zero.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double h, double ht, IndexBox3 bounds);

    [[nodiscard]] double h() const noexcept { return h_; }
    [[nodiscard]] double ht() const noexcept { return ht_; }
    [[nodiscard]] const IndexBox3& bounds() const noexcept { return bounds_; }
    [[nodiscard]] HPoint center(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept;

    /// Zero outside the box.
    [[nodiscard]] double at(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept;
    double& ref(std::int64_t i, std::int64_t j, std::int64_t k);

    /// True when the boundary layer is identically zero.
    [[nodiscard]] bool margin_ok() const noexcept;
    /// Throws std::domain_error unless margin_ok().
    void validate() const;

    [[nodiscard]] const std::vector<double>& values() const noexcept { return v_; }
    [[nodiscard]] std::vector<double>& values() noexcept { return v_; }

    template <class Fn>
    void for_each_cell(Fn&& fn) const {
        std::size_t idx = 0;
        for (std::int64_t k = bounds_.lo[2]; k < bounds_.hi[2]; ++k)
            for (std::int64_t j = bounds_.lo[1]; j < bounds_.hi[1]; ++j)
                for (std::int64_t i = bounds_.lo[0]; i < bounds_.hi[0]; ++i, ++idx) fn(i, j, k, v_[idx]);
    }

    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    [[nodiscard]] std::size_t linear(std::int64_t i, std::int64_t j, std::int64_t k) const noexcept;
    double h_ = 1.0, ht_ = 1.0;
    IndexBox3 bounds_{};
    std::vector<double> v_;
};

using ScalarFn = std::function<double(HPoint)>;

/// Samples fn at the centres of the grid covering [-L, L]^3 (t side ht,
/// default h) plus one empty layer. Throws std::domain_error when fn is
/// nonzero on that layer.
[[nodiscard]] GridFunction sample(const ScalarFn& fn, double h, double ht = 0.0, double L = 0.5);

/// Xf = f_x - (y/2) f_t and Yf = f_y + (x/2) f_t by central differences,
/// with f taken as zero outside the box. Throws for an invalid margin.
[[nodiscard]] GridFunction field_X(const GridFunction& f);
[[nodiscard]] GridFunction field_Y(const GridFunction& f);

/// (sum |f|^p h^2 ht)^(1/p), summed in cell order. Throws for p < 1.
[[nodiscard]] double lp_norm(const GridFunction& f, double p);

struct GnsResult {
    double lhs = 0.0;    // ||f||_{4/3}
    double rhs = 0.0;    // sqrt(||Xf||_1 ||Yf||_1)
    double ratio = 0.0;  // lhs / rhs, 0 for f = 0
};

[[nodiscard]] GnsResult gns_check(const GridFunction& f);

struct LevelSet {
    int k = 0;
    VoxelSet cells;  // 2^(k-1) <= |f| <= 2^k at the centre
};

/// Every nonempty level, ascending in k. Values equal to a power of two
/// land in both adjacent levels.
[[nodiscard]] std::vector<LevelSet> level_sets(const GridFunction& f);

struct LevelSetCheck {
    int k = 0;
    double lhs = 0.0;  // |pi(F_k)|
    double rhs = 0.0;  // 2^(2-k) * integral of |Yf| (|Xf| for Axis::y) over F_(k-1)
    bool holds = false;
};

inline constexpr double kLevelSetSlack = 1.25;

/// Axis::x pairs pi_x with |Yf|, Axis::y pairs pi_y with |Xf|. Throws
/// std::invalid_argument when F_k is empty.
[[nodiscard]] LevelSetCheck levelset_lemma_check(const GridFunction& f, int k, Axis which);
/// Same with precomputed levels and field.
[[nodiscard]] LevelSetCheck levelset_lemma_check(const std::vector<LevelSet>& levels, const GridFunction& field, int k,
                                                 Axis which);

/// The numbers in the level-set route to the inequality.
struct LevelChain {
    double integral = 0.0;        // integral of |f|^(4/3)
    double level_sum = 0.0;       // sum 2^(4k/3) |F_k|
    double projection_sum = 0.0;  // sum 2^(4k/3) (|pi_x F_k| |pi_y F_k|)^(2/3)
    double gradient_bound = 0.0;  // (||Xf||_1 ||Yf||_1)^(2/3)
};

[[nodiscard]] LevelChain level_chain(const GridFunction& f);

/// g(x, y, t) = f(x, y, t + sign * xy/2) by trilinear interpolation of the
/// centre samples; sign = +1 is f o Phi, sign = -1 its inverse. Throws
/// std::domain_error when g would be nonzero on the boundary layer.
[[nodiscard]] GridFunction shear_change_of_variables(const GridFunction& f, int sign = 1);

struct NamedFunction {
    std::string name;
    ScalarFn fn;
};

/// (1 - |p|^2 / w^2)_+^power around c.
[[nodiscard]] ScalarFn bump(double width, HPoint c = {}, int power = 2);
/// Bumps of several widths and powers, an anisotropic bump, a sheared bump
/// and a smoothed box indicator, all supported in [-0.45, 0.45]^3.
[[nodiscard]] std::vector<NamedFunction> function_zoo();
/// f o dilate(1/lambda).
[[nodiscard]] ScalarFn dilated(double lambda, ScalarFn fn);

// One line of JSON {"dims":[nx,ny,nz],"h":..,"ht":..,"origin":[x,y,t]}
// followed by nx*ny*nz little-endian float32 values in k-j-i order. origin
// is the low corner of the box.
void write_grid_function(std::ostream& out, const GridFunction& f);
[[nodiscard]] GridFunction read_grid_function(std::istream& in);

}  // namespace inclab
