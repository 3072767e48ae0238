#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace bvq {

using Point = std::array<double, 3>;
using Index = std::array<int, 3>;

// Half-open box of cell indices [lo, hi) per axis.
struct IndexBox {
    Index lo{0, 0, 0};
    Index hi{1, 1, 1};
};

// Axis-aligned box with a uniform cell grid. Unused axes have one cell of
// zero width so that three-component points can be used everywhere.
class Domain {
public:
    int dim() const noexcept { return dim_; }
    const Point& lower() const noexcept { return lower_; }
    const Point& upper() const noexcept { return upper_; }
    const Index& cells() const noexcept { return cells_; }
    const Point& spacing() const noexcept { return spacing_; }

    std::size_t cell_count() const noexcept { return count_; }
    double cell_volume() const noexcept { return cell_volume_; }
    double volume() const noexcept;
    double max_spacing() const noexcept;
    double diameter() const noexcept;

    // Cell-centre coordinate; bitwise identical for every grid that shares the centre.
    double coord(int axis, int i) const noexcept { return coords_[axis][static_cast<std::size_t>(i)]; }
    Point center(const Index& idx) const noexcept;
    Point center(std::size_t linear) const noexcept { return center(unravel(linear)); }

    std::size_t linear(const Index& idx) const noexcept {
        return (static_cast<std::size_t>(idx[0]) * cells_[1] + idx[1]) * cells_[2] + idx[2];
    }
    Index unravel(std::size_t linear) const noexcept;
    bool contains(const Index& idx) const noexcept;
    bool contains(const Point& x) const noexcept;
    // Cell whose closed extent holds x, clamped to the grid.
    Index locate(const Point& x) const noexcept;

    IndexBox full_box() const noexcept { return {{0, 0, 0}, cells_}; }
    // Cells whose centres lie in the closed box [lo, hi].
    IndexBox cells_within(const Point& lo, const Point& hi) const;

    // Same box, different resolution.
    Domain refined(std::span<const int> cells) const;

    friend Domain make_domain(int, std::span<const double>, std::span<const double>, std::span<const int>);
    friend bool operator==(const Domain& a, const Domain& b) noexcept {
        return a.dim_ == b.dim_ && a.lower_ == b.lower_ && a.upper_ == b.upper_ && a.cells_ == b.cells_;
    }

private:
    Domain() = default;
    int dim_ = 0;
    Point lower_{0, 0, 0};
    Point upper_{0, 0, 0};
    Index cells_{1, 1, 1};
    Point spacing_{0, 0, 0};
    std::size_t count_ = 1;
    double cell_volume_ = 1.0;
    std::array<std::vector<double>, 3> coords_;
};

Domain make_domain(int dim, std::span<const double> lower, std::span<const double> upper,
                   std::span<const int> cells);

inline double dist2(const Point& a, const Point& b) noexcept {
    const double d0 = a[0] - b[0], d1 = a[1] - b[1], d2 = a[2] - b[2];
    return d0 * d0 + d1 * d1 + d2 * d2;
}

}  // namespace bvq
