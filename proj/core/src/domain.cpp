#include "bvq/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace bvq {

Domain make_domain(int dim, std::span<const double> lower, std::span<const double> upper,
                   std::span<const int> cells) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3, got " + std::to_string(dim));
    const auto n = static_cast<std::size_t>(dim);
    if (lower.size() != n || upper.size() != n || cells.size() != n)
        throw std::invalid_argument("bounds and cell counts must have one entry per dimension");

    Domain d;
    d.dim_ = dim;
    for (std::size_t a = 0; a < n; ++a) {
        if (!std::isfinite(lower[a]) || !std::isfinite(upper[a]))
            throw std::invalid_argument("non-finite bounds");
        if (!(lower[a] < upper[a])) throw std::invalid_argument("unordered bounds on axis " + std::to_string(a));
        if (cells[a] <= 0) throw std::invalid_argument("non-positive cell count on axis " + std::to_string(a));
        if (cells[a] < 4) throw std::invalid_argument("at least 4 cells per axis required");
        d.lower_[a] = lower[a];
        d.upper_[a] = upper[a];
        d.cells_[a] = cells[a];
        d.spacing_[a] = (upper[a] - lower[a]) / cells[a];
    }
    d.count_ = 1;
    d.cell_volume_ = 1.0;
    for (std::size_t a = 0; a < 3; ++a) {
        d.count_ *= static_cast<std::size_t>(d.cells_[a]);
        if (a < n) d.cell_volume_ *= d.spacing_[a];
        auto& c = d.coords_[a];
        c.resize(static_cast<std::size_t>(d.cells_[a]));
        if (a >= n) {
            c[0] = 0.0;
            continue;
        }
        const double width = d.upper_[a] - d.lower_[a];
        const long long den0 = 2LL * d.cells_[a];
        for (int i = 0; i < d.cells_[a]; ++i) {
            const long long num0 = 2LL * i + 1;
            const long long g = std::gcd(num0, den0);
            const double t = static_cast<double>(num0 / g) / static_cast<double>(den0 / g);
            c[static_cast<std::size_t>(i)] = d.lower_[a] + width * t;
        }
    }
    return d;
}

double Domain::volume() const noexcept {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= upper_[a] - lower_[a];
    return v;
}

double Domain::max_spacing() const noexcept {
    double h = 0.0;
    for (int a = 0; a < dim_; ++a) h = std::max(h, spacing_[a]);
    return h;
}

double Domain::diameter() const noexcept {
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) s += (upper_[a] - lower_[a]) * (upper_[a] - lower_[a]);
    return std::sqrt(s);
}

Point Domain::center(const Index& idx) const noexcept {
    return {coords_[0][static_cast<std::size_t>(idx[0])], coords_[1][static_cast<std::size_t>(idx[1])],
            coords_[2][static_cast<std::size_t>(idx[2])]};
}

Index Domain::unravel(std::size_t linear) const noexcept {
    Index idx{};
    idx[2] = static_cast<int>(linear % static_cast<std::size_t>(cells_[2]));
    linear /= static_cast<std::size_t>(cells_[2]);
    idx[1] = static_cast<int>(linear % static_cast<std::size_t>(cells_[1]));
    idx[0] = static_cast<int>(linear / static_cast<std::size_t>(cells_[1]));
    return idx;
}

bool Domain::contains(const Index& idx) const noexcept {
    for (int a = 0; a < 3; ++a)
        if (idx[a] < 0 || idx[a] >= cells_[a]) return false;
    return true;
}

bool Domain::contains(const Point& x) const noexcept {
    for (int a = 0; a < dim_; ++a)
        if (x[a] < lower_[a] || x[a] > upper_[a]) return false;
    return true;
}

Index Domain::locate(const Point& x) const noexcept {
    Index idx{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
        const double t = std::floor((x[a] - lower_[a]) / spacing_[a]);
        idx[a] = static_cast<int>(std::clamp(t, 0.0, static_cast<double>(cells_[a] - 1)));
    }
    return idx;
}

IndexBox Domain::cells_within(const Point& lo, const Point& hi) const {
    IndexBox box = full_box();
    for (int a = 0; a < dim_; ++a) {
        const auto& c = coords_[a];
        box.lo[a] = static_cast<int>(std::lower_bound(c.begin(), c.end(), lo[a]) - c.begin());
        box.hi[a] = static_cast<int>(std::upper_bound(c.begin(), c.end(), hi[a]) - c.begin());
        if (box.hi[a] <= box.lo[a]) throw std::invalid_argument("sub-box contains no cell centres");
    }
    return box;
}

Domain Domain::refined(std::span<const int> cells) const {
    return make_domain(dim_, std::span<const double>(lower_.data(), static_cast<std::size_t>(dim_)),
                       std::span<const double>(upper_.data(), static_cast<std::size_t>(dim_)), cells);
}

}  // namespace bvq
