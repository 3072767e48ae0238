#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bvq/field.hpp"

namespace bvq {

// Cells of a ball B_rho(x): in-domain, unmasked, centre strictly inside.
struct BallStencil {
    Index center_cell{0, 0, 0};
    Point x{0, 0, 0};
    double radius = 0.0;
    double cell_volume = 0.0;
    std::vector<std::size_t> cells;
    std::size_t masked_excluded = 0;

    double weight() const noexcept { return static_cast<double>(cells.size()) * cell_volume; }
    bool empty() const noexcept { return cells.empty(); }
};

BallStencil ball_stencil(const Domain& domain, const Point& x, double rho);
BallStencil ball_stencil(const Field& u, const Point& x, double rho);

// Cells with (y - x).nu > 0, < 0 and == 0; the last group belongs to neither open half-ball.
struct HalfBallSplit {
    std::vector<std::size_t> plus;
    std::vector<std::size_t> minus;
    std::vector<std::size_t> on_plane;
};

HalfBallSplit split_stencil(const Domain& domain, const BallStencil& ball, const Point& nu);

// Throws ResolutionError unless rho >= factor * max cell spacing.
void require_radius(const Domain& domain, double rho, double factor, const std::string& what);

}  // namespace bvq
