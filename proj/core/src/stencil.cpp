#include "bvq/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bvq/error.hpp"

namespace bvq {

BallStencil ball_stencil(const Domain& d, const Point& x, double rho) {
    BallStencil b;
    b.x = x;
    b.radius = rho;
    b.cell_volume = d.cell_volume();
    b.center_cell = d.locate(x);
    Index lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < d.dim(); ++a) {
        const double h = d.spacing()[a];
        lo[a] = std::max(0, static_cast<int>(std::floor((x[a] - rho - d.lower()[a]) / h - 0.5)));
        hi[a] = std::min(d.cells()[a] - 1, static_cast<int>(std::ceil((x[a] + rho - d.lower()[a]) / h - 0.5)));
        if (hi[a] < lo[a]) return b;
    }
    const double r2 = rho * rho;
    for (int i = lo[0]; i <= hi[0]; ++i) {
        const double d0 = d.coord(0, i) - x[0];
        if (d0 * d0 >= r2) continue;
        for (int j = lo[1]; j <= hi[1]; ++j) {
            const double d1 = d.coord(1, j) - x[1];
            const double s01 = d0 * d0 + d1 * d1;
            if (s01 >= r2) continue;
            for (int k = lo[2]; k <= hi[2]; ++k) {
                const double d2 = d.coord(2, k) - x[2];
                if (s01 + d2 * d2 < r2) b.cells.push_back(d.linear({i, j, k}));
            }
        }
    }
    return b;
}

BallStencil ball_stencil(const Field& u, const Point& x, double rho) {
    BallStencil b = ball_stencil(u.domain(), x, rho);
    if (!u.has_mask()) return b;
    const auto before = b.cells.size();
    std::erase_if(b.cells, [&](std::size_t c) { return u.masked(c); });
    b.masked_excluded = before - b.cells.size();
    return b;
}

HalfBallSplit split_stencil(const Domain& d, const BallStencil& ball, const Point& nu) {
    HalfBallSplit s;
    for (std::size_t c : ball.cells) {
        const Point y = d.center(c);
        const double t = (y[0] - ball.x[0]) * nu[0] + (y[1] - ball.x[1]) * nu[1] + (y[2] - ball.x[2]) * nu[2];
        if (t > 0.0)
            s.plus.push_back(c);
        else if (t < 0.0)
            s.minus.push_back(c);
        else
            s.on_plane.push_back(c);
    }
    return s;
}

void require_radius(const Domain& d, double rho, double factor, const std::string& what) {
    const double h = d.max_spacing();
    if (rho >= factor * h) return;
    std::array<int, 3> cells{0, 0, 0};
    for (int a = 0; a < d.dim(); ++a)
        cells[a] = static_cast<int>(std::ceil(factor * (d.upper()[a] - d.lower()[a]) / rho));
    std::ostringstream os;
    os << "resolution too coarse for " << what << ": radius " << rho << " < " << factor << " x spacing " << h
       << "; need at least";
    for (int a = 0; a < d.dim(); ++a) os << ' ' << cells[a];
    os << " cells per axis";
    throw ResolutionError(os.str(), rho / factor, cells);
}

}  // namespace bvq
