#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bvq/field.hpp"
#include "bvq/stencil.hpp"

namespace bvq {

enum class Side { plus, minus };

// Volume-weighted mean of u over B_rho(x). Requires rho >= 2h.
std::vector<double> ball_average(const Field& u, const Point& x, double rho);
// Mean of |u - ref|^q over B_rho(x).
double ball_power_mean(const Field& u, const Point& x, double rho, std::span<const double> ref, double q);
// Mean over the open half-ball {(y - x).nu > 0} (plus) or < 0 (minus).
std::vector<double> halfball_average(const Field& u, const Point& x, double rho, const Point& nu, Side side);

// Mean of u over an explicit cell list.
std::vector<double> mean_over(const Field& u, std::span<const std::size_t> cells);

enum class KernelRule {
    automatic,    // cell-averaged weights for s <= N, centre values otherwise
    cell_center,  // |x - y|^{-s} at cell centres
    cell_average  // average of |x - y|^{-s} over the two cells
};

struct PairOptions {
    double s = 1.0;                       // kernel exponent
    std::optional<IndexBox> subdomain;    // restrict both x and y
    double guard_factor = 8.0;            // eps >= guard_factor * h
    KernelRule rule = KernelRule::automatic;
};

// Midpoint value of eps^{-N} int int_{|x-y|<eps} |u(x)-u(y)|^q |x-y|^{-s}
// with the diagonal pair excluded. The result does not depend on the
// thread count.
double pair_integral(const Field& u, double eps, double q, const PairOptions& opts = {});

// Average of |x - y|^{-s} for x in cell 0 and y in cell `offset` (grid spacing h).
double cell_averaged_kernel(const Index& offset, const Point& h, int dim, double s);

}  // namespace bvq
