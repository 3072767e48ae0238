#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bvq/field.hpp"
#include "bvq/functionals.hpp"

namespace bvq {

struct ConstantFit {
    std::vector<double> c_star;
    double value = 0.0;  // mean of |u - c_star|
};

// Minimiser of c -> mean |v_i - c| over the given cells. Scalar: lower median
// (exact). Vector: best of coordinate medians and mean, polished by compass search.
ConstantFit l1_center(const Field& u, std::span<const std::size_t> cells);

// inf_c mean_{B_rho(x)} |u - c|.
ConstantFit inf_const_oscillation(const Field& u, const Point& x, double rho);

struct OscillationRecord {
    double rho = 0.0;
    double inf_osc = 0.0;        // inf_c mean |u - c|
    double mean_q_osc = 0.0;     // mean |u - u_B|^q
    double mean_abs_dev = 0.0;   // mean |u - u_B|
    std::vector<double> mean;    // u_B, the approximate-limit candidate
};

struct OscillationProfile {
    Point x{0, 0, 0};
    std::vector<OscillationRecord> records;
};

OscillationProfile oscillation_profile(const Field& u, const Point& x, const std::vector<double>& radii, double q = 1.0);

struct Thresholds {
    double abs = 1e-3;
    double rel = 1e-2;         // multiplied by mean_Omega |u - u_Omega|
    int window = 3;
    double decay_ratio = 0.5;  // last <= decay_ratio * first counts as decay to zero
    double rate_ratio = 0.75;  // successive increments shrinking at least this fast count as convergence
};

struct Verdict {
    bool value = false;
    double statistic = 0.0;
    double threshold = 0.0;
    std::string evidence;
};

struct PointClass {
    Point x{0, 0, 0};
    Verdict in_S;
    Verdict in_Sprime;
    Verdict in_Sdoubleprime;
    OscillationProfile profile;
};

// A series indexed by decreasing radius passes to zero if its trailing-window
// maximum is below theta, or it is nonincreasing and its last entry is at most
// decay_ratio times its first.
bool passes_to_zero(std::span<const double> series, double theta, const Thresholds& t);
bool liminf_passes_to_zero(std::span<const double> series, double theta, const Thresholds& t);

PointClass classify_point(const Field& u, const Point& x, const EpsilonSchedule& schedule, const Thresholds& t = {},
                          std::optional<double> scale = std::nullopt);

struct JumpFit {
    std::vector<double> h;
    Point nu{0, 0, 0};
    std::vector<double> c;
    double residual = 0.0;
    double rho = 0.0;
    double jump_norm() const;
};

// Two-valued step fit over the fixed trial normals: c is the L1 centre of the
// minus half-ball, c + h that of the plus half-ball. The first nonzero
// component of h is made positive by (h, nu, c) -> (-h, -nu, c + h).
JumpFit blowup_step_fit(const Field& u, const Point& x, double rho, std::span<const Point> normals);
JumpFit blowup_step_fit(const Field& u, const Point& x, double rho);

// The trial normals whose plane through x leaves cells on both sides of B_rho(x).
std::vector<Point> splitting_normals(const Field& u, const Point& x, double rho, std::span<const Point> normals);

struct RescaledBound {
    LimitEstimate estimate;       // double_average(x, rho_n, q) along the schedule
    std::vector<double> bounds;   // |h(rho_n)|^q / 2 from the step fit at the same radius
    JumpFit fit;                  // fit at the smallest radius
    bool fit_valid = false;       // residual <= residual_rel * |h| at the smallest radius
    double value = 0.0;           // trailing-window minimum of the double averages
    double bound = 0.0;           // trailing-window maximum of the bounds
    double tolerance = 0.05;
    bool holds = false;           // value_n >= bound_n * (1 - tolerance) across the trailing window
};

// Radii must be at least 4h. Trial planes that leave a side empty near the
// box faces are skipped.
RescaledBound rescaled_pair_lower_bound(const Field& u, const Point& x, const EpsilonSchedule& schedule, double q,
                                        double tolerance = 0.05, int window = 3, double residual_rel = 0.35);

}  // namespace bvq
