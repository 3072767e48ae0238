#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bvq/field.hpp"
#include "bvq/functionals.hpp"
#include "bvq/interface.hpp"
#include "bvq/oscillation.hpp"

namespace bvq {

struct JumpThresholds {
    double jump_min = 0.05;      // |h| must exceed this
    double residual_rel = 0.35;  // fit residual must stay below residual_rel * |h|
    double scale_ratio = 1.15;   // refit at 2 rho with the same normal: |h| may change at most by this factor
    double classical_rel = 0.1;  // half-ball means within classical_rel * |h| of the fit, at rho, 2 rho, 4 rho
};

struct DetectedCell {
    std::size_t cell = 0;
    Point x{0, 0, 0};
    JumpFit fit;
    bool classical = false;
};

// One piece of the reconstructed interface: a point (1D), segment (2D) or triangle (3D).
struct InterfaceElement {
    std::vector<Point> vertices;
    Point position{0, 0, 0};  // vertex centroid
    double measure = 0.0;
    std::vector<double> plus;
    std::vector<double> minus;
    Point normal{0, 0, 0};
    double jump_norm = 0.0;
    double residual = 0.0;
    bool classical = false;
};

struct JumpField {
    int dim = 1;
    double rho = 0.0;
    JumpThresholds thresholds;
    std::vector<DetectedCell> cells;
    std::vector<InterfaceElement> elements;

    double measure() const;
    double mean_jump() const;  // measure-weighted mean of |h|
    bool empty() const noexcept { return elements.empty(); }
};

// Accepted step fit at x: |h| above jump_min, residual below residual_rel |h|,
// and a refit at 2 rho with the same normal within scale_ratio of |h|.
std::optional<JumpFit> jump_fit_at(const Field& u, const Point& x, double rho, const JumpThresholds& t = {});

// Classical half-ball test of a fit at x: one-sided means agree with c + h
// and c at radii rho, 2 rho, 4 rho.
bool classical_jump_at(const Field& u, const Point& x, double rho, const JumpFit& fit, const JumpThresholds& t = {});

// Step fits at every cell whose ball range reaches jump_min, filtered by the
// thresholds, followed by contour reconstruction of the interface from the
// smoothed field projected onto each fit's jump direction. Requires rho >= 4h.
JumpField detect_jumps(const Field& u, double rho, const JumpThresholds& t = {});

// Integral of |u+ - u-|^q over the interface.
double q_jump_variation(const JumpField& jumps, double q);
double q_jump_variation(const InterfaceSpec& spec, double q, int resolution = 1024);

struct InequalityVerdict {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;  // lhs / rhs
    bool pass = false;
    double tolerance = 0.05;
    double c_n = 0.0;
    double variation = 0.0;
    double gamma_lhs = 0.0;  // gamma(N) * variation
    bool gamma_pass = false;
    bool rhs_is_upper = false;
    std::string lhs_source;
    BesovConstants besov;
};

struct InequalityOptions {
    double tolerance = 0.05;
    bool use_upper = false;
    BesovOptions besov{};
};

InequalityVerdict verify_jump_inequality(const Field& u, double q, const EpsilonSchedule& schedule,
                                         const InterfaceSpec& source, const InequalityOptions& opts = {});
InequalityVerdict verify_jump_inequality(const Field& u, double q, const EpsilonSchedule& schedule,
                                         const JumpField& source, const InequalityOptions& opts = {});

struct SandwichOptions {
    double tolerance = 0.05;
    double max_pairs = 2e8;
    double a2_cap = 1e6;
    BesovOptions besov{};
};

struct SandwichResult {
    bool applicable = false;
    std::string reason;
    double A1 = 0.0;
    double A2 = 0.0;
    double lower_bound = 0.0;  // alpha(N) A1^q |Omega|
    double upper_bound = 0.0;  // alpha(N) A2^q |Omega|
    std::vector<double> window;
    bool pass = false;
};

// Pairwise Hoelder-1/q ratios over cell pairs at distance >= 2h, then the
// trailing Besov window checked against the two bounds.
SandwichResult sandwich_check(const Field& u, double q, const EpsilonSchedule& schedule,
                              const SandwichOptions& opts = {});

// x, h..., nu..., residual, element measure; one row per element.
void write_jump_csv(std::ostream& os, const JumpField& jumps);
// One element per line: vertex coordinates then |h| and the measure.
void write_interface_geometry(std::ostream& os, const JumpField& jumps);

}  // namespace bvq
