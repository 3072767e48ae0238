#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bvq/field.hpp"
#include "bvq/quadrature.hpp"

namespace bvq {

// eps_n = eps_max * ratio^n, n = 0..count-1.
struct EpsilonSchedule {
    double eps_max = 0.1;
    double ratio = 0.5;
    int count = 1;

    std::vector<double> values() const;
    double smallest() const;
};

EpsilonSchedule make_schedule(double eps_max, double ratio, int count);
// Throws ResolutionError when the smallest radius violates radius >= factor * h.
void validate_schedule(const EpsilonSchedule& s, const Domain& d, double factor, const std::string& what);

enum class Monotonicity { increasing, decreasing, constant, mixed };
std::string to_string(Monotonicity m);

// Trailing-window summary of a sequence indexed by a decreasing radius.
struct LimitEstimate {
    std::vector<double> eps;
    std::vector<double> values;
    int window = 3;
    double liminf = 0.0;
    double limsup = 0.0;
    double sup = 0.0;
    Monotonicity monotonicity = Monotonicity::constant;
    double order = 0.0;  // least-squares slope of log value against log eps; NaN if undefined

    double relative_spread() const;
};

LimitEstimate estimate_limit(std::vector<double> eps, std::vector<double> values, int window);
void write_eps_table(std::ostream& os, const LimitEstimate& e, const std::string& value_name = "value");

struct BesovOptions {
    int window = 3;
    double limit_tolerance = 0.05;  // relative trailing-window spread below which a limit is declared
    PairOptions pair{};
};

struct BesovConstants {
    LimitEstimate estimate;
    double hat = 0.0;    // max over schedule entries with eps < 1
    double upper = 0.0;  // trailing-window max
    double lower = 0.0;  // trailing-window min
    std::optional<double> limit;
    double limit_tolerance = 0.05;
};

BesovConstants besov_constants(const Field& u, double q, const EpsilonSchedule& schedule, const BesovOptions& opts = {});

struct TranslationSeminorm {
    LimitEstimate estimate;
    double value = 0.0;
};

// sup over lattice shifts |h| <= rho along 2N axis and N(N-1) diagonal
// directions at magnitudes rho, rho/2, rho/4 of int |u(x+h)-u(x)|^q dx / rho^{sq},
// with u extended by zero outside the box.
TranslationSeminorm besov_translation_seminorm(const Field& u, double q, double s, const EpsilonSchedule& rho_schedule,
                                               int window = 3);

struct GagliardoOptions {
    double max_pairs = 2e8;
    std::optional<IndexBox> subdomain;
};

// int int |u(y)-u(x)|^q / |y-x|^{N+rq} over distinct cell pairs.
double gagliardo_seminorm(const Field& u, double r, double q, const GagliardoOptions& opts = {});

// Pointwise int_{B_delta(x)} |u(y)-u(x)|^q / delta^{N+rq} dy at a cell centre, per delta.
std::vector<double> a_rq_profile(const Field& u, std::size_t cell, double r, double q, const std::vector<double>& deltas);

struct ArqResult {
    std::vector<double> deltas;
    std::vector<double> per_point;  // trailing-window max per cell (0 for masked cells)
    double value = 0.0;             // integral of per_point over Omega
};

ArqResult a_rq_quantity(const Field& u, double r, double q, const EpsilonSchedule& deltas, int window = 3);

// Mean over B_rho(x)^2 of |u(z) - u(y)|^q.
double double_average(const Field& u, const Point& x, double rho, double q);
// Mean over B_rho(x) of |u - u_{B_rho(x)}|^q.
double mean_q_oscillation(const Field& u, const Point& x, double rho, double q);

}  // namespace bvq
