#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvq/field.hpp"
#include "bvq/functionals.hpp"

namespace bvq {

using CellMask = std::vector<std::uint8_t>;  // one flag per domain cell

struct GoodSetFiltration {
    IndexBox K;
    double r = 0.5;
    double q = 2.0;
    std::vector<double> deltas;
    std::vector<int> levels;                  // n values that had at least one radius below I(n)
    std::vector<double> cutoffs;              // I(n) = min(1/n, distance from K to the boundary)
    std::vector<CellMask> members;            // B_n, cells outside K are 0
    std::vector<double> removed;              // measure of K \ B_n
    std::vector<std::string> warnings;
    double smallest_delta = 0.0;
    double k_measure = 0.0;
    double cell_volume = 0.0;
    bool monotone = true;                     // B_n inside B_{n+1} for every consecutive pair
};

// x is in B_n iff int_{B_delta(x)} |u - u_{B_delta(x)}|^q / delta^{N+rq} <= n
// for every schedule radius delta < I(n). K must keep a positive distance
// from the box faces; radii must be at least 4h.
GoodSetFiltration build_filtration(const Field& u, const IndexBox& K, double r, double q, const std::vector<int>& levels,
                                   const EpsilonSchedule& deltas);

struct CompactSelection {
    int n0 = 0;
    CellMask B;
    double removed = 0.0;
    std::string warning;
};

// Smallest level whose removed measure is below eps_measure. Throws
// TargetNotReachedError carrying the best removed measure otherwise.
CompactSelection select_compact(const GoodSetFiltration& f, double eps_measure);

struct HolderConstant {
    std::vector<double> per_component;
    double combined = 0.0;  // Euclidean norm of u in the numerator
    double pairs = 0.0;
    bool exhaustive = true;
    std::uint64_t seed = 0;
};

struct HolderOptions {
    double max_pairs = 2e8;
    std::uint64_t seed = 20240601;
    std::size_t sample_pairs = 1000000;
};

// sup over cell pairs in B of |u(x) - u(xi)| / |x - xi|^r. Past the pair cap:
// all pairs within diam(B)/2 plus a seeded random sample.
HolderConstant holder_constant_on(const Field& u, const CellMask& B, double r, const HolderOptions& opts = {});

struct HolderAudit {
    std::uint64_t seed = 0;
    std::size_t pairs = 0;
    double max_ratio = 0.0;
    bool pass = false;
};

struct HolderCertificate {
    Field extension;
    CellMask B;
    double r = 0.5;
    double H = 0.0;
    HolderConstant measured;
    double global_bound = 0.0;        // d * H
    double max_deviation_on_B = 0.0;  // max |f - u| over B
    HolderAudit audit;
};

// f_j(xi) = min over x in B of u_j(x) + H |x - xi|^r, per component, over
// every cell of the box. Throws when H is below the measured constant on B.
HolderCertificate holder_extend(const Field& u, const CellMask& B, double r, double H, const HolderOptions& opts = {});

// Random-pair audit of |f(x) - f(y)| / |x - y|^r against bound.
HolderAudit audit_holder(const Field& f, double r, double bound, std::uint64_t seed, std::size_t pairs);

struct ExhaustionRow {
    int n = 0;
    double removed = 0.0;
    double chebyshev_bound = 0.0;  // 2^q / n * int_K max_delta of the u(x)-centred quantity
    bool below = false;
};

// Compares each level's removed measure with the Chebyshev bound obtained from
// the pointwise quantity centred at u(x) (the 2^q factor bridges the two centrings).
std::vector<ExhaustionRow> exhaustion_report(const Field& u, const GoodSetFiltration& f);

CellMask mask_from_box(const Domain& d, const IndexBox& box);

}  // namespace bvq
