#include "bvq/lusin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "bvq/error.hpp"
#include "bvq/kahan.hpp"
#include "bvq/parallel.hpp"
#include "bvq/quadrature.hpp"
#include "bvq/special.hpp"
#include "bvq/stencil.hpp"

namespace bvq {

CellMask mask_from_box(const Domain& d, const IndexBox& box) {
    CellMask m(d.cell_count(), 0);
    for (int i = box.lo[0]; i < box.hi[0]; ++i)
        for (int j = box.lo[1]; j < box.hi[1]; ++j)
            for (int k = box.lo[2]; k < box.hi[2]; ++k) m[d.linear({i, j, k})] = 1;
    return m;
}

namespace {

std::vector<std::size_t> cells_of(const IndexBox& box, const Domain& d) {
    std::vector<std::size_t> out;
    for (int i = box.lo[0]; i < box.hi[0]; ++i)
        for (int j = box.lo[1]; j < box.hi[1]; ++j)
            for (int k = box.lo[2]; k < box.hi[2]; ++k) out.push_back(d.linear({i, j, k}));
    return out;
}

// Distance from the union of K's cells to the faces of the box.
double boundary_margin(const Domain& d, const IndexBox& K) {
    double m = std::numeric_limits<double>::infinity();
    for (int a = 0; a < d.dim(); ++a) {
        const double h = d.spacing()[a];
        m = std::min({m, K.lo[a] * h, (d.cells()[a] - K.hi[a]) * h});
    }
    return m;
}

// int_{B_delta(x)} |u - u_B|^q dy / delta^{N+rq} at a cell centre.
double centred_quantity(const Field& u, std::size_t cell, double delta, double r, double q) {
    const Domain& d = u.domain();
    const auto b = ball_stencil(u, d.center(cell), delta);
    if (b.empty()) return std::numeric_limits<double>::infinity();
    const auto mean = mean_over(u, b.cells);
    CompensatedSum acc;
    for (std::size_t c : b.cells) acc.add(std::pow(norm_diff(u.value(c), mean), q));
    return acc.value() * b.cell_volume / std::pow(delta, d.dim() + r * q);
}

double holder_ratio(const Field& u, std::size_t a, std::size_t b, const Point& pa, const Point& pb, double half_r) {
    return norm_diff(u.value(a), u.value(b)) / std::pow(dist2(pa, pb), half_r);
}

}  // namespace

GoodSetFiltration build_filtration(const Field& u, const IndexBox& K, double r, double q, const std::vector<int>& levels,
                                   const EpsilonSchedule& deltas) {
    const Domain& d = u.domain();
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("build_filtration: r must lie in (0,1]");
    if (!(q >= 1.0)) throw std::invalid_argument("build_filtration: q must be >= 1");
    if (levels.empty()) throw std::invalid_argument("build_filtration: empty level list");
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] < 1 || (i > 0 && levels[i] <= levels[i - 1]))
            throw std::invalid_argument("build_filtration: levels must be positive and increasing");
    for (int a = 0; a < 3; ++a) {
        if (!(K.lo[a] < K.hi[a]) || K.lo[a] < 0 || K.hi[a] > d.cells()[a])
            throw std::invalid_argument("build_filtration: K is not a box of cells");
    }
    const double margin = boundary_margin(d, K);
    if (!(margin > 0.0)) throw std::invalid_argument("build_filtration: K must lie strictly inside the box");
    validate_schedule(deltas, d, 4.0, "build_filtration");

    GoodSetFiltration f;
    f.K = K;
    f.r = r;
    f.q = q;
    f.deltas = deltas.values();
    f.smallest_delta = deltas.smallest();
    const auto kcells = cells_of(K, d);
    f.cell_volume = d.cell_volume();
    f.k_measure = static_cast<double>(kcells.size()) * d.cell_volume();

    // quantity[c * count + k] for the k-th radius at the c-th cell of K
    const std::size_t nd = f.deltas.size();
    std::vector<double> quantity(kcells.size() * nd);
    const auto plan = make_chunk_plan(kcells.size());
    parallel_chunks(plan.count(), [&](std::size_t ch) {
        for (std::size_t c = plan.begin(ch); c < plan.end(ch); ++c)
            for (std::size_t k = 0; k < nd; ++k)
                quantity[c * nd + k] = u.masked(kcells[c]) ? std::numeric_limits<double>::infinity()
                                                          : centred_quantity(u, kcells[c], f.deltas[k], r, q);
    });

    for (int n : levels) {
        const double cutoff = std::min(1.0 / n, margin);
        std::vector<std::size_t> tested;
        for (std::size_t k = 0; k < nd; ++k)
            if (f.deltas[k] < cutoff) tested.push_back(k);
        if (tested.empty()) {
            f.warnings.push_back("level " + std::to_string(n) + " skipped: no radius below I(n) = " +
                                 std::to_string(cutoff));
            continue;
        }
        CellMask member(d.cell_count(), 0);
        std::size_t kept = 0;
        for (std::size_t c = 0; c < kcells.size(); ++c) {
            bool ok = true;
            for (std::size_t k : tested) ok = ok && quantity[c * nd + k] <= n;
            if (ok) member[kcells[c]] = 1, ++kept;
        }
        if (!f.members.empty()) {
            const auto& prev = f.members.back();
            for (std::size_t i = 0; i < member.size() && f.monotone; ++i)
                if (prev[i] && !member[i]) f.monotone = false;
        }
        f.levels.push_back(n);
        f.cutoffs.push_back(cutoff);
        f.members.push_back(std::move(member));
        f.removed.push_back(static_cast<double>(kcells.size() - kept) * d.cell_volume());
    }
    return f;
}

CompactSelection select_compact(const GoodSetFiltration& f, double eps_measure) {
    if (f.levels.empty()) throw std::invalid_argument("select_compact: filtration has no levels");
    CompactSelection s;
    if (eps_measure < f.cell_volume) s.warning = "target measure is below one cell volume";
    for (std::size_t i = 0; i < f.levels.size(); ++i) {
        if (f.removed[i] < eps_measure) {
            s.n0 = f.levels[i];
            s.B = f.members[i];
            s.removed = f.removed[i];
            return s;
        }
    }
    throw TargetNotReachedError("select_compact: no level removes less than the target measure",
                                *std::min_element(f.removed.begin(), f.removed.end()));
}

HolderConstant holder_constant_on(const Field& u, const CellMask& B, double r, const HolderOptions& opts) {
    const Domain& d = u.domain();
    if (B.size() != d.cell_count()) throw std::invalid_argument("holder_constant_on: mask size mismatch");
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < B.size(); ++i)
        if (B[i] && !u.masked(i)) cells.push_back(i);
    if (cells.size() < 2) throw std::invalid_argument("holder_constant_on: B needs at least two cells");
    std::vector<Point> pos(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) pos[i] = d.center(cells[i]);

    const auto cd = static_cast<std::size_t>(u.codim());
    const double half_r = 0.5 * r;
    const double m = static_cast<double>(cells.size());
    HolderConstant hc;
    hc.per_component.assign(cd, 0.0);
    hc.seed = opts.seed;
    hc.exhaustive = 0.5 * m * (m - 1.0) <= opts.max_pairs;

    struct Acc {
        std::vector<double> comp;
        double combined = 0.0;
        double pairs = 0.0;
    };
    auto visit = [&](Acc& a, std::size_t i, std::size_t j) {
        const double den = std::pow(dist2(pos[i], pos[j]), half_r);
        const auto vi = u.value(cells[i]), vj = u.value(cells[j]);
        for (std::size_t k = 0; k < cd; ++k) a.comp[k] = std::max(a.comp[k], std::fabs(vi[k] - vj[k]) / den);
        a.combined = std::max(a.combined, norm_diff(vi, vj) / den);
        a.pairs += 1.0;
    };

    // Local radius: all pairs when affordable, otherwise the radius whose pair count meets the cap.
    double reach2 = std::numeric_limits<double>::infinity();
    if (!hc.exhaustive) {
        double lo[3] = {1e300, 1e300, 1e300}, hi[3] = {-1e300, -1e300, -1e300};
        for (const auto& p : pos)
            for (int a = 0; a < 3; ++a) lo[a] = std::min(lo[a], p[a]), hi[a] = std::max(hi[a], p[a]);
        double diam2 = 0.0;
        for (int a = 0; a < 3; ++a) diam2 += (hi[a] - lo[a]) * (hi[a] - lo[a]);
        const int n = d.dim();
        const double per_cell = 2.0 * opts.max_pairs / m;  // neighbours per cell within the radius
        const double radius = std::pow(per_cell * d.cell_volume() / alpha(n), 1.0 / n);
        reach2 = std::min(0.25 * diam2, radius * radius);
    }

    const auto plan = make_chunk_plan(cells.size());
    std::vector<Acc> parts(plan.count(), Acc{std::vector<double>(cd, 0.0), 0.0, 0.0});
    parallel_chunks(plan.count(), [&](std::size_t ch) {
        for (std::size_t i = plan.begin(ch); i < plan.end(ch); ++i)
            for (std::size_t j = i + 1; j < cells.size(); ++j)
                if (hc.exhaustive || dist2(pos[i], pos[j]) <= reach2) visit(parts[ch], i, j);
    });
    Acc total{std::vector<double>(cd, 0.0), 0.0, 0.0};
    for (const auto& p : parts) {
        for (std::size_t k = 0; k < cd; ++k) total.comp[k] = std::max(total.comp[k], p.comp[k]);
        total.combined = std::max(total.combined, p.combined);
        total.pairs += p.pairs;
    }
    if (!hc.exhaustive) {
        std::mt19937_64 rng(opts.seed);
        for (std::size_t s = 0; s < opts.sample_pairs; ++s) {
            const std::size_t i = rng() % cells.size(), j = rng() % cells.size();
            if (i != j) visit(total, i, j);
        }
    }
    hc.per_component = total.comp;
    hc.combined = total.combined;
    hc.pairs = total.pairs;
    return hc;
}

namespace {

struct Tile {
    std::vector<std::size_t> cells;
    std::vector<double> min_value;  // per component
    Point lo{0, 0, 0};
    Point hi{0, 0, 0};
};

std::vector<Tile> tile_cells(const Field& u, const CellMask& B, int edge) {
    const Domain& d = u.domain();
    const auto cd = static_cast<std::size_t>(u.codim());
    Index tiles{1, 1, 1};
    for (int a = 0; a < d.dim(); ++a) tiles[a] = (d.cells()[a] + edge - 1) / edge;
    std::vector<Tile> out(static_cast<std::size_t>(tiles[0]) * tiles[1] * tiles[2]);
    for (auto& t : out) {
        t.min_value.assign(cd, std::numeric_limits<double>::infinity());
        t.lo = {1e300, 1e300, 1e300};
        t.hi = {-1e300, -1e300, -1e300};
    }
    for (std::size_t i = 0; i < B.size(); ++i) {
        if (!B[i] || u.masked(i)) continue;
        const Index c = d.unravel(i);
        Index t{0, 0, 0};
        for (int a = 0; a < d.dim(); ++a) t[a] = c[a] / edge;
        Tile& tile = out[(static_cast<std::size_t>(t[0]) * tiles[1] + t[1]) * tiles[2] + t[2]];
        tile.cells.push_back(i);
        const auto v = u.value(i);
        for (std::size_t k = 0; k < cd; ++k) tile.min_value[k] = std::min(tile.min_value[k], v[k]);
        const Point p = d.center(i);
        for (int a = 0; a < 3; ++a) tile.lo[a] = std::min(tile.lo[a], p[a]), tile.hi[a] = std::max(tile.hi[a], p[a]);
    }
    std::erase_if(out, [](const Tile& t) { return t.cells.empty(); });
    return out;
}

double box_dist2(const Point& x, const Point& lo, const Point& hi) {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
        const double e = x[a] < lo[a] ? lo[a] - x[a] : (x[a] > hi[a] ? x[a] - hi[a] : 0.0);
        s += e * e;
    }
    return s;
}

}  // namespace

HolderAudit audit_holder(const Field& f, double r, double bound, std::uint64_t seed, std::size_t pairs) {
    const Domain& d = f.domain();
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < d.cell_count(); ++i)
        if (!f.masked(i)) cells.push_back(i);
    HolderAudit a;
    a.seed = seed;
    if (cells.size() < 2) {
        a.pass = true;
        return a;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < pairs; ++s) {
        const std::size_t i = cells[rng() % cells.size()], j = cells[rng() % cells.size()];
        if (i == j) continue;
        a.max_ratio = std::max(a.max_ratio, holder_ratio(f, i, j, d.center(i), d.center(j), 0.5 * r));
        ++a.pairs;
    }
    a.pass = a.max_ratio <= bound + 1e-9;
    return a;
}

HolderCertificate holder_extend(const Field& u, const CellMask& B, double r, double H, const HolderOptions& opts) {
    const Domain& d = u.domain();
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("holder_extend: r must lie in (0,1]");
    auto measured = holder_constant_on(u, B, r, opts);
    if (H < measured.combined)
        throw std::invalid_argument("holder_extend: H is below the measured Hoelder constant on B");

    const auto cd = static_cast<std::size_t>(u.codim());
    const auto tiles = tile_cells(u, B, 8);
    const double half_r = 0.5 * r;
    std::vector<double> values(d.cell_count() * cd);
    const auto plan = make_chunk_plan(d.cell_count(), 256);
    parallel_chunks(plan.count(), [&](std::size_t ch) {
        std::vector<std::pair<double, std::size_t>> order(tiles.size());
        for (std::size_t i = plan.begin(ch); i < plan.end(ch); ++i) {
            const auto out = std::span<double>(values).subspan(i * cd, cd);
            if (B[i] && !u.masked(i)) {
                // The infimum is attained at xi itself.
                const auto v = u.value(i);
                std::copy(v.begin(), v.end(), out.begin());
                continue;
            }
            const Point xi = d.center(i);
            for (std::size_t k = 0; k < cd; ++k) {
                for (std::size_t t = 0; t < tiles.size(); ++t)
                    order[t] = {tiles[t].min_value[k] + H * std::pow(box_dist2(xi, tiles[t].lo, tiles[t].hi), half_r), t};
                std::sort(order.begin(), order.end());
                double best = std::numeric_limits<double>::infinity();
                for (const auto& [bound, t] : order) {
                    if (bound >= best) break;
                    for (std::size_t c : tiles[t].cells)
                        best = std::min(best, u.value(c)[k] + H * std::pow(dist2(xi, d.center(c)), half_r));
                }
                out[k] = best;
            }
        }
    });

    HolderCertificate cert{Field(d, u.codim(), std::move(values)), B, r, H, std::move(measured), 0.0, 0.0, {}};
    cert.global_bound = static_cast<double>(cd) * H;
    for (std::size_t i = 0; i < B.size(); ++i)
        if (B[i] && !u.masked(i))
            cert.max_deviation_on_B = std::max(cert.max_deviation_on_B, norm_diff(cert.extension.value(i), u.value(i)));
    cert.audit = audit_holder(cert.extension, r, cert.global_bound, opts.seed, opts.sample_pairs);
    return cert;
}

std::vector<ExhaustionRow> exhaustion_report(const Field& u, const GoodSetFiltration& f) {
    const Domain& d = u.domain();
    const auto kcells = cells_of(f.K, d);
    const std::size_t nd = f.deltas.size();
    std::vector<double> prof(kcells.size() * nd, 0.0);
    const auto plan = make_chunk_plan(kcells.size());
    parallel_chunks(plan.count(), [&](std::size_t ch) {
        for (std::size_t c = plan.begin(ch); c < plan.end(ch); ++c) {
            if (u.masked(kcells[c])) continue;
            const auto p = a_rq_profile(u, kcells[c], f.r, f.q, f.deltas);
            std::copy(p.begin(), p.end(), prof.begin() + static_cast<std::ptrdiff_t>(c * nd));
        }
    });
    std::vector<ExhaustionRow> rows;
    for (std::size_t i = 0; i < f.levels.size(); ++i) {
        CompensatedSum acc;
        for (std::size_t c = 0; c < kcells.size(); ++c) {
            double sup = 0.0;
            for (std::size_t k = 0; k < nd; ++k)
                if (f.deltas[k] < f.cutoffs[i]) sup = std::max(sup, prof[c * nd + k]);
            acc.add(sup * d.cell_volume());
        }
        ExhaustionRow row;
        row.n = f.levels[i];
        row.removed = f.removed[i];
        row.chebyshev_bound = std::pow(2.0, f.q) / row.n * acc.value();
        row.below = row.removed <= row.chebyshev_bound;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace bvq
