#include "bvq/jumps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "bvq/contour.hpp"
#include "bvq/error.hpp"
#include "bvq/kahan.hpp"
#include "bvq/parallel.hpp"
#include "bvq/special.hpp"
#include "bvq/sphere_grid.hpp"
#include "bvq/stencil.hpp"

namespace bvq {

double JumpField::measure() const {
    CompensatedSum s;
    for (const auto& e : elements) s.add(e.measure);
    return s.value();
}

double JumpField::mean_jump() const {
    CompensatedSum num, den;
    for (const auto& e : elements) {
        num.add(e.jump_norm * e.measure);
        den.add(e.measure);
    }
    return den.value() > 0.0 ? num.value() / den.value() : 0.0;
}

bool classical_jump_at(const Field& u, const Point& x, double rho, const JumpFit& fit, const JumpThresholds& t) {
    const double hn = fit.jump_norm();
    if (hn == 0.0) return false;
    const Domain& d = u.domain();
    const auto cd = static_cast<std::size_t>(u.codim());
    constexpr std::array<double, 3> scales{1.0, 2.0, 4.0};
    const auto ball = ball_stencil(u, x, rho * scales.back());
    // sums[scale][side] over the nested open half-balls
    std::array<std::array<std::vector<double>, 2>, 3> sums;
    std::array<std::array<std::size_t, 2>, 3> counts{};
    for (auto& row : sums)
        for (auto& v : row) v.assign(cd, 0.0);
    for (std::size_t c : ball.cells) {
        const Point y = d.center(c);
        const double r2 = dist2(x, y);
        const double side = (y[0] - x[0]) * fit.nu[0] + (y[1] - x[1]) * fit.nu[1] + (y[2] - x[2]) * fit.nu[2];
        if (side == 0.0) continue;
        const int s = side > 0.0 ? 0 : 1;
        const auto v = u.value(c);
        for (std::size_t k = 0; k < scales.size(); ++k) {
            const double r = rho * scales[k];
            if (!(r2 < r * r)) continue;
            for (std::size_t j = 0; j < cd; ++j) sums[k][s][j] += v[j];
            ++counts[k][s];
        }
    }
    std::vector<double> mean(cd);
    for (std::size_t k = 0; k < scales.size(); ++k)
        for (int s = 0; s < 2; ++s) {
            if (counts[k][s] == 0) return false;
            for (std::size_t j = 0; j < cd; ++j) {
                const double target = s == 0 ? fit.c[j] + fit.h[j] : fit.c[j];
                mean[j] = sums[k][s][j] / static_cast<double>(counts[k][s]) - target;
            }
            double n2 = 0.0;
            for (double m : mean) n2 += m * m;
            if (std::sqrt(n2) >= t.classical_rel * hn) return false;
        }
    return true;
}

namespace {

bool ball_range_reaches(const Field& u, const BallStencil& b, double level) {
    const auto d = static_cast<std::size_t>(u.codim());
    for (std::size_t k = 0; k < d; ++k) {
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (std::size_t c : b.cells) {
            const double v = u.value(c)[k];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi - lo >= level) return true;
    }
    return false;
}

// Mean over the 3^N block around each cell; NaN for masked cells.
std::vector<double> smoothed(const Field& u) {
    const Domain& d = u.domain();
    const auto cd = static_cast<std::size_t>(u.codim());
    std::vector<double> out(d.cell_count() * cd, std::numeric_limits<double>::quiet_NaN());
    const auto plan = make_chunk_plan(d.cell_count());
    parallel_chunks(plan.count(), [&](std::size_t ch) {
        std::vector<double> acc(cd);
        for (std::size_t i = plan.begin(ch); i < plan.end(ch); ++i) {
            if (u.masked(i)) continue;
            const Index c = d.unravel(i);
            std::fill(acc.begin(), acc.end(), 0.0);
            int n = 0;
            for (int a = -1; a <= 1; ++a)
                for (int b = -1; b <= 1; ++b)
                    for (int e = -1; e <= 1; ++e) {
                        const Index o{c[0] + a, c[1] + b, c[2] + e};
                        if (!d.contains(o)) continue;
                        const std::size_t j = d.linear(o);
                        if (u.masked(j)) continue;
                        const auto v = u.value(j);
                        for (std::size_t k = 0; k < cd; ++k) acc[k] += v[k];
                        ++n;
                    }
            for (std::size_t k = 0; k < cd; ++k) out[i * cd + k] = acc[k] / n;
        }
    });
    return out;
}

InterfaceElement element_from(const DetectedCell& src, std::vector<Point> vertices, double measure) {
    InterfaceElement e;
    Point c{0, 0, 0};
    for (const auto& v : vertices)
        for (int a = 0; a < 3; ++a) c[a] += v[a] / static_cast<double>(vertices.size());
    e.vertices = std::move(vertices);
    e.position = c;
    e.measure = measure;
    e.minus = src.fit.c;
    e.plus.resize(src.fit.c.size());
    for (std::size_t k = 0; k < e.plus.size(); ++k) e.plus[k] = src.fit.c[k] + src.fit.h[k];
    e.normal = src.fit.nu;
    e.jump_norm = src.fit.jump_norm();
    e.residual = src.fit.residual;
    e.classical = src.classical;
    return e;
}

}  // namespace

std::optional<JumpFit> jump_fit_at(const Field& u, const Point& x, double rho, const JumpThresholds& t) {
    const auto& normals = normal_grid(u.domain().dim());
    JumpFit fit;
    try {
        fit = blowup_step_fit(u, x, rho, normals);
    } catch (const EmptyStencilError&) {
        // Near the box faces some trial planes leave one side empty.
        const auto usable = splitting_normals(u, x, rho, normals);
        if (usable.empty()) return std::nullopt;
        fit = blowup_step_fit(u, x, rho, usable);
    }
    const double hn = fit.jump_norm();
    if (!(hn > t.jump_min) || !(fit.residual < t.residual_rel * hn)) return std::nullopt;
    // Ramps fit a step whose height grows with the radius, two-sided cusps one that shrinks.
    try {
        const Point nu = fit.nu;
        const double wide = blowup_step_fit(u, x, 2.0 * rho, std::span<const Point>(&nu, 1)).jump_norm();
        if (wide > t.scale_ratio * hn || wide * t.scale_ratio < hn) return std::nullopt;
    } catch (const EmptyStencilError&) {
    }
    return fit;
}

JumpField detect_jumps(const Field& u, double rho, const JumpThresholds& t) {
    const Domain& d = u.domain();
    require_radius(d, rho, 4.0, "detect_jumps");

    JumpField jf;
    jf.dim = d.dim();
    jf.rho = rho;
    jf.thresholds = t;

    const auto plan = make_chunk_plan(d.cell_count(), 256);
    std::vector<std::vector<DetectedCell>> found(plan.count());
    parallel_chunks(plan.count(), [&](std::size_t ch) {
        for (std::size_t i = plan.begin(ch); i < plan.end(ch); ++i) {
            if (u.masked(i)) continue;
            const Point x = d.center(i);
            const auto ball = ball_stencil(u, x, rho);
            if (ball.empty() || !ball_range_reaches(u, ball, t.jump_min)) continue;
            auto fit = jump_fit_at(u, x, rho, t);
            if (!fit) continue;
            found[ch].push_back({i, x, *fit, classical_jump_at(u, x, rho, *fit, t)});
        }
    });
    for (auto& f : found) std::move(f.begin(), f.end(), std::back_inserter(jf.cells));
    if (jf.cells.empty()) return jf;

    std::vector<long> slot(d.cell_count(), -1);
    for (std::size_t k = 0; k < jf.cells.size(); ++k) slot[jf.cells[k].cell] = static_cast<long>(k);
    const auto smooth = smoothed(u);
    const auto cd = static_cast<std::size_t>(u.codim());

    // Dual cells have their corners at cell centres; corner m sits at offset bit a of m along axis a.
    // A ring of half-width dual cells reaches the box faces, carrying the adjacent cell's value.
    const int n = d.dim();
    const int corners = 1 << n;
    const Index& cells = d.cells();
    Index lo{0, 0, 0}, hi{1, 1, 1};
    for (int a = 0; a < n; ++a) lo[a] = -1, hi[a] = cells[a];
    auto corner_coord = [&](int axis, int i) {
        if (axis >= n) return 0.0;
        if (i < 0) return d.lower()[axis];
        if (i >= cells[axis]) return d.upper()[axis];
        return d.coord(axis, i);
    };
    for (int i = lo[0]; i < hi[0]; ++i)
        for (int j = lo[1]; j < hi[1]; ++j)
            for (int k = lo[2]; k < hi[2]; ++k) {
                std::array<std::size_t, 8> lin{};
                std::array<Point, 8> pos{};
                long ref = -1;
                double best = std::numeric_limits<double>::infinity();
                for (int m = 0; m < corners; ++m) {
                    const Index raw{i + (m & 1), j + ((m >> 1) & 1), k + ((m >> 2) & 1)};
                    Index idx{};
                    for (int a = 0; a < 3; ++a) idx[a] = std::clamp(raw[a], 0, cells[a] - 1);
                    lin[m] = d.linear(idx);
                    pos[m] = {corner_coord(0, raw[0]), corner_coord(1, raw[1]), corner_coord(2, raw[2])};
                    const long s = slot[lin[m]];
                    if (s < 0) continue;
                    const auto& fit = jf.cells[static_cast<std::size_t>(s)].fit;
                    const double score = fit.residual / fit.jump_norm();
                    if (score < best) best = score, ref = s;
                }
                if (ref < 0) continue;
                const auto& src = jf.cells[static_cast<std::size_t>(ref)];
                const double hn = src.fit.jump_norm();
                std::array<double, 8> psi{};
                for (int m = 0; m < corners; ++m) {
                    double acc = 0.0;
                    for (std::size_t c = 0; c < cd; ++c)
                        acc += (smooth[lin[m] * cd + c] - src.fit.c[c] - 0.5 * src.fit.h[c]) * src.fit.h[c];
                    psi[m] = acc / hn;
                }
                if (n == 1) {
                    for (const auto& p : march_interval(pos[0], pos[1], psi[0], psi[1]))
                        jf.elements.push_back(element_from(src, {p}, 1.0));
                } else if (n == 2) {
                    for (const auto& s : march_square({pos[0], pos[1], pos[3], pos[2]}, {psi[0], psi[1], psi[3], psi[2]}))
                        jf.elements.push_back(element_from(src, {s[0], s[1]}, length(s)));
                } else {
                    for (const auto& tri : march_cube(pos, psi))
                        jf.elements.push_back(element_from(src, {tri[0], tri[1], tri[2]}, area(tri)));
                }
            }
    return jf;
}

double q_jump_variation(const JumpField& jumps, double q) {
    CompensatedSum s;
    for (const auto& e : jumps.elements) s.add(std::pow(e.jump_norm, q) * e.measure);
    return s.value();
}

double q_jump_variation(const InterfaceSpec& spec, double q, int resolution) {
    CompensatedSum s;
    for (const auto& piece : spec.pieces)
        for (const auto& [p, w] : piece.samples(resolution)) {
            const auto j = piece.jump_at(p);
            s.add(std::pow(norm_diff(j.plus, j.minus), q) * w);
        }
    return s.value();
}

namespace {

InequalityVerdict finish_verdict(const Field& u, double q, const EpsilonSchedule& schedule, double variation,
                                 std::string source, const InequalityOptions& opts) {
    InequalityVerdict v;
    v.besov = besov_constants(u, q, schedule, opts.besov);
    v.rhs_is_upper = opts.use_upper;
    v.rhs = opts.use_upper ? v.besov.upper : v.besov.lower;
    v.tolerance = opts.tolerance;
    const int n = u.domain().dim();
    v.c_n = c_dimensional(n, CMethod::closed_form);
    v.variation = variation;
    v.lhs = v.c_n * variation;
    v.ratio = v.rhs > 0.0 ? v.lhs / v.rhs : (v.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    v.pass = v.lhs <= v.rhs * (1.0 + opts.tolerance);
    v.gamma_lhs = gamma_lower(n) * variation;
    v.gamma_pass = v.gamma_lhs <= v.rhs * (1.0 + opts.tolerance);
    v.lhs_source = std::move(source);
    return v;
}

}  // namespace

InequalityVerdict verify_jump_inequality(const Field& u, double q, const EpsilonSchedule& schedule,
                                         const InterfaceSpec& source, const InequalityOptions& opts) {
    return finish_verdict(u, q, schedule, q_jump_variation(source, q), "interface", opts);
}

InequalityVerdict verify_jump_inequality(const Field& u, double q, const EpsilonSchedule& schedule,
                                         const JumpField& source, const InequalityOptions& opts) {
    return finish_verdict(u, q, schedule, q_jump_variation(source, q), "detected", opts);
}

SandwichResult sandwich_check(const Field& u, double q, const EpsilonSchedule& schedule, const SandwichOptions& opts) {
    const Domain& d = u.domain();
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < d.cell_count(); ++i)
        if (!u.masked(i)) live.push_back(i);
    const double m = static_cast<double>(live.size());
    const double pairs = 0.5 * m * (m - 1.0);
    if (pairs > opts.max_pairs) throw CostCapError("sandwich_check: pairwise scan exceeds the cost cap", pairs, opts.max_pairs);

    std::vector<Point> pos(live.size());
    for (std::size_t i = 0; i < live.size(); ++i) pos[i] = d.center(live[i]);
    const double min_d2 = 4.0 * d.max_spacing() * d.max_spacing() * (1.0 - 1e-12);
    const double expo = 0.5 / q;

    const auto plan = make_chunk_plan(live.size());
    std::vector<double> lo(plan.count(), std::numeric_limits<double>::infinity()), hi(plan.count(), 0.0);
    parallel_chunks(plan.count(), [&](std::size_t ch) {
        for (std::size_t i = plan.begin(ch); i < plan.end(ch); ++i)
            for (std::size_t j = i + 1; j < live.size(); ++j) {
                const double r2 = dist2(pos[i], pos[j]);
                if (r2 < min_d2) continue;
                const double ratio = norm_diff(u.value(live[i]), u.value(live[j])) / std::pow(r2, expo);
                lo[ch] = std::min(lo[ch], ratio);
                hi[ch] = std::max(hi[ch], ratio);
            }
    });
    SandwichResult r;
    r.A1 = *std::min_element(lo.begin(), lo.end());
    r.A2 = *std::max_element(hi.begin(), hi.end());
    if (!std::isfinite(r.A1)) {
        r.reason = "no admissible pairs";
        return r;
    }
    const double scale = alpha(d.dim()) * d.volume();
    r.lower_bound = scale * std::pow(r.A1, q);
    r.upper_bound = scale * std::pow(r.A2, q);
    if (r.A1 == 0.0) {
        r.reason = "A1 = 0: field is not bi-Hoelder at grid scale";
        return r;
    }
    if (r.A2 > opts.a2_cap) {
        r.reason = "A2 exceeds the cap";
        return r;
    }
    r.applicable = true;
    const auto b = besov_constants(u, q, schedule, opts.besov);
    const auto& vals = b.estimate.values;
    const std::size_t w = std::min<std::size_t>(vals.size(), static_cast<std::size_t>(std::max(1, opts.besov.window)));
    r.window.assign(vals.end() - static_cast<std::ptrdiff_t>(w), vals.end());
    r.pass = std::all_of(r.window.begin(), r.window.end(), [&](double v) {
        return v >= r.lower_bound * (1.0 - opts.tolerance) && v <= r.upper_bound * (1.0 + opts.tolerance);
    });
    return r;
}

void write_jump_csv(std::ostream& os, const JumpField& jumps) {
    const std::size_t cd = jumps.elements.empty() ? 1 : jumps.elements.front().plus.size();
    os << "x,y,z";
    for (std::size_t k = 0; k < cd; ++k) os << ",h" << k;
    os << ",nu_x,nu_y,nu_z,residual,measure\n";
    os.precision(17);
    for (const auto& e : jumps.elements) {
        os << e.position[0] << ',' << e.position[1] << ',' << e.position[2];
        for (std::size_t k = 0; k < cd; ++k) os << ',' << e.plus[k] - e.minus[k];
        os << ',' << e.normal[0] << ',' << e.normal[1] << ',' << e.normal[2] << ',' << e.residual << ','
           << e.measure << '\n';
    }
}

void write_interface_geometry(std::ostream& os, const JumpField& jumps) {
    os << "# bvq-interface v1\n# dim " << jumps.dim << "\n# per line: " << jumps.dim
       << " vertices (x y z each), then |h| and measure\n";
    os.precision(17);
    for (const auto& e : jumps.elements) {
        for (const auto& v : e.vertices) os << v[0] << ' ' << v[1] << ' ' << v[2] << ' ';
        os << e.jump_norm << ' ' << e.measure << '\n';
    }
}

}  // namespace bvq
