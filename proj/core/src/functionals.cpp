#include "bvq/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

#include "bvq/error.hpp"
#include "bvq/kahan.hpp"
#include "bvq/parallel.hpp"
#include "bvq/stencil.hpp"

namespace bvq {

std::vector<double> EpsilonSchedule::values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n) v[static_cast<std::size_t>(n)] = eps_max * std::pow(ratio, n);
    return v;
}

double EpsilonSchedule::smallest() const { return eps_max * std::pow(ratio, count - 1); }

EpsilonSchedule make_schedule(double eps_max, double ratio, int count) {
    if (!(eps_max > 0.0)) throw std::invalid_argument("schedule: eps_max must be positive");
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("schedule: ratio must lie in (0,1)");
    if (count < 1) throw std::invalid_argument("schedule: count must be >= 1");
    return {eps_max, ratio, count};
}

void validate_schedule(const EpsilonSchedule& s, const Domain& d, double factor, const std::string& what) {
    make_schedule(s.eps_max, s.ratio, s.count);
    require_radius(d, s.smallest(), factor, what);
}

std::string to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::increasing: return "increasing";
        case Monotonicity::decreasing: return "decreasing";
        case Monotonicity::constant: return "constant";
        case Monotonicity::mixed: return "mixed";
    }
    return "mixed";
}

double LimitEstimate::relative_spread() const {
    const double scale = std::max(std::fabs(limsup), std::fabs(liminf));
    if (scale == 0.0) return 0.0;
    return (limsup - liminf) / scale;
}

LimitEstimate estimate_limit(std::vector<double> eps, std::vector<double> values, int window) {
    if (eps.size() != values.size() || eps.empty()) throw std::invalid_argument("estimate_limit: empty or mismatched");
    if (window < 1) throw std::invalid_argument("estimate_limit: window must be >= 1");
    LimitEstimate e;
    e.window = std::min<int>(window, static_cast<int>(values.size()));
    const auto first = values.end() - e.window;
    e.liminf = *std::min_element(first, values.end());
    e.limsup = *std::max_element(first, values.end());
    e.sup = *std::max_element(values.begin(), values.end());

    bool up = true, down = true, flat = true;
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double tol = 1e-12 * std::max(std::fabs(values[i]), std::fabs(values[i - 1]));
        const double dv = values[i] - values[i - 1];
        if (dv > tol) down = false, flat = false;
        if (dv < -tol) up = false, flat = false;
    }
    e.monotonicity = flat ? Monotonicity::constant
                          : (up ? Monotonicity::increasing : (down ? Monotonicity::decreasing : Monotonicity::mixed));

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !(eps[i] > 0.0)) continue;
        const double x = std::log(eps[i]), y = std::log(values[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
        ++n;
    }
    const double den = n * sxx - sx * sx;
    e.order = (n >= 2 && den > 0.0) ? (n * sxy - sx * sy) / den : std::numeric_limits<double>::quiet_NaN();
    e.eps = std::move(eps);
    e.values = std::move(values);
    return e;
}

void write_eps_table(std::ostream& os, const LimitEstimate& e, const std::string& value_name) {
    os << "# eps " << value_name << '\n';
    os.precision(17);
    for (std::size_t i = 0; i < e.eps.size(); ++i) os << e.eps[i] << ' ' << e.values[i] << '\n';
}

BesovConstants besov_constants(const Field& u, double q, const EpsilonSchedule& schedule, const BesovOptions& opts) {
    if (!(q >= 1.0)) throw std::invalid_argument("besov_constants: q must be >= 1");
    validate_schedule(schedule, u.domain(), opts.pair.guard_factor, "besov_constants");
    const auto eps = schedule.values();
    if (!(eps.back() < 1.0)) throw std::invalid_argument("besov_constants: schedule must reach eps < 1");
    std::vector<double> vals;
    vals.reserve(eps.size());
    for (double e : eps) vals.push_back(pair_integral(u, e, q, opts.pair));

    BesovConstants b;
    b.limit_tolerance = opts.limit_tolerance;
    b.hat = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i)
        if (eps[i] < 1.0) b.hat = std::max(b.hat, vals[i]);
    b.estimate = estimate_limit(eps, std::move(vals), opts.window);
    b.upper = b.estimate.limsup;
    b.lower = b.estimate.liminf;
    if (b.estimate.relative_spread() < opts.limit_tolerance) b.limit = 0.5 * (b.upper + b.lower);
    return b;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Index> shift_set(const Domain& d, double rho) {
    const int n = d.dim();
    std::vector<Point> dirs;
    for (int a = 0; a < n; ++a) {
        Point p{0, 0, 0};
        p[a] = 1.0;
        dirs.push_back(p);
        p[a] = -1.0;
        dirs.push_back(p);
    }
    const double r = 1.0 / std::sqrt(2.0);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            Point p{0, 0, 0};
            p[a] = r;
            p[b] = r;
            dirs.push_back(p);
            p[b] = -r;
            dirs.push_back(p);
        }
    std::set<Index> shifts;
    for (double mag : {rho, 0.5 * rho, 0.25 * rho}) {
        for (const auto& dir : dirs) {
            Index k{0, 0, 0};
            bool zero = true;
            for (int a = 0; a < n; ++a) {
                const double c = mag * dir[a] / d.spacing()[a];
                k[a] = static_cast<int>(c >= 0 ? std::floor(c + 1e-12) : -std::floor(-c + 1e-12));
                if (k[a] != 0) zero = false;
            }
            // floor keeps |k h| <= mag componentwise; guard the Euclidean norm too.
            double len2 = 0.0;
            for (int a = 0; a < n; ++a) len2 += (k[a] * d.spacing()[a]) * (k[a] * d.spacing()[a]);
            if (!zero && len2 <= rho * rho * (1.0 + 1e-12)) shifts.insert(k);
        }
    }
    return {shifts.begin(), shifts.end()};
}

double shifted_difference(const Field& u, const Index& k, double q) {
    const Domain& d = u.domain();
    CompensatedSum acc;
    std::vector<double> zero(static_cast<std::size_t>(u.codim()), 0.0);
    for (std::size_t i = 0; i < d.cell_count(); ++i) {
        if (u.masked(i)) continue;
        const Index x = d.unravel(i);
        const Index y{x[0] + k[0], x[1] + k[1], x[2] + k[2]};
        const Index z{x[0] - k[0], x[1] - k[1], x[2] - k[2]};
        if (d.contains(y)) {
            const std::size_t j = d.linear(y);
            if (!u.masked(j)) acc.add(std::pow(norm_diff(u.value(j), u.value(i)), q));
        } else {
            acc.add(std::pow(norm_diff(zero, u.value(i)), q));
        }
        // Cells entering the support from outside contribute |u(x+k) - 0|^q with x outside.
        if (!d.contains(z)) acc.add(std::pow(norm_diff(u.value(i), zero), q));
    }
    return acc.value() * d.cell_volume();
}

}  // namespace

TranslationSeminorm besov_translation_seminorm(const Field& u, double q, double s, const EpsilonSchedule& rho_schedule,
                                               int window) {
    if (!u.compact_support())
        throw std::invalid_argument("besov_translation_seminorm: field is not flagged compact-support");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("besov_translation_seminorm: s must lie in (0,1)");
    if (!(q >= 1.0)) throw std::invalid_argument("besov_translation_seminorm: q must be >= 1");
    validate_schedule(rho_schedule, u.domain(), 4.0, "besov_translation_seminorm");
    const auto rhos = rho_schedule.values();
    std::vector<double> vals;
    for (double rho : rhos) {
        double best = 0.0;
        for (const auto& k : shift_set(u.domain(), rho)) best = std::max(best, shifted_difference(u, k, q));
        vals.push_back(best / std::pow(rho, s * q));
    }
    TranslationSeminorm t;
    t.estimate = estimate_limit(rhos, std::move(vals), window);
    t.value = t.estimate.sup;
    return t;
}

// ---------------------------------------------------------------------------

double gagliardo_seminorm(const Field& u, double r, double q, const GagliardoOptions& opts) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("gagliardo_seminorm: r must lie in (0,1)");
    if (!(q >= 1.0)) throw std::invalid_argument("gagliardo_seminorm: q must be >= 1");
    const Domain& d = u.domain();
    const IndexBox box = opts.subdomain.value_or(d.full_box());
    std::vector<std::size_t> cells;
    for (int i = box.lo[0]; i < box.hi[0]; ++i)
        for (int j = box.lo[1]; j < box.hi[1]; ++j)
            for (int k = box.lo[2]; k < box.hi[2]; ++k) {
                const std::size_t c = d.linear({i, j, k});
                if (!u.masked(c)) cells.push_back(c);
            }
    const double n = static_cast<double>(cells.size());
    const double pairs = 0.5 * n * (n - 1.0);
    if (pairs > opts.max_pairs)
        throw CostCapError("gagliardo_seminorm: " + std::to_string(pairs) + " pairs exceed the cap of " +
                               std::to_string(opts.max_pairs) + "; use a subdomain or a coarser grid",
                           pairs, opts.max_pairs);
    const double s = d.dim() + r * q;
    std::vector<Point> centers(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) centers[i] = d.center(cells[i]);

    const ChunkPlan plan = make_chunk_plan(cells.size(), 256);
    std::vector<CompensatedSum> partial(plan.count());
    parallel_chunks(plan.count(), [&](std::size_t c) {
        CompensatedSum acc;
        for (std::size_t i = plan.begin(c); i < plan.end(c); ++i) {
            const auto ui = u.value(cells[i]);
            double row = 0.0;
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                const double diff = norm_diff(u.value(cells[j]), ui);
                if (diff == 0.0) continue;
                const double num = q == 2.0 ? diff * diff : (q == 1.0 ? diff : std::pow(diff, q));
                row += num * std::pow(dist2(centers[i], centers[j]), -0.5 * s);
            }
            acc.add(row);
        }
        partial[c] = acc;
    });
    CompensatedSum total;
    for (const auto& p : partial) total.add(p);
    const double vol = d.cell_volume();
    return 2.0 * total.value() * vol * vol;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Index> ball_offsets(const Domain& d, double delta) {
    std::vector<Index> out;
    int m[3] = {0, 0, 0};
    for (int a = 0; a < d.dim(); ++a) m[a] = static_cast<int>(std::ceil(delta / d.spacing()[a]));
    const Point& h = d.spacing();
    for (int i = -m[0]; i <= m[0]; ++i)
        for (int j = -m[1]; j <= m[1]; ++j)
            for (int k = -m[2]; k <= m[2]; ++k) {
                const double r2 = (i * h[0]) * (i * h[0]) + (j * h[1]) * (j * h[1]) + (k * h[2]) * (k * h[2]);
                if (r2 < delta * delta && !(i == 0 && j == 0 && k == 0)) out.push_back({i, j, k});
            }
    return out;
}

double arq_at(const Field& u, const Index& x, const std::vector<Index>& offs, double q) {
    const Domain& d = u.domain();
    const auto ux = u.value(d.linear(x));
    double acc = 0.0;
    for (const auto& o : offs) {
        const Index y{x[0] + o[0], x[1] + o[1], x[2] + o[2]};
        if (!d.contains(y)) continue;
        const std::size_t j = d.linear(y);
        if (u.masked(j)) continue;
        const double diff = norm_diff(u.value(j), ux);
        acc += q == 2.0 ? diff * diff : std::pow(diff, q);
    }
    return acc * d.cell_volume();
}

}  // namespace

std::vector<double> a_rq_profile(const Field& u, std::size_t cell, double r, double q, const std::vector<double>& deltas) {
    const Domain& d = u.domain();
    std::vector<double> out;
    for (double delta : deltas) {
        require_radius(d, delta, 2.0, "a_rq_profile");
        const auto offs = ball_offsets(d, delta);
        out.push_back(arq_at(u, d.unravel(cell), offs, q) / std::pow(delta, d.dim() + r * q));
    }
    return out;
}

ArqResult a_rq_quantity(const Field& u, double r, double q, const EpsilonSchedule& deltas, int window) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("a_rq_quantity: r must lie in (0,1)");
    if (!(q >= 1.0)) throw std::invalid_argument("a_rq_quantity: q must be >= 1");
    const Domain& d = u.domain();
    validate_schedule(deltas, d, 2.0, "a_rq_quantity");
    ArqResult res;
    res.deltas = deltas.values();
    const int w = std::min<int>(window, deltas.count);
    std::vector<std::vector<Index>> offs;
    std::vector<double> scale;
    for (std::size_t i = res.deltas.size() - static_cast<std::size_t>(w); i < res.deltas.size(); ++i) {
        offs.push_back(ball_offsets(d, res.deltas[i]));
        scale.push_back(std::pow(res.deltas[i], d.dim() + r * q));
    }
    res.per_point.assign(d.cell_count(), 0.0);
    const ChunkPlan plan = make_chunk_plan(d.cell_count(), 256);
    parallel_chunks(plan.count(), [&](std::size_t c) {
        for (std::size_t i = plan.begin(c); i < plan.end(c); ++i) {
            if (u.masked(i)) continue;
            const Index x = d.unravel(i);
            double best = 0.0;
            for (std::size_t k = 0; k < offs.size(); ++k) best = std::max(best, arq_at(u, x, offs[k], q) / scale[k]);
            res.per_point[i] = best;
        }
    });
    CompensatedSum acc;
    for (double v : res.per_point) acc.add(v);
    res.value = acc.value() * d.cell_volume();
    return res;
}

// ---------------------------------------------------------------------------

double mean_q_oscillation(const Field& u, const Point& x, double rho, double q) {
    require_radius(u.domain(), rho, 2.0, "mean_q_oscillation");
    const auto b = ball_stencil(u, x, rho);
    const auto mean = mean_over(u, b.cells);
    CompensatedSum acc;
    for (std::size_t c : b.cells) {
        const double diff = norm_diff(u.value(c), mean);
        acc.add(q == 2.0 ? diff * diff : std::pow(diff, q));
    }
    return acc.value() / static_cast<double>(b.cells.size());
}

double double_average(const Field& u, const Point& x, double rho, double q) {
    require_radius(u.domain(), rho, 2.0, "double_average");
    const auto b = ball_stencil(u, x, rho);
    if (b.empty()) throw EmptyStencilError("ball contains zero usable cells");
    const double m = static_cast<double>(b.cells.size());
    if (q == 2.0) return 2.0 * mean_q_oscillation(u, x, rho, 2.0);
    if (q == 1.0 && u.codim() == 1) {
        std::vector<double> v;
        v.reserve(b.cells.size());
        for (std::size_t c : b.cells) v.push_back(u.scalar(c));
        std::sort(v.begin(), v.end());
        CompensatedSum acc;
        for (std::size_t i = 0; i < v.size(); ++i) acc.add(v[i] * (2.0 * static_cast<double>(i) - m + 1.0));
        return 2.0 * acc.value() / (m * m);
    }
    if (m * m > 4e8) throw CostCapError("double_average: ball too large for the general-q pair scan", m * m, 4e8);
    CompensatedSum acc;
    for (std::size_t i = 0; i < b.cells.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = i + 1; j < b.cells.size(); ++j)
            row += std::pow(norm_diff(u.value(b.cells[i]), u.value(b.cells[j])), q);
        acc.add(row);
    }
    return 2.0 * acc.value() / (m * m);
}

}  // namespace bvq
