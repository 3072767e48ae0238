#include "bvq/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bvq/error.hpp"
#include "bvq/kahan.hpp"
#include "bvq/sphere_grid.hpp"
#include "bvq/stencil.hpp"

namespace bvq {

namespace {

double lower_median(std::vector<double>& v) {
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>((v.size() - 1) / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

double mean_abs_dev_scalar(const std::vector<double>& v, double c) {
    CompensatedSum acc;
    for (double x : v) acc.add(std::fabs(x - c));
    return acc.value() / static_cast<double>(v.size());
}

double l1_objective(const Field& u, std::span<const std::size_t> cells, std::span<const double> c) {
    CompensatedSum acc;
    for (std::size_t i : cells) acc.add(norm_diff(u.value(i), c));
    return acc.value() / static_cast<double>(cells.size());
}

}  // namespace

ConstantFit l1_center(const Field& u, std::span<const std::size_t> cells) {
    if (cells.empty()) throw EmptyStencilError("stencil contains zero usable cells");
    const auto d = static_cast<std::size_t>(u.codim());
    if (d == 1) {
        std::vector<double> v;
        v.reserve(cells.size());
        for (std::size_t i : cells) v.push_back(u.scalar(i));
        const double c = lower_median(v);
        return {{c}, mean_abs_dev_scalar(v, c)};
    }
    std::vector<double> med(d), lo(d), hi(d);
    std::vector<double> comp(cells.size());
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < cells.size(); ++i) comp[i] = u.value(cells[i])[k];
        lo[k] = *std::min_element(comp.begin(), comp.end());
        hi[k] = *std::max_element(comp.begin(), comp.end());
        med[k] = lower_median(comp);
    }
    auto mean = mean_over(u, cells);
    std::vector<double> c = med;
    double f = l1_objective(u, cells, c);
    if (const double fm = l1_objective(u, cells, mean); fm < f) c = mean, f = fm;

    double scale = 0.0, cmag = 0.0;
    for (std::size_t k = 0; k < d; ++k) scale = std::max(scale, hi[k] - lo[k]), cmag = std::max(cmag, std::fabs(c[k]));
    double step = 0.25 * scale;
    const double tol = 1e-8 * std::max({1.0, scale, cmag});
    for (int it = 0; it < 100000 && step > tol; ++it) {
        bool improved = false;
        for (std::size_t k = 0; k < d && !improved; ++k) {
            for (double sgn : {1.0, -1.0}) {
                std::vector<double> trial = c;
                trial[k] += sgn * step;
                const double ft = l1_objective(u, cells, trial);
                if (ft < f) {
                    c = std::move(trial);
                    f = ft;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return {c, f};
}

ConstantFit inf_const_oscillation(const Field& u, const Point& x, double rho) {
    require_radius(u.domain(), rho, 2.0, "inf_const_oscillation");
    const auto b = ball_stencil(u, x, rho);
    return l1_center(u, b.cells);
}

OscillationProfile oscillation_profile(const Field& u, const Point& x, const std::vector<double>& radii, double q) {
    OscillationProfile p;
    p.x = x;
    for (double rho : radii) {
        require_radius(u.domain(), rho, 2.0, "oscillation_profile");
        const auto b = ball_stencil(u, x, rho);
        if (b.empty()) throw EmptyStencilError("ball contains zero usable cells");
        OscillationRecord r;
        r.rho = rho;
        r.mean = mean_over(u, b.cells);
        r.inf_osc = l1_center(u, b.cells).value;
        CompensatedSum mad, mq;
        for (std::size_t c : b.cells) {
            const double dv = norm_diff(u.value(c), r.mean);
            mad.add(dv);
            mq.add(std::pow(dv, q));
        }
        r.mean_abs_dev = mad.value() / static_cast<double>(b.cells.size());
        r.mean_q_osc = mq.value() / static_cast<double>(b.cells.size());
        // Rounding can put the mean's deviation a hair below the L1 optimum.
        r.inf_osc = std::min(r.inf_osc, r.mean_abs_dev);
        p.records.push_back(std::move(r));
    }
    return p;
}

// ---------------------------------------------------------------------------

namespace {

bool decaying(std::span<const double> s, const Thresholds& t) {
    if (s.size() < 2) return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] > s[i - 1] * (1.0 + 1e-9) + 1e-15) return false;
    return s.back() <= t.decay_ratio * s.front();
}

std::size_t window_begin(std::size_t n, int window) {
    return n - std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, window)));
}

}  // namespace

bool passes_to_zero(std::span<const double> series, double theta, const Thresholds& t) {
    const auto w = series.subspan(window_begin(series.size(), t.window));
    return *std::max_element(w.begin(), w.end()) < theta || decaying(series, t);
}

bool liminf_passes_to_zero(std::span<const double> series, double theta, const Thresholds& t) {
    const auto w = series.subspan(window_begin(series.size(), t.window));
    return *std::min_element(w.begin(), w.end()) < theta || decaying(series, t);
}

PointClass classify_point(const Field& u, const Point& x, const EpsilonSchedule& schedule, const Thresholds& t,
                          std::optional<double> scale) {
    validate_schedule(schedule, u.domain(), 2.0, "classify_point");
    PointClass pc;
    pc.x = x;
    pc.profile = oscillation_profile(u, x, schedule.values(), 1.0);
    const double theta = t.abs + t.rel * scale.value_or(oscillation_scale(u));
    const auto& rec = pc.profile.records;
    const std::size_t n = rec.size();

    std::vector<double> osc, mad;
    for (const auto& r : rec) osc.push_back(r.inf_osc), mad.push_back(r.mean_abs_dev);

    // Cauchy test on the means: small trailing spread, or increments shrinking geometrically.
    const std::size_t w0 = window_begin(n, t.window);
    double spread = 0.0;
    for (std::size_t i = w0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) spread = std::max(spread, norm_diff(rec[i].mean, rec[j].mean));
    bool geometric = n >= 3;
    for (std::size_t i = 2; i < n && geometric; ++i) {
        const double d1 = norm_diff(rec[i].mean, rec[i - 1].mean);
        const double d0 = norm_diff(rec[i - 1].mean, rec[i - 2].mean);
        if (d1 > t.rate_ratio * d0 + 1e-3 * theta) geometric = false;
    }
    const bool cauchy = spread < theta || geometric;
    const bool osc_zero = passes_to_zero(osc, theta, t);
    const bool osc_liminf_zero = liminf_passes_to_zero(osc, theta, t);
    const bool mad_zero = passes_to_zero(mad, theta, t);

    auto window_max = [&](const std::vector<double>& s) {
        return *std::max_element(s.begin() + static_cast<std::ptrdiff_t>(w0), s.end());
    };
    auto window_min = [&](const std::vector<double>& s) {
        return *std::min_element(s.begin() + static_cast<std::ptrdiff_t>(w0), s.end());
    };

    std::ostringstream ev;
    ev << "mean spread " << spread << (geometric ? " (geometric increments)" : "") << ", mean|u-u_B| window max "
       << window_max(mad) << (decaying(mad, t) ? " (decaying)" : "");
    pc.in_S = {!(cauchy && mad_zero && osc_zero), spread, theta, ev.str()};

    std::ostringstream ev1;
    ev1 << "inf-osc window max " << window_max(osc) << (decaying(osc, t) ? " (decaying)" : "");
    pc.in_Sprime = {!osc_zero, window_max(osc), theta, ev1.str()};

    std::ostringstream ev2;
    ev2 << "inf-osc window min " << window_min(osc) << (decaying(osc, t) ? " (decaying)" : "");
    pc.in_Sdoubleprime = {!osc_liminf_zero, window_min(osc), theta, ev2.str()};
    return pc;
}

// ---------------------------------------------------------------------------

double JumpFit::jump_norm() const {
    double s = 0.0;
    for (double v : h) s += v * v;
    return std::sqrt(s);
}

JumpFit blowup_step_fit(const Field& u, const Point& x, double rho, std::span<const Point> normals) {
    require_radius(u.domain(), rho, 2.0, "blowup_step_fit");
    const Domain& d = u.domain();
    const auto b = ball_stencil(u, x, rho);
    if (b.empty()) throw EmptyStencilError("ball contains zero usable cells");
    std::vector<Point> offs(b.cells.size());
    for (std::size_t i = 0; i < b.cells.size(); ++i) {
        const Point y = d.center(b.cells[i]);
        offs[i] = {y[0] - x[0], y[1] - x[1], y[2] - x[2]};
    }
    const bool scalar = u.codim() == 1;
    JumpFit best;
    best.rho = rho;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> plus, minus;
    std::vector<double> vp, vm;
    for (const Point& nu : normals) {
        plus.clear(), minus.clear();
        for (std::size_t i = 0; i < offs.size(); ++i) {
            const double t = offs[i][0] * nu[0] + offs[i][1] * nu[1] + offs[i][2] * nu[2];
            if (t > 0.0)
                plus.push_back(b.cells[i]);
            else if (t < 0.0)
                minus.push_back(b.cells[i]);
        }
        if (plus.empty() || minus.empty()) throw EmptyStencilError("degenerate half-ball split for a trial normal");
        std::vector<double> cp, cm;
        double obj = 0.0;
        if (scalar) {
            vp.clear(), vm.clear();
            for (std::size_t c : plus) vp.push_back(u.scalar(c));
            for (std::size_t c : minus) vm.push_back(u.scalar(c));
            const double mp = lower_median(vp), mm = lower_median(vm);
            obj = mean_abs_dev_scalar(vp, mp) + mean_abs_dev_scalar(vm, mm);
            cp = {mp};
            cm = {mm};
        } else {
            const auto fp = l1_center(u, plus), fm = l1_center(u, minus);
            obj = fp.value + fm.value;
            cp = fp.c_star;
            cm = fm.c_star;
        }
        if (obj < best_obj) {
            best_obj = obj;
            best.nu = nu;
            best.c = cm;
            best.h.resize(cp.size());
            for (std::size_t k = 0; k < cp.size(); ++k) best.h[k] = cp[k] - cm[k];
        }
    }
    best.residual = best_obj;
    for (double v : best.h) {
        if (v == 0.0) continue;
        if (v < 0.0) {
            for (std::size_t k = 0; k < best.h.size(); ++k) {
                best.c[k] += best.h[k];
                best.h[k] = -best.h[k];
            }
            for (double& c : best.nu) c = -c;
        }
        break;
    }
    return best;
}

JumpFit blowup_step_fit(const Field& u, const Point& x, double rho) {
    return blowup_step_fit(u, x, rho, normal_grid(u.domain().dim()));
}

std::vector<Point> splitting_normals(const Field& u, const Point& x, double rho, std::span<const Point> normals) {
    const Domain& d = u.domain();
    const auto b = ball_stencil(u, x, rho);
    std::vector<Point> offs(b.cells.size());
    for (std::size_t i = 0; i < b.cells.size(); ++i) {
        const Point y = d.center(b.cells[i]);
        offs[i] = {y[0] - x[0], y[1] - x[1], y[2] - x[2]};
    }
    std::vector<Point> out;
    for (const Point& nu : normals) {
        bool plus = false, minus = false;
        for (const Point& o : offs) {
            const double t = o[0] * nu[0] + o[1] * nu[1] + o[2] * nu[2];
            plus = plus || t > 0.0;
            minus = minus || t < 0.0;
            if (plus && minus) break;
        }
        if (plus && minus) out.push_back(nu);
    }
    return out;
}

RescaledBound rescaled_pair_lower_bound(const Field& u, const Point& x, const EpsilonSchedule& schedule, double q,
                                        double tolerance, int window, double residual_rel) {
    validate_schedule(schedule, u.domain(), 4.0, "rescaled_pair_lower_bound");
    const auto normals = normal_grid(u.domain().dim());
    RescaledBound r;
    r.tolerance = tolerance;
    const auto rhos = schedule.values();
    std::vector<double> vals;
    for (double rho : rhos) {
        r.fit = blowup_step_fit(u, x, rho, splitting_normals(u, x, rho, normals));
        vals.push_back(double_average(u, x, rho, q));
        r.bounds.push_back(0.5 * std::pow(r.fit.jump_norm(), q));
    }
    const double hn = r.fit.jump_norm();
    r.fit_valid = hn == 0.0 || r.fit.residual <= residual_rel * hn;
    r.estimate = estimate_limit(rhos, vals, window);
    r.value = r.estimate.liminf;
    r.holds = true;
    const std::size_t w0 = vals.size() - std::min<std::size_t>(vals.size(), static_cast<std::size_t>(std::max(1, window)));
    for (std::size_t i = w0; i < vals.size(); ++i) {
        r.bound = std::max(r.bound, r.bounds[i]);
        if (vals[i] < r.bounds[i] * (1.0 - tolerance)) r.holds = false;
    }
    return r;
}

}  // namespace bvq
