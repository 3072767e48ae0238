#include "bvq/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "bvq/error.hpp"
#include "bvq/kahan.hpp"
#include "bvq/parallel.hpp"
#include "bvq/special.hpp"

namespace bvq {

std::vector<double> mean_over(const Field& u, std::span<const std::size_t> cells) {
    if (cells.empty()) throw EmptyStencilError("stencil contains zero usable cells");
    const auto d = static_cast<std::size_t>(u.codim());
    std::vector<CompensatedSum> acc(d);
    for (std::size_t c : cells) {
        const auto v = u.value(c);
        for (std::size_t k = 0; k < d; ++k) acc[k].add(v[k]);
    }
    std::vector<double> m(d);
    for (std::size_t k = 0; k < d; ++k) m[k] = acc[k].value() / static_cast<double>(cells.size());
    return m;
}

std::vector<double> ball_average(const Field& u, const Point& x, double rho) {
    require_radius(u.domain(), rho, 2.0, "ball_average");
    const auto b = ball_stencil(u, x, rho);
    if (b.empty()) throw EmptyStencilError("ball contains zero usable cells");
    return mean_over(u, b.cells);
}

double ball_power_mean(const Field& u, const Point& x, double rho, std::span<const double> ref, double q) {
    require_radius(u.domain(), rho, 2.0, "ball_power_mean");
    if (ref.size() != static_cast<std::size_t>(u.codim())) throw std::invalid_argument("reference has wrong dimension");
    const auto b = ball_stencil(u, x, rho);
    if (b.empty()) throw EmptyStencilError("ball contains zero usable cells");
    CompensatedSum acc;
    for (std::size_t c : b.cells) acc.add(std::pow(norm_diff(u.value(c), ref), q));
    return acc.value() / static_cast<double>(b.cells.size());
}

std::vector<double> halfball_average(const Field& u, const Point& x, double rho, const Point& nu, Side side) {
    require_radius(u.domain(), rho, 2.0, "halfball_average");
    const double len = std::sqrt(nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2]);
    if (std::fabs(len - 1.0) > 1e-9) throw std::invalid_argument("half-ball normal must be a unit vector");
    const auto b = ball_stencil(u, x, rho);
    if (b.empty()) throw EmptyStencilError("ball contains zero usable cells");
    const auto s = split_stencil(u.domain(), b, nu);
    const auto& cells = side == Side::plus ? s.plus : s.minus;
    if (cells.empty()) throw EmptyStencilError("degenerate half-ball: no cells strictly on the requested side");
    return mean_over(u, cells);
}

// ---------------------------------------------------------------------------
// Cell-averaged kernel weights.

namespace {

struct DuffyRules {
    GaussRule tau, v;
};

double tent(double w) { return 1.0 - std::fabs(w); }

}  // namespace

double cell_averaged_kernel(const Index& offset, const Point& h, int dim, double s) {
    bool all_zero = true, near_singular = true;
    int reach = 0;
    for (int a = 0; a < dim; ++a) {
        if (offset[a] != 0) all_zero = false;
        if (std::abs(offset[a]) > 1) near_singular = false;
        reach = std::max(reach, std::abs(offset[a]));
    }
    if (all_zero) throw std::invalid_argument("the diagonal cell pair has no finite averaged kernel");
    const int n_regular = reach <= 2 ? 12 : (reach <= 6 ? 6 : 4);
    static const GaussRule half_lo12 = gauss_legendre(12, -1.0, 0.0), half_hi12 = gauss_legendre(12, 0.0, 1.0);
    static const GaussRule half_lo6 = gauss_legendre(6, -1.0, 0.0), half_hi6 = gauss_legendre(6, 0.0, 1.0);
    static const GaussRule half_lo4 = gauss_legendre(4, -1.0, 0.0), half_hi4 = gauss_legendre(4, 0.0, 1.0);
    static const GaussRule unit16 = gauss_legendre(16, 0.0, 1.0);
    const GaussRule& lo = n_regular == 12 ? half_lo12 : (n_regular == 6 ? half_lo6 : half_lo4);
    const GaussRule& hi = n_regular == 12 ? half_hi12 : (n_regular == 6 ? half_hi6 : half_hi4);

    auto kernel = [&](const double* w) {
        double r2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            const double t = (offset[a] + w[a]) * h[a];
            r2 += t * t;
        }
        return std::pow(r2, -0.5 * s);
    };

    double total = 0.0;
    const int boxes = 1 << dim;
    for (int box = 0; box < boxes; ++box) {
        // Axis a uses [-1,0] when bit a is clear, [0,1] otherwise.
        bool singular = near_singular;
        if (singular) {
            for (int a = 0; a < dim; ++a) {
                const double ws = -offset[a];
                const double a0 = (box >> a & 1) ? 0.0 : -1.0;
                if (ws < a0 || ws > a0 + 1.0) singular = false;
            }
        }
        if (!singular) {
            const std::size_t n = lo.nodes.size();
            std::size_t total_pts = 1;
            for (int a = 0; a < dim; ++a) total_pts *= n;
            double w[3] = {0, 0, 0};
            for (std::size_t p = 0; p < total_pts; ++p) {
                std::size_t rem = p;
                double weight = 1.0;
                for (int a = 0; a < dim; ++a) {
                    const std::size_t k = rem % n;
                    rem /= n;
                    const GaussRule& g = (box >> a & 1) ? hi : lo;
                    w[a] = g.nodes[k];
                    weight *= g.weights[k] * tent(w[a]);
                }
                total += weight * kernel(w);
            }
            continue;
        }
        // Singular corner w* = -offset: w_a = w*_a + sigma_a t_a with t in [0,1]^N,
        // then split into N pyramids with t_k = tau the largest coordinate.
        double sigma[3] = {0, 0, 0}, wstar[3] = {0, 0, 0};
        for (int a = 0; a < dim; ++a) {
            const double a0 = (box >> a & 1) ? 0.0 : -1.0;
            wstar[a] = -offset[a];
            sigma[a] = (wstar[a] == a0) ? 1.0 : -1.0;
        }
        const std::size_t nv = unit16.nodes.size();
        std::size_t vpts = 1;
        for (int a = 0; a < dim - 1; ++a) vpts *= nv;
        for (int k = 0; k < dim; ++k) {
            for (std::size_t it = 0; it < unit16.nodes.size(); ++it) {
                const double tau = unit16.nodes[it];
                for (std::size_t p = 0; p < vpts; ++p) {
                    std::size_t rem = p;
                    double weight = unit16.weights[it] * std::pow(tau, dim - 1);
                    double t[3] = {0, 0, 0};
                    for (int a = 0; a < dim; ++a) {
                        if (a == k) {
                            t[a] = tau;
                            continue;
                        }
                        const std::size_t j = rem % nv;
                        rem /= nv;
                        t[a] = tau * unit16.nodes[j];
                        weight *= unit16.weights[j];
                    }
                    double w[3] = {0, 0, 0};
                    for (int a = 0; a < dim; ++a) {
                        w[a] = wstar[a] + sigma[a] * t[a];
                        weight *= tent(w[a]);
                    }
                    total += weight * kernel(w);
                }
            }
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Pair integral.

namespace {

struct StencilRow {
    int o0, o1, o2_lo, o2_hi;
    std::size_t first;  // index of the o2_lo weight
};

struct HalfStencil {
    std::vector<StencilRow> rows;
    std::vector<double> weights;
};

bool use_average(KernelRule rule, double s, int dim) {
    switch (rule) {
        case KernelRule::cell_center: return false;
        case KernelRule::cell_average: return true;
        case KernelRule::automatic: return s <= dim;
    }
    return false;
}

// Offsets that are lexicographically positive with centre distance < eps.
HalfStencil build_half_stencil(const Domain& d, double eps, double s, bool averaged) {
    const int dim = d.dim();
    const Point& h = d.spacing();
    int m[3] = {0, 0, 0};
    for (int a = 0; a < dim; ++a) m[a] = static_cast<int>(std::ceil(eps / h[a]));
    const double e2 = eps * eps;
    std::map<std::array<int, 3>, double> cache;
    auto weight = [&](int o0, int o1, int o2) {
        if (!averaged) {
            const double r2 = (o0 * h[0]) * (o0 * h[0]) + (o1 * h[1]) * (o1 * h[1]) + (o2 * h[2]) * (o2 * h[2]);
            return std::pow(r2, -0.5 * s);
        }
        std::array<int, 3> key{std::abs(o0), std::abs(o1), std::abs(o2)};
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const double w = cell_averaged_kernel({key[0], key[1], key[2]}, h, dim, s);
        cache.emplace(key, w);
        return w;
    };
    HalfStencil st;
    for (int o0 = 0; o0 <= m[0]; ++o0) {
        for (int o1 = (o0 == 0 ? 0 : -m[1]); o1 <= m[1]; ++o1) {
            const double r01 = (o0 * h[0]) * (o0 * h[0]) + (o1 * h[1]) * (o1 * h[1]);
            if (r01 >= e2) continue;
            const bool origin_row = o0 == 0 && o1 == 0;
            int lo = origin_row ? 1 : -m[2], hi = m[2];
            while (lo <= hi && r01 + (lo * h[2]) * (lo * h[2]) >= e2) ++lo;
            while (hi >= lo && r01 + (hi * h[2]) * (hi * h[2]) >= e2) --hi;
            if (lo > hi) continue;
            st.rows.push_back({o0, o1, lo, hi, st.weights.size()});
            for (int o2 = lo; o2 <= hi; ++o2) st.weights.push_back(weight(o0, o1, o2));
        }
    }
    return st;
}

enum class QMode { one, two, general };

template <QMode Q>
inline double power_of_abs(double diff, double q) {
    if constexpr (Q == QMode::one)
        return std::fabs(diff);
    else if constexpr (Q == QMode::two)
        return diff * diff;
    else
        return std::pow(std::fabs(diff), q);
}

template <QMode Q>
inline double power_of_sq(double sq, double q) {
    if constexpr (Q == QMode::one)
        return std::sqrt(sq);
    else if constexpr (Q == QMode::two)
        return sq;
    else
        return std::pow(sq, 0.5 * q);
}

template <QMode Q, bool Masked, bool Scalar>
double pair_sum(const Field& u, const HalfStencil& st, const IndexBox& box, double q) {
    const Domain& d = u.domain();
    const auto vals = u.values();
    const auto cd = static_cast<std::size_t>(u.codim());
    const auto mask = u.mask();
    const int n1 = box.hi[1] - box.lo[1], n2 = box.hi[2] - box.lo[2];
    const std::size_t count =
        static_cast<std::size_t>(box.hi[0] - box.lo[0]) * static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
    const ChunkPlan plan = make_chunk_plan(count, 256);
    std::vector<CompensatedSum> partial(plan.count());

    parallel_chunks(plan.count(), [&](std::size_t c) {
        CompensatedSum acc;
        for (std::size_t e = plan.begin(c); e < plan.end(c); ++e) {
            const int k = box.lo[2] + static_cast<int>(e % static_cast<std::size_t>(n2));
            const std::size_t rest = e / static_cast<std::size_t>(n2);
            const int j = box.lo[1] + static_cast<int>(rest % static_cast<std::size_t>(n1));
            const int i = box.lo[0] + static_cast<int>(rest / static_cast<std::size_t>(n1));
            const std::size_t xi = d.linear({i, j, k});
            if constexpr (Masked)
                if (mask[xi]) continue;
            const double* vx = vals.data() + xi * cd;
            double cell_sum = 0.0;
            for (const auto& row : st.rows) {
                const int yi = i + row.o0, yj = j + row.o1;
                if (yi < box.lo[0] || yi >= box.hi[0] || yj < box.lo[1] || yj >= box.hi[1]) continue;
                const int lo = std::max(row.o2_lo, box.lo[2] - k);
                const int hi = std::min(row.o2_hi, box.hi[2] - 1 - k);
                if (lo > hi) continue;
                const std::size_t ybase = d.linear({yi, yj, 0}) + static_cast<std::size_t>(k);
                const double* w = st.weights.data() + row.first + static_cast<std::size_t>(lo - row.o2_lo);
                double row_sum = 0.0;
                for (int o = lo; o <= hi; ++o, ++w) {
                    const std::size_t y = static_cast<std::size_t>(static_cast<long long>(ybase) + o);
                    if constexpr (Masked)
                        if (mask[y]) continue;
                    if constexpr (Scalar) {
                        row_sum += *w * power_of_abs<Q>(vals[y] - vx[0], q);
                    } else {
                        double sq = 0.0;
                        for (std::size_t m = 0; m < cd; ++m) {
                            const double t = vals[y * cd + m] - vx[m];
                            sq += t * t;
                        }
                        row_sum += *w * power_of_sq<Q>(sq, q);
                    }
                }
                cell_sum += row_sum;
            }
            acc.add(cell_sum);
        }
        partial[c] = acc;
    });
    CompensatedSum total;
    for (const auto& p : partial) total.add(p);
    return total.value();
}

template <QMode Q>
double dispatch_mask(const Field& u, const HalfStencil& st, const IndexBox& box, double q) {
    const bool scalar = u.codim() == 1;
    if (u.has_mask())
        return scalar ? pair_sum<Q, true, true>(u, st, box, q) : pair_sum<Q, true, false>(u, st, box, q);
    return scalar ? pair_sum<Q, false, true>(u, st, box, q) : pair_sum<Q, false, false>(u, st, box, q);
}

}  // namespace

double pair_integral(const Field& u, double eps, double q, const PairOptions& opts) {
    const Domain& d = u.domain();
    if (!(eps > 0.0)) throw std::invalid_argument("pair_integral: eps must be positive");
    if (!(q > 0.0)) throw std::invalid_argument("pair_integral: q must be positive");
    if (!(opts.s >= 0.0 && opts.s < d.dim() + q))
        throw std::invalid_argument("pair_integral: kernel exponent must lie in [0, N + q)");
    require_radius(d, eps, opts.guard_factor, "pair_integral");
    IndexBox box = opts.subdomain.value_or(d.full_box());
    for (int a = 0; a < 3; ++a)
        if (box.lo[a] < 0 || box.hi[a] > d.cells()[a] || box.lo[a] >= box.hi[a])
            throw std::invalid_argument("pair_integral: subdomain outside the grid");

    const HalfStencil st = build_half_stencil(d, eps, opts.s, use_average(opts.rule, opts.s, d.dim()));
    double sum = 0.0;
    if (q == 1.0)
        sum = dispatch_mask<QMode::one>(u, st, box, q);
    else if (q == 2.0)
        sum = dispatch_mask<QMode::two>(u, st, box, q);
    else
        sum = dispatch_mask<QMode::general>(u, st, box, q);
    const double vol = d.cell_volume();
    return 2.0 * sum * vol * vol / std::pow(eps, d.dim());
}

}  // namespace bvq
