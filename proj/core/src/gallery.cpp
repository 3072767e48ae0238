#include "bvq/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace bvq {

namespace {

constexpr double kAuto = std::numeric_limits<double>::quiet_NaN();

using Builder = std::function<GalleryEntry(const Domain&, const Params&)>;

double loglog(double r) { return std::log(std::fabs(std::log(r))); }

double norm_n(const Point& x, int n) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += x[a] * x[a];
    return std::sqrt(s);
}

// Largest Euclidean norm over the box corners, restricted to the first n axes.
double max_corner_norm(const Domain& d, int first, int n) {
    double s = 0.0;
    for (int a = first; a < first + n; ++a) {
        const double m = std::max(std::fabs(d.lower()[a]), std::fabs(d.upper()[a]));
        s += m * m;
    }
    return std::sqrt(s);
}

void require(bool ok, const std::string& name, const std::string& why) {
    if (!ok) throw std::invalid_argument(name + ": parameters outside documented validity: " + why);
}

void require_dim(const Domain& d, const CatalogInfo& info) {
    if (std::find(info.dims.begin(), info.dims.end(), d.dim()) == info.dims.end())
        throw std::invalid_argument(info.name + ": dimension " + std::to_string(d.dim()) + " not supported");
}

void require_inside_half_ball(const Domain& d, const std::string& name, int first, int n) {
    require(max_corner_norm(d, first, n) <= 0.5 + 1e-12, name, "box must lie inside the closed ball of radius 1/2");
}

void require_inside_half_cube(const Domain& d, const std::string& name) {
    for (int a = 0; a < d.dim(); ++a)
        require(d.lower()[a] >= -0.5 - 1e-12 && d.upper()[a] <= 0.5 + 1e-12, name, "box must lie inside (-1/2,1/2)^N");
}

Point unit_normal(const Params& p, int dim) {
    Point n{p.at("nx"), p.at("ny"), p.at("nz")};
    if (std::isnan(n[0]) && std::isnan(n[1]) && std::isnan(n[2])) {
        n = {0, 0, 0};
        n[static_cast<std::size_t>(dim - 1)] = 1.0;
    }
    for (double& c : n)
        if (std::isnan(c)) c = 0.0;
    for (int a = dim; a < 3; ++a)
        if (n[a] != 0.0) throw std::invalid_argument("normal has components beyond the domain dimension");
    const double len = norm_n(n, 3);
    if (!(len > 0.0)) throw std::invalid_argument("normal must be nonzero");
    for (double& c : n) c /= len;
    return n;
}

double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// Intersection of {n.x = offset} with the closed box, as a segment (2D) or convex polygon (3D).
std::vector<Point> clip_plane(const Domain& d, const Point& n, double offset) {
    const int dim = d.dim();
    const int corners = 1 << dim;
    auto corner = [&](int mask) {
        Point p{0, 0, 0};
        for (int a = 0; a < dim; ++a) p[a] = (mask >> a & 1) ? d.upper()[a] : d.lower()[a];
        return p;
    };
    std::vector<Point> pts;
    auto push = [&](const Point& p) {
        const double tol = 1e-12 * (1.0 + d.diameter());
        for (const auto& q : pts)
            if (std::sqrt(dist2(p, q)) < tol) return;
        pts.push_back(p);
    };
    for (int m = 0; m < corners; ++m) {
        for (int a = 0; a < dim; ++a) {
            if (m >> a & 1) continue;
            const Point p = corner(m), q = corner(m | 1 << a);
            const double sp = dot(n, p) - offset, sq = dot(n, q) - offset;
            if (sp == 0.0) push(p);
            if (sq == 0.0) push(q);
            if (sp * sq < 0.0) {
                const double t = sp / (sp - sq);
                Point x{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), p[2] + t * (q[2] - p[2])};
                push(x);
            }
        }
    }
    if (dim == 3 && pts.size() >= 3) {
        Point c{0, 0, 0};
        for (const auto& p : pts)
            for (int a = 0; a < 3; ++a) c[a] += p[a] / static_cast<double>(pts.size());
        // In-plane basis for angular ordering.
        Point e1 = {pts[0][0] - c[0], pts[0][1] - c[1], pts[0][2] - c[2]};
        const double l1 = norm_n(e1, 3);
        for (double& v : e1) v /= l1;
        const Point e2{n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2], n[0] * e1[1] - n[1] * e1[0]};
        std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) {
            const Point da{a[0] - c[0], a[1] - c[1], a[2] - c[2]}, db{b[0] - c[0], b[1] - c[1], b[2] - c[2]};
            return std::atan2(dot(da, e2), dot(da, e1)) < std::atan2(dot(db, e2), dot(db, e1));
        });
    }
    return pts;
}

InterfaceSpec plane_interface(const Domain& d, const Point& n, double offset, JumpProfile jump,
                              const std::string& name) {
    InterfaceSpec spec{d.dim(), {}};
    if (d.dim() == 1) {
        const double x = offset / n[0];
        require(x > d.lower()[0] && x < d.upper()[0], name, "jump location must be inside the box");
        spec.pieces.push_back(point_piece({x, 0, 0}, std::move(jump)));
        return spec;
    }
    const auto pts = clip_plane(d, n, offset);
    if (d.dim() == 2) {
        require(pts.size() == 2, name, "interface line must cross the box");
        spec.pieces.push_back(segment_piece(pts[0], pts[1], std::move(jump)));
    } else {
        require(pts.size() >= 3, name, "interface plane must cross the box");
        spec.pieces.push_back(polygon_piece(pts, std::move(jump)));
    }
    return spec;
}

// Point on the plane closest to the box centre.
Point plane_anchor(const Domain& d, const Point& n, double offset) {
    Point c{0, 0, 0};
    for (int a = 0; a < d.dim(); ++a) c[a] = 0.5 * (d.lower()[a] + d.upper()[a]);
    const double s = dot(n, c) - offset;
    return {c[0] - s * n[0], c[1] - s * n[1], c[2] - s * n[2]};
}

PointExpectation expect(std::string label, Point x, bool s, bool sp, bool spp, std::optional<bool> tier1 = {},
                        std::optional<bool> tier2 = {}) {
    PointExpectation e;
    e.label = std::move(label);
    e.x = x;
    e.in_S = s;
    e.in_Sprime = sp;
    e.in_Sdoubleprime = spp;
    e.generalized_jump = tier1;
    e.classical_jump = tier2;
    return e;
}

Point box_center(const Domain& d) {
    Point c{0, 0, 0};
    for (int a = 0; a < d.dim(); ++a) c[a] = 0.5 * (d.lower()[a] + d.upper()[a]);
    return c;
}

// Deterministic uniform in [0,1) independent of the standard library's distributions.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------

GalleryEntry build_constant(const Domain& d, const Params& p) {
    const double c = p.at("c");
    Field f = sample_function(d, 1, [&](const Point&, std::span<double> out) { out[0] = c; return true; }, false,
                              AnalyticSpec{"constant", p});
    return {std::move(f), std::nullopt, {{"S_u = {}"}, {expect("centre", box_center(d), false, false, false, false)}}};
}

GalleryEntry build_linear(const Domain& d, const Params& p) {
    const double a0 = p.at("a0"), a1 = p.at("a1"), a2 = p.at("a2"), b = p.at("b");
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            out[0] = b + a0 * x[0] + a1 * x[1] + a2 * x[2];
            return true;
        },
        false, AnalyticSpec{"linear", p});
    return {std::move(f), std::nullopt, {{"S_u = {}"}, {expect("centre", box_center(d), false, false, false, false)}}};
}

GalleryEntry build_step1d(const Domain& d, const Params& p) {
    const double a = p.at("a"), jump = p.at("jump"), base = p.at("base");
    require(a > d.lower()[0] && a < d.upper()[0], "step1d", "jump location must be inside the box");
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            out[0] = x[0] > a ? base + jump : base;
            return true;
        },
        false, AnalyticSpec{"step1d", p});
    InterfaceSpec spec{1, {point_piece({a, 0, 0}, constant_jump({base + jump}, {base}, {1, 0, 0}))}};
    ExpectedOutcome e{{"J_u = {a}", "u+ - u- = jump"}, {expect("jump", {a, 0, 0}, true, true, true, true, true)}};
    const double off = a + 0.25 * (d.upper()[0] - a);
    e.points.push_back(expect("smooth side", {off, 0, 0}, false, false, false, false, false));
    return {std::move(f), std::move(spec), std::move(e)};
}

GalleryEntry build_stepNd(const Domain& d, const Params& p) {
    const Point n = unit_normal(p, d.dim());
    const double offset = p.at("offset"), jump = p.at("jump"), base = p.at("base");
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            out[0] = dot(n, x) > offset ? base + jump : base;
            return true;
        },
        false, AnalyticSpec{"stepNd", p});
    auto spec = plane_interface(d, n, offset, constant_jump({base + jump}, {base}, n), "stepNd");
    ExpectedOutcome e{{"J_u = {n.x = offset}", "u+ - u- = jump"},
                      {expect("on interface", plane_anchor(d, n, offset), true, true, true, true, true)}};
    return {std::move(f), std::move(spec), std::move(e)};
}

GalleryEntry build_vector_step(const Domain& d, const Params& p) {
    const Point n = unit_normal(p, d.dim());
    const double offset = p.at("offset");
    const double j1 = p.at("j1"), j2 = p.at("j2"), b1 = p.at("b1"), b2 = p.at("b2");
    Field f = sample_function(
        d, 2,
        [&](const Point& x, std::span<double> out) {
            const bool up = dot(n, x) > offset;
            out[0] = up ? b1 + j1 : b1;
            out[1] = up ? b2 + j2 : b2;
            return true;
        },
        false, AnalyticSpec{"vector_step", p});
    auto spec = plane_interface(d, n, offset, constant_jump({b1 + j1, b2 + j2}, {b1, b2}, n), "vector_step");
    ExpectedOutcome e{{"J_u = {n.x = offset}"},
                      {expect("on interface", plane_anchor(d, n, offset), true, true, true, true, true)}};
    return {std::move(f), std::move(spec), std::move(e)};
}

GalleryEntry build_disk(const Domain& d, const Params& p) {
    const Point c{p.at("cx"), p.at("cy"), 0.0};
    const double r = p.at("radius"), jump = p.at("jump"), base = p.at("base");
    require(r > 0.0, "disk", "radius must be positive");
    for (int a = 0; a < 2; ++a)
        require(c[a] - r > d.lower()[a] && c[a] + r < d.upper()[a], "disk", "circle must lie inside the box");
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            out[0] = dist2(x, c) < r * r ? base + jump : base;
            return true;
        },
        false, AnalyticSpec{"disk", p});
    // Outward normal: the plus side is the outside.
    JumpProfile prof = [c, base, jump](const Point& x) {
        return JumpSample{{base}, {base + jump}, {x[0] - c[0], x[1] - c[1], 0.0}};
    };
    InterfaceSpec spec{2, {circle_piece(c, r, std::move(prof))}};
    ExpectedOutcome e{{"J_u = circle"},
                      {expect("on circle", {c[0] + r, c[1], 0}, true, true, true, true, true),
                       expect("centre", c, false, false, false, false, false)}};
    return {std::move(f), std::move(spec), std::move(e)};
}

GalleryEntry build_holder_cusp(const Domain& d, const Params& p) {
    const Point c{p.at("cx"), p.at("cy"), p.at("cz")};
    const double beta = p.at("beta"), amp = p.at("amp");
    require(beta > 0.0 && beta <= 1.0, "holder_cusp", "beta must be in (0,1]");
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            out[0] = amp * std::pow(std::sqrt(dist2(x, c)), beta);
            return true;
        },
        false, AnalyticSpec{"holder_cusp", p});
    ExpectedOutcome e{{"continuous, Hoelder exponent beta, constant |amp|", "S_u = {}"},
                      {expect("cusp", c, false, false, false, false)}};
    return {std::move(f), std::nullopt, std::move(e)};
}

GalleryEntry build_loglog(const Domain& d, const Params& p) {
    if (!std::isnan(p.at("k")))
        require(static_cast<int>(p.at("k")) == d.dim(), "loglog", "k must equal the domain dimension");
    require_inside_half_ball(d, "loglog", 0, d.dim());
    const int n = d.dim();
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            const double r = norm_n(x, n);
            if (r == 0.0) return false;
            out[0] = loglog(r);
            return true;
        },
        false, AnalyticSpec{"loglog", p});
    ExpectedOutcome e{{"H^0(S_u) = 1 (S_u = {0})", "S'_u = {}"},
                      {expect("origin", {0, 0, 0}, true, false, false, false, false)}};
    return {std::move(f), std::nullopt, std::move(e)};
}

GalleryEntry build_loglog_product(const Domain& d, const Params& p) {
    require_inside_half_ball(d, "loglog_product", 0, 2);
    require_inside_half_ball(d, "loglog_product", 2, 1);
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            const double r = norm_n(x, 2);
            if (r == 0.0) return false;
            out[0] = loglog(r);
            return true;
        },
        false, AnalyticSpec{"loglog_product", p});
    ExpectedOutcome e{{"H^{N-p}(S_f) > 0 (S_f contains {0} x (-1/2,1/2))", "H^{N-p}(S'_f) = 0"},
                      {expect("axis point", {0, 0, 0}, true, false, false, false, false)}};
    return {std::move(f), std::nullopt, std::move(e)};
}

GalleryEntry build_loglog_trace1d(const Domain& d, const Params& p) {
    require_inside_half_cube(d, "loglog_trace1d");
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            if (x[0] == 0.0) return false;
            out[0] = loglog(std::fabs(x[0]));
            return true;
        },
        false, AnalyticSpec{"loglog_trace1d", p});
    ExpectedOutcome e{{"H^0(S_g) = 1 (S_g = {0})", "S'_g = {}"},
                      {expect("origin", {0, 0, 0}, true, false, false, false, false)}};
    return {std::move(f), std::nullopt, std::move(e)};
}

GalleryEntry build_loglog_slab(const Domain& d, const Params& p) {
    require_inside_half_ball(d, "loglog_slab", 0, d.dim());
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            if (x[0] == 0.0) return false;
            out[0] = loglog(std::fabs(x[0]));
            return true;
        },
        false, AnalyticSpec{"loglog_slab", p});
    ExpectedOutcome e{{"H^{N-1}(S_phi) > 0 (S_phi contains {z1 = 0})", "H^{N-1}(S'_phi) = 0"},
                      {expect("slab point", {0, 0, 0}, true, false, false, false, false)}};
    return {std::move(f), std::nullopt, std::move(e)};
}

GalleryEntry build_h_combo(const Domain& d, const Params& p) {
    require_inside_half_cube(d, "h_combo");
    require(d.lower()[0] < 0.0 && d.upper()[0] > 0.0, "h_combo", "box must contain 0");
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            if (x[0] == 0.0) return false;
            out[0] = loglog(std::fabs(x[0])) + (x[0] > 0.0 && x[0] < 0.5 ? 1.0 : 0.0);
            return true;
        },
        false, AnalyticSpec{"h_combo", p});
    // One-sided limits do not exist; the recorded traces are the generalized jump data.
    InterfacePiece piece = point_piece({0, 0, 0}, constant_jump({1.0}, {0.0}, {1, 0, 0}));
    piece.plus_label = "c + h (generalized)";
    piece.minus_label = "c (generalized)";
    InterfaceSpec spec{1, {std::move(piece)}};
    ExpectedOutcome e{{"J = {}", "J' = {0}", "0 in S_h"},
                      {expect("origin", {0, 0, 0}, true, true, true, true, false)}};
    return {std::move(f), std::move(spec), std::move(e)};
}

GalleryEntry build_P_combo(const Domain& d, const Params& p) {
    require_inside_half_cube(d, "P_combo");
    const int n = d.dim();
    auto in_cube = [n](const Point& x) {
        for (int a = 0; a < n; ++a)
            if (!(x[a] > 0.0 && x[a] < 0.5)) return false;
        return true;
    };
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            if (x[0] == 0.0) return false;
            out[0] = loglog(std::fabs(x[0])) + (in_cube(x) ? 1.0 : 0.0);
            return true;
        },
        false, AnalyticSpec{"P_combo", p});

    InterfaceSpec spec{n, {}};
    for (int k = 0; k < n; ++k) {
        if (!(d.lower()[k] < 0.0 && d.upper()[k] > 0.0)) continue;
        Point lo{0, 0, 0}, hi{0, 0, 0};
        bool empty = false;
        for (int a = 0; a < n; ++a) {
            if (a == k) continue;
            lo[a] = std::max(0.0, d.lower()[a]);
            hi[a] = std::min(0.5, d.upper()[a]);
            if (!(lo[a] < hi[a])) empty = true;
        }
        if (empty) continue;
        Point normal{0, 0, 0};
        normal[k] = 1.0;
        JumpProfile prof;
        if (k == 0) {
            prof = constant_jump({1.0}, {0.0}, normal);
        } else {
            prof = [normal](const Point& x) {
                const double phi = loglog(std::fabs(x[0]));
                return JumpSample{{phi + 1.0}, {phi}, normal};
            };
        }
        InterfacePiece piece;
        if (n == 2) {
            const int o = 1 - k;
            Point a{0, 0, 0}, b{0, 0, 0};
            a[o] = lo[o];
            b[o] = hi[o];
            piece = segment_piece(a, b, std::move(prof));
        } else {
            const int o1 = (k + 1) % 3, o2 = (k + 2) % 3;
            std::vector<Point> v(4, Point{0, 0, 0});
            v[0][o1] = lo[o1], v[0][o2] = lo[o2];
            v[1][o1] = hi[o1], v[1][o2] = lo[o2];
            v[2][o1] = hi[o1], v[2][o2] = hi[o2];
            v[3][o1] = lo[o1], v[3][o2] = hi[o2];
            piece = polygon_piece(std::move(v), std::move(prof));
        }
        if (k == 0) {
            piece.plus_label = "c + h (generalized)";
            piece.minus_label = "c (generalized)";
        }
        spec.pieces.push_back(std::move(piece));
    }
    Point on_e{0, 0.25, n == 3 ? 0.25 : 0.0};
    Point on_face{0.25, 0, n == 3 ? 0.25 : 0.0};
    Point off{-0.25, -0.25, n == 3 ? -0.25 : 0.0};
    ExpectedOutcome e{{"J_P meets E = {x1 = 0} in the empty set", "H^{N-1}(J'_P) > 0 (J'_P contains E cap cube face)",
                       "remaining faces of (0,1/2)^N are classical jumps"},
                      {expect("E face", on_e, true, true, true, true, false),
                       expect("other face", on_face, true, true, true, true, true),
                       expect("off interface", off, false, false, false, false, false)}};
    return {std::move(f), std::move(spec), std::move(e)};
}

GalleryEntry build_blocks2d(const Domain& d, const Params& p) {
    const int nx = static_cast<int>(p.at("nx")), ny = static_cast<int>(p.at("ny"));
    require(nx >= 1 && ny >= 1 && nx * ny >= 2, "blocks2d", "need at least two blocks");
    const double amp = p.at("amplitude");
    require(amp > 0.0 && std::isfinite(amp), "blocks2d", "amplitude must be positive");
    std::mt19937_64 rng(static_cast<std::uint64_t>(p.at("seed")));
    std::vector<double> v(static_cast<std::size_t>(nx * ny));
    // Neighbouring blocks differ by at least amplitude / 5.
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            auto& x = v[static_cast<std::size_t>(i * ny + j)];
            auto close = [&](int a, int b) {
                return a >= 0 && b >= 0 && std::fabs(x - v[static_cast<std::size_t>(a * ny + b)]) < 0.2 * amp;
            };
            do {
                x = amp * (2.0 * unit_uniform(rng) - 1.0);
            } while (close(i - 1, j) || close(i, j - 1));
        }
    const double x0 = d.lower()[0], y0 = d.lower()[1];
    const double wx = (d.upper()[0] - x0) / nx, wy = (d.upper()[1] - y0) / ny;
    auto block = [&](const Point& x) {
        const int i = std::clamp(static_cast<int>(std::floor((x[0] - x0) / wx)), 0, nx - 1);
        const int j = std::clamp(static_cast<int>(std::floor((x[1] - y0) / wy)), 0, ny - 1);
        return v[static_cast<std::size_t>(i * ny + j)];
    };
    Field f = sample_function(
        d, 1,
        [&](const Point& x, std::span<double> out) {
            out[0] = block(x);
            return true;
        },
        false, AnalyticSpec{"blocks2d", p});
    InterfaceSpec spec{2, {}};
    for (int i = 1; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const double l = v[static_cast<std::size_t>((i - 1) * ny + j)], r = v[static_cast<std::size_t>(i * ny + j)];
            if (l == r) continue;
            const double x = x0 + i * wx;
            spec.pieces.push_back(segment_piece({x, y0 + j * wy, 0}, {x, y0 + (j + 1) * wy, 0},
                                                constant_jump({r}, {l}, {1, 0, 0})));
        }
    for (int j = 1; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double b = v[static_cast<std::size_t>(i * ny + j - 1)], t = v[static_cast<std::size_t>(i * ny + j)];
            if (b == t) continue;
            const double y = y0 + j * wy;
            spec.pieces.push_back(segment_piece({x0 + i * wx, y, 0}, {x0 + (i + 1) * wx, y, 0},
                                                constant_jump({t}, {b}, {0, 1, 0})));
        }
    ExpectedOutcome e{{"piecewise constant on an nx x ny block grid"}, {}};
    if (!spec.pieces.empty()) {
        const auto& s = spec.pieces.front();
        const Point mid{0.5 * (s.vertices[0][0] + s.vertices[1][0]), 0.5 * (s.vertices[0][1] + s.vertices[1][1]), 0};
        e.points.push_back(expect("edge midpoint", mid, true, true, true, true, true));
    }
    return {std::move(f), std::move(spec), std::move(e)};
}

struct Entry {
    CatalogInfo info;
    Builder build;
};

const std::vector<Entry>& entries() {
    static const std::vector<Entry> list = [] {
        std::vector<Entry> v;
        const CatalogParam nx{"nx", kAuto, "normal x (auto: last axis)"};
        const CatalogParam ny{"ny", kAuto, "normal y"};
        const CatalogParam nz{"nz", kAuto, "normal z"};
        v.push_back({{"constant", "u = c", {1, 2, 3}, {{"c", 1.0, "value"}}, "any box", {"S_u = {}"}}, build_constant});
        v.push_back({{"linear",
                      "u = b + a0 x + a1 y + a2 z",
                      {1, 2, 3},
                      {{"a0", 1.0, "slope x"}, {"a1", 0.0, "slope y"}, {"a2", 0.0, "slope z"}, {"b", 0.0, "offset"}},
                      "any box",
                      {"S_u = {}"}},
                     build_linear});
        v.push_back({{"step1d",
                      "u = base + jump [x > a]",
                      {1},
                      {{"a", 0.0, "jump location"}, {"jump", 1.0, "jump size"}, {"base", 0.0, "value left of a"}},
                      "a strictly inside the box",
                      {"J_u = {a}"}},
                     build_step1d});
        v.push_back({{"stepNd",
                      "u = base + jump [n.x > offset]",
                      {1, 2, 3},
                      {nx, ny, nz, {"offset", 0.0, "plane offset"}, {"jump", 1.0, "jump size"}, {"base", 0.0, "base value"}},
                      "plane crosses the box",
                      {"J_u = plane cap box"}},
                     build_stepNd});
        v.push_back({{"vector_step",
                      "u = (b1,b2) + [n.x > offset] (j1,j2)",
                      {1, 2, 3},
                      {nx,
                       ny,
                       nz,
                       {"offset", 0.0, "plane offset"},
                       {"j1", 1.0, "jump comp 1"},
                       {"j2", 1.0, "jump comp 2"},
                       {"b1", 0.0, "base comp 1"},
                       {"b2", 0.0, "base comp 2"}},
                      "plane crosses the box",
                      {"J_u = plane cap box", "R^2-valued"}},
                     build_vector_step});
        v.push_back({{"disk",
                      "u = base + jump [|x - c| < R]",
                      {2},
                      {{"cx", 0.0, "centre x"},
                       {"cy", 0.0, "centre y"},
                       {"radius", 0.25, "radius"},
                       {"jump", 1.0, "jump size"},
                       {"base", 0.0, "outside value"}},
                      "circle inside the box",
                      {"J_u = circle"}},
                     build_disk});
        v.push_back({{"holder_cusp",
                      "u = amp |x - c|^beta",
                      {1, 2, 3},
                      {{"cx", 0.0, "centre x"},
                       {"cy", 0.0, "centre y"},
                       {"cz", 0.0, "centre z"},
                       {"beta", 0.5, "Hoelder exponent"},
                       {"amp", 1.0, "Hoelder constant"}},
                      "0 < beta <= 1",
                      {"S_u = {}", "Hoelder-beta with constant |amp|"}},
                     build_holder_cusp});
        v.push_back({{"loglog",
                      "u = log|log|x||",
                      {1, 2, 3},
                      {{"k", kAuto, "ambient dimension (must equal dim)"}},
                      "box inside B_{1/2}(0)",
                      {"S_u = {0}", "S'_u = {}"}},
                     build_loglog});
        v.push_back({{"loglog_product",
                      "f(x,z) = log|log|x||, x in R^2, z in R",
                      {3},
                      {},
                      "box inside B^2_{1/2}(0) x B^1_{1/2}(0)",
                      {"S_f contains {0} x (-1/2,1/2)", "H^{N-p}(S'_f) = 0"}},
                     build_loglog_product});
        v.push_back({{"loglog_trace1d",
                      "g(x) = log|log|x||",
                      {1},
                      {},
                      "box inside (-1/2,1/2)",
                      {"S_g = {0}", "S'_g = {}"}},
                     build_loglog_trace1d});
        v.push_back({{"loglog_slab",
                      "phi(z1,w) = log|log|z1||",
                      {2, 3},
                      {},
                      "box inside B_{1/2}(0)",
                      {"S_phi contains {z1 = 0}", "H^{N-1}(S'_phi) = 0"}},
                     build_loglog_slab});
        v.push_back({{"h_combo",
                      "h = log|log|x|| + chi_(0,1/2)",
                      {1},
                      {},
                      "box inside (-1/2,1/2), containing 0",
                      {"J = {}", "J' contains 0"}},
                     build_h_combo});
        v.push_back({{"P_combo",
                      "P = log|log|x1|| + chi_(0,1/2)^N",
                      {2, 3},
                      {},
                      "box inside (-1/2,1/2)^N",
                      {"J_P cap {x1 = 0} = {}", "H^{N-1}(J'_P) > 0"}},
                     build_P_combo});
        v.push_back({{"blocks2d",
                      "random piecewise constant on an nx x ny block grid",
                      {2},
                      {{"seed", 1.0, "RNG seed"},
                       {"nx", 3.0, "blocks along x"},
                       {"ny", 3.0, "blocks along y"},
                       {"amplitude", 1.0, "values uniform in [-amplitude, amplitude], neighbours at least amplitude/5 apart"}},
                      "at least two blocks",
                      {"J_u = block edges with distinct values"}},
                     build_blocks2d});
        return v;
    }();
    return list;
}

const Entry& find_entry(const std::string& name) {
    for (const auto& e : entries())
        if (e.info.name == name) return e;
    throw std::invalid_argument("unknown catalog id '" + name + "'");
}

Params resolve_params(const CatalogInfo& info, const Params& given) {
    Params p;
    for (const auto& cp : info.params) p[cp.name] = cp.default_value;
    for (const auto& [k, v] : given) {
        if (!p.contains(k)) throw std::invalid_argument(info.name + ": unknown parameter '" + k + "'");
        p[k] = v;
    }
    return p;
}

}  // namespace

const std::vector<CatalogInfo>& catalog() {
    static const std::vector<CatalogInfo> infos = [] {
        std::vector<CatalogInfo> v;
        for (const auto& e : entries()) v.push_back(e.info);
        v.push_back({"bi_holder_user",
                     "user-supplied samples (imported field)",
                     {1, 2, 3},
                     {},
                     "samples must satisfy A1|x-y|^{1/q} <= |u(x)-u(y)| <= A2|x-y|^{1/q}",
                     {"J_u = {}", "Besov lower constant >= alpha(N) A1^q |Omega|"}});
        return v;
    }();
    return infos;
}

const CatalogInfo& catalog_info(const std::string& name) {
    for (const auto& c : catalog())
        if (c.name == name) return c;
    throw std::invalid_argument("unknown catalog id '" + name + "'");
}

Domain default_domain(const std::string& name, int dim, int cells) {
    const auto& info = catalog_info(name);
    if (std::find(info.dims.begin(), info.dims.end(), dim) == info.dims.end())
        throw std::invalid_argument(name + ": dimension " + std::to_string(dim) + " not supported");
    std::vector<double> lo(static_cast<std::size_t>(dim), -0.5), hi(static_cast<std::size_t>(dim), 0.5);
    if (name == "loglog" || name == "loglog_slab") {
        const double a = 0.5 / std::sqrt(static_cast<double>(dim));
        std::fill(lo.begin(), lo.end(), -a);
        std::fill(hi.begin(), hi.end(), a);
    } else if (name == "loglog_product") {
        lo = {-0.35, -0.35, -0.5};
        hi = {0.35, 0.35, 0.5};
    } else if (name == "linear") {
        std::fill(lo.begin(), lo.end(), 0.0);
        std::fill(hi.begin(), hi.end(), 1.0);
    }
    std::vector<int> c(static_cast<std::size_t>(dim), cells);
    return make_domain(dim, lo, hi, c);
}

GalleryEntry gallery(const std::string& name, const Domain& domain, const Params& params) {
    if (name == "bi_holder_user")
        throw std::invalid_argument("bi_holder_user takes samples; use gallery_user_samples or an import path");
    const auto& e = find_entry(name);
    require_dim(domain, e.info);
    return e.build(domain, resolve_params(e.info, params));
}

GalleryEntry gallery_user_samples(const Field& samples) {
    ExpectedOutcome e{{"J_u = {} (continuous samples)", "lhs = 0 < rhs"},
                      {expect("centre", box_center(samples.domain()), false, false, false, false, false)}};
    return {samples, InterfaceSpec{samples.domain().dim(), {}}, std::move(e)};
}

Field resample(const Field& analytic, std::span<const int> cells) {
    if (!analytic.is_analytic()) throw std::invalid_argument("resample requires an analytic field");
    const auto& spec = *analytic.analytic();
    const auto& e = find_entry(spec.catalog_id);
    return e.build(analytic.domain().refined(cells), spec.params).field;
}

}  // namespace bvq
