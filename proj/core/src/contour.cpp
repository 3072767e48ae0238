#include "bvq/contour.hpp"

#include <cmath>

namespace bvq {

namespace {

Point lerp(const Point& a, const Point& b, double va, double vb) {
    const double t = va / (va - vb);
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

bool crosses(double a, double b) { return (a < 0.0) != (b < 0.0); }

template <std::size_t K>
bool any_nan(const std::array<double, K>& v) {
    for (double x : v)
        if (std::isnan(x)) return true;
    return false;
}

}  // namespace

std::vector<Point> march_interval(const Point& a, const Point& b, double va, double vb) {
    if (std::isnan(va) || std::isnan(vb) || !crosses(va, vb)) return {};
    return {lerp(a, b, va, vb)};
}

std::vector<Segment> march_square(const std::array<Point, 4>& p, const std::array<double, 4>& v) {
    if (any_nan(v)) return {};
    std::array<Point, 4> cut{};
    std::array<bool, 4> has{};
    int n = 0;
    for (int e = 0; e < 4; ++e) {
        const int a = e, b = (e + 1) % 4;
        if (crosses(v[a], v[b])) {
            cut[e] = lerp(p[a], p[b], v[a], v[b]);
            has[e] = true;
            ++n;
        }
    }
    if (n == 2) {
        std::vector<Point> pts;
        for (int e = 0; e < 4; ++e)
            if (has[e]) pts.push_back(cut[e]);
        return {{pts[0], pts[1]}};
    }
    if (n == 4) {
        // Corners 0 and 2 share a sign. If the centre agrees with them they are
        // connected and the cuts pair around corners 1 and 3.
        const double mid = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        if ((mid < 0.0) == (v[0] < 0.0)) return {{cut[0], cut[1]}, {cut[2], cut[3]}};
        return {{cut[3], cut[0]}, {cut[1], cut[2]}};
    }
    return {};
}

std::vector<Triangle> march_tetrahedron(const std::array<Point, 4>& p, const std::array<double, 4>& v) {
    if (any_nan(v)) return {};
    std::vector<int> in, out;
    for (int k = 0; k < 4; ++k) (v[k] < 0.0 ? in : out).push_back(k);
    if (in.empty() || out.empty()) return {};
    auto cut = [&](int a, int b) { return lerp(p[a], p[b], v[a], v[b]); };
    if (in.size() == 1 || out.size() == 1) {
        const auto& lone = in.size() == 1 ? in : out;
        const auto& rest = in.size() == 1 ? out : in;
        return {{cut(lone[0], rest[0]), cut(lone[0], rest[1]), cut(lone[0], rest[2])}};
    }
    const Point a = cut(in[0], out[0]), b = cut(in[0], out[1]), c = cut(in[1], out[1]), d = cut(in[1], out[0]);
    return {{a, b, c}, {a, c, d}};
}

std::vector<Triangle> march_cube(const std::array<Point, 8>& p, const std::array<double, 8>& v) {
    if (any_nan(v)) return {};
    static constexpr int tets[6][4] = {{0, 1, 3, 7}, {0, 3, 2, 7}, {0, 2, 6, 7},
                                       {0, 6, 4, 7}, {0, 4, 5, 7}, {0, 5, 1, 7}};
    std::vector<Triangle> tris;
    for (const auto& t : tets) {
        auto part = march_tetrahedron({p[t[0]], p[t[1]], p[t[2]], p[t[3]]}, {v[t[0]], v[t[1]], v[t[2]], v[t[3]]});
        tris.insert(tris.end(), part.begin(), part.end());
    }
    return tris;
}

double length(const Segment& s) noexcept { return std::sqrt(dist2(s[0], s[1])); }

double area(const Triangle& t) noexcept {
    const Point u{t[1][0] - t[0][0], t[1][1] - t[0][1], t[1][2] - t[0][2]};
    const Point w{t[2][0] - t[0][0], t[2][1] - t[0][1], t[2][2] - t[0][2]};
    const double cx = u[1] * w[2] - u[2] * w[1], cy = u[2] * w[0] - u[0] * w[2], cz = u[0] * w[1] - u[1] * w[0];
    return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

}  // namespace bvq
