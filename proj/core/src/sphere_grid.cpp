#include "bvq/sphere_grid.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace bvq {

namespace {

using Tri = std::array<int, 3>;

Point normalized(Point p) {
    const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return {p[0] / n, p[1] / n, p[2] / n};
}

struct Mesh {
    std::vector<Point> v;
    std::vector<Tri> f;
};

Mesh icosahedron() {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    Mesh m;
    m.v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : m.v) p = normalized(p);
    m.f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
           {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
           {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    return m;
}

Mesh subdivide(const Mesh& in) {
    Mesh out{in.v, {}};
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        if (auto it = mid.find(key); it != mid.end()) return it->second;
        const Point& p = in.v[static_cast<std::size_t>(a)];
        const Point& q = in.v[static_cast<std::size_t>(b)];
        out.v.push_back(normalized({p[0] + q[0], p[1] + q[1], p[2] + q[2]}));
        const int id = static_cast<int>(out.v.size()) - 1;
        mid.emplace(key, id);
        return id;
    };
    for (const auto& t : in.f) {
        const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
        out.f.push_back({t[0], ab, ca});
        out.f.push_back({t[1], bc, ab});
        out.f.push_back({t[2], ca, bc});
        out.f.push_back({ab, bc, ca});
    }
    return out;
}

std::vector<Point> build(int dim) {
    std::vector<Point> g;
    if (dim == 1) {
        g = {{1, 0, 0}, {-1, 0, 0}};
    } else if (dim == 2) {
        for (int k = 0; k < 64; ++k) {
            const double th = 2.0 * std::numbers::pi * k / 64.0;
            Point p{std::cos(th), std::sin(th), 0.0};
            for (int a = 0; a < 2; ++a)
                if (std::fabs(p[a]) < 1e-15) p[a] = 0.0;
            g.push_back(p);
        }
    } else if (dim == 3) {
        const Mesh l1 = subdivide(icosahedron());
        const Mesh l2 = subdivide(l1);
        g = l2.v;
        for (const auto& t : l1.f) {
            const Point& a = l1.v[static_cast<std::size_t>(t[0])];
            const Point& b = l1.v[static_cast<std::size_t>(t[1])];
            const Point& c = l1.v[static_cast<std::size_t>(t[2])];
            g.push_back(normalized({a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]}));
        }
    } else {
        throw std::invalid_argument("normal grids exist for dimensions 1..3");
    }
    return g;
}

}  // namespace

const std::vector<Point>& normal_grid(int dim) {
    static const std::array<std::vector<Point>, 3> grids{build(1), build(2), build(3)};
    if (dim < 1 || dim > 3) throw std::invalid_argument("normal grids exist for dimensions 1..3");
    return grids[static_cast<std::size_t>(dim - 1)];
}

std::vector<Point> geodesic_vertices(int level) {
    if (level < 0) throw std::invalid_argument("level must be >= 0");
    Mesh m = icosahedron();
    for (int i = 0; i < level; ++i) m = subdivide(m);
    return m.v;
}

}  // namespace bvq
