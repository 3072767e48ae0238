#include "bvq/interface.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bvq {

namespace {

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Point cross(const Point& a, const Point& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Point& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

double triangle_area(const Point& a, const Point& b, const Point& c) {
    return 0.5 * norm(cross(sub(b, a), sub(c, a)));
}

Point lerp3(const Point& a, const Point& b, const Point& c, double wa, double wb, double wc) {
    return {wa * a[0] + wb * b[0] + wc * c[0], wa * a[1] + wb * b[1] + wc * c[1], wa * a[2] + wb * b[2] + wc * c[2]};
}

}  // namespace

JumpProfile constant_jump(std::vector<double> plus, std::vector<double> minus, Point normal) {
    if (plus.size() != minus.size() || plus.empty()) throw std::invalid_argument("trace dimensions differ");
    return [plus = std::move(plus), minus = std::move(minus), normal](const Point&) {
        return JumpSample{plus, minus, normal};
    };
}

double InterfacePiece::measure() const {
    switch (shape) {
        case PieceShape::point: return 1.0;
        case PieceShape::segment: return std::sqrt(dist2(vertices[0], vertices[1]));
        case PieceShape::circle: return 2.0 * std::numbers::pi * radius;
        case PieceShape::polygon: {
            double area = 0.0;
            for (std::size_t i = 1; i + 1 < vertices.size(); ++i)
                area += triangle_area(vertices[0], vertices[i], vertices[i + 1]);
            return area;
        }
    }
    return 0.0;
}

JumpSample InterfacePiece::jump_at(const Point& p) const {
    JumpSample s = jump(p);
    const double n = norm(s.normal);
    if (!(n > 0.0)) throw std::invalid_argument("interface normal vanishes");
    for (double& c : s.normal) c /= n;
    return s;
}

std::vector<std::pair<Point, double>> InterfacePiece::samples(int resolution) const {
    if (resolution < 1) throw std::invalid_argument("resolution must be positive");
    std::vector<std::pair<Point, double>> out;
    switch (shape) {
        case PieceShape::point: out.emplace_back(vertices[0], 1.0); break;
        case PieceShape::segment: {
            const double w = measure() / resolution;
            for (int k = 0; k < resolution; ++k) {
                const double t = (k + 0.5) / resolution;
                out.emplace_back(lerp3(vertices[0], vertices[1], vertices[1], 1.0 - t, t, 0.0), w);
            }
            break;
        }
        case PieceShape::circle: {
            const double w = measure() / resolution;
            for (int k = 0; k < resolution; ++k) {
                const double th = 2.0 * std::numbers::pi * (k + 0.5) / resolution;
                out.emplace_back(Point{center[0] + radius * std::cos(th), center[1] + radius * std::sin(th), 0.0}, w);
            }
            break;
        }
        case PieceShape::polygon: {
            const int m = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(resolution)))));
            for (std::size_t i = 1; i + 1 < vertices.size(); ++i) {
                const Point& a = vertices[0];
                const Point& b = vertices[i];
                const Point& c = vertices[i + 1];
                const double w = triangle_area(a, b, c) / (m * m);
                // m^2 congruent sub-triangles, sampled at their centroids.
                for (int r = 0; r < m; ++r) {
                    for (int s = 0; s < m - r; ++s) {
                        const double u0 = (r + 1.0 / 3.0) / m, v0 = (s + 1.0 / 3.0) / m;
                        out.emplace_back(lerp3(a, b, c, 1.0 - u0 - v0, u0, v0), w);
                        if (s < m - r - 1) {
                            const double u1 = (r + 2.0 / 3.0) / m, v1 = (s + 2.0 / 3.0) / m;
                            out.emplace_back(lerp3(a, b, c, 1.0 - u1 - v1, u1, v1), w);
                        }
                    }
                }
            }
            break;
        }
    }
    return out;
}

double InterfaceSpec::measure() const {
    double m = 0.0;
    for (const auto& p : pieces) m += p.measure();
    return m;
}

InterfacePiece point_piece(const Point& p, JumpProfile jump) {
    InterfacePiece piece;
    piece.shape = PieceShape::point;
    piece.vertices = {p};
    piece.jump = std::move(jump);
    return piece;
}

InterfacePiece segment_piece(const Point& a, const Point& b, JumpProfile jump) {
    if (dist2(a, b) == 0.0) throw std::invalid_argument("degenerate segment");
    InterfacePiece piece;
    piece.shape = PieceShape::segment;
    piece.vertices = {a, b};
    piece.jump = std::move(jump);
    return piece;
}

InterfacePiece circle_piece(const Point& center, double radius, JumpProfile jump) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
    InterfacePiece piece;
    piece.shape = PieceShape::circle;
    piece.center = center;
    piece.radius = radius;
    piece.jump = std::move(jump);
    return piece;
}

InterfacePiece polygon_piece(std::vector<Point> vertices, JumpProfile jump) {
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    InterfacePiece piece;
    piece.shape = PieceShape::polygon;
    piece.vertices = std::move(vertices);
    piece.jump = std::move(jump);
    return piece;
}

}  // namespace bvq
