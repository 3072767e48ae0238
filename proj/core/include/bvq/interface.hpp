#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bvq/domain.hpp"

namespace bvq {

// One-sided traces and the normal pointing into the plus side.
struct JumpSample {
    std::vector<double> plus;
    std::vector<double> minus;
    Point normal{0, 0, 0};
};

using JumpProfile = std::function<JumpSample(const Point&)>;

JumpProfile constant_jump(std::vector<double> plus, std::vector<double> minus, Point normal);

enum class PieceShape { point, segment, circle, polygon };

struct InterfacePiece {
    PieceShape shape = PieceShape::point;
    std::vector<Point> vertices;  // point: 1, segment: 2, polygon: >= 3 (planar, convex)
    Point center{0, 0, 0};        // circle only
    double radius = 0.0;          // circle only
    std::string plus_label = "+";
    std::string minus_label = "-";
    JumpProfile jump;

    // Closed-form H^{N-1} measure: 1 for a point, length, circumference, area.
    double measure() const;
    // Jump data with the normal rescaled to unit length.
    JumpSample jump_at(const Point& p) const;
    // Midpoint quadrature nodes (position, weight); weights sum to measure().
    std::vector<std::pair<Point, double>> samples(int resolution) const;
};

struct InterfaceSpec {
    int dim = 1;
    std::vector<InterfacePiece> pieces;
    double measure() const;
};

InterfacePiece point_piece(const Point& p, JumpProfile jump);
InterfacePiece segment_piece(const Point& a, const Point& b, JumpProfile jump);
InterfacePiece circle_piece(const Point& center, double radius, JumpProfile jump);
InterfacePiece polygon_piece(std::vector<Point> vertices, JumpProfile jump);

}  // namespace bvq
