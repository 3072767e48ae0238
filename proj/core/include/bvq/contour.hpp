#pragma once

#include <array>
#include <vector>

#include "bvq/domain.hpp"

namespace bvq {

using Segment = std::array<Point, 2>;
using Triangle = std::array<Point, 3>;

// Zero crossings of a linearly interpolated indicator. Corner values that are
// NaN make the cell contribute nothing.

// Interval [a, b] with values (va, vb): the crossing point, if any.
std::vector<Point> march_interval(const Point& a, const Point& b, double va, double vb);

// Square with corners ordered (0,0), (1,0), (1,1), (0,1). Saddles are
// resolved by the mean of the four corner values.
std::vector<Segment> march_square(const std::array<Point, 4>& p, const std::array<double, 4>& v);

std::vector<Triangle> march_tetrahedron(const std::array<Point, 4>& p, const std::array<double, 4>& v);

// Cube with corner k at offset (k & 1, (k >> 1) & 1, (k >> 2) & 1), split
// into six tetrahedra around the 0-7 diagonal.
std::vector<Triangle> march_cube(const std::array<Point, 8>& p, const std::array<double, 8>& v);

double length(const Segment& s) noexcept;
double area(const Triangle& t) noexcept;

}  // namespace bvq
