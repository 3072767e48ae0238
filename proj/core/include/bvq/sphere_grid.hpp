#pragma once

#include <vector>

#include "bvq/domain.hpp"

namespace bvq {

// Fixed trial normals: 1D {+1, -1}; 2D 64 equally spaced angles; 3D 242
// points (162 level-2 geodesic vertices plus the 80 level-1 face centroids).
// Every set is closed under negation and has a fixed order.
const std::vector<Point>& normal_grid(int dim);

// Vertices of the icosahedron subdivided `level` times, projected to the sphere.
std::vector<Point> geodesic_vertices(int level);

}  // namespace bvq
