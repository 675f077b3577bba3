#pragma once

#include <vector>

#include "core/common.hpp"

namespace scaleprobe {

/// Gauss-Legendre nodes and weights on [0,1], exact for polynomials of
/// degree <= 2m-1. Computed by Newton iteration on the Legendre recurrence.
void gaussLegendre01(int m, std::vector<double>& points, std::vector<double>& weights);

/// Quadrature on the reference triangle (0,0)-(1,0)-(0,1), built by collapsing
/// a tensor Gauss-Legendre rule through the Duffy map. All weights positive;
/// weights sum to the reference area 1/2.
struct TriangleQuadrature {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int exactnessDegree = 0;

    static const TriangleQuadrature& withExactness(int degree);
};

} // namespace scaleprobe
