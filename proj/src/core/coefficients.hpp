#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "core/field.hpp"

namespace scaleprobe {

/// Operator data for the second-order elliptic form: diffusion matrix a(x),
/// advection b(x), reaction phi(x) >= 0, with a certified lower bound on the
/// smallest eigenvalue of a.
struct CoefficientSet {
    std::string name;
    std::function<std::array<double, 4>(Vec2)> a; // row-major a11 a12 a21 a22
    std::function<std::array<double, 2>(Vec2)> b;
    std::function<double(Vec2)> phi;
    /// Row i of the divergence of a: (d/dx a_i1 + d/dy a_i2); used to build
    /// manufactured right-hand sides.
    std::function<std::array<double, 2>(Vec2)> aDivergenceRows;
    double ellipticityFloor = 1.0;
    bool symmetric = true; // b == 0 so the full form is symmetric

    /// a = I, b = 0, phi = 0.
    static CoefficientSet laplace();
    /// a = diag(1 + x^2/2, 1 + y^2/2), b = (1,-1)/10, phi = x + y.
    static CoefficientSet variable();
    static CoefficientSet byName(const std::string& name);

    /// Strong-form application L(u) = -div(a grad u) + b . grad u + phi u,
    /// for u with analytic derivatives up to order 2.
    ScalarField applyOperator(const ScalarField& u) const;

    /// Sample-based check of the invariants: a symmetric, smallest eigenvalue
    /// >= ellipticityFloor, phi >= 0. Errors with Err::Ellipticity on failure.
    void validate(const Rect& domain, int numSamples, std::uint64_t seed) const;
};

} // namespace scaleprobe
