#pragma once

#include <span>

#include "core/field.hpp"

namespace scaleprobe {

/// Isotropic rescaling of a subdomain of diameter d to reference size:
/// xi = (x - x0) / d.
struct AffineScaleMap {
    Vec2 x0;
    double d = 1.0;

    Vec2 forward(Vec2 x) const {
        require(d > 0.0, Err::ScaleOrdering, "scale map diameter must be positive");
        return {(x.x - x0.x) / d, (x.y - x0.y) / d};
    }
    Vec2 backward(Vec2 xi) const {
        require(d > 0.0, Err::ScaleOrdering, "scale map diameter must be positive");
        return {x0.x + d * xi.x, x0.y + d * xi.y};
    }
};

struct MultiIndex {
    int a1 = 0;
    int a2 = 0;
    int order() const { return a1 + a2; }
};

/// Checks the rescaling identity for derivatives: the alpha-derivative of the
/// pulled-back field u(x0 + d xi), computed by central finite differences in
/// xi (step 1e-5), against d^|alpha| times the analytic derivative at x.
/// Returns the worst relative error over the sample points (floor 1e-14).
double verifyDerivativeScaling(const ScalarField& u, const AffineScaleMap& map, MultiIndex alpha,
                               std::span<const Vec2> samplesXi);

/// Per-layer contraction factor ( d^-2 (h/d)^(2r) + h/d )^(1/2).
double epsilonFactor(double d, double h, int degree);

/// Smooth plateau/support cutoff: 1 on the plateau, 0 outside the support,
/// quintic-smoothstep ramps (C^2) in between, built as a tensor product of
/// axis profiles.
class CutoffFunction {
public:
    static CutoffFunction build(const Rect& plateau, const Rect& support, int smoothness = 2);

    const Rect& plateau() const { return plateau_; }
    const Rect& support() const { return support_; }
    int smoothness() const { return 2; }

    /// Certified bound on |grad omega|: (15/8) / (smallest ramp gap).
    double derivativeBound() const { return derivativeBound_; }

    double value(Vec2 p) const;
    Vec2 gradient(Vec2 p) const;

    /// View as a ScalarField with derivatives up to order 2.
    ScalarField asField() const;

private:
    Rect plateau_;
    Rect support_;
    double derivativeBound_ = 0.0;
};

/// C d^-1 (h/d)^r |w|_0 + C (h/d) |w|_1, the scaled cutoff-approximation bound.
double rhsBoundSuperapprox(double d, double h, int degree, double norm0, double norm1, double c);

/// C ( eps^((p+1)/2) h^-1 |w|_0 + sum_{j=0..p} eps^j (fdual + |w|_0) ).
double rhsBoundLocalEstimate(double eps, int p, double h, double norm0, double fdual, double c);

} // namespace scaleprobe
