#include "core/scaling.hpp"

#include <cmath>

namespace scaleprobe {

namespace {

constexpr double kFdStep = 1e-5;

double pullback(const ScalarField& u, const AffineScaleMap& map, Vec2 xi) {
    return u.value(map.backward(xi));
}

// Central finite differences of the pulled-back field in xi coordinates.
double fdDerivative(const ScalarField& u, const AffineScaleMap& map, Vec2 xi, MultiIndex a) {
    const double h = kFdStep;
    auto f = [&](double dx, double dy) { return pullback(u, map, {xi.x + dx, xi.y + dy}); };
    if (a.a1 == 0 && a.a2 == 0) return f(0, 0);
    if (a.a1 == 1 && a.a2 == 0) return (f(h, 0) - f(-h, 0)) / (2.0 * h);
    if (a.a1 == 0 && a.a2 == 1) return (f(0, h) - f(0, -h)) / (2.0 * h);
    if (a.a1 == 2 && a.a2 == 0) return (f(h, 0) - 2.0 * f(0, 0) + f(-h, 0)) / (h * h);
    if (a.a1 == 0 && a.a2 == 2) return (f(0, h) - 2.0 * f(0, 0) + f(0, -h)) / (h * h);
    if (a.a1 == 1 && a.a2 == 1) {
        return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
    }
    fail(Err::Degree, "finite differences support derivative orders up to 2");
}

// Quintic smoothstep 6t^5 - 15t^4 + 10t^3 and its first two derivatives;
// C^2 across t = 0 and t = 1.
double smoothstep(double t, int deriv) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return deriv == 0 ? 1.0 : 0.0;
    switch (deriv) {
    case 0: return ((6.0 * t - 15.0) * t + 10.0) * t * t * t;
    case 1: return ((30.0 * t - 60.0) * t + 30.0) * t * t;
    default: return ((120.0 * t - 180.0) * t + 60.0) * t;
    }
}

// One-axis profile: 0 outside [s0,s1], 1 on [p0,p1], smoothstep ramps between.
double axisProfile(double x, double s0, double p0, double p1, double s1, int deriv) {
    if (x <= s0 || x >= s1) return 0.0;
    if (x < p0) {
        const double g = p0 - s0;
        return smoothstep((x - s0) / g, deriv) / std::pow(g, deriv);
    }
    if (x > p1) {
        const double g = s1 - p1;
        const double sign = (deriv == 1) ? -1.0 : 1.0;
        return sign * smoothstep((s1 - x) / g, deriv) / std::pow(g, deriv);
    }
    return deriv == 0 ? 1.0 : 0.0;
}

} // namespace

double verifyDerivativeScaling(const ScalarField& u, const AffineScaleMap& map, MultiIndex alpha,
                               std::span<const Vec2> samplesXi) {
    require(alpha.a1 >= 0 && alpha.a2 >= 0 && alpha.order() <= 2, Err::Degree,
            "multi-index order must be at most 2");
    const double scale = std::pow(map.d, alpha.order());
    double worst = 0.0;
    for (const Vec2& xi : samplesXi) {
        const Vec2 x = map.backward(xi);
        const double analytic = scale * u.derivative(x, alpha.a1, alpha.a2);
        const double numeric = fdDerivative(u, map, xi, alpha);
        const double err = std::abs(numeric - analytic) / (std::abs(analytic) + 1e-14);
        worst = std::max(worst, err);
    }
    return worst;
}

double epsilonFactor(double d, double h, int degree) {
    require(d > 0.0 && h > 0.0, Err::ScaleOrdering, "scales must be positive");
    require(h <= d, Err::ScaleOrdering, "mesh size must not exceed the subdomain diameter");
    require(degree >= 1, Err::Degree, "degree must be >= 1");
    const double ratio = h / d;
    return std::sqrt(std::pow(ratio, 2 * degree) / (d * d) + ratio);
}

CutoffFunction CutoffFunction::build(const Rect& plateau, const Rect& support, int smoothness) {
    require(smoothness == 2, Err::Smoothness, "only the C^2 quintic profile is implemented");
    require(plateau.valid() && support.valid(), Err::Gap, "cutoff rectangles are degenerate");
    const double gaps[4] = {plateau.xmin - support.xmin, support.xmax - plateau.xmax,
                            plateau.ymin - support.ymin, support.ymax - plateau.ymax};
    double minGap = gaps[0];
    for (double g : gaps) {
        require(g > 0.0, Err::Gap, "plateau must be strictly inside the support on every side");
        minGap = std::min(minGap, g);
    }
    CutoffFunction omega;
    omega.plateau_ = plateau;
    omega.support_ = support;
    omega.derivativeBound_ = (15.0 / 8.0) / minGap;
    return omega;
}

double CutoffFunction::value(Vec2 p) const {
    const double px = axisProfile(p.x, support_.xmin, plateau_.xmin, plateau_.xmax, support_.xmax, 0);
    const double py = axisProfile(p.y, support_.ymin, plateau_.ymin, plateau_.ymax, support_.ymax, 0);
    return px * py;
}

Vec2 CutoffFunction::gradient(Vec2 p) const {
    const double px = axisProfile(p.x, support_.xmin, plateau_.xmin, plateau_.xmax, support_.xmax, 0);
    const double py = axisProfile(p.y, support_.ymin, plateau_.ymin, plateau_.ymax, support_.ymax, 0);
    const double dpx = axisProfile(p.x, support_.xmin, plateau_.xmin, plateau_.xmax, support_.xmax, 1);
    const double dpy = axisProfile(p.y, support_.ymin, plateau_.ymin, plateau_.ymax, support_.ymax, 1);
    return {dpx * py, px * dpy};
}

ScalarField CutoffFunction::asField() const {
    const CutoffFunction self = *this;
    return ScalarField([self](Vec2 p, int dx, int dy) {
        require(dx >= 0 && dy >= 0 && dx + dy <= 2, Err::Degree,
                "cutoff derivatives beyond order 2 are not available");
        const Rect& pl = self.plateau_;
        const Rect& su = self.support_;
        const double fx = axisProfile(p.x, su.xmin, pl.xmin, pl.xmax, su.xmax, dx);
        const double fy = axisProfile(p.y, su.ymin, pl.ymin, pl.ymax, su.ymax, dy);
        return fx * fy;
    });
}

double rhsBoundSuperapprox(double d, double h, int degree, double norm0, double norm1, double c) {
    require(d > 0.0 && h > 0.0 && degree >= 1, Err::ScaleOrdering, "invalid bound parameters");
    const double ratio = h / d;
    return c * std::pow(ratio, degree) / d * norm0 + c * ratio * norm1;
}

double rhsBoundLocalEstimate(double eps, int p, double h, double norm0, double fdual, double c) {
    require(p >= 0 && h > 0.0 && eps >= 0.0, Err::ScaleOrdering, "invalid bound parameters");
    double sum = 0.0;
    double epsPow = 1.0; // eps^0 = 1 even at eps = 0
    for (int j = 0; j <= p; ++j) {
        sum += epsPow * (fdual + norm0);
        epsPow *= eps;
    }
    return c * (std::pow(eps, 0.5 * (p + 1)) / h * norm0 + sum);
}

} // namespace scaleprobe
