#include "core/coefficients.hpp"

#include <cmath>

namespace scaleprobe {

CoefficientSet CoefficientSet::laplace() {
    CoefficientSet c;
    c.name = "laplace";
    c.a = [](Vec2) { return std::array<double, 4>{1.0, 0.0, 0.0, 1.0}; };
    c.b = [](Vec2) { return std::array<double, 2>{0.0, 0.0}; };
    c.phi = [](Vec2) { return 0.0; };
    c.aDivergenceRows = [](Vec2) { return std::array<double, 2>{0.0, 0.0}; };
    c.ellipticityFloor = 1.0;
    c.symmetric = true;
    return c;
}

CoefficientSet CoefficientSet::variable() {
    CoefficientSet c;
    c.name = "variable";
    c.a = [](Vec2 p) {
        return std::array<double, 4>{1.0 + 0.5 * p.x * p.x, 0.0, 0.0, 1.0 + 0.5 * p.y * p.y};
    };
    c.b = [](Vec2) { return std::array<double, 2>{0.1, -0.1}; };
    c.phi = [](Vec2 p) { return p.x + p.y; };
    c.aDivergenceRows = [](Vec2 p) { return std::array<double, 2>{p.x, p.y}; };
    c.ellipticityFloor = 1.0;
    c.symmetric = false;
    return c;
}

CoefficientSet CoefficientSet::byName(const std::string& name) {
    if (name == "laplace") return laplace();
    if (name == "variable") return variable();
    fail(Err::Parse, "unknown coefficient preset '" + name + "'");
}

ScalarField CoefficientSet::applyOperator(const ScalarField& u) const {
    const CoefficientSet self = *this;
    return ScalarField([self, u](Vec2 p, int dx, int dy) -> double {
        require(dx == 0 && dy == 0, Err::Degree,
                "derivatives of the strong-form residual are not available");
        const auto a = self.a(p);
        const auto adiv = self.aDivergenceRows(p);
        const auto b = self.b(p);
        const double ux = u.derivative(p, 1, 0);
        const double uy = u.derivative(p, 0, 1);
        const double uxx = u.derivative(p, 2, 0);
        const double uxy = u.derivative(p, 1, 1);
        const double uyy = u.derivative(p, 0, 2);
        // -div(a grad u) = -(adiv . grad u) - (a11 uxx + (a12+a21) uxy + a22 uyy)
        const double diffusion =
            -(adiv[0] * ux + adiv[1] * uy) - (a[0] * uxx + (a[1] + a[2]) * uxy + a[3] * uyy);
        return diffusion + b[0] * ux + b[1] * uy + self.phi(p) * u.value(p);
    });
}

void CoefficientSet::validate(const Rect& domain, int numSamples, std::uint64_t seed) const {
    Rng rng = Rng::stream(seed, 0x434f4546ULL);
    for (int s = 0; s < numSamples; ++s) {
        const Vec2 p{domain.xmin + rng.uniform() * domain.width(),
                     domain.ymin + rng.uniform() * domain.height()};
        const auto m = a(p);
        require(std::abs(m[1] - m[2]) <= 1e-12 * (1.0 + std::abs(m[1])), Err::Ellipticity,
                "diffusion matrix is not symmetric at a sample point");
        // eigenvalues of a symmetric 2x2 matrix
        const double tr = m[0] + m[3];
        const double det = m[0] * m[3] - m[1] * m[2];
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        const double lambdaMin = 0.5 * tr - disc;
        require(lambdaMin >= ellipticityFloor - 1e-12, Err::Ellipticity,
                "smallest eigenvalue of a(x) falls below the certified floor");
        require(phi(p) >= -1e-14, Err::Ellipticity, "phi is negative at a sample point");
    }
}

} // namespace scaleprobe
