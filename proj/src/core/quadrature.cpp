#include "core/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace scaleprobe {

void gaussLegendre01(int m, std::vector<double>& points, std::vector<double>& weights) {
    require(m >= 1, Err::Degree, "Gauss-Legendre point count must be >= 1");
    points.assign(static_cast<std::size_t>(m), 0.0);
    weights.assign(static_cast<std::size_t>(m), 0.0);
    // roots on [-1,1]; exploit symmetry
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        points[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        weights[static_cast<std::size_t>(i)] = 0.5 * w;
        points[static_cast<std::size_t>(m - 1 - i)] = 0.5 * (1.0 + x);
        weights[static_cast<std::size_t>(m - 1 - i)] = 0.5 * w;
    }
}

namespace {

TriangleQuadrature buildRule(int degree) {
    // Duffy collapse x = u, y = v(1-u) with Jacobian (1-u). The (1-u) factor
    // raises the u-degree by one, so m points need 2m-1 >= degree+1.
    const int m = (degree + 3) / 2;
    std::vector<double> gp, gw;
    gaussLegendre01(m, gp, gw);

    TriangleQuadrature rule;
    rule.exactnessDegree = degree;
    rule.points.reserve(static_cast<std::size_t>(m) * m);
    rule.weights.reserve(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        const double u = gp[static_cast<std::size_t>(i)];
        for (int j = 0; j < m; ++j) {
            const double v = gp[static_cast<std::size_t>(j)];
            rule.points.push_back({u, v * (1.0 - u)});
            rule.weights.push_back(gw[static_cast<std::size_t>(i)] *
                                   gw[static_cast<std::size_t>(j)] * (1.0 - u));
        }
    }
    return rule;
}

} // namespace

const TriangleQuadrature& TriangleQuadrature::withExactness(int degree) {
    require(degree >= 0, Err::Degree, "quadrature exactness degree must be >= 0");
    static std::map<int, TriangleQuadrature> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(degree);
    if (it == cache.end()) it = cache.emplace(degree, buildRule(degree)).first;
    return it->second;
}

} // namespace scaleprobe
