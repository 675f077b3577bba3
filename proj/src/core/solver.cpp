#include "core/solver.hpp"

#include <cmath>

#include "core/assembly.hpp"

namespace scaleprobe {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dotProduct(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> jacobiScale(const SparseMatrix& a) {
    std::vector<double> inv = a.diagonal();
    for (double& d : inv) d = (d != 0.0) ? 1.0 / d : 1.0;
    return inv;
}

std::pair<std::vector<double>, SolveReport> bicgstab(const SparseMatrix& a,
                                                     std::span<const double> rhs, double tol) {
    const int n = a.dim();
    const std::vector<double> minv = jacobiScale(a);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    std::vector<double> r(rhs.begin(), rhs.end());
    const double bnorm = norm2(rhs);
    SolveReport report{0, 0.0, "bicgstab-jacobi"};
    if (bnorm == 0.0) return {x, report};

    std::vector<double> r0 = r, p = r, v(static_cast<std::size_t>(n)), s(static_cast<std::size_t>(n)),
                        t(static_cast<std::size_t>(n)), ph(static_cast<std::size_t>(n)),
                        sh(static_cast<std::size_t>(n));
    double rho = dotProduct(r0, r);
    const int cap = 10 * n;
    for (int it = 1; it <= cap; ++it) {
        for (int i = 0; i < n; ++i) ph[static_cast<std::size_t>(i)] = minv[static_cast<std::size_t>(i)] * p[static_cast<std::size_t>(i)];
        a.multiply(ph, v);
        const double alpha = rho / dotProduct(r0, v);
        for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] - alpha * v[static_cast<std::size_t>(i)];
        if (norm2(s) / bnorm <= tol) {
            for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += alpha * ph[static_cast<std::size_t>(i)];
            report.iterations = it;
            report.relativeResidual = norm2(s) / bnorm;
            return {x, report};
        }
        for (int i = 0; i < n; ++i) sh[static_cast<std::size_t>(i)] = minv[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)];
        a.multiply(sh, t);
        const double tt = dotProduct(t, t);
        require(tt != 0.0, Err::Singularity, "BiCGStab breakdown (t = 0)");
        const double omega = dotProduct(t, s) / tt;
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] += alpha * ph[static_cast<std::size_t>(i)] + omega * sh[static_cast<std::size_t>(i)];
            r[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i)] - omega * t[static_cast<std::size_t>(i)];
        }
        const double rel = norm2(r) / bnorm;
        if (rel <= tol) {
            report.iterations = it;
            report.relativeResidual = rel;
            return {x, report};
        }
        const double rhoNext = dotProduct(r0, r);
        require(rhoNext != 0.0 && omega != 0.0, Err::Singularity, "BiCGStab breakdown (rho = 0)");
        const double beta = (rhoNext / rho) * (alpha / omega);
        rho = rhoNext;
        for (int i = 0; i < n; ++i) {
            p[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] + beta * (p[static_cast<std::size_t>(i)] - omega * v[static_cast<std::size_t>(i)]);
        }
    }
    fail(Err::Convergence, "BiCGStab did not converge within the iteration cap");
}

} // namespace

std::pair<std::vector<double>, SolveReport> solveSpd(const SparseMatrix& a,
                                                     std::span<const double> rhs, double tol) {
    require(a.dim() == static_cast<int>(rhs.size()), Err::Dimension,
            "solve dimension mismatch");
    const int n = a.dim();
    const std::vector<double> minv = jacobiScale(a);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    std::vector<double> r(rhs.begin(), rhs.end());
    const double bnorm = norm2(rhs);
    SolveReport report{0, 0.0, "cg-jacobi"};
    if (bnorm == 0.0) return {x, report};

    std::vector<double> z(static_cast<std::size_t>(n)), p(static_cast<std::size_t>(n)),
                        ap(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = minv[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
    p = z;
    double rz = dotProduct(r, z);
    const int cap = 10 * n;
    int it = 0;
    double rel = 1.0;
    while (rel > tol) {
        require(it < cap, Err::Convergence,
                "CG did not reach the requested residual within 10 x dimension iterations");
        ++it;
        a.multiply(p, ap);
        const double pap = dotProduct(p, ap);
        require(pap > 0.0, Err::Definiteness, "matrix is not positive definite on a CG direction");
        const double alpha = rz / pap;
        for (int i = 0; i < n; ++i) {
            x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
            r[static_cast<std::size_t>(i)] -= alpha * ap[static_cast<std::size_t>(i)];
        }
        rel = norm2(r) / bnorm;
        if (rel <= tol) break;
        for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = minv[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
        const double rzNext = dotProduct(r, z);
        const double beta = rzNext / rz;
        rz = rzNext;
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
    }
    report.iterations = it;
    report.relativeResidual = rel;
    return {x, report};
}

std::pair<std::vector<double>, SolveReport> solveGeneral(const SparseMatrix& a,
                                                         std::span<const double> rhs, double tol) {
    require(a.dim() == static_cast<int>(rhs.size()), Err::Dimension,
            "solve dimension mismatch");
    if (a.dim() > 2000) return bicgstab(a, rhs, tol);

    std::vector<double> x = denseSolve(a.toDense(), {rhs.begin(), rhs.end()}, a.dim());
    const std::vector<double> ax = a.multiply(x);
    double rnorm = 0.0;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        const double d = ax[i] - rhs[i];
        rnorm += d * d;
    }
    const double bnorm = norm2(rhs);
    SolveReport report{1, bnorm > 0.0 ? std::sqrt(rnorm) / bnorm : 0.0, "dense-lu"};
    require(bnorm == 0.0 || report.relativeResidual <= std::max(tol, 1e-12), Err::Singularity,
            "dense elimination produced an inaccurate solution (near-singular system)");
    return {x, report};
}

FEFunction solveLocalGalerkin(const LagrangeSpace& space, const CoefficientSet& coeffs,
                              std::span<const double> load, const SubdomainSpec& G, double tol) {
    require(static_cast<int>(load.size()) == space.dim(), Err::Dimension,
            "load vector does not match the space dimension");
    const std::vector<int> sub = space.interiorDofs(G);
    require(!sub.empty(), Err::EmptySpace, "compact-support subspace of G is empty");

    const SparseMatrix full = assembleDiffusion(space, coeffs).plus(assembleLowerOrder(space, coeffs));
    const SparseMatrix a = full.restricted(sub);
    std::vector<double> rhs(sub.size());
    for (std::size_t i = 0; i < sub.size(); ++i) rhs[i] = load[static_cast<std::size_t>(sub[i])];

    const auto [x, report] =
        coeffs.symmetric ? solveSpd(a, rhs, tol) : solveGeneral(a, rhs, tol);
    (void)report;

    FEFunction w = space.zeroFunction();
    for (std::size_t i = 0; i < sub.size(); ++i) {
        w.coefficients[static_cast<std::size_t>(sub[i])] = x[i];
    }
    return w;
}

FEFunction solveLocalGalerkin(const LagrangeSpace& space, const CoefficientSet& coeffs,
                              const ScalarField& f, const SubdomainSpec& G, double tol) {
    return solveLocalGalerkin(space, coeffs, assembleLoad(space, f), G, tol);
}

} // namespace scaleprobe
