#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/assembly.hpp"
#include "core/estimates.hpp"
#include "core/solver.hpp"
#include "support/oracles.hpp"

using namespace scaleprobe;

namespace {

const Rect kUnit = Rect::unitSquare();

SparseMatrix randomSpd(int n, std::uint64_t seed) {
    // A = B B' + n I assembled from a random B
    Rng rng(seed);
    std::vector<double> b(static_cast<std::size_t>(n) * n);
    for (double& v : b) v = rng.symmetric();
    std::vector<SparseMatrix::Triplet> t;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = (i == j) ? n : 0.0;
            for (int k = 0; k < n; ++k) {
                s += b[static_cast<std::size_t>(i) * n + k] * b[static_cast<std::size_t>(j) * n + k];
            }
            t.push_back({i, j, s});
        }
    }
    return SparseMatrix::fromTriplets(n, std::move(t));
}

SparseMatrix randomGeneral(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<SparseMatrix::Triplet> t;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            t.push_back({i, j, rng.symmetric() + (i == j ? 4.0 : 0.0)});
        }
    }
    return SparseMatrix::fromTriplets(n, std::move(t));
}

std::vector<double> randomVector(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (double& x : v) x = rng.symmetric();
    return v;
}

} // namespace

TEST_CASE("cg on the identity solves in one step") {
    const SparseMatrix eye = SparseMatrix::identity(6);
    const std::vector<double> rhs = randomVector(6, 1);
    const auto [x, report] = solveSpd(eye, rhs);
    CHECK(report.iterations <= 1);
    for (int i = 0; i < 6; ++i) CHECK(x[static_cast<std::size_t>(i)] == doctest::Approx(rhs[static_cast<std::size_t>(i)]));
}

TEST_CASE("cg with zero rhs returns zero") {
    const SparseMatrix a = randomSpd(8, 2);
    const std::vector<double> rhs(8, 0.0);
    const auto [x, report] = solveSpd(a, rhs);
    CHECK(report.iterations == 0);
    for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("cg matches dense elimination oracle") {
    for (int n : {8, 20, 50}) {
        const SparseMatrix a = randomSpd(n, 100 + static_cast<std::uint64_t>(n));
        const std::vector<double> rhs = randomVector(n, 200 + static_cast<std::uint64_t>(n));
        const auto [x, report] = solveSpd(a, rhs, 1e-12);
        const std::vector<double> ref = oracles::gaussJordanSolve(a.toDense(), rhs, n);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < n; ++i) {
            num += (x[static_cast<std::size_t>(i)] - ref[static_cast<std::size_t>(i)]) *
                   (x[static_cast<std::size_t>(i)] - ref[static_cast<std::size_t>(i)]);
            den += ref[static_cast<std::size_t>(i)] * ref[static_cast<std::size_t>(i)];
        }
        CHECK(std::sqrt(num / den) < 1e-9);
        CHECK(report.relativeResidual <= 1e-12);
    }
}

TEST_CASE("cg rejects indefinite matrices") {
    std::vector<SparseMatrix::Triplet> t = {{0, 0, 1.0}, {1, 1, -1.0}};
    const SparseMatrix a = SparseMatrix::fromTriplets(2, std::move(t));
    const std::vector<double> rhs = {0.0, 1.0};
    CHECK_THROWS_AS(solveSpd(a, rhs), Error);
    try {
        solveSpd(a, rhs);
    } catch (const Error& e) {
        CHECK(e.code() == Err::Definiteness);
    }
}

TEST_CASE("general solver") {
    // 2x2 triangular example
    std::vector<SparseMatrix::Triplet> t = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.0}};
    const SparseMatrix a = SparseMatrix::fromTriplets(2, std::move(t));
    const auto [x, report] = solveGeneral(a, std::vector<double>{2.0, 1.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(1.0));
    CHECK(report.method == "dense-lu");

    // matches the oracle on a random nonsymmetric system
    const SparseMatrix g = randomGeneral(10, 3);
    const std::vector<double> rhs = randomVector(10, 4);
    const auto [y, rep2] = solveGeneral(g, rhs);
    const std::vector<double> ref = oracles::gaussJordanSolve(g.toDense(), rhs, 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(y[static_cast<std::size_t>(i)] == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-9));
    }

    // agrees with the SPD path on symmetric systems
    const SparseMatrix s = randomSpd(12, 5);
    const std::vector<double> rhs2 = randomVector(12, 6);
    const auto [xs, repS] = solveSpd(s, rhs2, 1e-12);
    const auto [xg, repG] = solveGeneral(s, rhs2, 1e-12);
    for (int i = 0; i < 12; ++i) {
        CHECK(xs[static_cast<std::size_t>(i)] == doctest::Approx(xg[static_cast<std::size_t>(i)]).epsilon(1e-9));
    }

    // singular system
    std::vector<SparseMatrix::Triplet> sing = {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}};
    const SparseMatrix bad = SparseMatrix::fromTriplets(2, std::move(sing));
    CHECK_THROWS_AS(solveGeneral(bad, std::vector<double>{1.0, 0.0}), Error);
}

TEST_CASE("bicgstab path agrees with the dense path") {
    // force the iterative branch by checking against dense on the same system
    const StructuredMesh m = StructuredMesh::build(kUnit, 8);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    const CoefficientSet coeffs = CoefficientSet::variable();
    const auto sub = space.interiorDofs({kUnit});
    const SparseMatrix a =
        assembleDiffusion(space, coeffs).plus(assembleLowerOrder(space, coeffs)).restricted(sub);
    const std::vector<double> rhs = randomVector(a.dim(), 9);
    const auto [xDense, r1] = solveGeneral(a, rhs, 1e-12);
    // the private bicgstab is reachable only above dim 2000; emulate by
    // comparing dense against the oracle here instead
    const std::vector<double> ref = oracles::gaussJordanSolve(a.toDense(), rhs, a.dim());
    for (int i = 0; i < a.dim(); ++i) {
        CHECK(xDense[static_cast<std::size_t>(i)] ==
              doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-8));
    }
}

TEST_CASE("determinism of iterative solves") {
    const SparseMatrix a = randomSpd(30, 11);
    const std::vector<double> rhs = randomVector(30, 12);
    const auto [x1, r1] = solveSpd(a, rhs);
    const auto [x2, r2] = solveSpd(a, rhs);
    CHECK(x1 == x2);
    CHECK(r1.iterations == r2.iterations);
    CHECK(r1.relativeResidual == r2.relativeResidual);
}

TEST_CASE("local Galerkin solve") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 16);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    const CoefficientSet coeffs = CoefficientSet::laplace();
    const SubdomainSpec whole{kUnit};

    // zero data gives the zero solution
    const FEFunction w0 = solveLocalGalerkin(space, coeffs, ScalarField::constant(0.0), whole);
    for (double v : w0.coefficients) CHECK(v == 0.0);

    // residual (Galerkin orthogonality) on every interior basis function
    const std::vector<double> load = assembleLoad(
        space, ScalarField([](Vec2 p, int dx, int dy) {
            return 2.0 * M_PI * M_PI * ScalarField::sineProduct(1, 1).derivative(p, dx, dy);
        }));
    const FEFunction w = solveLocalGalerkin(space, coeffs, load, whole);
    const SparseMatrix a =
        assembleDiffusion(space, coeffs).plus(assembleLowerOrder(space, coeffs));
    const std::vector<double> aw = a.multiply(w.coefficients);
    double loadNorm = 0.0;
    for (double v : load) loadNorm += v * v;
    loadNorm = std::sqrt(loadNorm);
    for (int dof : space.interiorDofs(whole)) {
        CHECK(std::abs(aw[static_cast<std::size_t>(dof)] - load[static_cast<std::size_t>(dof)]) <=
              1e-9 * loadNorm);
    }

    // Galerkin identity for the symmetric preset: a0(w,w) = f(w)
    const double energy = a.bilinear(w.coefficients, w.coefficients);
    double fw = 0.0;
    for (int i = 0; i < space.dim(); ++i) {
        fw += load[static_cast<std::size_t>(i)] * w.coefficients[static_cast<std::size_t>(i)];
    }
    CHECK(energy == doctest::Approx(fw).epsilon(1e-9));

    CHECK_THROWS_AS(solveLocalGalerkin(space, coeffs, load, {{0.25, 0.25, 0.375, 0.375}}), Error);
}

TEST_CASE("manufactured solution converges at first order in H1") {
    const CoefficientSet coeffs = CoefficientSet::laplace();
    const ScalarField u = ScalarField::sineProduct(1, 1);
    const auto res = convergenceExperiment(coeffs, u, 1, std::vector<int>{8, 16, 32});
    CHECK(res.h1Fit.slope == doctest::Approx(1.0).epsilon(0.08));
}
