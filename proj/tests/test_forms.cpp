#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "core/assembly.hpp"
#include "core/solver.hpp"
#include "support/oracles.hpp"

using namespace scaleprobe;

namespace {

const Rect kUnit = Rect::unitSquare();

ScalarField linearX() {
    return ScalarField([](Vec2 p, int dx, int dy) {
        if (dx == 0 && dy == 0) return p.x;
        if (dx == 1 && dy == 0) return 1.0;
        return 0.0;
    });
}

ScalarField bump() {
    // x(1-x) y(1-y)
    return ScalarField([](Vec2 p, int dx, int dy) {
        auto f = [](double t, int k) {
            switch (k) {
            case 0: return t * (1.0 - t);
            case 1: return 1.0 - 2.0 * t;
            case 2: return -2.0;
            default: return 0.0;
            }
        };
        return f(p.x, dx) * f(p.y, dy);
    });
}

} // namespace

TEST_CASE("quadrature exactness on monomials") {
    for (int deg : {2, 4, 6, 8, 10, 12}) {
        const auto& q = TriangleQuadrature::withExactness(deg);
        for (double w : q.weights) CHECK(w > 0.0);
        for (int a = 0; a <= deg; ++a) {
            for (int b = 0; a + b <= deg; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < q.points.size(); ++i) {
                    s += q.weights[i] * std::pow(q.points[i].x, a) * std::pow(q.points[i].y, b);
                }
                // int_T x^a y^b = a! b! / (a+b+2)!
                double exact = 1.0;
                for (int k = 1; k <= a; ++k) exact *= k;
                for (int k = 1; k <= b; ++k) exact *= k;
                for (int k = 1; k <= a + b + 2; ++k) exact /= k;
                CHECK(std::abs(s - exact) / exact < 1e-13);
            }
        }
    }
}

TEST_CASE("principal form matches the Dirichlet energy") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 32);
    const LagrangeSpace space = LagrangeSpace::build(m, 2);
    const SparseMatrix a0 = assembleDiffusion(space, CoefficientSet::laplace());
    const FEFunction u = space.interpolate(ScalarField::sineProduct(1, 1));
    const double energy = a0.bilinear(u.coefficients, u.coefficients);
    CHECK(energy == doctest::Approx(M_PI * M_PI / 2.0).epsilon(5e-3));

    const FEFunction zero = space.zeroFunction();
    CHECK(a0.bilinear(zero.coefficients, zero.coefficients) == 0.0);
}

TEST_CASE("assembly is linear in the diffusion coefficient") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    CoefficientSet twice = CoefficientSet::laplace();
    twice.a = [](Vec2) { return std::array<double, 4>{2.0, 0.0, 0.0, 2.0}; };
    const SparseMatrix a1 = assembleDiffusion(space, CoefficientSet::laplace());
    const SparseMatrix a2 = assembleDiffusion(space, twice);
    for (int i = 0; i < a1.dim(); ++i) {
        for (int j = 0; j < a1.dim(); ++j) {
            CHECK(std::abs(a2.at(i, j) - 2.0 * a1.at(i, j)) < 1e-13);
        }
    }

    // additivity: (a + a') assembles to the sum of the assemblies
    CoefficientSet varied = CoefficientSet::variable();
    CoefficientSet summed = CoefficientSet::laplace();
    summed.a = [](Vec2 p) {
        return std::array<double, 4>{2.0 + 0.5 * p.x * p.x, 0.0, 0.0, 2.0 + 0.5 * p.y * p.y};
    };
    const SparseMatrix av = assembleDiffusion(space, varied);
    const SparseMatrix as = assembleDiffusion(space, summed);
    for (int i = 0; i < a1.dim(); ++i) {
        for (int j = 0; j < a1.dim(); ++j) {
            CHECK(std::abs(as.at(i, j) - (a1.at(i, j) + av.at(i, j))) < 1e-13);
        }
    }
}

TEST_CASE("lower-order form") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    const LagrangeSpace space = LagrangeSpace::build(m, 2);

    CoefficientSet zeroAll = CoefficientSet::laplace(); // b = 0, phi = 0
    const SparseMatrix n0 = assembleLowerOrder(space, zeroAll);
    CHECK(n0.nonZeroCount() > 0);
    for (int i = 0; i < n0.dim(); ++i) {
        for (int j = 0; j < n0.dim(); ++j) CHECK(n0.at(i, j) == 0.0);
    }

    CoefficientSet phiOnly = CoefficientSet::laplace();
    phiOnly.phi = [](Vec2) { return 1.0; };
    const SparseMatrix nPhi = assembleLowerOrder(space, phiOnly);
    const SparseMatrix mass = assembleMass(space);
    for (int i = 0; i < nPhi.dim(); ++i) {
        for (int j = 0; j < nPhi.dim(); ++j) {
            CHECK(std::abs(nPhi.at(i, j) - mass.at(i, j)) < 1e-13);
        }
    }

    // b = (1,0): v' N u = int v du/dx with u = x, v = x(1-x)y(1-y)
    CoefficientSet advect = CoefficientSet::laplace();
    advect.b = [](Vec2) { return std::array<double, 2>{1.0, 0.0}; };
    advect.symmetric = false;
    const SparseMatrix nAdv = assembleLowerOrder(space, advect);
    const FEFunction u = space.interpolate(linearX());
    const FEFunction v = space.interpolate(bump());
    const double value = nAdv.bilinear(u.coefficients, v.coefficients);
    CHECK(value == doctest::Approx(1.0 / 36.0).epsilon(5e-3));
}

TEST_CASE("mass and load respect the partition of unity") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    for (int r : {1, 2}) {
        const LagrangeSpace space = LagrangeSpace::build(m, r);
        const SparseMatrix mass = assembleMass(space);
        std::vector<double> ones(static_cast<std::size_t>(space.dim()), 1.0);
        CHECK(mass.bilinear(ones, ones) == doctest::Approx(1.0).epsilon(1e-12));

        const std::vector<double> zeroLoad = assembleLoad(space, ScalarField::constant(0.0));
        for (double v : zeroLoad) CHECK(v == 0.0);

        const std::vector<double> oneLoad = assembleLoad(space, ScalarField::constant(1.0));
        const double total = std::accumulate(oneLoad.begin(), oneLoad.end(), 0.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("norms over subregions") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    const SubdomainSpec whole{kUnit};

    FEFunction ones = space.zeroFunction();
    std::fill(ones.coefficients.begin(), ones.coefficients.end(), 1.0);
    CHECK(normL2(ones, whole) == doctest::Approx(1.0).epsilon(1e-13));

    const FEFunction fx = space.interpolate(linearX());
    CHECK(normL2(fx, whole) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-13));

    // additivity over a disjoint split
    const FEFunction w = space.randomFunction(17, space.dofsTouching(whole));
    const double left = normL2(w, {{0.0, 0.0, 0.5, 1.0}});
    const double right = normL2(w, {{0.5, 0.0, 1.0, 1.0}});
    const double total = normL2(w, whole);
    CHECK(left * left + right * right == doctest::Approx(total * total).epsilon(1e-12));

    // norm consistency
    const double h1 = normH1(w, whole);
    const double l2 = normL2(w, whole);
    const double semi = seminormH1(w, whole);
    CHECK(h1 * h1 == doctest::Approx(l2 * l2 + semi * semi).epsilon(1e-12));

    CHECK_THROWS_AS(normL2(w, {{0.0, 0.0, 0.37, 1.0}}), Error);
}

TEST_CASE("full form application") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    const CoefficientSet laplace = CoefficientSet::laplace();
    CoefficientSet withMass = laplace;
    withMass.phi = [](Vec2) { return 1.0; };

    const SparseMatrix a0 = assembleDiffusion(space, laplace);
    const SparseMatrix lower = assembleLowerOrder(space, withMass);
    const SubdomainSpec whole{kUnit};

    const FEFunction zero = space.zeroFunction();
    const FEFunction u = space.randomFunction(3, space.dofsTouching(whole));
    const FEFunction v = space.randomFunction(4, space.dofsTouching(whole));
    CHECK(applyForm(a0, lower, zero, v) == 0.0);

    // symmetry of the principal part
    const SparseMatrix zeroLower = assembleLowerOrder(space, laplace);
    CHECK(std::abs(applyForm(a0, zeroLower, u, v) - applyForm(a0, zeroLower, v, u)) < 1e-13);
    CHECK(a0.maxAbsAsymmetry() < 1e-14);

    // a = I, b = 0, phi = 1: a(u,u) = |u|_1^2 + |u|_0^2
    const double quad = applyForm(a0, lower, u, u);
    const double h1 = normH1(u, whole);
    CHECK(quad == doctest::Approx(h1 * h1).epsilon(1e-12));
}

TEST_CASE("discrete dual norm") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    const SubdomainSpec whole{kUnit};

    const std::vector<double> zero(static_cast<std::size_t>(space.dim()), 0.0);
    CHECK(dualNormHm1(space, whole, zero) == 0.0);

    // oracle: the squared dual norm is the largest eigenvalue of the
    // generalized problem (F F') c = lambda M1 c, computed densely via
    // Cholesky reduction and Jacobi eigenvalues.
    const std::vector<double> load = assembleLoad(space, ScalarField::sineProduct(1, 2));
    const double dual = dualNormHm1(space, whole, load);

    const auto sub = space.interiorDofs(whole);
    const SparseMatrix gram = h1GramMatrix(space).restricted(sub);
    const int nd = gram.dim();
    std::vector<double> f(static_cast<std::size_t>(nd));
    for (int i = 0; i < nd; ++i) f[static_cast<std::size_t>(i)] = load[static_cast<std::size_t>(sub[static_cast<std::size_t>(i)])];
    const std::vector<double> l = oracles::cholesky(gram.toDense(), nd);
    // y = L^-1 f, then lambda_max(L^-1 F F' L^-T) = |y|^2
    std::vector<double> y = f;
    for (int i = 0; i < nd; ++i) {
        double s = y[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= l[static_cast<std::size_t>(i) * nd + k] * y[static_cast<std::size_t>(k)];
        y[static_cast<std::size_t>(i)] = s / l[static_cast<std::size_t>(i) * nd + i];
    }
    double ySq = 0.0;
    for (double v : y) ySq += v * v;
    CHECK(dual == doctest::Approx(std::sqrt(ySq)).epsilon(1e-10));

    // rank-one check through the full Jacobi eigensolver as well
    std::vector<double> outer(static_cast<std::size_t>(nd) * nd);
    for (int i = 0; i < nd; ++i) {
        for (int j = 0; j < nd; ++j) {
            outer[static_cast<std::size_t>(i) * nd + j] =
                y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)];
        }
    }
    const std::vector<double> eig = oracles::jacobiEigenvalues(outer, nd);
    double lambdaMax = 0.0;
    for (double v : eig) lambdaMax = std::max(lambdaMax, v);
    CHECK(dual == doctest::Approx(std::sqrt(lambdaMax)).epsilon(1e-10));

    // dual norm of (g, .) never exceeds |g|_0
    const FEFunction g = space.interpolate(ScalarField::sineProduct(2, 1));
    const SparseMatrix mass = assembleMass(space);
    const std::vector<double> gLoad = mass.multiply(g.coefficients);
    CHECK(dualNormHm1(space, whole, gLoad) <= normL2(g, whole) * (1.0 + 1e-12));

    CHECK_THROWS_AS(dualNormHm1(space, {{0.25, 0.25, 0.5, 0.5}}, load), Error);
}

TEST_CASE("sampled stability constants") {
    const StructuredMesh m8 = StructuredMesh::build(kUnit, 8);
    const LagrangeSpace s8 = LagrangeSpace::build(m8, 1);
    const CoefficientSet laplace = CoefficientSet::laplace();

    const StabilityConstants c8 = empiricalCoercivityContinuity(s8, laplace, 20, 7);
    CHECK(c8.coercivity > 0.0);
    CHECK(c8.coercivity <= 1.0 + 1e-12); // a0(w,w) = |w|_1^2 <= ||w||_1^2
    CHECK(c8.continuity <= 1.0 + 1e-12); // Cauchy-Schwarz on the seminorm
    CHECK(c8.lowerOrderBound == 0.0);

    const StructuredMesh m16 = StructuredMesh::build(kUnit, 16);
    const LagrangeSpace s16 = LagrangeSpace::build(m16, 1);
    const StabilityConstants c16 = empiricalCoercivityContinuity(s16, laplace, 20, 7);
    CHECK(c16.coercivity / c8.coercivity < 2.0);
    CHECK(c8.coercivity / c16.coercivity < 2.0);

    const StabilityConstants cv = empiricalCoercivityContinuity(s8, CoefficientSet::variable(), 20, 7);
    CHECK(cv.lowerOrderBound > 0.0);
    CHECK(std::isfinite(cv.continuity));
}

TEST_CASE("inverse estimate measurements") {
    const CoefficientSet laplace = CoefficientSet::laplace();
    const SubdomainSpec whole{kUnit};

    // a constant function contributes only h (gradient-free sample)
    const StructuredMesh m = StructuredMesh::build(kUnit, 8);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    FEFunction ones = space.zeroFunction();
    std::fill(ones.coefficients.begin(), ones.coefficients.end(), 1.0);
    const double constRatio = normH1(ones, whole) * m.meshSize() / normL2(ones, whole);
    CHECK(constRatio == doctest::Approx(m.meshSize()).epsilon(1e-12));

    const double c8 = measureInverseConstant(space, whole, 20, 5);
    CHECK(constRatio < c8);

    const StructuredMesh m32 = StructuredMesh::build(kUnit, 32);
    const LagrangeSpace s32 = LagrangeSpace::build(m32, 1);
    const double c32 = measureInverseConstant(s32, whole, 20, 5);
    CHECK(c8 / c32 < 2.0);
    CHECK(c32 / c8 < 2.0);

    const LagrangeSpace s8p2 = LagrangeSpace::build(m, 2);
    CHECK(measureInverseConstant(s8p2, whole, 20, 5) >= c8);
}

TEST_CASE("coefficient preset validation") {
    CoefficientSet::laplace().validate(kUnit, 1000, 1);
    CoefficientSet::variable().validate(kUnit, 1000, 1);

    CoefficientSet bad = CoefficientSet::variable();
    bad.phi = [](Vec2 p) { return p.x - 0.5; }; // negative on part of the domain
    CHECK_THROWS_AS(bad.validate(kUnit, 1000, 1), Error);
}
