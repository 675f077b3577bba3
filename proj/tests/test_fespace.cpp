#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "core/assembly.hpp"
#include "core/fespace.hpp"

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

ScalarField bilinearXY() {
    return ScalarField([](Vec2 p, int dx, int dy) {
        if (dx == 0 && dy == 0) return p.x * p.y;
        if (dx == 1 && dy == 0) return p.y;
        if (dx == 0 && dy == 1) return p.x;
        if (dx == 1 && dy == 1) return 1.0;
        return 0.0;
    });
}

} // namespace

TEST_CASE("space dimensions") {
    const StructuredMesh m2 = StructuredMesh::build(kUnit, 2);
    CHECK(LagrangeSpace::build(m2, 1).dim() == 9);
    CHECK(LagrangeSpace::build(m2, 1).boundaryDofs().size() == 8);

    // 4 vertices + 5 edges on the 2-triangle mesh
    const StructuredMesh m1 = StructuredMesh::build(kUnit, 1);
    CHECK(LagrangeSpace::build(m1, 2).dim() == 9);

    CHECK_THROWS_AS(LagrangeSpace::build(m1, 3), Error);
}

TEST_CASE("interior dofs for the whole domain is the zero-trace set") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 2);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    const auto dofs = space.interiorDofs({kUnit});
    REQUIRE(dofs.size() == 1);
    CHECK(space.dofCoord(dofs[0]).x == doctest::Approx(0.5));
    CHECK(space.dofCoord(dofs[0]).y == doctest::Approx(0.5));
}

TEST_CASE("interior dofs for a corner subdomain (hand enumeration)") {
    // G = [0, 1/2]^2 on the n=4 grid touches the outer boundary along two
    // sides. Only the origin vertex survives: every other candidate's
    // support reaches the interior faces x = 1/2 or y = 1/2.
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    const auto dofs = space.interiorDofs({{0.0, 0.0, 0.5, 0.5}});
    REQUIRE(dofs.size() == 1);
    CHECK(space.dofCoord(dofs[0]).x == doctest::Approx(0.0));
    CHECK(space.dofCoord(dofs[0]).y == doctest::Approx(0.0));
}

TEST_CASE("interior dofs monotone under region growth") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 8);
    for (int r : {1, 2}) {
        const LagrangeSpace space = LagrangeSpace::build(m, r);
        const auto small = space.interiorDofs({{0.25, 0.25, 0.625, 0.625}});
        const auto large = space.interiorDofs({{0.125, 0.125, 0.75, 0.75}});
        const std::set<int> largeSet(large.begin(), large.end());
        for (int dof : small) CHECK(largeSet.count(dof) == 1);
    }
}

TEST_CASE("empty restriction gives no interior dofs") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 8);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    // a single-cell region admits no compactly supported basis function
    CHECK(space.interiorDofs({{0.25, 0.25, 0.375, 0.375}}).empty());
}

TEST_CASE("interpolation reproduces polynomials of the element degree") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    const LagrangeSpace p1 = LagrangeSpace::build(m, 1);
    const LagrangeSpace p2 = LagrangeSpace::build(m, 2);
    const SubdomainSpec whole{kUnit};
    CHECK(errorH1(p1.interpolate(linearX()), linearX(), whole) < 1e-13);
    CHECK(errorL2(p2.interpolate(bilinearXY()), bilinearXY(), whole) < 1e-13);
}

TEST_CASE("interpolation L2 rate for a smooth field") {
    const ScalarField u = ScalarField::sineProduct(1, 1);
    double prev = 0.0;
    int idx = 0;
    for (int n : {8, 16, 32}) {
        const StructuredMesh m = StructuredMesh::build(kUnit, n);
        const LagrangeSpace space = LagrangeSpace::build(m, 1);
        const double err = errorL2(space.interpolate(u), u, {kUnit});
        if (idx > 0) {
            const double ratio = prev / err;
            CHECK(ratio > 4.0 * 0.85);
            CHECK(ratio < 4.0 * 1.15);
        }
        prev = err;
        ++idx;
    }
}

TEST_CASE("evaluation basics") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    for (int r : {1, 2}) {
        const LagrangeSpace space = LagrangeSpace::build(m, r);
        FEFunction ones = space.zeroFunction();
        std::fill(ones.coefficients.begin(), ones.coefficients.end(), 1.0);
        Rng rng(7);
        for (int k = 0; k < 100; ++k) {
            const Vec2 p{rng.uniform(), rng.uniform()};
            CHECK(space.evaluate(ones, p) == doctest::Approx(1.0).epsilon(1e-12));
            const Vec2 g = space.evaluateGradient(ones, p);
            CHECK(std::abs(g.x) < 1e-12);
            CHECK(std::abs(g.y) < 1e-12);
        }

        const FEFunction fx = space.interpolate(linearX());
        CHECK(space.evaluate(fx, {0.3, 0.7}) == doctest::Approx(0.3).epsilon(1e-13));
        const Vec2 g = space.evaluateGradient(fx, {0.37, 0.21});
        CHECK(g.x == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(g.y) < 1e-12);
    }
}

TEST_CASE("evaluation agrees across shared edges") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    const LagrangeSpace space = LagrangeSpace::build(m, 2);
    const FEFunction f = space.interpolate(ScalarField::sineProduct(1, 2));
    // points on the diagonal of the square cell (1,0)
    for (double t : {0.1, 0.3, 0.6}) {
        const Vec2 onDiag{0.25 + t * 0.25, t * 0.25};
        double v1, v2;
        Vec2 g1, g2;
        const int square = 0 * 4 + 1;
        space.evaluateOnCell(f, 2 * square, onDiag, v1, g1);
        space.evaluateOnCell(f, 2 * square + 1, onDiag, v2, g2);
        CHECK(v1 == doctest::Approx(v2).epsilon(1e-12));
    }
}

TEST_CASE("evaluation outside the domain errors") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 2);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    const FEFunction f = space.interpolate(linearX());
    CHECK_THROWS_AS(space.evaluate(f, {1.5, 0.5}), Error);
    try {
        space.evaluate(f, {1.5, 0.5});
    } catch (const Error& e) {
        CHECK(e.code() == Err::OutOfDomain);
    }
}

TEST_CASE("interpolate is a projection on FE functions") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 3);
    for (int r : {1, 2}) {
        const LagrangeSpace space = LagrangeSpace::build(m, r);
        const FEFunction f = space.randomFunction(99, space.dofsTouching({kUnit}));
        const ScalarField asField([&space, &f](Vec2 p, int dx, int dy) {
            require(dx == 0 && dy == 0, Err::Degree, "values only");
            return space.evaluate(f, p);
        });
        const FEFunction g = space.interpolate(asField);
        for (std::size_t i = 0; i < f.coefficients.size(); ++i) {
            CHECK(g.coefficients[i] == doctest::Approx(f.coefficients[i]).epsilon(1e-13));
        }
    }
}

TEST_CASE("random functions: determinism, support, bounds") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    const LagrangeSpace space = LagrangeSpace::build(m, 1);
    const auto support = space.interiorDofs({kUnit});

    const FEFunction a = space.randomFunction(1234, support);
    const FEFunction b = space.randomFunction(1234, support);
    CHECK(a.coefficients == b.coefficients);

    const FEFunction c = space.randomFunction(1235, support);
    CHECK(a.coefficients != c.coefficients);

    const std::set<int> supportSet(support.begin(), support.end());
    int nonzero = 0;
    for (int dof = 0; dof < space.dim(); ++dof) {
        const double v = a.coefficients[static_cast<std::size_t>(dof)];
        CHECK(std::abs(v) <= 1.0);
        if (supportSet.count(dof) == 0) {
            CHECK(v == 0.0);
        } else if (v != 0.0) {
            ++nonzero;
        }
    }
    CHECK(nonzero > 0);

    const FEFunction single = space.randomFunction(7, {support[0]});
    int count = 0;
    for (double v : single.coefficients) count += (v != 0.0);
    CHECK(count == 1);

    CHECK_THROWS_AS(space.randomFunction(1, {}), Error);
}

TEST_CASE("functions supported in G vanish outside G") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 8);
    for (int r : {1, 2}) {
        const LagrangeSpace space = LagrangeSpace::build(m, r);
        const SubdomainSpec g{{0.25, 0.25, 0.75, 0.75}};
        const auto dofs = space.interiorDofs(g);
        REQUIRE(!dofs.empty());
        const FEFunction w = space.randomFunction(5, dofs);
        Rng rng(11);
        for (int k = 0; k < 200; ++k) {
            Vec2 p{rng.uniform(), rng.uniform()};
            if (g.region.contains(p)) continue;
            CHECK(std::abs(space.evaluate(w, p)) < 1e-14);
        }
    }
}

TEST_CASE("partition of unity") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 4);
    for (int r : {1, 2}) {
        const LagrangeSpace space = LagrangeSpace::build(m, r);
        double vals[6];
        Rng rng(3);
        for (int k = 0; k < 100; ++k) {
            double u = rng.uniform(), v = rng.uniform();
            if (u + v > 1.0) {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            space.basisValues(k % 2 == 1, {u, v}, vals);
            double sum = 0.0;
            for (int i = 0; i < space.dofsPerCell(); ++i) sum += vals[i];
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}
