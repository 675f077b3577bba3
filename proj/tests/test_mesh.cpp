#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/mesh.hpp"

using namespace scaleprobe;

namespace {
const Rect kUnit = Rect::unitSquare();
}

TEST_CASE("unit square counts") {
    const StructuredMesh m1 = StructuredMesh::build(kUnit, 1);
    CHECK(m1.vertexCount() == 4);
    CHECK(m1.triangleCount() == 2);

    const StructuredMesh m2 = StructuredMesh::build(kUnit, 2);
    CHECK(m2.vertexCount() == 9);
    CHECK(m2.triangleCount() == 8);
}

TEST_CASE("mesh size is the cell diagonal") {
    CHECK(StructuredMesh::build(kUnit, 4).meshSize() == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
    CHECK(StructuredMesh::build(kUnit, 8).meshSize() == doctest::Approx(std::sqrt(2.0) / 8).epsilon(1e-14));
    CHECK(StructuredMesh::build(kUnit, 1).meshSize() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    // 2x1 rectangle with square cells of side 1/4
    const StructuredMesh rect = StructuredMesh::build({0, 0, 2, 1}, 8);
    CHECK(rect.subdivisionsY() == 4);
    CHECK(rect.triangleCount() == 2 * 8 * 4);
    CHECK(rect.meshSize() == doctest::Approx(std::sqrt(2.0) / 4).epsilon(1e-14));
}

TEST_CASE("invalid subdivision") {
    CHECK_THROWS_AS(StructuredMesh::build(kUnit, 0), Error);
    // height not a whole number of square cells
    CHECK_THROWS_AS(StructuredMesh::build({0, 0, 2, 1}, 3), Error);
}

TEST_CASE("triangle areas tile the domain") {
    for (int n : {1, 2, 5, 8}) {
        const StructuredMesh m = StructuredMesh::build({0, 0, 2, 1}, 2 * n);
        double total = 0.0;
        for (int t = 0; t < m.triangleCount(); ++t) total += m.triangleArea(t);
        CHECK(total == doctest::Approx(m.domain().area()).epsilon(1e-12));
    }
}

TEST_CASE("cells_in") {
    const StructuredMesh m4 = StructuredMesh::build(kUnit, 4);
    CHECK(m4.cellsIn({kUnit}).size() == 32);
    CHECK(m4.cellsIn({{0, 0, 0.25, 0.25}}).size() == 2);

    const StructuredMesh m8 = StructuredMesh::build(kUnit, 8);
    CHECK(m8.cellsIn({{0.25, 0.25, 0.75, 0.75}}).size() == 32);
}

TEST_CASE("cells_in rejects misaligned subdomains") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 8);
    CHECK_THROWS_AS(m.cellsIn({{0.26, 0.25, 0.75, 0.75}}), Error);
    try {
        m.cellsIn({{0.26, 0.25, 0.75, 0.75}});
    } catch (const Error& e) {
        CHECK(e.code() == Err::Alignment);
    }
    // within the snap tolerance of a grid step: accepted
    const double nudge = 1e-13 * m.step();
    CHECK(m.cellsIn({{0.25 + nudge, 0.25, 0.75, 0.75}}).size() == 32);
}

TEST_CASE("shrink_by_layers") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 8);
    const SubdomainSpec whole{kUnit};
    const SubdomainSpec s1 = m.shrinkByLayers(whole, 1);
    CHECK(s1.region == Rect{0.125, 0.125, 0.875, 0.875});

    const SubdomainSpec mid{{0.25, 0.25, 0.75, 0.75}};
    CHECK(m.shrinkByLayers(mid, 1).region == Rect{0.375, 0.375, 0.625, 0.625});
    CHECK_THROWS_AS(m.shrinkByLayers(mid, 2), Error);
    try {
        m.shrinkByLayers(mid, 2);
    } catch (const Error& e) {
        CHECK(e.code() == Err::DegenerateSubdomain);
    }
}

TEST_CASE("shrink composes additively") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 16);
    const SubdomainSpec whole{kUnit};
    for (int j1 : {1, 2, 3}) {
        for (int j2 : {1, 2}) {
            const SubdomainSpec a = m.shrinkByLayers(m.shrinkByLayers(whole, j1), j2);
            const SubdomainSpec b = m.shrinkByLayers(whole, j1 + j2);
            CHECK(a.region == b.region);
        }
    }
}

TEST_CASE("layer_count") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 8);
    CHECK(m.layerCount({{0.375, 0.375, 0.625, 0.625}}, {{0.125, 0.125, 0.875, 0.875}}) == 2);
    CHECK(m.layerCount({{0.125, 0.125, 0.875, 0.875}}, {kUnit}) == 1);
    CHECK_THROWS_AS(m.layerCount({kUnit}, {kUnit}), Error);
    try {
        m.layerCount({kUnit}, {kUnit});
    } catch (const Error& e) {
        CHECK(e.code() == Err::Containment);
    }
}

TEST_CASE("layer_count inverts shrink_by_layers") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 16);
    const SubdomainSpec outer{{0.125, 0.125, 0.875, 0.875}};
    for (int j = 1; j <= 5; ++j) {
        CHECK(m.layerCount(m.shrinkByLayers(outer, j), outer) == j);
    }
}

TEST_CASE("nested subdomains have nested cell sets") {
    const StructuredMesh m = StructuredMesh::build(kUnit, 8);
    const SubdomainSpec outer{{0.125, 0.125, 0.875, 0.875}};
    const SubdomainSpec inner{{0.25, 0.25, 0.75, 0.75}};
    const auto outerCells = m.cellsIn(outer);
    for (int c : m.cellsIn(inner)) {
        CHECK(std::find(outerCells.begin(), outerCells.end(), c) != outerCells.end());
    }
}
