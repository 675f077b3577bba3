#pragma once

#include <array>
#include <vector>

#include "core/common.hpp"

namespace scaleprobe {

/// A grid-aligned rectangular subdomain of a StructuredMesh.
struct SubdomainSpec {
    Rect region;
};

/// Conforming triangulation of an axis-aligned rectangle by square grid cells,
/// each split along the bottom-left to top-right diagonal. Cells are exact
/// squares, so every triangle is right-isosceles (min angle 45 degrees) and
/// the mesh size function h(x) is constant. Immutable after construction.
class StructuredMesh {
public:
    /// Subdivide the x-axis into n intervals of step = width/n and use the same
    /// step along y. The domain height must be an integer multiple of the step.
    static StructuredMesh build(const Rect& domain, int n);

    const Rect& domain() const { return domain_; }
    int subdivisionsX() const { return nx_; }
    int subdivisionsY() const { return ny_; }
    double step() const { return step_; }

    int vertexCount() const { return static_cast<int>(vertices_.size()); }
    int triangleCount() const { return static_cast<int>(triangles_.size()); }
    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
    const std::vector<bool>& boundaryVertexFlags() const { return boundaryVertex_; }

    Vec2 vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }
    const std::array<int, 3>& triangle(int t) const {
        return triangles_[static_cast<std::size_t>(t)];
    }
    double triangleArea(int t) const;

    /// Largest cell diameter, i.e. sqrt(2) * step for this family.
    double meshSize() const { return step_ * std::sqrt(2.0); }

    /// Map a coordinate to its grid-line index on the given axis; errors unless
    /// it lies within 1e-12 of a grid step from a grid line (never snaps silently
    /// beyond that).
    int snapToGrid(double coord, bool xAxis) const;

    /// Validate that a subdomain is grid-aligned and inside the domain; returns
    /// its index box {i0, j0, i1, j1}.
    std::array<int, 4> alignedIndexBox(const SubdomainSpec& sub) const;

    /// Indices of the triangles whose closure lies in sub.region.
    std::vector<int> cellsIn(const SubdomainSpec& sub) const;

    /// Move every side of the subdomain inward by `layers` grid steps.
    SubdomainSpec shrinkByLayers(const SubdomainSpec& sub, int layers) const;

    /// Largest p such that shrinkByLayers(outer, p) still contains inner.
    /// Requires inner strictly inside outer (positive separation on all sides).
    int layerCount(const SubdomainSpec& inner, const SubdomainSpec& outer) const;

    /// Grid square index (ci, cj) of the cell containing triangle t, plus
    /// whether t is the upper triangle of its square.
    struct CellRef {
        int ci;
        int cj;
        bool upper;
    };
    CellRef cellRef(int t) const;

    Rect gridRect(int i0, int j0, int i1, int j1) const;

private:
    StructuredMesh() = default;

    Rect domain_;
    int nx_ = 0;
    int ny_ = 0;
    double step_ = 0.0;
    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<bool> boundaryVertex_;
};

} // namespace scaleprobe
