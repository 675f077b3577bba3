#include "core/mesh.hpp"

#include <cmath>

namespace scaleprobe {

StructuredMesh StructuredMesh::build(const Rect& domain, int n) {
    require(domain.valid(), Err::InvalidSubdivision, "mesh domain is not a valid rectangle");
    require(n >= 1, Err::InvalidSubdivision, "subdivision count must be >= 1");

    StructuredMesh mesh;
    mesh.domain_ = domain;
    mesh.nx_ = n;
    mesh.step_ = domain.width() / n;

    const double nyReal = domain.height() / mesh.step_;
    const int ny = static_cast<int>(std::lround(nyReal));
    require(ny >= 1 && std::abs(nyReal - ny) <= 1e-9,
            Err::InvalidSubdivision,
            "domain height is not an integer multiple of the grid step (cells must be square)");
    mesh.ny_ = ny;

    const int vx = n + 1;
    const int vy = ny + 1;
    mesh.vertices_.reserve(static_cast<std::size_t>(vx) * vy);
    mesh.boundaryVertex_.reserve(static_cast<std::size_t>(vx) * vy);
    for (int j = 0; j < vy; ++j) {
        for (int i = 0; i < vx; ++i) {
            mesh.vertices_.push_back({domain.xmin + i * mesh.step_, domain.ymin + j * mesh.step_});
            mesh.boundaryVertex_.push_back(i == 0 || i == n || j == 0 || j == ny);
        }
    }

    mesh.triangles_.reserve(static_cast<std::size_t>(2) * n * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < n; ++i) {
            const int v00 = j * vx + i;
            const int v10 = v00 + 1;
            const int v01 = v00 + vx;
            const int v11 = v01 + 1;
            // diagonal from bottom-left to top-right
            mesh.triangles_.push_back({v00, v10, v11});
            mesh.triangles_.push_back({v00, v11, v01});
        }
    }
    return mesh;
}

double StructuredMesh::triangleArea(int t) const {
    const auto& tri = triangles_[static_cast<std::size_t>(t)];
    const Vec2 a = vertex(tri[0]);
    const Vec2 b = vertex(tri[1]);
    const Vec2 c = vertex(tri[2]);
    return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

int StructuredMesh::snapToGrid(double coord, bool xAxis) const {
    const double origin = xAxis ? domain_.xmin : domain_.ymin;
    const double idxReal = (coord - origin) / step_;
    const int idx = static_cast<int>(std::lround(idxReal));
    if (std::abs(idxReal - idx) > 1e-12) {
        fail(Err::Alignment,
             "coordinate " + std::to_string(coord) + " does not lie on a grid line");
    }
    return idx;
}

std::array<int, 4> StructuredMesh::alignedIndexBox(const SubdomainSpec& sub) const {
    require(sub.region.valid(), Err::Alignment, "subdomain rectangle is degenerate");
    require(domain_.contains(sub.region), Err::Alignment, "subdomain is not inside the mesh domain");
    const int i0 = snapToGrid(sub.region.xmin, true);
    const int i1 = snapToGrid(sub.region.xmax, true);
    const int j0 = snapToGrid(sub.region.ymin, false);
    const int j1 = snapToGrid(sub.region.ymax, false);
    require(i0 >= 0 && j0 >= 0 && i1 <= nx_ && j1 <= ny_ && i0 < i1 && j0 < j1,
            Err::Alignment, "subdomain index box is out of range");
    return {i0, j0, i1, j1};
}

std::vector<int> StructuredMesh::cellsIn(const SubdomainSpec& sub) const {
    const auto box = alignedIndexBox(sub);
    std::vector<int> cells;
    cells.reserve(static_cast<std::size_t>(2) * (box[2] - box[0]) * (box[3] - box[1]));
    for (int j = box[1]; j < box[3]; ++j) {
        for (int i = box[0]; i < box[2]; ++i) {
            const int square = j * nx_ + i;
            cells.push_back(2 * square);
            cells.push_back(2 * square + 1);
        }
    }
    return cells;
}

SubdomainSpec StructuredMesh::shrinkByLayers(const SubdomainSpec& sub, int layers) const {
    require(layers >= 0, Err::DegenerateSubdomain, "layer count must be >= 0");
    const auto box = alignedIndexBox(sub);
    const int i0 = box[0] + layers;
    const int j0 = box[1] + layers;
    const int i1 = box[2] - layers;
    const int j1 = box[3] - layers;
    require(i0 < i1 && j0 < j1, Err::DegenerateSubdomain,
            "shrinking by " + std::to_string(layers) + " layers leaves an empty rectangle");
    return {gridRect(i0, j0, i1, j1)};
}

int StructuredMesh::layerCount(const SubdomainSpec& inner, const SubdomainSpec& outer) const {
    const auto in = alignedIndexBox(inner);
    const auto out = alignedIndexBox(outer);
    require(in[0] >= out[0] && in[1] >= out[1] && in[2] <= out[2] && in[3] <= out[3],
            Err::Containment, "inner subdomain is not contained in the outer one");
    const int sep = std::min(std::min(in[0] - out[0], in[1] - out[1]),
                             std::min(out[2] - in[2], out[3] - in[3]));
    require(sep >= 1, Err::Containment, "inner subdomain is not strictly inside the outer one");
    return sep;
}

StructuredMesh::CellRef StructuredMesh::cellRef(int t) const {
    const int square = t / 2;
    return {square % nx_, square / nx_, (t % 2) == 1};
}

Rect StructuredMesh::gridRect(int i0, int j0, int i1, int j1) const {
    return {domain_.xmin + i0 * step_, domain_.ymin + j0 * step_,
            domain_.xmin + i1 * step_, domain_.ymin + j1 * step_};
}

} // namespace scaleprobe
