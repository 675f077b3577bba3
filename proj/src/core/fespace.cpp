#include "core/fespace.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace scaleprobe {

namespace {

// Barycentric coordinates on the reference triangle (0,0)-(1,0)-(0,1).
inline void barycentric(Vec2 r, double* lambda) {
    lambda[0] = 1.0 - r.x - r.y;
    lambda[1] = r.x;
    lambda[2] = r.y;
}

} // namespace

LagrangeSpace LagrangeSpace::build(const StructuredMesh& mesh, int degree) {
    require(degree == 1 || degree == 2, Err::Degree,
            "unsupported polynomial degree " + std::to_string(degree));

    LagrangeSpace space;
    space.mesh_ = &mesh;
    space.degree_ = degree;

    const int nx = mesh.subdivisionsX();
    const int ny = mesh.subdivisionsY();
    space.dofCoords_ = mesh.vertices();

    std::vector<bool> isBoundary(space.dofCoords_.size());
    for (std::size_t i = 0; i < isBoundary.size(); ++i) {
        isBoundary[i] = mesh.boundaryVertexFlags()[i];
    }

    // Edge-midpoint DOFs for degree 2, ordered lexicographically by (y, x)
    // via integer half-step keys.
    std::vector<int> hEdgeDof, vEdgeDof, dEdgeDof;
    if (degree == 2) {
        struct EdgeKey {
            int ykey;
            int xkey;
            int kind; // 0 horizontal, 1 vertical, 2 diagonal
            int i;
            int j;
        };
        std::vector<EdgeKey> edges;
        edges.reserve(static_cast<std::size_t>(nx) * (ny + 1) +
                      static_cast<std::size_t>(nx + 1) * ny +
                      static_cast<std::size_t>(nx) * ny);
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i < nx; ++i) edges.push_back({2 * j, 2 * i + 1, 0, i, j});
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i <= nx; ++i) edges.push_back({2 * j + 1, 2 * i, 1, i, j});
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) edges.push_back({2 * j + 1, 2 * i + 1, 2, i, j});
        std::sort(edges.begin(), edges.end(), [](const EdgeKey& a, const EdgeKey& b) {
            return std::tie(a.ykey, a.xkey) < std::tie(b.ykey, b.xkey);
        });

        hEdgeDof.assign(static_cast<std::size_t>(nx) * (ny + 1), -1);
        vEdgeDof.assign(static_cast<std::size_t>(nx + 1) * ny, -1);
        dEdgeDof.assign(static_cast<std::size_t>(nx) * ny, -1);
        const double s = mesh.step();
        const Rect dom = mesh.domain();
        for (const EdgeKey& e : edges) {
            const int dof = static_cast<int>(space.dofCoords_.size());
            space.dofCoords_.push_back(
                {dom.xmin + 0.5 * e.xkey * s, dom.ymin + 0.5 * e.ykey * s});
            bool boundary = false;
            switch (e.kind) {
            case 0:
                hEdgeDof[static_cast<std::size_t>(e.j) * nx + e.i] = dof;
                boundary = (e.j == 0 || e.j == ny);
                break;
            case 1:
                vEdgeDof[static_cast<std::size_t>(e.j) * (nx + 1) + e.i] = dof;
                boundary = (e.i == 0 || e.i == nx);
                break;
            default:
                dEdgeDof[static_cast<std::size_t>(e.j) * nx + e.i] = dof;
                break;
            }
            isBoundary.push_back(boundary);
        }
    }

    for (int dof = 0; dof < static_cast<int>(isBoundary.size()); ++dof) {
        if (isBoundary[static_cast<std::size_t>(dof)]) space.boundaryDofs_.push_back(dof);
    }

    // Per-cell DOF lists. Vertex order matches the mesh triangles; midpoints
    // follow the opposite-vertex convention (m_bc, m_ac, m_ab).
    space.cellDofs_.resize(static_cast<std::size_t>(mesh.triangleCount()), {-1, -1, -1, -1, -1, -1});
    for (int t = 0; t < mesh.triangleCount(); ++t) {
        const auto& tri = mesh.triangle(t);
        auto& dofs = space.cellDofs_[static_cast<std::size_t>(t)];
        dofs[0] = tri[0];
        dofs[1] = tri[1];
        dofs[2] = tri[2];
        if (degree == 2) {
            const auto ref = mesh.cellRef(t);
            const int i = ref.ci;
            const int j = ref.cj;
            if (!ref.upper) {
                // (v00, v10, v11): edges b-c vertical(i+1,j), a-c diagonal, a-b horizontal(i,j)
                dofs[3] = vEdgeDof[static_cast<std::size_t>(j) * (nx + 1) + (i + 1)];
                dofs[4] = dEdgeDof[static_cast<std::size_t>(j) * nx + i];
                dofs[5] = hEdgeDof[static_cast<std::size_t>(j) * nx + i];
            } else {
                // (v00, v11, v01): edges b-c horizontal(i,j+1), a-c vertical(i,j), a-b diagonal
                dofs[3] = hEdgeDof[static_cast<std::size_t>(j + 1) * nx + i];
                dofs[4] = vEdgeDof[static_cast<std::size_t>(j) * (nx + 1) + i];
                dofs[5] = dEdgeDof[static_cast<std::size_t>(j) * nx + i];
            }
        }
    }

    space.dofCells_.resize(space.dofCoords_.size());
    for (int t = 0; t < mesh.triangleCount(); ++t) {
        for (int k = 0; k < space.dofsPerCell(); ++k) {
            space.dofCells_[static_cast<std::size_t>(space.cellDofs_[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)])]
                .push_back(t);
        }
    }
    return space;
}

std::vector<int> LagrangeSpace::interiorDofs(const SubdomainSpec& G) const {
    const auto box = mesh_->alignedIndexBox(G);
    const int nx = mesh_->subdivisionsX();
    const int ny = mesh_->subdivisionsY();

    if (box[0] == 0 && box[1] == 0 && box[2] == nx && box[3] == ny) {
        // G is the whole domain: the compact-support subspace is the
        // zero-trace subspace.
        std::vector<int> result;
        std::size_t b = 0;
        for (int dof = 0; dof < dim(); ++dof) {
            if (b < boundaryDofs_.size() && boundaryDofs_[b] == dof) {
                ++b;
                continue;
            }
            result.push_back(dof);
        }
        return result;
    }

    const bool leftFree = box[0] > 0;
    const bool rightFree = box[2] < nx;
    const bool bottomFree = box[1] > 0;
    const bool topFree = box[3] < ny;

    std::vector<int> result;
    for (int dof = 0; dof < dim(); ++dof) {
        bool ok = !dofCells_[static_cast<std::size_t>(dof)].empty();
        for (int t : dofCells_[static_cast<std::size_t>(dof)]) {
            const auto ref = mesh_->cellRef(t);
            if (ref.ci < box[0] || ref.ci >= box[2] || ref.cj < box[1] || ref.cj >= box[3]) {
                ok = false; // support leaves the closure of G
                break;
            }
            if ((leftFree && ref.ci == box[0]) || (rightFree && ref.ci + 1 == box[2]) ||
                (bottomFree && ref.cj == box[1]) || (topFree && ref.cj + 1 == box[3])) {
                ok = false; // support touches the interior part of the boundary of G
                break;
            }
        }
        if (ok) result.push_back(dof);
    }
    return result;
}

std::vector<int> LagrangeSpace::dofsTouching(const SubdomainSpec& G) const {
    std::vector<int> result;
    for (int t : mesh_->cellsIn(G)) {
        for (int k = 0; k < dofsPerCell(); ++k) {
            result.push_back(cellDofs_[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)]);
        }
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

FEFunction LagrangeSpace::interpolate(const ScalarField& u) const {
    FEFunction f;
    f.space = this;
    f.coefficients.resize(dofCoords_.size());
    for (std::size_t i = 0; i < dofCoords_.size(); ++i) {
        f.coefficients[i] = u.value(dofCoords_[i]);
    }
    return f;
}

FEFunction LagrangeSpace::zeroFunction() const {
    FEFunction f;
    f.space = this;
    f.coefficients.assign(dofCoords_.size(), 0.0);
    return f;
}

FEFunction LagrangeSpace::randomFunction(std::uint64_t seed, const std::vector<int>& support) const {
    require(!support.empty(), Err::EmptySupport, "random FE function needs a nonempty support");
    Rng rng = Rng::stream(seed, 0x52414e44ULL);
    FEFunction f = zeroFunction();
    for (int dof : support) {
        require(dof >= 0 && dof < dim(), Err::Dimension, "support DOF index out of range");
        f.coefficients[static_cast<std::size_t>(dof)] = rng.symmetric();
    }
    return f;
}

void LagrangeSpace::basisValues(bool /*upper*/, Vec2 ref, double* values) const {
    double l[3];
    barycentric(ref, l);
    if (degree_ == 1) {
        values[0] = l[0];
        values[1] = l[1];
        values[2] = l[2];
        return;
    }
    values[0] = l[0] * (2.0 * l[0] - 1.0);
    values[1] = l[1] * (2.0 * l[1] - 1.0);
    values[2] = l[2] * (2.0 * l[2] - 1.0);
    values[3] = 4.0 * l[1] * l[2];
    values[4] = 4.0 * l[0] * l[2];
    values[5] = 4.0 * l[0] * l[1];
}

void LagrangeSpace::basisGradients(bool upper, Vec2 ref, Vec2* grads) const {
    // Reference gradients of the barycentric coordinates.
    static constexpr Vec2 dl[3] = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
    double l[3];
    barycentric(ref, l);

    Vec2 refGrad[6];
    int count = 3;
    if (degree_ == 1) {
        refGrad[0] = dl[0];
        refGrad[1] = dl[1];
        refGrad[2] = dl[2];
    } else {
        count = 6;
        for (int k = 0; k < 3; ++k) refGrad[static_cast<std::size_t>(k)] = (4.0 * l[k] - 1.0) * dl[k];
        refGrad[3] = 4.0 * (l[1] * dl[2] + l[2] * dl[1]);
        refGrad[4] = 4.0 * (l[0] * dl[2] + l[2] * dl[0]);
        refGrad[5] = 4.0 * (l[0] * dl[1] + l[1] * dl[0]);
    }

    // Constant inverse-transpose Jacobians of the two congruence classes.
    const double inv = 1.0 / mesh_->step();
    for (int k = 0; k < count; ++k) {
        const Vec2 g = refGrad[static_cast<std::size_t>(k)];
        if (!upper) {
            grads[k] = {inv * g.x, inv * (g.y - g.x)};
        } else {
            grads[k] = {inv * (g.x - g.y), inv * g.y};
        }
    }
}

Vec2 LagrangeSpace::toPhysical(int cell, Vec2 ref) const {
    const auto& tri = mesh_->triangle(cell);
    const Vec2 a = mesh_->vertex(tri[0]);
    const Vec2 b = mesh_->vertex(tri[1]);
    const Vec2 c = mesh_->vertex(tri[2]);
    return a + ref.x * (b - a) + ref.y * (c - a);
}

Vec2 LagrangeSpace::toReference(int cell, Vec2 p) const {
    const auto ref = mesh_->cellRef(cell);
    const double s = mesh_->step();
    const Rect dom = mesh_->domain();
    const double u = (p.x - dom.xmin) / s - ref.ci;
    const double v = (p.y - dom.ymin) / s - ref.cj;
    return ref.upper ? Vec2{u, v - u} : Vec2{u - v, v};
}

int LagrangeSpace::locateCell(Vec2 p) const {
    const Rect dom = mesh_->domain();
    const double tol = 1e-12 * std::max(dom.width(), dom.height());
    require(p.x >= dom.xmin - tol && p.x <= dom.xmax + tol && p.y >= dom.ymin - tol &&
                p.y <= dom.ymax + tol,
            Err::OutOfDomain, "evaluation point lies outside the mesh domain");
    const double s = mesh_->step();
    const int nx = mesh_->subdivisionsX();
    const int ny = mesh_->subdivisionsY();
    const int ci = std::clamp(static_cast<int>(std::floor((p.x - dom.xmin) / s)), 0, nx - 1);
    const int cj = std::clamp(static_cast<int>(std::floor((p.y - dom.ymin) / s)), 0, ny - 1);
    const double u = (p.x - dom.xmin) / s - ci;
    const double v = (p.y - dom.ymin) / s - cj;
    const int square = cj * nx + ci;
    return v <= u ? 2 * square : 2 * square + 1;
}

void LagrangeSpace::evaluateOnCell(const FEFunction& f, int cell, Vec2 p, double& value,
                                   Vec2& grad) const {
    const Vec2 ref = toReference(cell, p);
    const bool upper = mesh_->cellRef(cell).upper;
    double vals[6];
    Vec2 grads[6];
    basisValues(upper, ref, vals);
    basisGradients(upper, ref, grads);
    value = 0.0;
    grad = {0.0, 0.0};
    const auto& dofs = cellDofs_[static_cast<std::size_t>(cell)];
    for (int k = 0; k < dofsPerCell(); ++k) {
        const double c = f.coefficients[static_cast<std::size_t>(dofs[static_cast<std::size_t>(k)])];
        value += c * vals[k];
        grad = grad + c * grads[k];
    }
}

double LagrangeSpace::evaluate(const FEFunction& f, Vec2 p) const {
    require(f.space == this && f.coefficients.size() == dofCoords_.size(), Err::Dimension,
            "FE function does not belong to this space");
    double value;
    Vec2 grad;
    evaluateOnCell(f, locateCell(p), p, value, grad);
    return value;
}

Vec2 LagrangeSpace::evaluateGradient(const FEFunction& f, Vec2 p) const {
    require(f.space == this && f.coefficients.size() == dofCoords_.size(), Err::Dimension,
            "FE function does not belong to this space");
    double value;
    Vec2 grad;
    evaluateOnCell(f, locateCell(p), p, value, grad);
    return grad;
}

} // namespace scaleprobe
