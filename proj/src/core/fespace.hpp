#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "core/field.hpp"
#include "core/mesh.hpp"

namespace scaleprobe {

class LagrangeSpace;

/// A function in a LagrangeSpace, represented by its nodal coefficients.
struct FEFunction {
    const LagrangeSpace* space = nullptr;
    std::vector<double> coefficients;
};

/// Continuous Lagrange space of degree 1 or 2 on a StructuredMesh.
/// DOFs are vertex nodes (plus edge midpoints for degree 2), numbered
/// lexicographically by (y, x), vertices before midpoints.
class LagrangeSpace {
public:
    static LagrangeSpace build(const StructuredMesh& mesh, int degree);

    const StructuredMesh& mesh() const { return *mesh_; }
    int degree() const { return degree_; }
    int dim() const { return static_cast<int>(dofCoords_.size()); }
    int dofsPerCell() const { return degree_ == 1 ? 3 : 6; }

    Vec2 dofCoord(int dof) const { return dofCoords_[static_cast<std::size_t>(dof)]; }
    const std::vector<Vec2>& dofCoords() const { return dofCoords_; }
    const std::array<int, 6>& cellDofs(int cell) const {
        return cellDofs_[static_cast<std::size_t>(cell)];
    }
    const std::vector<int>& boundaryDofs() const { return boundaryDofs_; }

    /// DOFs spanning the subspace of functions compactly supported in G:
    /// a DOF is admitted iff the union of its incident cells lies in the
    /// closure of G and does not touch the part of the boundary of G that is
    /// interior to the mesh domain. For G equal to the whole domain this is
    /// the zero-trace subspace (all non-boundary DOFs).
    std::vector<int> interiorDofs(const SubdomainSpec& G) const;

    /// All DOFs carried by cells inside G (the restriction space S_h(G)).
    std::vector<int> dofsTouching(const SubdomainSpec& G) const;

    /// Nodal interpolant: coefficients are the field values at the DOF nodes.
    FEFunction interpolate(const ScalarField& u) const;

    FEFunction zeroFunction() const;

    /// Random coefficients, i.i.d. uniform on [-1,1] at the listed DOFs and
    /// zero elsewhere. Deterministic for a fixed seed.
    FEFunction randomFunction(std::uint64_t seed, const std::vector<int>& support) const;

    double evaluate(const FEFunction& f, Vec2 p) const;
    Vec2 evaluateGradient(const FEFunction& f, Vec2 p) const;

    /// Value and gradient of f restricted to one cell at a physical point
    /// (p must lie in that cell; used by per-cell quadrature loops).
    void evaluateOnCell(const FEFunction& f, int cell, Vec2 p, double& value, Vec2& grad) const;

    /// Reference-element basis values / physical gradients for a cell type.
    void basisValues(bool upper, Vec2 ref, double* values) const;
    void basisGradients(bool upper, Vec2 ref, Vec2* grads) const;

    /// Physical point of a reference coordinate within a cell, and back.
    Vec2 toPhysical(int cell, Vec2 ref) const;
    Vec2 toReference(int cell, Vec2 p) const;

private:
    LagrangeSpace() = default;

    int locateCell(Vec2 p) const;

    const StructuredMesh* mesh_ = nullptr;
    int degree_ = 1;
    std::vector<Vec2> dofCoords_;
    std::vector<std::array<int, 6>> cellDofs_;
    std::vector<int> boundaryDofs_;
    std::vector<std::vector<int>> dofCells_; // incident cells per DOF
};

} // namespace scaleprobe
