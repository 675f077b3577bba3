#include "core/assembly.hpp"

#include <cmath>
#include <limits>

#include "core/solver.hpp"

namespace scaleprobe {

namespace {

using Triplet = SparseMatrix::Triplet;

// Element-matrix assembly loop: contribution(i, j) integrates
// kernel(basis j, basis i) over each cell by quadrature.
template <typename Kernel>
SparseMatrix assembleMatrix(const LagrangeSpace& space, int quadDegree, Kernel&& kernel) {
    const StructuredMesh& mesh = space.mesh();
    const TriangleQuadrature& quad = TriangleQuadrature::withExactness(quadDegree);
    const int nd = space.dofsPerCell();
    const double jac = mesh.step() * mesh.step(); // |det J|, both cell types

    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.triangleCount()) * nd * nd);

    std::vector<double> local(static_cast<std::size_t>(nd) * nd);
    double vals[6];
    Vec2 grads[6];
    for (int t = 0; t < mesh.triangleCount(); ++t) {
        const bool upper = mesh.cellRef(t).upper;
        std::fill(local.begin(), local.end(), 0.0);
        for (std::size_t q = 0; q < quad.points.size(); ++q) {
            const Vec2 ref = quad.points[q];
            const double w = quad.weights[q] * jac;
            space.basisValues(upper, ref, vals);
            space.basisGradients(upper, ref, grads);
            const Vec2 x = space.toPhysical(t, ref);
            for (int i = 0; i < nd; ++i) {
                for (int j = 0; j < nd; ++j) {
                    local[static_cast<std::size_t>(i) * nd + j] +=
                        w * kernel(x, vals[j], grads[j], vals[i], grads[i]);
                }
            }
        }
        const auto& dofs = space.cellDofs(t);
        for (int i = 0; i < nd; ++i) {
            for (int j = 0; j < nd; ++j) {
                triplets.push_back({dofs[static_cast<std::size_t>(i)], dofs[static_cast<std::size_t>(j)],
                                    local[static_cast<std::size_t>(i) * nd + j]});
            }
        }
    }
    return SparseMatrix::fromTriplets(space.dim(), std::move(triplets));
}

double cellNormSquared(const LagrangeSpace& space, const FEFunction& f, int cell, int quadDegree,
                       bool l2Part, bool h1SemiPart) {
    const StructuredMesh& mesh = space.mesh();
    const TriangleQuadrature& quad = TriangleQuadrature::withExactness(quadDegree);
    const double jac = mesh.step() * mesh.step();
    double sum = 0.0;
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
        const Vec2 x = space.toPhysical(cell, quad.points[q]);
        double value;
        Vec2 grad;
        space.evaluateOnCell(f, cell, x, value, grad);
        double term = 0.0;
        if (l2Part) term += value * value;
        if (h1SemiPart) term += dot(grad, grad);
        sum += quad.weights[q] * jac * term;
    }
    return sum;
}

double regionNormSquared(const FEFunction& f, const SubdomainSpec& region, bool l2Part,
                         bool h1SemiPart) {
    require(f.space != nullptr, Err::Dimension, "FE function has no space");
    const LagrangeSpace& space = *f.space;
    const int quadDegree = normQuadDegree(space);
    double sum = 0.0;
    for (int cell : space.mesh().cellsIn(region)) {
        sum += cellNormSquared(space, f, cell, quadDegree, l2Part, h1SemiPart);
    }
    return sum;
}

double errorNormSquared(const FEFunction& f, const ScalarField& u, const SubdomainSpec& region,
                        bool h1) {
    require(f.space != nullptr, Err::Dimension, "FE function has no space");
    const LagrangeSpace& space = *f.space;
    const StructuredMesh& mesh = space.mesh();
    const TriangleQuadrature& quad = TriangleQuadrature::withExactness(normQuadDegree(space));
    const double jac = mesh.step() * mesh.step();
    double sum = 0.0;
    for (int cell : mesh.cellsIn(region)) {
        for (std::size_t q = 0; q < quad.points.size(); ++q) {
            const Vec2 x = space.toPhysical(cell, quad.points[q]);
            double value;
            Vec2 grad;
            space.evaluateOnCell(f, cell, x, value, grad);
            const double dv = value - u.value(x);
            double term = dv * dv;
            if (h1) {
                const Vec2 dg = grad - u.gradient(x);
                term += dot(dg, dg);
            }
            sum += quad.weights[q] * jac * term;
        }
    }
    return sum;
}

} // namespace

SparseMatrix assembleDiffusion(const LagrangeSpace& space, const CoefficientSet& coeffs) {
    return assembleMatrix(space, assemblyQuadDegree(space),
                          [&coeffs](Vec2 x, double, Vec2 gu, double, Vec2 gv) {
                              const auto a = coeffs.a(x);
                              return (a[0] * gu.x + a[1] * gu.y) * gv.x +
                                     (a[2] * gu.x + a[3] * gu.y) * gv.y;
                          });
}

SparseMatrix assembleLowerOrder(const LagrangeSpace& space, const CoefficientSet& coeffs) {
    return assembleMatrix(space, assemblyQuadDegree(space),
                          [&coeffs](Vec2 x, double u, Vec2 gu, double v, Vec2) {
                              const auto b = coeffs.b(x);
                              return (b[0] * gu.x + b[1] * gu.y) * v + coeffs.phi(x) * u * v;
                          });
}

SparseMatrix assembleMass(const LagrangeSpace& space) {
    return assembleMatrix(space, assemblyQuadDegree(space),
                          [](Vec2, double u, Vec2, double v, Vec2) { return u * v; });
}

SparseMatrix assembleIdentityStiffness(const LagrangeSpace& space) {
    return assembleMatrix(space, assemblyQuadDegree(space),
                          [](Vec2, double, Vec2 gu, double, Vec2 gv) { return dot(gu, gv); });
}

SparseMatrix h1GramMatrix(const LagrangeSpace& space) {
    return assembleMass(space).plus(assembleIdentityStiffness(space));
}

std::vector<double> assembleLoad(const LagrangeSpace& space, const ScalarField& f) {
    const StructuredMesh& mesh = space.mesh();
    const TriangleQuadrature& quad = TriangleQuadrature::withExactness(normQuadDegree(space));
    const int nd = space.dofsPerCell();
    const double jac = mesh.step() * mesh.step();
    std::vector<double> load(static_cast<std::size_t>(space.dim()), 0.0);
    double vals[6];
    for (int t = 0; t < mesh.triangleCount(); ++t) {
        const bool upper = mesh.cellRef(t).upper;
        const auto& dofs = space.cellDofs(t);
        for (std::size_t q = 0; q < quad.points.size(); ++q) {
            const Vec2 ref = quad.points[q];
            space.basisValues(upper, ref, vals);
            const double fw = f.value(space.toPhysical(t, ref)) * quad.weights[q] * jac;
            for (int i = 0; i < nd; ++i) {
                load[static_cast<std::size_t>(dofs[static_cast<std::size_t>(i)])] += fw * vals[i];
            }
        }
    }
    return load;
}

double applyForm(const SparseMatrix& a0, const SparseMatrix& lower, const FEFunction& u,
                 const FEFunction& v) {
    require(u.space == v.space && u.space != nullptr, Err::Dimension,
            "form arguments live in different spaces");
    require(a0.dim() == static_cast<int>(u.coefficients.size()) && lower.dim() == a0.dim(),
            Err::Dimension, "form matrices do not match the space dimension");
    return a0.bilinear(u.coefficients, v.coefficients) +
           lower.bilinear(u.coefficients, v.coefficients);
}

double normL2(const FEFunction& f, const SubdomainSpec& region) {
    return std::sqrt(regionNormSquared(f, region, true, false));
}

double seminormH1(const FEFunction& f, const SubdomainSpec& region) {
    return std::sqrt(regionNormSquared(f, region, false, true));
}

double normH1(const FEFunction& f, const SubdomainSpec& region) {
    return std::sqrt(regionNormSquared(f, region, true, true));
}

double errorL2(const FEFunction& f, const ScalarField& u, const SubdomainSpec& region) {
    return std::sqrt(errorNormSquared(f, u, region, false));
}

double errorH1(const FEFunction& f, const ScalarField& u, const SubdomainSpec& region) {
    return std::sqrt(errorNormSquared(f, u, region, true));
}

double integrateOverCells(const StructuredMesh& mesh, std::span<const int> cells, int quadDegree,
                          const std::function<double(int, Vec2)>& fn) {
    const TriangleQuadrature& quad = TriangleQuadrature::withExactness(quadDegree);
    const double jac = mesh.step() * mesh.step();
    double sum = 0.0;
    for (int cell : cells) {
        const auto& tri = mesh.triangle(cell);
        const Vec2 a = mesh.vertex(tri[0]);
        const Vec2 b = mesh.vertex(tri[1]);
        const Vec2 c = mesh.vertex(tri[2]);
        for (std::size_t q = 0; q < quad.points.size(); ++q) {
            const Vec2 r = quad.points[q];
            const Vec2 x = a + r.x * (b - a) + r.y * (c - a);
            sum += quad.weights[q] * jac * fn(cell, x);
        }
    }
    return sum;
}

double dualNormHm1(const LagrangeSpace& space, const SubdomainSpec& G,
                   std::span<const double> load) {
    require(static_cast<int>(load.size()) == space.dim(), Err::Dimension,
            "load vector does not match the space dimension");
    const std::vector<int> sub = space.interiorDofs(G);
    require(!sub.empty(), Err::EmptySpace, "compact-support subspace of G is empty");

    const SparseMatrix gram = h1GramMatrix(space).restricted(sub);
    std::vector<double> rhs(sub.size());
    for (std::size_t i = 0; i < sub.size(); ++i) {
        rhs[i] = load[static_cast<std::size_t>(sub[i])];
    }
    auto [z, report] = solveSpd(gram, rhs, 1e-12);
    (void)report;
    return std::sqrt(std::max(0.0, gram.bilinear(z, z)));
}

StabilityConstants empiricalCoercivityContinuity(const LagrangeSpace& space,
                                                 const CoefficientSet& coeffs, int numSamples,
                                                 std::uint64_t seed) {
    require(numSamples >= 1, Err::Sample, "need at least one sample");
    const std::vector<int> support = space.interiorDofs({space.mesh().domain()});
    require(!support.empty(), Err::EmptySpace, "zero-trace subspace is empty");

    const SparseMatrix a0 = assembleDiffusion(space, coeffs);
    const SparseMatrix lower = assembleLowerOrder(space, coeffs);
    const SparseMatrix mass = assembleMass(space);
    const SparseMatrix gram = mass.plus(assembleIdentityStiffness(space));

    StabilityConstants out{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (int s = 0; s < numSamples; ++s) {
        const FEFunction w = space.randomFunction(Rng::mix(seed + 11 * static_cast<std::uint64_t>(s)), support);
        const FEFunction u = space.randomFunction(Rng::mix(seed + 11 * static_cast<std::uint64_t>(s) + 3), support);
        const FEFunction v = space.randomFunction(Rng::mix(seed + 11 * static_cast<std::uint64_t>(s) + 7), support);

        const double wh1sq = gram.bilinear(w.coefficients, w.coefficients);
        const double a0ww = a0.bilinear(w.coefficients, w.coefficients);
        require(a0ww > 0.0 || wh1sq == 0.0, Err::Ellipticity,
                "principal form is not positive on a sampled function");
        if (wh1sq > 0.0) out.coercivity = std::min(out.coercivity, a0ww / wh1sq);

        const double uh1 = std::sqrt(gram.bilinear(u.coefficients, u.coefficients));
        const double vh1 = std::sqrt(gram.bilinear(v.coefficients, v.coefficients));
        const double ul2 = std::sqrt(mass.bilinear(u.coefficients, u.coefficients));
        if (uh1 > 0.0 && vh1 > 0.0) {
            out.continuity =
                std::max(out.continuity, std::abs(a0.bilinear(u.coefficients, v.coefficients)) / (uh1 * vh1));
            if (ul2 > 0.0) {
                out.lowerOrderBound = std::max(
                    out.lowerOrderBound,
                    std::abs(lower.bilinear(u.coefficients, v.coefficients)) / (ul2 * vh1));
            }
        }
    }
    return out;
}

double measureInverseConstant(const LagrangeSpace& space, const SubdomainSpec& G, int numSamples,
                              std::uint64_t seed) {
    require(numSamples >= 1, Err::Sample, "need at least one sample");
    const std::vector<int> support = space.dofsTouching(G);
    require(!support.empty(), Err::EmptySpace, "restriction space of G is empty");
    const double h = space.mesh().meshSize();
    double worst = 0.0;
    for (int s = 0; s < numSamples; ++s) {
        const FEFunction v = space.randomFunction(Rng::mix(seed + 101 * static_cast<std::uint64_t>(s)), support);
        const double l2 = normL2(v, G);
        if (l2 == 0.0) continue;
        worst = std::max(worst, normH1(v, G) * h / l2);
    }
    return worst;
}

} // namespace scaleprobe
