#pragma once

#include <functional>
#include <span>

#include "core/coefficients.hpp"
#include "core/fespace.hpp"
#include "core/linalg.hpp"
#include "core/quadrature.hpp"

namespace scaleprobe {

/// Quadrature exactness degrees: 2r+2 for matrix assembly, 2r+4 for norms and
/// identity checks with analytic factors.
inline int assemblyQuadDegree(const LagrangeSpace& space) { return 2 * space.degree() + 2; }
inline int normQuadDegree(const LagrangeSpace& space) { return 2 * space.degree() + 4; }

/// Principal part: entry (i,j) = integral of sum_kl a_kl d_k(phi_j) d_l(phi_i).
SparseMatrix assembleDiffusion(const LagrangeSpace& space, const CoefficientSet& coeffs);

/// Lower-order terms: entry (i,j) = integral of (b . grad phi_j) phi_i + phi phi_j phi_i.
SparseMatrix assembleLowerOrder(const LagrangeSpace& space, const CoefficientSet& coeffs);

SparseMatrix assembleMass(const LagrangeSpace& space);

/// Stiffness with identity diffusion; the H1 inner product matrix is
/// assembleMass + assembleIdentityStiffness.
SparseMatrix assembleIdentityStiffness(const LagrangeSpace& space);
SparseMatrix h1GramMatrix(const LagrangeSpace& space);

std::vector<double> assembleLoad(const LagrangeSpace& space, const ScalarField& f);

/// v' (A0 + N) u for FE functions in the same space.
double applyForm(const SparseMatrix& a0, const SparseMatrix& lower, const FEFunction& u,
                 const FEFunction& v);

/// Piecewise norms over the cells of an aligned subregion.
double normL2(const FEFunction& f, const SubdomainSpec& region);
double seminormH1(const FEFunction& f, const SubdomainSpec& region);
double normH1(const FEFunction& f, const SubdomainSpec& region);

/// Error norms against an analytic field, at the norm quadrature degree.
double errorL2(const FEFunction& f, const ScalarField& u, const SubdomainSpec& region);
double errorH1(const FEFunction& f, const ScalarField& u, const SubdomainSpec& region);

/// Integrate fn(cell, physical point) over the listed cells.
double integrateOverCells(const StructuredMesh& mesh, std::span<const int> cells, int quadDegree,
                          const std::function<double(int, Vec2)>& fn);

/// Discrete dual norm of a load functional over the compact-support subspace
/// of G: Riesz solve (z, phi)_1 = load(phi) on that subspace, returning the
/// H1 norm of z. Errors with Err::EmptySpace when the subspace is empty.
double dualNormHm1(const LagrangeSpace& space, const SubdomainSpec& G,
                   std::span<const double> load);

struct StabilityConstants {
    double coercivity;      // min a0(w,w) / ||w||_1^2 over samples
    double continuity;      // max a0(u,v) / (||u||_1 ||v||_1)
    double lowerOrderBound; // max N(u,v) / (||u||_0 ||v||_1)
};

/// Sampled stability constants over random functions in the zero-trace
/// subspace. Errors with Err::Ellipticity if a0(w,w) <= 0 for some w != 0.
StabilityConstants empiricalCoercivityContinuity(const LagrangeSpace& space,
                                                 const CoefficientSet& coeffs, int numSamples,
                                                 std::uint64_t seed);

/// Empirical inverse-estimate constant: max over random v in S_h(G) of
/// ||v||_{1,G} * h / ||v||_{0,G}.
double measureInverseConstant(const LagrangeSpace& space, const SubdomainSpec& G, int numSamples,
                              std::uint64_t seed);

} // namespace scaleprobe
