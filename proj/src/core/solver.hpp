#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/coefficients.hpp"
#include "core/fespace.hpp"
#include "core/linalg.hpp"

namespace scaleprobe {

struct SolveReport {
    int iterations = 0;
    double relativeResidual = 0.0;
    std::string method;
};

constexpr double kDefaultSolveTol = 1e-10;

/// Jacobi-preconditioned conjugate gradients. Errors with Err::Definiteness
/// when an indefinite direction shows up and Err::Convergence past the
/// iteration cap (10 x dimension).
std::pair<std::vector<double>, SolveReport> solveSpd(const SparseMatrix& a,
                                                     std::span<const double> rhs,
                                                     double tol = kDefaultSolveTol);

/// General nonsingular systems: dense elimination up to dimension 2000,
/// Jacobi-preconditioned BiCGStab above that.
std::pair<std::vector<double>, SolveReport> solveGeneral(const SparseMatrix& a,
                                                         std::span<const double> rhs,
                                                         double tol = kDefaultSolveTol);

/// Galerkin solve on the compact-support subspace of G: find w spanned by
/// interiorDofs(G) with a(w, phi) = load(phi) for every basis function phi in
/// that subspace; all other coefficients are zero.
FEFunction solveLocalGalerkin(const LagrangeSpace& space, const CoefficientSet& coeffs,
                              std::span<const double> load, const SubdomainSpec& G,
                              double tol = kDefaultSolveTol);

FEFunction solveLocalGalerkin(const LagrangeSpace& space, const CoefficientSet& coeffs,
                              const ScalarField& f, const SubdomainSpec& G,
                              double tol = kDefaultSolveTol);

} // namespace scaleprobe
