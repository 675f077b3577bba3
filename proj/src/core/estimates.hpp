#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/assembly.hpp"
#include "core/scaling.hpp"
#include "core/solver.hpp"

namespace scaleprobe {

/// One measured sample of an inequality: lhs, named rhs terms, and the ratio
/// lhs / sum(rhs) (clamped at zero from below so the ratio stays a valid
/// empirical constant even for signed left-hand sides).
struct EstimateRecord {
    std::string experiment;
    std::string preset;
    int r = 1;
    int n = 0;
    double h = 0.0;
    double d = 0.0;       // configured square side (0 when not applicable)
    double dOmega0 = 0.0; // diameter of the reference subdomain rectangle
    int p = 0;
    std::uint64_t seed = 0;
    double lhs = 0.0;
    std::vector<std::pair<std::string, double>> rhsTerms;
    double ratio = 0.0;
    std::vector<std::pair<std::string, double>> extras;

    double rhsSum() const;
    void finalize(); // computes ratio and checks finiteness
};

/// Term-by-term breakdown of the cutoff energy identity.
struct IdentityBreakdown {
    double a0Term = 0.0;
    double aTerm = 0.0;
    double nTerm = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double defect = 0.0;
};

struct FitResult {
    double cEmp = 0.0;
    int samples = 0;
    bool hasSlope = false;
    double slope = 0.0;
    double slopeCi = 0.0; // 1.96 * standard error (normal-approximation 95%)
    double tau = 0.0;     // Kendall tau-b of (x, y)
};

/// Least-squares fit of log10(y) against log10(x); needs at least three
/// distinct abscissae (Err::Sample otherwise). Nonpositive y values are
/// floored at 1e-300 before taking logs.
FitResult fitLogLog(std::span<const double> x, std::span<const double> y);

double kendallTauB(std::span<const double> x, std::span<const double> y);

/// Empirical constant from a batch of records: cEmp = max ratio.
FitResult fitConstant(std::span<const EstimateRecord> records);

/// Empirical constant plus a log-log slope of `y` against `x` over the records.
FitResult fitConstant(std::span<const EstimateRecord> records,
                      const std::function<double(const EstimateRecord&)>& x,
                      const std::function<double(const EstimateRecord&)>& y);

/// Centered square subdomain of the given side, snapped to the grid
/// (Err::Alignment when the side does not fit the grid).
SubdomainSpec centeredSquare(const StructuredMesh& mesh, double side);

/// Self-similar cutoff for a region G: support inset by an eighth of each
/// side length, plateau by a quarter. The family is identical across mesh
/// sizes and rescales with G, so measured constants stay comparable.
CutoffFunction fractionalCutoff(const Rect& g);

/// Interpolate omega * w and zero every DOF outside the compact-support
/// subspace of the omega support rectangle; the admissible set is passed in
/// (typically space.interiorDofs({omega.support()})).
FEFunction superapproxCandidate(const LagrangeSpace& space, const CutoffFunction& omega,
                                const FEFunction& w, const std::vector<int>& admissible);

/// Scaled cutoff-approximation measurement: lhs = |omega w - v|_{1,G} for the
/// interpolated candidate v, rhs terms d^-1 (h/d)^r |w|_0 and (h/d) |w|_1.
EstimateRecord superapproxExperiment(const LagrangeSpace& space, const SubdomainSpec& G,
                                     const CutoffFunction& omega, const FEFunction& w);

/// Cutoff energy inequality: lhs = a0(omega w, omega w) - 2 a(w, omega^2 w),
/// rhs = |w|_{0,Omega0}^2.
EstimateRecord techniqueLemmaExperiment(const LagrangeSpace& space, const CoefficientSet& coeffs,
                                        const CutoffFunction& omega, const FEFunction& w,
                                        const SubdomainSpec& omega0);

/// Quadrature check of the energy identity for analytic u: integrates all five
/// terms over the omega support subdivided subdiv x subdiv with the given rule.
IdentityBreakdown identityCheck(const ScalarField& u, const CutoffFunction& omega,
                                const CoefficientSet& coeffs, int quadDegree, int subdiv = 12);

/// Layered local measurement: solve the local Galerkin problem on Omega0,
/// then compare |w|_{1,D} against the layered bound with unit constants.
EstimateRecord localEstimateExperiment(const LagrangeSpace& space, const CoefficientSet& coeffs,
                                       std::span<const double> load, const SubdomainSpec& D,
                                       const SubdomainSpec& omega0);

EstimateRecord localEstimateExperiment(const LagrangeSpace& space, const CoefficientSet& coeffs,
                                       const ScalarField& f, const SubdomainSpec& D,
                                       const SubdomainSpec& omega0);

struct NaiveSweepResult {
    std::vector<EstimateRecord> records; // one per subdomain side, largest first
    FitResult fit;                       // log-log slope of the naive ratio vs side
    bool strictlyIncreasingAsDShrinks = false;
};

/// Naive-constant sweep: for each side d (>= 3 values), the plain ratio
/// |w|_{1,D} / (|w|_{0,Omega0} + |f|_{-1,Omega0}) with Omega0 the centered
/// square of side d and D its p-layer shrink.
NaiveSweepResult naiveConstantSweep(const LagrangeSpace& space, const CoefficientSet& coeffs,
                                    const ScalarField& f, std::span<const double> dSides, int p);

struct ConvergenceResult {
    std::vector<EstimateRecord> records; // one per mesh size, extras: h1_error, l2_error
    FitResult h1Fit;
    FitResult l2Fit;
};

/// One mesh size of the convergence study: global zero-boundary solve with
/// f = L u, errors in extras (h1_error, l2_error).
EstimateRecord convergencePoint(const CoefficientSet& coeffs, const ScalarField& uExact,
                                int degree, int n);

/// Manufactured-solution convergence: global zero-boundary solves with
/// f = L u over a family of mesh sizes; fits H1 and L2 error slopes vs h.
ConvergenceResult convergenceExperiment(const CoefficientSet& coeffs, const ScalarField& uExact,
                                        int degree, std::span<const int> nValues);

} // namespace scaleprobe
