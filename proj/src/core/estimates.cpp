#include "core/estimates.hpp"

#include <algorithm>
#include <cmath>

namespace scaleprobe {

namespace {

bool finiteOr(double v) { return std::isfinite(v); }

void requireStrictlyInside(const Rect& inner, const Rect& outer, const char* what) {
    require(inner.xmin > outer.xmin && inner.xmax < outer.xmax && inner.ymin > outer.ymin &&
                inner.ymax < outer.ymax,
            Err::Support, std::string(what) + " must lie strictly inside its enclosing region");
}

} // namespace

double EstimateRecord::rhsSum() const {
    double sum = 0.0;
    for (const auto& [name, value] : rhsTerms) sum += value;
    return sum;
}

void EstimateRecord::finalize() {
    const double sum = rhsSum();
    if (sum > 0.0) {
        ratio = std::max(lhs, 0.0) / sum;
    } else {
        require(std::abs(lhs) < 1e-12, Err::Data,
                "vanishing right-hand side with a nonzero left-hand side");
        ratio = 0.0;
    }
    bool ok = finiteOr(lhs) && finiteOr(ratio) && finiteOr(h) && finiteOr(d) && finiteOr(dOmega0);
    for (const auto& [name, value] : rhsTerms) ok = ok && finiteOr(value);
    for (const auto& [name, value] : extras) ok = ok && finiteOr(value);
    require(ok, Err::Data, "estimate record contains non-finite entries");
}

FitResult fitLogLog(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), Err::Dimension, "fit input length mismatch");
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i]), Err::Data,
                "fit abscissae must be positive and finite");
        lx[i] = std::log10(x[i]);
        ly[i] = std::log10(std::max(y[i], 1e-300));
    }
    std::vector<double> distinct = lx;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    require(distinct.size() >= 3, Err::Sample,
            "slope fit needs at least three distinct abscissae");

    const double nPts = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= nPts;
    my /= nPts;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    FitResult fit;
    fit.samples = static_cast<int>(lx.size());
    fit.hasSlope = true;
    fit.slope = sxy / sxx;
    const double intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double rres = ly[i] - (intercept + fit.slope * lx[i]);
        ssr += rres * rres;
    }
    const double dof = std::max(nPts - 2.0, 1.0);
    fit.slopeCi = 1.96 * std::sqrt(ssr / dof / sxx);
    fit.tau = kendallTauB(x, y);
    return fit;
}

double kendallTauB(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size(), Err::Dimension, "tau input length mismatch");
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    long long concordant = 0, discordant = 0, tiesX = 0, tiesY = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0) ++tiesX;
            if (dy == 0.0) ++tiesY;
            if (dx == 0.0 || dy == 0.0) continue;
            if ((dx > 0.0) == (dy > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const long long total = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
    const double denom = std::sqrt(static_cast<double>(total - tiesX)) *
                         std::sqrt(static_cast<double>(total - tiesY));
    return denom > 0.0 ? static_cast<double>(concordant - discordant) / denom : 0.0;
}

FitResult fitConstant(std::span<const EstimateRecord> records) {
    require(!records.empty(), Err::Sample, "empirical constant needs at least one record");
    FitResult fit;
    fit.samples = static_cast<int>(records.size());
    for (const EstimateRecord& rec : records) {
        require(std::isfinite(rec.ratio), Err::Data, "non-finite ratio in records");
        fit.cEmp = std::max(fit.cEmp, rec.ratio);
    }
    return fit;
}

FitResult fitConstant(std::span<const EstimateRecord> records,
                      const std::function<double(const EstimateRecord&)>& x,
                      const std::function<double(const EstimateRecord&)>& y) {
    FitResult base = fitConstant(records);
    std::vector<double> xs, ys;
    xs.reserve(records.size());
    ys.reserve(records.size());
    for (const EstimateRecord& rec : records) {
        xs.push_back(x(rec));
        ys.push_back(y(rec));
    }
    FitResult fit = fitLogLog(xs, ys);
    fit.cEmp = base.cEmp;
    return fit;
}

SubdomainSpec centeredSquare(const StructuredMesh& mesh, double side) {
    const Rect dom = mesh.domain();
    const double cx = 0.5 * (dom.xmin + dom.xmax);
    const double cy = 0.5 * (dom.ymin + dom.ymax);
    const SubdomainSpec sub{{cx - 0.5 * side, cy - 0.5 * side, cx + 0.5 * side, cy + 0.5 * side}};
    mesh.alignedIndexBox(sub); // alignment check
    return sub;
}

CutoffFunction fractionalCutoff(const Rect& g) {
    const double ix = g.width() / 8.0;
    const double iy = g.height() / 8.0;
    const Rect support{g.xmin + ix, g.ymin + iy, g.xmax - ix, g.ymax - iy};
    const Rect plateau{g.xmin + 2.0 * ix, g.ymin + 2.0 * iy, g.xmax - 2.0 * ix, g.ymax - 2.0 * iy};
    return CutoffFunction::build(plateau, support);
}

FEFunction superapproxCandidate(const LagrangeSpace& space, const CutoffFunction& omega,
                                const FEFunction& w, const std::vector<int>& admissible) {
    require(w.space == &space, Err::Dimension, "w does not belong to the given space");
    FEFunction v = space.zeroFunction();
    for (int dof : admissible) {
        const Vec2 node = space.dofCoord(dof);
        v.coefficients[static_cast<std::size_t>(dof)] =
            omega.value(node) * w.coefficients[static_cast<std::size_t>(dof)];
    }
    return v;
}

EstimateRecord superapproxExperiment(const LagrangeSpace& space, const SubdomainSpec& G,
                                     const CutoffFunction& omega, const FEFunction& w) {
    requireStrictlyInside(omega.support(), G.region, "cutoff support");
    require(w.space == &space, Err::Dimension, "w does not belong to the given space");

    const StructuredMesh& mesh = space.mesh();
    const std::vector<int> admissible = space.interiorDofs({omega.support()});
    const FEFunction v = superapproxCandidate(space, omega, w, admissible);

    const int quadDegree = normQuadDegree(space);
    const std::vector<int> cells = mesh.cellsIn(G);

    auto integrand = [&](int cell, Vec2 x) {
        double wv;
        Vec2 wg;
        space.evaluateOnCell(w, cell, x, wv, wg);
        double vv;
        Vec2 vg;
        space.evaluateOnCell(v, cell, x, vv, vg);
        const double om = omega.value(x);
        const Vec2 og = omega.gradient(x);
        const double diff = om * wv - vv;
        const Vec2 gdiff = {om * wg.x + og.x * wv - vg.x, om * wg.y + og.y * wv - vg.y};
        return diff * diff + dot(gdiff, gdiff);
    };
    const double lhsSq = integrateOverCells(mesh, cells, quadDegree, integrand);

    // Quadrature certification: recompute a 5% cell subsample one level higher.
    std::vector<int> subsample;
    for (std::size_t i = 0; i < cells.size(); i += 20) subsample.push_back(cells[i]);
    const double coarse = integrateOverCells(mesh, subsample, quadDegree, integrand);
    const double fine = integrateOverCells(mesh, subsample, quadDegree + 2, integrand);
    const double certRel = std::abs(coarse - fine) / std::max({std::abs(fine), lhsSq, 1e-300});

    const double h = mesh.meshSize();
    const double dDiam = G.region.diameter();
    const double w0 = normL2(w, G);
    const double w1 = normH1(w, G);

    // Membership check for the constructed candidate: every coefficient
    // outside the compact-support subspace of G must vanish exactly.
    std::vector<char> inG(static_cast<std::size_t>(space.dim()), 0);
    for (int dof : space.interiorDofs(G)) inG[static_cast<std::size_t>(dof)] = 1;
    bool supportOk = true;
    for (int dof = 0; dof < space.dim(); ++dof) {
        if (!inG[static_cast<std::size_t>(dof)] &&
            v.coefficients[static_cast<std::size_t>(dof)] != 0.0) {
            supportOk = false;
        }
    }

    EstimateRecord rec;
    rec.experiment = "superapprox";
    rec.r = space.degree();
    rec.n = mesh.subdivisionsX();
    rec.h = h;
    rec.d = G.region.width();
    rec.dOmega0 = dDiam;
    rec.lhs = std::sqrt(lhsSq);
    rec.rhsTerms = {{"rhs_l2_term", std::pow(h / dDiam, space.degree()) / dDiam * w0},
                    {"rhs_h1_term", (h / dDiam) * w1}};
    rec.extras = {{"support_ok", supportOk ? 1.0 : 0.0}, {"cert_rel", certRel}};
    rec.finalize();
    return rec;
}

EstimateRecord techniqueLemmaExperiment(const LagrangeSpace& space, const CoefficientSet& coeffs,
                                        const CutoffFunction& omega, const FEFunction& w,
                                        const SubdomainSpec& omega0) {
    requireStrictlyInside(omega.support(), omega0.region, "cutoff support");
    require(w.space == &space, Err::Dimension, "w does not belong to the given space");

    const StructuredMesh& mesh = space.mesh();
    const int quadDegree = normQuadDegree(space);
    const std::vector<int> cells = mesh.cellsIn({omega.support()});

    const double a0Cut = integrateOverCells(mesh, cells, quadDegree, [&](int cell, Vec2 x) {
        double wv;
        Vec2 wg;
        space.evaluateOnCell(w, cell, x, wv, wg);
        const double om = omega.value(x);
        const Vec2 og = omega.gradient(x);
        const Vec2 g = {om * wg.x + og.x * wv, om * wg.y + og.y * wv};
        const auto a = coeffs.a(x);
        return (a[0] * g.x + a[1] * g.y) * g.x + (a[2] * g.x + a[3] * g.y) * g.y;
    });

    const double aWOmega2W = integrateOverCells(mesh, cells, quadDegree, [&](int cell, Vec2 x) {
        double wv;
        Vec2 wg;
        space.evaluateOnCell(w, cell, x, wv, wg);
        const double om = omega.value(x);
        const Vec2 og = omega.gradient(x);
        // grad(omega^2 w) = 2 omega grad(omega) w + omega^2 grad(w)
        const Vec2 gt = {2.0 * om * og.x * wv + om * om * wg.x,
                         2.0 * om * og.y * wv + om * om * wg.y};
        const auto a = coeffs.a(x);
        const auto b = coeffs.b(x);
        const double principal =
            (a[0] * wg.x + a[1] * wg.y) * gt.x + (a[2] * wg.x + a[3] * wg.y) * gt.y;
        const double lower = (b[0] * wg.x + b[1] * wg.y) * om * om * wv +
                             coeffs.phi(x) * wv * om * om * wv;
        return principal + lower;
    });

    const double w0 = normL2(w, omega0);

    EstimateRecord rec;
    rec.experiment = "technique";
    rec.preset = coeffs.name;
    rec.r = space.degree();
    rec.n = mesh.subdivisionsX();
    rec.h = mesh.meshSize();
    rec.d = omega0.region.width();
    rec.dOmega0 = omega0.region.diameter();
    rec.lhs = a0Cut - 2.0 * aWOmega2W;
    rec.rhsTerms = {{"rhs_l2sq_term", w0 * w0}};
    rec.finalize();
    return rec;
}

IdentityBreakdown identityCheck(const ScalarField& u, const CutoffFunction& omega,
                                const CoefficientSet& coeffs, int quadDegree, int subdiv) {
    require(subdiv >= 1, Err::InvalidSubdivision, "quadrature subdivision must be >= 1");
    const StructuredMesh quadMesh = StructuredMesh::build(omega.support(), subdiv);
    std::vector<int> cells(static_cast<std::size_t>(quadMesh.triangleCount()));
    for (int t = 0; t < quadMesh.triangleCount(); ++t) cells[static_cast<std::size_t>(t)] = t;

    IdentityBreakdown out;
    auto accumulate = [&](double& target, const std::function<double(Vec2)>& fn) {
        target = integrateOverCells(quadMesh, cells, quadDegree,
                                    [&fn](int, Vec2 x) { return fn(x); });
    };

    accumulate(out.a0Term, [&](Vec2 x) {
        const double uv = u.value(x);
        const Vec2 ug = u.gradient(x);
        const double om = omega.value(x);
        const Vec2 og = omega.gradient(x);
        const Vec2 g = {om * ug.x + og.x * uv, om * ug.y + og.y * uv};
        const auto a = coeffs.a(x);
        return (a[0] * g.x + a[1] * g.y) * g.x + (a[2] * g.x + a[3] * g.y) * g.y;
    });

    accumulate(out.aTerm, [&](Vec2 x) {
        const double uv = u.value(x);
        const Vec2 ug = u.gradient(x);
        const double om = omega.value(x);
        const Vec2 og = omega.gradient(x);
        const Vec2 gt = {2.0 * om * og.x * uv + om * om * ug.x,
                         2.0 * om * og.y * uv + om * om * ug.y};
        const auto a = coeffs.a(x);
        const auto b = coeffs.b(x);
        return (a[0] * ug.x + a[1] * ug.y) * gt.x + (a[2] * ug.x + a[3] * ug.y) * gt.y +
               (b[0] * ug.x + b[1] * ug.y) * om * om * uv + coeffs.phi(x) * uv * om * om * uv;
    });

    accumulate(out.nTerm, [&](Vec2 x) {
        const double uv = u.value(x);
        const Vec2 ug = u.gradient(x);
        const double om = omega.value(x);
        const Vec2 og = omega.gradient(x);
        const Vec2 g = {om * ug.x + og.x * uv, om * ug.y + og.y * uv};
        const auto b = coeffs.b(x);
        const double ou = om * uv;
        return (b[0] * g.x + b[1] * g.y) * ou + coeffs.phi(x) * ou * ou;
    });

    accumulate(out.t1, [&](Vec2 x) {
        const double uv = u.value(x);
        const double om = omega.value(x);
        const Vec2 og = omega.gradient(x);
        const auto b = coeffs.b(x);
        return (b[0] * og.x + b[1] * og.y) * om * uv * uv;
    });

    accumulate(out.t2, [&](Vec2 x) {
        const double uv = u.value(x);
        const Vec2 ug = u.gradient(x);
        const double om = omega.value(x);
        const Vec2 og = omega.gradient(x);
        const Vec2 g = {om * ug.x + og.x * uv, om * ug.y + og.y * uv}; // grad(omega u)
        const auto a = coeffs.a(x);
        const double gradPart[2][2] = {{og.x * g.x, og.x * g.y}, {og.y * g.x, og.y * g.y}};
        double sum = 0.0;
        const double aM[2][2] = {{a[0], a[1]}, {a[2], a[3]}};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const double anti = gradPart[i][j] - gradPart[j][i];
                const double ogi = (i == 0) ? og.x : og.y;
                const double ogj = (j == 0) ? og.x : og.y;
                sum += aM[i][j] * (anti * uv + ogi * ogj * uv * uv);
            }
        }
        return sum;
    });

    out.defect = out.a0Term - (out.aTerm - out.nTerm + out.t1 + out.t2);
    for (double v : {out.a0Term, out.aTerm, out.nTerm, out.t1, out.t2, out.defect}) {
        require(std::isfinite(v), Err::Data, "identity breakdown contains non-finite terms");
    }
    return out;
}

EstimateRecord localEstimateExperiment(const LagrangeSpace& space, const CoefficientSet& coeffs,
                                       std::span<const double> load, const SubdomainSpec& D,
                                       const SubdomainSpec& omega0) {
    const StructuredMesh& mesh = space.mesh();
    const int p = mesh.layerCount(D, omega0);

    const FEFunction w = solveLocalGalerkin(space, coeffs, load, omega0);
    const double h = mesh.meshSize();
    const double dDiam = omega0.region.diameter();
    const double eps = epsilonFactor(dDiam, h, space.degree());
    const double fdual = dualNormHm1(space, omega0, load);
    const double w0 = normL2(w, omega0);
    const double lhs = normH1(w, D);

    const double kick = std::pow(eps, 0.5 * (p + 1)) / h * w0;
    double sum = 0.0, sumHalf = 0.0, epsPow = 1.0, epsHalfPow = 1.0;
    const double epsHalf = std::sqrt(eps);
    for (int j = 0; j <= p; ++j) {
        sum += epsPow * (fdual + w0);
        sumHalf += epsHalfPow * (fdual + w0);
        epsPow *= eps;
        epsHalfPow *= epsHalf;
    }

    const double naiveDenom = w0 + fdual;
    EstimateRecord rec;
    rec.experiment = "local-estimate";
    rec.preset = coeffs.name;
    rec.r = space.degree();
    rec.n = mesh.subdivisionsX();
    rec.h = h;
    rec.d = omega0.region.width();
    rec.dOmega0 = dDiam;
    rec.p = p;
    rec.lhs = lhs;
    rec.rhsTerms = {{"rhs_kick_term", kick}, {"rhs_sum_term", sum}};
    rec.extras = {{"epsilon", eps},
                  {"fdual", fdual},
                  {"w_l2", w0},
                  {"naive_ratio", naiveDenom > 0.0 ? lhs / naiveDenom : 0.0},
                  {"ratio_halfpow", (kick + sumHalf) > 0.0 ? lhs / (kick + sumHalf) : 0.0}};
    rec.finalize();
    return rec;
}

EstimateRecord localEstimateExperiment(const LagrangeSpace& space, const CoefficientSet& coeffs,
                                       const ScalarField& f, const SubdomainSpec& D,
                                       const SubdomainSpec& omega0) {
    return localEstimateExperiment(space, coeffs, assembleLoad(space, f), D, omega0);
}

NaiveSweepResult naiveConstantSweep(const LagrangeSpace& space, const CoefficientSet& coeffs,
                                    const ScalarField& f, std::span<const double> dSides, int p) {
    std::vector<double> sorted(dSides.begin(), dSides.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    require(std::unique(sorted.begin(), sorted.end()) == sorted.end() && sorted.size() >= 3,
            Err::Sample, "naive sweep needs at least three distinct subdomain sides");

    const StructuredMesh& mesh = space.mesh();
    const std::vector<double> load = assembleLoad(space, f);

    NaiveSweepResult out;
    std::vector<double> xs, ys;
    for (double side : sorted) {
        const SubdomainSpec omega0 = centeredSquare(mesh, side);
        const SubdomainSpec d = mesh.shrinkByLayers(omega0, p);
        EstimateRecord rec = localEstimateExperiment(space, coeffs, load, d, omega0);
        rec.experiment = "naive-sweep";
        double naive = 0.0;
        for (const auto& [name, value] : rec.extras) {
            if (name == "naive_ratio") naive = value;
        }
        xs.push_back(side);
        ys.push_back(naive);
        out.records.push_back(std::move(rec));
    }
    out.fit = fitLogLog(xs, ys);
    out.strictlyIncreasingAsDShrinks = true;
    for (std::size_t i = 1; i < ys.size(); ++i) {
        if (!(ys[i] > ys[i - 1])) out.strictlyIncreasingAsDShrinks = false;
    }
    return out;
}

EstimateRecord convergencePoint(const CoefficientSet& coeffs, const ScalarField& uExact,
                                int degree, int n) {
    const ScalarField f = coeffs.applyOperator(uExact);
    const StructuredMesh mesh = StructuredMesh::build(Rect::unitSquare(), n);
    const LagrangeSpace space = LagrangeSpace::build(mesh, degree);
    const SubdomainSpec whole{mesh.domain()};
    const FEFunction uh = solveLocalGalerkin(space, coeffs, f, whole);
    const double errH1 = errorH1(uh, uExact, whole);
    const double errL2 = errorL2(uh, uExact, whole);

    EstimateRecord rec;
    rec.experiment = "convergence";
    rec.preset = coeffs.name;
    rec.r = degree;
    rec.n = n;
    rec.h = mesh.meshSize();
    rec.lhs = errH1;
    rec.rhsTerms = {{"rhs_unit", 1.0}};
    rec.extras = {{"h1_error", errH1}, {"l2_error", errL2}};
    rec.finalize();
    return rec;
}

ConvergenceResult convergenceExperiment(const CoefficientSet& coeffs, const ScalarField& uExact,
                                        int degree, std::span<const int> nValues) {
    require(nValues.size() >= 3, Err::Sample, "convergence study needs at least three mesh sizes");

    ConvergenceResult out;
    std::vector<double> hs, e1, e2;
    for (int n : nValues) {
        EstimateRecord rec = convergencePoint(coeffs, uExact, degree, n);
        hs.push_back(rec.h);
        for (const auto& [name, value] : rec.extras) {
            if (name == "h1_error") e1.push_back(value);
            if (name == "l2_error") e2.push_back(value);
        }
        out.records.push_back(std::move(rec));
    }
    out.h1Fit = fitLogLog(hs, e1);
    out.l2Fit = fitLogLog(hs, e2);
    return out;
}

} // namespace scaleprobe
