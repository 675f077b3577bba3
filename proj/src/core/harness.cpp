#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace scaleprobe {

namespace {

constexpr const char* kVersionNote = "# scale-probe 1.0.0";
constexpr double kPlotFloor = 1e-18;

const std::vector<int> kIdentityDegrees = {4, 6, 8, 10, 12};
constexpr int kIdentitySubdiv = 12;

std::string formatInt(long long v) { return std::to_string(v); }

std::vector<std::string> splitList(const std::string& s) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    return parts;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parseDouble(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        require(pos == s.size(), Err::Parse, "");
        return v;
    } catch (const std::exception&) {
        fail(Err::Parse, "line " + std::to_string(line) + ": '" + s + "' is not a number");
    }
}

long long parseInt(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        require(pos == s.size(), Err::Parse, "");
        return v;
    } catch (const std::exception&) {
        fail(Err::Parse, "line " + std::to_string(line) + ": '" + s + "' is not an integer");
    }
}

// Centered square of side d on the n-grid of the unit square: corners must
// land on grid lines.
bool centeredSquareAligned(int n, double d) {
    const double m = n * d;
    const double mRound = std::round(m);
    if (std::abs(m - mRound) > 1e-9 || mRound < 1.0) return false;
    return (static_cast<long long>(n) - static_cast<long long>(mRound)) % 2 == 0;
}

void parallelFor(int jobs, int numTasks, const std::function<void(int)>& task) {
    jobs = std::max(1, std::min(jobs, numTasks));
    if (jobs == 1) {
        for (int i = 0; i < numTasks; ++i) task(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(numTasks));
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        workers.emplace_back([&]() {
            while (true) {
                const int i = next.fetch_add(1);
                if (i >= numTasks) break;
                try {
                    task(i);
                } catch (...) {
                    errors[static_cast<std::size_t>(i)] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& w : workers) w.join();
    for (const std::exception_ptr& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// --- record serialization -------------------------------------------------

const std::map<std::string, std::vector<std::string>>& recordSchemas() {
    static const std::map<std::string, std::vector<std::string>> schemas = {
        {"convergence", {"experiment", "preset", "r", "n", "h", "h1_error", "l2_error"}},
        {"inverse", {"experiment", "preset", "r", "n", "h", "seed", "ratio"}},
        {"superapprox",
         {"experiment", "preset", "r", "n", "h", "d", "d_omega0", "seed", "lhs", "rhs_l2_term",
          "rhs_h1_term", "ratio", "support_ok", "cert_rel"}},
        {"technique",
         {"experiment", "preset", "r", "n", "h", "seed", "lhs", "rhs_l2sq_term", "ratio"}},
        {"identity",
         {"experiment", "preset", "quad_level", "quad_degree", "subdiv", "a0_term", "a_term",
          "n_term", "t1_term", "t2_term", "defect"}},
        {"local-estimate",
         {"experiment", "preset", "r", "n", "h", "d", "d_omega0", "p", "seed", "epsilon", "lhs",
          "rhs_kick_term", "rhs_sum_term", "ratio", "ratio_halfpow", "naive_ratio", "fdual",
          "w_l2"}},
        {"naive-sweep",
         {"experiment", "preset", "r", "n", "h", "d", "d_omega0", "p", "epsilon", "lhs",
          "rhs_kick_term", "rhs_sum_term", "ratio", "ratio_halfpow", "naive_ratio", "fdual",
          "w_l2"}},
    };
    return schemas;
}

const std::vector<std::string>& fitsColumns() {
    static const std::vector<std::string> cols = {"experiment", "preset", "r",     "series",
                                                  "param",      "samples", "c_emp", "slope",
                                                  "slope_ci",   "tau"};
    return cols;
}

const std::vector<std::string>& plotColumns() {
    static const std::vector<std::string> cols = {"log10_x", "log10_y", "series"};
    return cols;
}

std::string cellFor(const EstimateRecord& rec, const std::string& column) {
    if (column == "experiment") return rec.experiment;
    if (column == "preset") return rec.preset;
    if (column == "r") return formatInt(rec.r);
    if (column == "n") return formatInt(rec.n);
    if (column == "h") return formatDouble(rec.h);
    if (column == "d") return formatDouble(rec.d);
    if (column == "d_omega0") return formatDouble(rec.dOmega0);
    if (column == "p") return formatInt(rec.p);
    if (column == "seed") return formatInt(static_cast<long long>(rec.seed));
    if (column == "lhs") return formatDouble(rec.lhs);
    if (column == "ratio") return formatDouble(rec.ratio);
    for (const auto& [name, value] : rec.rhsTerms) {
        if (name == column) return formatDouble(value);
    }
    for (const auto& [name, value] : rec.extras) {
        if (name == column) return formatDouble(value);
    }
    fail(Err::Schema, "record has no column '" + column + "'");
}

double extraOf(const EstimateRecord& rec, const std::string& name) {
    for (const auto& [key, value] : rec.extras) {
        if (key == name) return value;
    }
    fail(Err::Schema, "record has no extra '" + name + "'");
}

void appendRecords(ResultTable& table, const std::vector<EstimateRecord>& records) {
    for (const EstimateRecord& rec : records) {
        std::vector<std::string> row;
        row.reserve(table.columns.size());
        for (const std::string& col : table.columns) row.push_back(cellFor(rec, col));
        table.rows.push_back(std::move(row));
    }
}

void appendFit(ResultTable& fits, const ExperimentConfig& config, const std::string& series,
               const std::string& param, const FitResult& fit) {
    fits.rows.push_back({config.experiment, config.preset, formatInt(config.r), series, param,
                         formatInt(fit.samples), formatDouble(fit.cEmp),
                         formatDouble(fit.hasSlope ? fit.slope : 0.0),
                         formatDouble(fit.hasSlope ? fit.slopeCi : 0.0), formatDouble(fit.tau)});
}

void appendPlot(ResultTable& plot, double x, double y, const std::string& series) {
    plot.rows.push_back({formatDouble(std::log10(std::max(x, kPlotFloor))),
                         formatDouble(std::log10(std::max(y, kPlotFloor))), series});
}

FitResult constantOnly(const std::vector<EstimateRecord>& records) {
    return fitConstant(records);
}

// Fit over records with x = h when at least three distinct meshes are present;
// falls back to the constant-only fit otherwise.
FitResult fitVersusH(const std::vector<EstimateRecord>& records,
                     const std::function<double(const EstimateRecord&)>& y) {
    std::vector<double> hs;
    for (const EstimateRecord& r : records) hs.push_back(r.h);
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    if (hs.size() >= 3) {
        return fitConstant(records, [](const EstimateRecord& r) { return r.h; }, y);
    }
    return constantOnly(records);
}

// --- per-experiment runners -------------------------------------------------

struct Tables {
    ResultTable records, fits, plot;
};

Tables makeTables(const ExperimentConfig& config) {
    Tables t;
    const auto it = recordSchemas().find(config.experiment);
    require(it != recordSchemas().end(), Err::Parse,
            "unknown experiment '" + config.experiment + "'");
    t.records.columns = it->second;
    t.fits.columns = fitsColumns();
    t.plot.columns = plotColumns();
    return t;
}

ScalarField defaultManufactured() { return ScalarField::sineProduct(1, 1); }

ScalarField defaultLoadField() {
    // L u for the Laplace preset with u = sin(pi x) sin(pi y)
    return ScalarField([](Vec2 p, int dx, int dy) {
        return 2.0 * M_PI * M_PI * ScalarField::sineProduct(1, 1).derivative(p, dx, dy);
    });
}

void runConvergence(const ExperimentConfig& config, RunOutput& out) {
    require(config.nValues.size() >= 3, Err::Sample,
            "convergence needs at least three n values");
    const CoefficientSet coeffs = CoefficientSet::byName(config.preset);
    const ScalarField u = defaultManufactured();

    std::vector<EstimateRecord> records(config.nValues.size());
    parallelFor(config.jobs, static_cast<int>(config.nValues.size()), [&](int i) {
        records[static_cast<std::size_t>(i)] =
            convergencePoint(coeffs, u, config.r, config.nValues[static_cast<std::size_t>(i)]);
    });

    Tables t = makeTables(config);
    appendRecords(t.records, records);
    std::vector<double> hs, e1, e2;
    for (const EstimateRecord& rec : records) {
        hs.push_back(rec.h);
        e1.push_back(extraOf(rec, "h1_error"));
        e2.push_back(extraOf(rec, "l2_error"));
        appendPlot(t.plot, rec.h, extraOf(rec, "h1_error"), "h1_error");
        appendPlot(t.plot, rec.h, extraOf(rec, "l2_error"), "l2_error");
    }
    appendFit(t.fits, config, "h1_error", "h", fitLogLog(hs, e1));
    appendFit(t.fits, config, "l2_error", "h", fitLogLog(hs, e2));
    out.records = std::move(t.records);
    out.fits = std::move(t.fits);
    out.plotdata = std::move(t.plot);
}

void runInverse(const ExperimentConfig& config, RunOutput& out) {
    require(!config.nValues.empty(), Err::Sample, "inverse needs at least one n value");
    const double side = config.dValues.front();

    std::vector<std::vector<EstimateRecord>> perMesh(config.nValues.size());
    parallelFor(config.jobs, static_cast<int>(config.nValues.size()), [&](int i) {
        const int n = config.nValues[static_cast<std::size_t>(i)];
        const StructuredMesh mesh = StructuredMesh::build(Rect::unitSquare(), n);
        const LagrangeSpace space = LagrangeSpace::build(mesh, config.r);
        const SubdomainSpec g = centeredSquare(mesh, side);
        const std::vector<int> support = space.dofsTouching(g);
        const double h = mesh.meshSize();
        for (int k = 0; k < config.seeds; ++k) {
            const FEFunction v = space.randomFunction(
                Rng::stream(config.seed, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(k))
                    .nextU64(),
                support);
            const double l2 = normL2(v, g);
            EstimateRecord rec;
            rec.experiment = "inverse";
            rec.preset = config.preset;
            rec.r = config.r;
            rec.n = n;
            rec.h = h;
            rec.seed = static_cast<std::uint64_t>(k);
            rec.lhs = normH1(v, g) * h;
            rec.rhsTerms = {{"rhs_l2", l2}};
            rec.finalize();
            // records schema exposes the ratio only
            perMesh[static_cast<std::size_t>(i)].push_back(std::move(rec));
        }
    });

    Tables t = makeTables(config);
    std::vector<double> hs, cs;
    for (std::size_t i = 0; i < perMesh.size(); ++i) {
        appendRecords(t.records, perMesh[i]);
        const FitResult c = fitConstant(perMesh[i]);
        hs.push_back(perMesh[i].front().h);
        cs.push_back(c.cEmp);
        appendPlot(t.plot, perMesh[i].front().h, c.cEmp, "inverse_constant");
        appendFit(t.fits, config, "inverse_constant|n=" + formatInt(perMesh[i].front().n), "h", c);
    }
    if (hs.size() >= 3) appendFit(t.fits, config, "inverse_constant", "h", fitLogLog(hs, cs));
    out.records = std::move(t.records);
    out.fits = std::move(t.fits);
    out.plotdata = std::move(t.plot);
}

void runSuperapprox(const ExperimentConfig& config, RunOutput& out) {
    require(!config.nValues.empty(), Err::Sample, "superapprox needs at least one n value");
    struct Point {
        int n;
        double d;
    };
    std::vector<Point> grid;
    for (int n : config.nValues) {
        for (double d : config.dValues) grid.push_back({n, d});
    }
    std::vector<std::vector<EstimateRecord>> perPoint(grid.size());
    parallelFor(config.jobs, static_cast<int>(grid.size()), [&](int gi) {
        const Point pt = grid[static_cast<std::size_t>(gi)];
        const StructuredMesh mesh = StructuredMesh::build(Rect::unitSquare(), pt.n);
        const LagrangeSpace space = LagrangeSpace::build(mesh, config.r);
        const SubdomainSpec g = centeredSquare(mesh, pt.d);
        const CutoffFunction omega = fractionalCutoff(g.region);
        const std::vector<int> support = space.interiorDofs(g);
        for (int k = 0; k < config.seeds; ++k) {
            const FEFunction w = space.randomFunction(
                Rng::stream(config.seed, static_cast<std::uint64_t>(gi),
                            static_cast<std::uint64_t>(k))
                    .nextU64(),
                support);
            EstimateRecord rec = superapproxExperiment(space, g, omega, w);
            rec.preset = config.preset;
            rec.seed = static_cast<std::uint64_t>(k);
            perPoint[static_cast<std::size_t>(gi)].push_back(std::move(rec));
        }
    });

    Tables t = makeTables(config);
    std::map<std::string, std::vector<EstimateRecord>> byD;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        appendRecords(t.records, perPoint[gi]);
        for (const EstimateRecord& rec : perPoint[gi]) {
            byD[formatDouble(rec.d)].push_back(rec);
            appendPlot(t.plot, rec.h, rec.ratio, "ratio d=" + formatDouble(rec.d));
            if (extraOf(rec, "support_ok") != 1.0) {
                out.violations.push_back("VIOLATION experiment=superapprox check=support n=" +
                                         formatInt(rec.n) + " d=" + formatDouble(rec.d) +
                                         " seed=" + formatInt(static_cast<long long>(rec.seed)));
            }
        }
    }
    for (const auto& [dLabel, recs] : byD) {
        appendFit(t.fits, config, "ratio|d=" + dLabel, "h",
                  fitVersusH(recs, [](const EstimateRecord& r) { return r.ratio; }));
    }
    out.records = std::move(t.records);
    out.fits = std::move(t.fits);
    out.plotdata = std::move(t.plot);
}

void runTechnique(const ExperimentConfig& config, RunOutput& out) {
    require(!config.nValues.empty(), Err::Sample, "technique needs at least one n value");
    const CoefficientSet coeffs = CoefficientSet::byName(config.preset);
    const double side = config.dValues.front();

    std::vector<std::vector<EstimateRecord>> perMesh(config.nValues.size());
    parallelFor(config.jobs, static_cast<int>(config.nValues.size()), [&](int i) {
        const int n = config.nValues[static_cast<std::size_t>(i)];
        const StructuredMesh mesh = StructuredMesh::build(Rect::unitSquare(), n);
        const LagrangeSpace space = LagrangeSpace::build(mesh, config.r);
        const SubdomainSpec omega0 = centeredSquare(mesh, side);
        const CutoffFunction omega = fractionalCutoff(omega0.region);
        const std::vector<int> support = space.interiorDofs(omega0);
        for (int k = 0; k < config.seeds; ++k) {
            const FEFunction w = space.randomFunction(
                Rng::stream(config.seed, static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(k))
                    .nextU64(),
                support);
            EstimateRecord rec = techniqueLemmaExperiment(space, coeffs, omega, w, omega0);
            rec.seed = static_cast<std::uint64_t>(k);
            perMesh[static_cast<std::size_t>(i)].push_back(std::move(rec));
        }
    });

    Tables t = makeTables(config);
    std::vector<EstimateRecord> all;
    for (std::size_t i = 0; i < perMesh.size(); ++i) {
        appendRecords(t.records, perMesh[i]);
        const FitResult c = fitConstant(perMesh[i]);
        appendFit(t.fits, config, "ratio|n=" + formatInt(perMesh[i].front().n), "h", c);
        appendPlot(t.plot, perMesh[i].front().h, c.cEmp, "ratio");
        all.insert(all.end(), perMesh[i].begin(), perMesh[i].end());
    }
    appendFit(t.fits, config, "ratio", "h",
              fitVersusH(all, [](const EstimateRecord& r) { return r.ratio; }));
    out.records = std::move(t.records);
    out.fits = std::move(t.fits);
    out.plotdata = std::move(t.plot);
}

void runIdentity(const ExperimentConfig& config, RunOutput& out) {
    const CoefficientSet coeffs = CoefficientSet::byName(config.preset);
    const ScalarField u = defaultManufactured();
    const CutoffFunction omega = fractionalCutoff(Rect::unitSquare());

    Tables t = makeTables(config);
    std::vector<double> defects;
    for (std::size_t level = 0; level < kIdentityDegrees.size(); ++level) {
        const int degree = kIdentityDegrees[level];
        const IdentityBreakdown br = identityCheck(u, omega, coeffs, degree, kIdentitySubdiv);
        defects.push_back(std::abs(br.defect));
        t.records.rows.push_back({"identity", config.preset, formatInt(static_cast<long long>(level)),
                                  formatInt(degree), formatInt(kIdentitySubdiv),
                                  formatDouble(br.a0Term), formatDouble(br.aTerm),
                                  formatDouble(br.nTerm), formatDouble(br.t1), formatDouble(br.t2),
                                  formatDouble(br.defect)});
        appendPlot(t.plot, degree, std::abs(br.defect), "defect");
    }

    // Invariant gates: the defect must sit at quadrature-noise level on the
    // final rung and must not grow across the last three rungs (1e-12 floor).
    const double floorv = 1e-12;
    for (std::size_t i = defects.size() - 3; i + 1 < defects.size(); ++i) {
        const double prev = std::max(defects[i], floorv);
        const double next = std::max(defects[i + 1], floorv);
        if (next > prev) {
            out.violations.push_back("VIOLATION experiment=identity check=defect_monotone level=" +
                                     formatInt(static_cast<long long>(i + 1)) +
                                     " value=" + formatDouble(defects[i + 1]));
        }
    }
    if (defects.back() > 1e-8) {
        out.violations.push_back("VIOLATION experiment=identity check=defect_final value=" +
                                 formatDouble(defects.back()));
    }

    FitResult fit;
    fit.samples = static_cast<int>(defects.size());
    for (double v : defects) fit.cEmp = std::max(fit.cEmp, v);
    appendFit(t.fits, config, "defect", "quad_degree", fit);
    out.records = std::move(t.records);
    out.fits = std::move(t.fits);
    out.plotdata = std::move(t.plot);
}

void runLocalEstimate(const ExperimentConfig& config, RunOutput& out) {
    require(!config.nValues.empty(), Err::Sample, "local-estimate needs at least one n value");
    const CoefficientSet coeffs = CoefficientSet::byName(config.preset);
    struct Point {
        int n;
        double d;
    };
    std::vector<Point> grid;
    for (int n : config.nValues) {
        for (double d : config.dValues) grid.push_back({n, d});
    }

    std::vector<std::vector<EstimateRecord>> perPoint(grid.size());
    std::vector<std::string> skipped(grid.size());
    parallelFor(config.jobs, static_cast<int>(grid.size()), [&](int gi) {
        const Point pt = grid[static_cast<std::size_t>(gi)];
        const StructuredMesh mesh = StructuredMesh::build(Rect::unitSquare(), pt.n);
        const LagrangeSpace space = LagrangeSpace::build(mesh, config.r);
        const SubdomainSpec omega0 = centeredSquare(mesh, pt.d);
        SubdomainSpec d;
        try {
            d = mesh.shrinkByLayers(omega0, config.p);
        } catch (const Error& e) {
            if (e.code() == Err::DegenerateSubdomain) {
                skipped[static_cast<std::size_t>(gi)] =
                    "skipped n=" + formatInt(pt.n) + " d=" + formatDouble(pt.d) +
                    " p=" + formatInt(config.p) + " (degenerate shrink)";
                return;
            }
            throw;
        }
        const SparseMatrix mass = assembleMass(space);
        const std::vector<int> support = space.interiorDofs(omega0);
        for (int k = 0; k < config.seeds; ++k) {
            // Seeded rough load: f(v) = (g, v) with random nodal g on the
            // compact-support subspace of Omega0.
            const FEFunction g = space.randomFunction(
                Rng::stream(config.seed, static_cast<std::uint64_t>(gi),
                            static_cast<std::uint64_t>(k))
                    .nextU64(),
                support);
            const std::vector<double> load = mass.multiply(g.coefficients);
            EstimateRecord rec = localEstimateExperiment(space, coeffs, load, d, omega0);
            rec.seed = static_cast<std::uint64_t>(k);
            perPoint[static_cast<std::size_t>(gi)].push_back(std::move(rec));
        }
    });

    Tables t = makeTables(config);
    std::map<std::string, std::vector<EstimateRecord>> byD;
    std::vector<EstimateRecord> all;
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        if (!skipped[gi].empty()) {
            out.skipped.push_back(skipped[gi]);
            continue;
        }
        appendRecords(t.records, perPoint[gi]);
        for (const EstimateRecord& rec : perPoint[gi]) {
            byD[formatDouble(rec.d)].push_back(rec);
            all.push_back(rec);
            appendPlot(t.plot, rec.h, rec.ratio, "ratio d=" + formatDouble(rec.d));
        }
    }
    require(!all.empty(), Err::Sample, "every grid point of the sweep was infeasible");
    for (const auto& [dLabel, recs] : byD) {
        appendFit(t.fits, config, "ratio|d=" + dLabel, "h",
                  fitVersusH(recs, [](const EstimateRecord& r) { return r.ratio; }));
        appendFit(t.fits, config, "ratio_halfpow|d=" + dLabel, "h",
                  fitVersusH(recs, [](const EstimateRecord& r) { return extraOf(r, "ratio_halfpow"); }));
    }
    appendFit(t.fits, config, "ratio", "h",
              fitVersusH(all, [](const EstimateRecord& r) { return r.ratio; }));
    out.records = std::move(t.records);
    out.fits = std::move(t.fits);
    out.plotdata = std::move(t.plot);
}

void runNaiveSweep(const ExperimentConfig& config, RunOutput& out) {
    require(config.nValues.size() == 1, Err::Sample,
            "naive-sweep runs at a single fixed mesh size");
    const CoefficientSet coeffs = CoefficientSet::byName(config.preset);
    const StructuredMesh mesh = StructuredMesh::build(Rect::unitSquare(), config.nValues.front());
    const LagrangeSpace space = LagrangeSpace::build(mesh, config.r);

    const NaiveSweepResult sweep =
        naiveConstantSweep(space, coeffs, defaultLoadField(), config.dValues, config.p);

    Tables t = makeTables(config);
    appendRecords(t.records, sweep.records);
    for (const EstimateRecord& rec : sweep.records) {
        appendPlot(t.plot, rec.d, extraOf(rec, "naive_ratio"), "naive_ratio");
    }
    appendFit(t.fits, config, "naive_ratio", "d", sweep.fit);
    out.records = std::move(t.records);
    out.fits = std::move(t.fits);
    out.plotdata = std::move(t.plot);
}

} // namespace

std::string formatDouble(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const std::vector<std::string>& experimentNames() {
    static const std::vector<std::string> names = {
        "convergence", "inverse", "superapprox", "technique",
        "identity",    "local-estimate", "naive-sweep"};
    return names;
}

ExperimentConfig parseConfig(const std::string& text) {
    ExperimentConfig config;
    bool haveExperiment = false;
    std::istringstream in(text);
    std::string rawLine;
    int lineNo = 0;
    while (std::getline(in, rawLine)) {
        ++lineNo;
        std::string line = rawLine;
        const std::size_t comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        require(eq != std::string::npos, Err::Parse,
                "line " + std::to_string(lineNo) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "experiment") {
            config.experiment = value;
            haveExperiment = true;
        } else if (key == "preset") {
            config.preset = value;
        } else if (key == "r") {
            config.r = static_cast<int>(parseInt(value, lineNo));
        } else if (key == "n") {
            config.nValues.clear();
            for (const std::string& item : splitList(value)) {
                config.nValues.push_back(static_cast<int>(parseInt(trim(item), lineNo)));
            }
        } else if (key == "d") {
            config.dValues.clear();
            for (const std::string& item : splitList(value)) {
                config.dValues.push_back(parseDouble(trim(item), lineNo));
            }
        } else if (key == "p") {
            config.p = static_cast<int>(parseInt(value, lineNo));
        } else if (key == "seeds") {
            config.seeds = static_cast<int>(parseInt(value, lineNo));
        } else if (key == "seed") {
            config.seed = static_cast<std::uint64_t>(parseInt(value, lineNo));
        } else if (key == "out") {
            config.outDir = value;
        } else if (key == "jobs") {
            config.jobs = static_cast<int>(parseInt(value, lineNo));
        } else {
            fail(Err::Parse, "line " + std::to_string(lineNo) + ": unknown key '" + key + "'");
        }
    }

    require(haveExperiment, Err::Parse, "missing required key 'experiment'");
    const auto& names = experimentNames();
    require(std::find(names.begin(), names.end(), config.experiment) != names.end(), Err::Parse,
            "unknown experiment '" + config.experiment + "'");
    if (config.preset != "laplace" && config.preset != "variable") {
        fail(Err::Parse, "unknown preset '" + config.preset + "'");
    }
    require(config.r == 1 || config.r == 2, Err::Parse, "r must be 1 or 2");
    for (int n : config.nValues) require(n >= 1, Err::Parse, "n values must be >= 1");
    require(!config.dValues.empty(), Err::Parse, "d list must not be empty");
    for (double d : config.dValues) {
        require(d > 0.0 && d <= 1.0, Err::Parse, "d values must lie in (0, 1]");
    }
    require(config.p >= 0, Err::Parse, "p must be >= 0");
    require(config.seeds >= 1, Err::Parse, "seeds must be >= 1");
    require(config.jobs >= 1, Err::Parse, "jobs must be >= 1");

    for (int n : config.nValues) {
        for (double d : config.dValues) {
            if (!centeredSquareAligned(n, d)) {
                fail(Err::Alignment, "subdomain side d=" + formatDouble(d) +
                                         " does not align with the n=" + std::to_string(n) +
                                         " grid");
            }
        }
    }
    return config;
}

ExperimentConfig parseConfigFile(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), Err::Filesystem, "cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseConfig(buf.str());
}

std::string serializeConfig(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "experiment=" << config.experiment << "\n";
    out << "preset=" << config.preset << "\n";
    out << "r=" << config.r << "\n";
    if (!config.nValues.empty()) {
        out << "n=";
        for (std::size_t i = 0; i < config.nValues.size(); ++i) {
            out << (i ? "," : "") << config.nValues[i];
        }
        out << "\n";
    }
    out << "d=";
    for (std::size_t i = 0; i < config.dValues.size(); ++i) {
        out << (i ? "," : "") << formatDouble(config.dValues[i]);
    }
    out << "\n";
    out << "p=" << config.p << "\n";
    out << "seeds=" << config.seeds << "\n";
    out << "seed=" << config.seed << "\n";
    return out.str();
}

std::string ResultTable::toCsv() const {
    std::ostringstream out;
    for (const std::string& line : metadata) out << line << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
        out << "\n";
    }
    return out.str();
}

ResultTable readCsv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), Err::Filesystem, "cannot open '" + path + "'");
    ResultTable table;
    std::string line;
    bool haveHeader = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.metadata.push_back(line);
            continue;
        }
        std::vector<std::string> cells = splitList(line);
        if (!haveHeader) {
            table.columns = std::move(cells);
            haveHeader = true;
        } else {
            table.rows.push_back(std::move(cells));
        }
    }
    require(haveHeader, Err::Schema, "'" + path + "' has no header row");
    return table;
}

RunOutput runExperiment(const ExperimentConfig& config) {
    CoefficientSet::byName(config.preset); // early preset validation
    RunOutput out;
    if (config.experiment == "convergence") {
        runConvergence(config, out);
    } else if (config.experiment == "inverse") {
        runInverse(config, out);
    } else if (config.experiment == "superapprox") {
        runSuperapprox(config, out);
    } else if (config.experiment == "technique") {
        runTechnique(config, out);
    } else if (config.experiment == "identity") {
        runIdentity(config, out);
    } else if (config.experiment == "local-estimate") {
        runLocalEstimate(config, out);
    } else if (config.experiment == "naive-sweep") {
        runNaiveSweep(config, out);
    } else {
        fail(Err::Parse, "unknown experiment '" + config.experiment + "'");
    }

    std::vector<std::string> metadata;
    metadata.push_back(kVersionNote);
    metadata.push_back("# experiment: " + config.experiment);
    std::string cfg = serializeConfig(config);
    std::replace(cfg.begin(), cfg.end(), '\n', ';');
    metadata.push_back("# config: " + cfg);
    for (const std::string& s : out.skipped) metadata.push_back("# " + s);
    out.records.metadata = metadata;
    out.fits.metadata = metadata;
    out.plotdata.metadata = metadata;
    return out;
}

RunOutput runToDirectory(const ExperimentConfig& config, const std::string& outDir) {
    require(!outDir.empty(), Err::Filesystem, "output directory path is empty");
    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    require(!ec, Err::Filesystem, "cannot create output directory '" + outDir + "'");

    RunOutput out = runExperiment(config);
    auto writeFile = [&](const std::string& name, const std::string& content) {
        const std::string path = outDir + "/" + name;
        std::ofstream f(path, std::ios::binary);
        require(f.good(), Err::Filesystem, "cannot write '" + path + "'");
        f << content;
        require(f.good(), Err::Filesystem, "write failed for '" + path + "'");
    };
    writeFile("records.csv", out.records.toCsv());
    writeFile("fits.csv", out.fits.toCsv());
    writeFile("plotdata.csv", out.plotdata.toCsv());
    writeFile("run.cfg", serializeConfig(config));
    return out;
}

CompareReport compareRuns(const std::string& pathA, const std::string& pathB) {
    const ResultTable a = readCsv(pathA);
    const ResultTable b = readCsv(pathB);
    require(a.columns == b.columns, Err::Schema,
            "schema mismatch between '" + pathA + "' and '" + pathB + "'");

    CompareReport report;
    report.schemaMatch = true;
    const std::size_t rows = std::max(a.rows.size(), b.rows.size());
    std::vector<double> colAbs(a.columns.size(), 0.0), colRel(a.columns.size(), 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        if (r >= a.rows.size() || r >= b.rows.size()) {
            ++report.flaggedCells;
            report.lines.push_back("row " + std::to_string(r) + ": present in only one file");
            continue;
        }
        for (std::size_t c = 0; c < a.columns.size(); ++c) {
            const std::string& ca = a.rows[r][c];
            const std::string& cb = b.rows[r][c];
            char* endA = nullptr;
            char* endB = nullptr;
            const double va = std::strtod(ca.c_str(), &endA);
            const double vb = std::strtod(cb.c_str(), &endB);
            const bool numA = endA && *endA == '\0' && !ca.empty();
            const bool numB = endB && *endB == '\0' && !cb.empty();
            if (numA && numB) {
                const double absDelta = std::abs(va - vb);
                const double relDelta =
                    absDelta / std::max({std::abs(va), std::abs(vb), 1e-300});
                colAbs[c] = std::max(colAbs[c], absDelta);
                colRel[c] = std::max(colRel[c], relDelta);
                report.maxAbsDelta = std::max(report.maxAbsDelta, absDelta);
                report.maxRelDelta = std::max(report.maxRelDelta, relDelta);
                if (absDelta > 1e-9 || relDelta > 1e-9) {
                    ++report.flaggedCells;
                    report.lines.push_back("row " + std::to_string(r) + " column " + a.columns[c] +
                                           ": " + ca + " vs " + cb);
                }
            } else if (ca != cb) {
                ++report.flaggedCells;
                report.lines.push_back("row " + std::to_string(r) + " column " + a.columns[c] +
                                       ": '" + ca + "' vs '" + cb + "'");
            }
        }
    }
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
        report.lines.push_back("column " + a.columns[c] + ": max_abs_delta=" +
                               formatDouble(colAbs[c]) + " max_rel_delta=" + formatDouble(colRel[c]));
    }
    return report;
}

std::string listExperimentsText() {
    std::ostringstream out;
    out << "experiments:\n";
    for (const std::string& name : experimentNames()) {
        out << "  " << name << "\n    records.csv: ";
        const auto& schema = recordSchemas().at(name);
        for (std::size_t i = 0; i < schema.size(); ++i) out << (i ? "," : "") << schema[i];
        out << "\n";
    }
    out << "  fits.csv (all experiments): ";
    const auto& fc = fitsColumns();
    for (std::size_t i = 0; i < fc.size(); ++i) out << (i ? "," : "") << fc[i];
    out << "\n  plotdata.csv (all experiments): log10_x,log10_y,series\n";
    return out.str();
}

} // namespace scaleprobe
