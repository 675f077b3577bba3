#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/estimates.hpp"

namespace scaleprobe {

/// Parsed experiment configuration (line-oriented key=value format with
/// comma-separated lists and '#' comments).
struct ExperimentConfig {
    std::string experiment;
    std::string preset = "laplace";
    int r = 1;
    std::vector<int> nValues;
    std::vector<double> dValues = {1.0};
    int p = 1;
    int seeds = 20;
    std::uint64_t seed = 1;
    std::string outDir; // "out" key; CLI --out overrides
    int jobs = 1;       // "jobs" key; CLI --jobs overrides
};

const std::vector<std::string>& experimentNames();

ExperimentConfig parseConfig(const std::string& text);
ExperimentConfig parseConfigFile(const std::string& path);
std::string serializeConfig(const ExperimentConfig& config);

/// A column-schema'd table with '#' metadata lines; cells are pre-formatted
/// so serialization is byte-deterministic (doubles printed with 17
/// significant digits).
struct ResultTable {
    std::vector<std::string> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string toCsv() const;
};

ResultTable readCsv(const std::string& path);

struct RunOutput {
    ResultTable records;
    ResultTable fits;
    ResultTable plotdata;
    std::vector<std::string> skipped;    // infeasible grid points, as notes
    std::vector<std::string> violations; // machine-readable invariant failures
};

/// Execute the configured experiment over its parameter grid. Grid points may
/// be evaluated concurrently (config.jobs) without changing any output byte.
RunOutput runExperiment(const ExperimentConfig& config);

/// Run and write records.csv / fits.csv / plotdata.csv / run.cfg into outDir.
RunOutput runToDirectory(const ExperimentConfig& config, const std::string& outDir);

struct CompareReport {
    bool schemaMatch = false;
    int flaggedCells = 0;
    double maxAbsDelta = 0.0;
    double maxRelDelta = 0.0;
    std::vector<std::string> lines; // per-column deltas and flagged cells
};

/// Regression guard: per-column max absolute/relative deltas between two CSV
/// files of the same schema; cells differing by more than 1e-9 are flagged.
CompareReport compareRuns(const std::string& pathA, const std::string& pathB);

/// Text listing of experiments and their records.csv schemas.
std::string listExperimentsText();

std::string formatDouble(double v);

} // namespace scaleprobe
