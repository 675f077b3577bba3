// scale-probe: drive the experiment harness through the shared-library C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scaleprobe.h"

namespace {

int reportFailure(const char* what, sp_status status) {
    std::fprintf(stderr, "error: %s failed (status %d)\n%s\n", what, static_cast<int>(status),
                 sp_last_error());
    return status == SP_ERR_INVARIANT ? 2 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scale-probe: finite-element local-estimate measurement harness"};
    app.require_subcommand(1);

    std::string configPath, outDir;
    int jobs = 0;
    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", configPath, "config file (key=value lines)")->required();
    run->add_option("--out", outDir, "output directory (overrides the config)");
    run->add_option("--jobs", jobs, "number of worker threads");

    std::string pathA, pathB;
    CLI::App* compare = app.add_subcommand("compare", "compare two result CSV files");
    compare->add_option("a", pathA, "first CSV")->required();
    compare->add_option("b", pathB, "second CSV")->required();

    CLI::App* list = app.add_subcommand("list", "print experiment names and schemas");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        sp_config* config = nullptr;
        sp_status status = sp_config_parse_file(configPath.c_str(), &config);
        if (status != SP_OK) return reportFailure("config parse", status);
        status = sp_run(config, outDir.empty() ? nullptr : outDir.c_str(), jobs);
        sp_config_destroy(config);
        if (status != SP_OK) return reportFailure("run", status);
        std::printf("ok\n");
        return 0;
    }

    if (compare->parsed()) {
        int mismatches = 0;
        std::vector<char> report(1 << 16);
        const sp_status status =
            sp_compare_files(pathA.c_str(), pathB.c_str(), &mismatches, report.data(), report.size());
        if (status != SP_OK) return reportFailure("compare", status);
        std::printf("%s", report.data());
        if (mismatches > 0) {
            std::printf("MISMATCH cells=%d\n", mismatches);
            return 2;
        }
        std::printf("identical within tolerance\n");
        return 0;
    }

    if (list->parsed()) {
        std::vector<char> buf(1 << 14);
        const sp_status status = sp_list_experiments(buf.data(), buf.size());
        if (status != SP_OK) return reportFailure("list", status);
        std::printf("%s", buf.data());
        return 0;
    }
    return 1;
}
