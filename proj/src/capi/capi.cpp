#include "scaleprobe.h"

#include <cstring>
#include <string>

#include "core/harness.hpp"
#include "core/scaling.hpp"

namespace {

using namespace scaleprobe;

thread_local std::string g_lastError;

sp_status statusOf(Err code) {
    switch (code) {
    case Err::Alignment: return SP_ERR_ALIGNMENT;
    case Err::DegenerateSubdomain: return SP_ERR_DEGENERATE_SUBDOMAIN;
    case Err::Containment: return SP_ERR_CONTAINMENT;
    case Err::Degree:
    case Err::Smoothness: return SP_ERR_DEGREE;
    case Err::EmptySupport:
    case Err::EmptySpace: return SP_ERR_EMPTY;
    case Err::OutOfDomain: return SP_ERR_OUT_OF_DOMAIN;
    case Err::Convergence:
    case Err::Definiteness:
    case Err::Singularity: return SP_ERR_SOLVE;
    case Err::Parse:
    case Err::Sample:
    case Err::Data: return SP_ERR_PARSE;
    case Err::Filesystem: return SP_ERR_IO;
    case Err::Schema: return SP_ERR_SCHEMA;
    case Err::Invariant: return SP_ERR_INVARIANT;
    case Err::InvalidSubdivision:
    case Err::Dimension:
    case Err::ScaleOrdering:
    case Err::Gap:
    case Err::Support:
    case Err::Ellipticity: return SP_ERR_INVALID_ARGUMENT;
    }
    return SP_ERR_INTERNAL;
}

template <typename Fn>
sp_status guarded(Fn&& fn) {
    try {
        fn();
        g_lastError.clear();
        return SP_OK;
    } catch (const Error& e) {
        g_lastError = e.what();
        return statusOf(e.code());
    } catch (const std::exception& e) {
        g_lastError = e.what();
        return SP_ERR_INTERNAL;
    } catch (...) {
        g_lastError = "unknown error";
        return SP_ERR_INTERNAL;
    }
}

Rect rectOf(const double r[4]) { return Rect{r[0], r[1], r[2], r[3]}; }

sp_status copyOut(const std::string& text, char* buf, size_t cap) {
    if (buf == nullptr || cap == 0) {
        g_lastError = "output buffer is null or empty";
        return SP_ERR_INVALID_ARGUMENT;
    }
    const size_t n = std::min(text.size(), cap - 1);
    std::memcpy(buf, text.data(), n);
    buf[n] = '\0';
    return SP_OK;
}

} // namespace

struct sp_mesh {
    scaleprobe::StructuredMesh mesh;
};

struct sp_space {
    // keeps the mesh alive alongside the space that references it
    sp_mesh* owner;
    scaleprobe::LagrangeSpace space;

    sp_space(sp_mesh* o, scaleprobe::LagrangeSpace s) : owner(o), space(std::move(s)) {}
};

struct sp_cutoff {
    scaleprobe::CutoffFunction cutoff;
};

struct sp_config {
    scaleprobe::ExperimentConfig config;
};

extern "C" {

const char* sp_last_error(void) { return g_lastError.c_str(); }

const char* sp_version(void) { return "1.0.0"; }

sp_status sp_mesh_create(double xmin, double ymin, double xmax, double ymax, int n,
                         sp_mesh** out) {
    return guarded([&]() {
        require(out != nullptr, Err::Dimension, "output handle is null");
        *out = new sp_mesh{StructuredMesh::build(Rect{xmin, ymin, xmax, ymax}, n)};
    });
}

void sp_mesh_destroy(sp_mesh* mesh) { delete mesh; }

sp_status sp_mesh_size(const sp_mesh* mesh, double* out) {
    return guarded([&]() {
        require(mesh != nullptr && out != nullptr, Err::Dimension, "null argument");
        *out = mesh->mesh.meshSize();
    });
}

sp_status sp_mesh_counts(const sp_mesh* mesh, int* vertices, int* triangles) {
    return guarded([&]() {
        require(mesh != nullptr, Err::Dimension, "null mesh");
        if (vertices != nullptr) *vertices = mesh->mesh.vertexCount();
        if (triangles != nullptr) *triangles = mesh->mesh.triangleCount();
    });
}

sp_status sp_mesh_cells_in(const sp_mesh* mesh, const double rect[4], int* count) {
    return guarded([&]() {
        require(mesh != nullptr && rect != nullptr && count != nullptr, Err::Dimension,
                "null argument");
        *count = static_cast<int>(mesh->mesh.cellsIn({rectOf(rect)}).size());
    });
}

sp_status sp_mesh_shrink_by_layers(const sp_mesh* mesh, const double rect[4], int layers,
                                   double out_rect[4]) {
    return guarded([&]() {
        require(mesh != nullptr && rect != nullptr && out_rect != nullptr, Err::Dimension,
                "null argument");
        const SubdomainSpec s = mesh->mesh.shrinkByLayers({rectOf(rect)}, layers);
        out_rect[0] = s.region.xmin;
        out_rect[1] = s.region.ymin;
        out_rect[2] = s.region.xmax;
        out_rect[3] = s.region.ymax;
    });
}

sp_status sp_mesh_layer_count(const sp_mesh* mesh, const double inner[4], const double outer[4],
                              int* out) {
    return guarded([&]() {
        require(mesh != nullptr && inner != nullptr && outer != nullptr && out != nullptr,
                Err::Dimension, "null argument");
        *out = mesh->mesh.layerCount({rectOf(inner)}, {rectOf(outer)});
    });
}

sp_status sp_space_create(const sp_mesh* mesh, int degree, sp_space** out) {
    return guarded([&]() {
        require(mesh != nullptr && out != nullptr, Err::Dimension, "null argument");
        auto* owner = new sp_mesh{mesh->mesh};
        try {
            *out = new sp_space(owner, LagrangeSpace::build(owner->mesh, degree));
        } catch (...) {
            delete owner;
            throw;
        }
    });
}

void sp_space_destroy(sp_space* space) {
    if (space != nullptr) delete space->owner;
    delete space;
}

sp_status sp_space_dim(const sp_space* space, int* out) {
    return guarded([&]() {
        require(space != nullptr && out != nullptr, Err::Dimension, "null argument");
        *out = space->space.dim();
    });
}

sp_status sp_space_boundary_dof_count(const sp_space* space, int* out) {
    return guarded([&]() {
        require(space != nullptr && out != nullptr, Err::Dimension, "null argument");
        *out = static_cast<int>(space->space.boundaryDofs().size());
    });
}

sp_status sp_space_interior_dof_count(const sp_space* space, const double rect[4], int* out) {
    return guarded([&]() {
        require(space != nullptr && rect != nullptr && out != nullptr, Err::Dimension,
                "null argument");
        *out = static_cast<int>(space->space.interiorDofs({rectOf(rect)}).size());
    });
}

sp_status sp_epsilon(double d, double h, int degree, double* out) {
    return guarded([&]() {
        require(out != nullptr, Err::Dimension, "null argument");
        *out = epsilonFactor(d, h, degree);
    });
}

sp_status sp_cutoff_create(const double plateau[4], const double support[4], sp_cutoff** out) {
    return guarded([&]() {
        require(plateau != nullptr && support != nullptr && out != nullptr, Err::Dimension,
                "null argument");
        *out = new sp_cutoff{CutoffFunction::build(rectOf(plateau), rectOf(support))};
    });
}

void sp_cutoff_destroy(sp_cutoff* cutoff) { delete cutoff; }

sp_status sp_cutoff_value(const sp_cutoff* cutoff, double x, double y, double* out) {
    return guarded([&]() {
        require(cutoff != nullptr && out != nullptr, Err::Dimension, "null argument");
        *out = cutoff->cutoff.value({x, y});
    });
}

sp_status sp_cutoff_gradient(const sp_cutoff* cutoff, double x, double y, double out_grad[2]) {
    return guarded([&]() {
        require(cutoff != nullptr && out_grad != nullptr, Err::Dimension, "null argument");
        const Vec2 g = cutoff->cutoff.gradient({x, y});
        out_grad[0] = g.x;
        out_grad[1] = g.y;
    });
}

sp_status sp_cutoff_derivative_bound(const sp_cutoff* cutoff, double* out) {
    return guarded([&]() {
        require(cutoff != nullptr && out != nullptr, Err::Dimension, "null argument");
        *out = cutoff->cutoff.derivativeBound();
    });
}

sp_status sp_config_parse_file(const char* path, sp_config** out) {
    return guarded([&]() {
        require(path != nullptr && out != nullptr, Err::Dimension, "null argument");
        *out = new sp_config{parseConfigFile(path)};
    });
}

sp_status sp_config_parse_text(const char* text, sp_config** out) {
    return guarded([&]() {
        require(text != nullptr && out != nullptr, Err::Dimension, "null argument");
        *out = new sp_config{parseConfig(text)};
    });
}

void sp_config_destroy(sp_config* config) { delete config; }

sp_status sp_config_experiment(const sp_config* config, char* buf, size_t cap) {
    if (config == nullptr) {
        g_lastError = "null config";
        return SP_ERR_INVALID_ARGUMENT;
    }
    return copyOut(config->config.experiment, buf, cap);
}

sp_status sp_run(const sp_config* config, const char* out_dir, int jobs) {
    return guarded([&]() {
        require(config != nullptr, Err::Dimension, "null config");
        ExperimentConfig cfg = config->config;
        if (out_dir != nullptr && out_dir[0] != '\0') cfg.outDir = out_dir;
        if (jobs > 0) cfg.jobs = jobs;
        const RunOutput out = runToDirectory(cfg, cfg.outDir);
        if (!out.violations.empty()) {
            std::string message;
            for (const std::string& v : out.violations) {
                if (!message.empty()) message += "\n";
                message += v;
            }
            fail(Err::Invariant, message);
        }
    });
}

sp_status sp_compare_files(const char* path_a, const char* path_b, int* mismatches,
                           char* report_buf, size_t report_cap) {
    return guarded([&]() {
        require(path_a != nullptr && path_b != nullptr, Err::Dimension, "null path");
        const CompareReport report = compareRuns(path_a, path_b);
        if (mismatches != nullptr) *mismatches = report.flaggedCells;
        if (report_buf != nullptr && report_cap > 0) {
            std::string text;
            for (const std::string& line : report.lines) {
                text += line;
                text += "\n";
            }
            copyOut(text, report_buf, report_cap);
        }
    });
}

sp_status sp_list_experiments(char* buf, size_t cap) { return copyOut(listExperimentsText(), buf, cap); }

} // extern "C"
