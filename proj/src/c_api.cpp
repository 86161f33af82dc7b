#include "ipp/ipp_c.h"

#include <string>

#include "ipp/config.hpp"
#include "ipp/errors.hpp"
#include "ipp/pipeline.hpp"

struct ipp_pipeline {
    ipp::PipelineConfig config;
    std::string last_error;
};

namespace {

int capture(ipp_pipeline* p, int code, const char* what) {
    p->last_error = what;
    return code;
}

template <typename Fn>
int guarded(ipp_pipeline* p, Fn&& fn) {
    if (!p) return IPP_ERR_INVALID;
    try {
        fn();
        p->last_error.clear();
        return IPP_OK;
    } catch (const ipp::ConfigError& e) {
        return capture(p, IPP_ERR_CONFIG, e.what());
    } catch (const std::exception& e) {
        return capture(p, IPP_ERR_STAGE, e.what());
    }
}

}  // namespace

extern "C" {

const char* ipp_version(void) { return "0.1.0"; }

int ipp_pipeline_create(const char* config_path, ipp_pipeline** out) {
    if (!out) return IPP_ERR_INVALID;
    *out = nullptr;
    auto* p = new ipp_pipeline{ipp::default_config(), {}};
    if (config_path) {
        const int rc = guarded(p, [&] { p->config = ipp::load_config(config_path); });
        if (rc != IPP_OK) {
            delete p;
            return rc;
        }
    }
    *out = p;
    return IPP_OK;
}

void ipp_pipeline_destroy(ipp_pipeline* p) { delete p; }

int ipp_pipeline_set_out_dir(ipp_pipeline* p, const char* dir) {
    if (!p || !dir) return IPP_ERR_INVALID;
    p->config.out_dir = dir;
    return IPP_OK;
}

int ipp_pipeline_set_seed(ipp_pipeline* p, uint64_t seed) {
    if (!p) return IPP_ERR_INVALID;
    p->config.seed = seed;
    return IPP_OK;
}

int ipp_pipeline_set_threads(ipp_pipeline* p, int threads) {
    if (!p || threads < 1) return IPP_ERR_INVALID;
    p->config.threads = threads;
    return IPP_OK;
}

int ipp_pipeline_apply_desk_scale(ipp_pipeline* p) {
    if (!p) return IPP_ERR_INVALID;
    return guarded(p, [&] { ipp::apply_desk_scale(p->config); });
}

int ipp_pipeline_run(ipp_pipeline* p) {
    return guarded(p, [&] {
        ipp::Pipeline pipeline(p->config);
        pipeline.run_all();
    });
}

int ipp_pipeline_run_stage(ipp_pipeline* p, const char* stage) {
    if (!stage) return IPP_ERR_INVALID;
    const std::string name = stage;
    return guarded(p, [&] {
        ipp::Pipeline pipeline(p->config);
        pipeline.run_stage(name);
    });
}

const char* ipp_last_error(const ipp_pipeline* p) {
    return p ? p->last_error.c_str() : "invalid handle";
}

}  // extern "C"
