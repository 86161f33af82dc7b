#ifndef IPP_C_H
#define IPP_C_H

/* C interface to the informative-path-planning pipeline. All state lives
 * behind the opaque ipp_pipeline handle; every call returns an error code
 * and the last failure message is retained per handle. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ipp_pipeline ipp_pipeline;

enum ipp_status {
    IPP_OK = 0,
    IPP_ERR_INVALID = 1, /* bad handle or argument */
    IPP_ERR_CONFIG = 2,  /* unreadable or inconsistent configuration */
    IPP_ERR_STAGE = 3    /* a pipeline stage failed */
};

const char* ipp_version(void);

/* config_path may be NULL to start from built-in defaults. */
int ipp_pipeline_create(const char* config_path, ipp_pipeline** out);
void ipp_pipeline_destroy(ipp_pipeline* p);

int ipp_pipeline_set_out_dir(ipp_pipeline* p, const char* dir);
int ipp_pipeline_set_seed(ipp_pipeline* p, uint64_t seed);
int ipp_pipeline_set_threads(ipp_pipeline* p, int threads);
int ipp_pipeline_apply_desk_scale(ipp_pipeline* p);

/* Runs place -> costs -> route -> simulate and writes all artifacts. */
int ipp_pipeline_run(ipp_pipeline* p);

/* stage: "place", "costs", "route", "simulate", or "truth-export". */
int ipp_pipeline_run_stage(ipp_pipeline* p, const char* stage);

/* Message for the most recent failure on this handle; empty string if none. */
const char* ipp_last_error(const ipp_pipeline* p);

#ifdef __cplusplus
}
#endif

#endif /* IPP_C_H */
