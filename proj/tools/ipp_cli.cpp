// Command-line front end for the planning pipeline; talks to the core
// exclusively through the C shared-library interface.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "ipp/ipp_c.h"

namespace {

struct CommonFlags {
    std::string config;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    bool desk_scale = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config, "Config file (INI-style); defaults are built in");
    cmd->add_option("--out", flags.out_dir, "Output directory");
    cmd->add_option("--seed", flags.seed, "Override every seed in the config")
        ->each([&](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--threads", flags.threads, "Worker threads (1 = sequential reference mode)")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--desk-scale", flags.desk_scale, "Shrink the scenario for fast runs");
}

int run(const CommonFlags& flags, const char* stage) {
    ipp_pipeline* p = nullptr;
    int rc = ipp_pipeline_create(flags.config.empty() ? nullptr : flags.config.c_str(), &p);
    if (rc != IPP_OK) {
        std::fprintf(stderr, "error: cannot load config '%s'\n", flags.config.c_str());
        return rc;
    }
    std::unique_ptr<ipp_pipeline, decltype(&ipp_pipeline_destroy)> guard(p,
                                                                          &ipp_pipeline_destroy);
    if (flags.desk_scale) ipp_pipeline_apply_desk_scale(p);
    if (!flags.out_dir.empty()) ipp_pipeline_set_out_dir(p, flags.out_dir.c_str());
    if (flags.seed_set) ipp_pipeline_set_seed(p, flags.seed);
    ipp_pipeline_set_threads(p, flags.threads);

    rc = stage ? ipp_pipeline_run_stage(p, stage) : ipp_pipeline_run(p);
    if (rc != IPP_OK)
        std::fprintf(stderr, "error (%s): %s\n", stage ? stage : "run", ipp_last_error(p));
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Informative path planning and mapping pipeline for multiple UAVs"};
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
        const char* stage;  // nullptr = full run
        CommonFlags flags;
        CLI::App* cmd = nullptr;
    };
    Sub subs[] = {
        {"run", "Run the full pipeline (place, costs, route, simulate)", nullptr, {}, nullptr},
        {"place", "Optimize task locations", "place", {}, nullptr},
        {"costs", "Build the wind-aware cost matrix", "costs", {}, nullptr},
        {"route", "Solve the min-max multi-depot routing problem", "route", {}, nullptr},
        {"simulate", "Fly the routes and build the belief map", "simulate", {}, nullptr},
        {"truth-export", "Export the ground-truth RF grid", "truth-export", {}, nullptr},
    };
    for (auto& sub : subs) {
        sub.cmd = app.add_subcommand(sub.name, sub.help);
        add_common(sub.cmd, sub.flags);
    }

    CLI11_PARSE(app, argc, argv);

    for (const auto& sub : subs)
        if (sub.cmd->parsed()) return run(sub.flags, sub.stage);
    return IPP_ERR_INVALID;
}
