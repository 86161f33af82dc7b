#pragma once

#include <string>
#include <vector>

#include "ipp/config.hpp"
#include "ipp/cost_matrix.hpp"
#include "ipp/mission.hpp"
#include "ipp/placement.hpp"
#include "ipp/routing.hpp"

namespace ipp {

// Artifact readers/writers. All numeric text is written with enough digits
// for exact double round-trips, so stage-wise runs reproduce end-to-end runs.
void write_placement_csv(const std::string& path, const Placement& placement);
Placement read_placement_csv(const std::string& path);

void write_diagnostic(const std::string& path, const FitDiagnostic& diag);

void write_cost_matrix_csv(const std::string& path, const CostMatrix& cm);
void write_paths_json(const std::string& path, const CostMatrix& cm);
CostMatrix read_cost_matrix(const std::string& cost_csv, const std::string& paths_json, int n,
                            int m);

void write_route_json(const std::string& path, const RouteSolution& sol, int num_tasks);
RouteSolution read_route_json(const std::string& path);

void write_trajectories_csv(const std::string& path,
                            const std::vector<std::vector<TimedState>>& trajectories);
void write_measurements_csv(const std::string& path, const std::vector<Measurement>& measurements);
std::vector<Measurement> read_measurements_csv(const std::string& path);
void write_belief_csv(const std::string& mean_path, const std::string& std_path,
                      const BeliefMap& belief);
void write_metrics_json(const std::string& path, const MissionResult& result);

void write_truth_csv(const std::string& path, const TestGrid& grid, const RfSource& src,
                     const ShadowField& shadow);

// Stage orchestration over a config and its output directory. Later stages
// read the artifact files written by earlier ones.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg);

    // place -> costs -> route -> simulate, plus summary.json with timings.
    void run_all();

    // One of: place, costs, route, simulate, truth-export.
    void run_stage(const std::string& name);

    static const std::vector<std::string>& stage_names();

    const PipelineConfig& config() const { return cfg_; }
    std::string artifact(const std::string& filename) const;

private:
    void stage_place();
    void stage_costs();
    void stage_route();
    void stage_simulate();
    void stage_truth_export();

    WindField build_wind() const;
    ShadowField build_shadow() const;
    TestGrid build_grid() const;

    PipelineConfig cfg_;
    // filled by stages for the summary
    double placement_objective_ = 0.0;
    double c_max_ = 0.0;
    double final_rmse_ = 0.0;
    double final_mean_std_ = 0.0;
};

}  // namespace ipp
