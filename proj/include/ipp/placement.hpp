#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipp/geometry.hpp"
#include "ipp/gp.hpp"

namespace ipp {

// Equally spaced free-space lattice the mutual information is measured against.
struct TestGrid {
    std::vector<Vec2> points;
    double spacing = 0.0;
};

struct Placement {
    std::vector<Vec2> locations;
    double objective = 0.0;  // nats
};

enum class FitVerdict { Overfitted, Normal, Underfitted };

std::string to_string(FitVerdict v);

struct FitDiagnostic {
    double mi_tasks = 0.0;    // MI promised by the task locations alone
    double mi_sensing = 0.0;  // MI of samples taken along the tour
    double ratio = 0.0;
    FitVerdict verdict = FitVerdict::Normal;
};

struct PlacementOptions {
    int restarts = 5;
    int max_iter = 200;
    double penalty_per_meter = 1e3;  // nats per meter of out-of-region displacement
};

TestGrid make_test_grid(const Region& region, double spacing);

// Mutual information between the candidate task variables and the grid
// variables under the joint noisy covariance.
double placement_objective(const std::vector<Vec2>& task_points, const TestGrid& grid,
                           const GpHyperparams& h);

// Simplex search over the stacked task coordinates from stratified random
// starts; best of `restarts` independent runs (ties break to the lowest
// restart index). Deterministic for a fixed seed.
Placement optimize_task_locations(const Region& region, int n, const TestGrid& grid,
                                  const GpHyperparams& h_plan, std::uint64_t seed,
                                  const PlacementOptions& opts = {}, int threads = 1);

// Nearest-neighbour tour over the locations, starting at the first one.
std::vector<Vec2> hamiltonian_tour(const std::vector<Vec2>& locations);

// Points every `spacing` meters along a polyline, endpoints included.
std::vector<Vec2> sample_polyline(const std::vector<Vec2>& polyline, double spacing);

// Compares the MI promised by the task locations against the MI of dense
// samples taken every sensing_spacing along their tour, both under the
// sensor hyperparameters. Much more sensing MI than task MI means the tasks
// under-cover the region; much less means they are redundant.
FitDiagnostic fitting_diagnostic(const Placement& placement, double sensing_spacing,
                                 const GpHyperparams& h_sensor, const TestGrid& grid);

}  // namespace ipp
