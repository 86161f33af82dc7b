#pragma once

#include <cstdint>
#include <vector>

#include "ipp/cost_matrix.hpp"
#include "ipp/geometry.hpp"
#include "ipp/gp.hpp"
#include "ipp/placement.hpp"
#include "ipp/rf.hpp"
#include "ipp/routing.hpp"

namespace ipp {

struct UavState {
    Vec2 position;
    double heading = 0.0;  // rad, normalized to (-pi, pi]
    double speed = 100.0;  // m/s
    double r_min = 50.0;   // m
};

struct TimedState {
    double time = 0.0;
    UavState state;
};

struct Measurement {
    double time = 0.0;
    Vec2 position;
    double value_dbm = 0.0;
    int uav_id = 0;
};

struct BeliefSnapshot {
    int measurement_count = 0;
    GpHyperparams hyper;
    std::vector<double> mean;      // per grid point, dBm
    std::vector<double> variance;  // per grid point, dBm^2
    double rmse = 0.0;             // vs ground truth on the grid
    double mean_std = 0.0;
    double cumulative_mi = 0.0;    // prior entropy minus posterior entropy, nats
};

struct BeliefMap {
    TestGrid grid;
    std::vector<double> mean;
    std::vector<double> variance;
    GpHyperparams hyper;
};

struct TrackingParams {
    double dt = 0.1;                 // s
    double carrot_factor = 3.0;      // lookahead = factor * r_min
    double heading_gain = 2.0;       // 1/s
    double accept_factor = 1.0;      // acceptance radius = factor * r_min
    double max_time = 1e5;           // s, mission abort threshold
};

double wrap_angle(double a);

// One Euler step of the Dubins kinematics steering toward `carrot`; turn rate
// saturates at v / r_min and the ground speed is exactly v.
UavState step_dubins(const UavState& state, const Vec2& carrot, double dt,
                     double heading_gain = 2.0);

// Pure-pursuit tracking of a reference polyline until the final waypoint is
// inside the acceptance radius. Throws MissionError on timeout.
std::vector<TimedState> track_route(const UavState& start, const std::vector<Vec2>& reference,
                                    const TrackingParams& params = {});

struct MissionParams {
    double sensing_period = 10.0;  // s
    int refit_every = 20;          // measurements between belief refreshes; <= 0 disables refit
    bool refit = true;
    TrackingParams tracking;
    double prior_mean_dbm = 0.0;
    std::uint64_t seed = 0;
    int threads = 1;
};

struct MissionResult {
    std::vector<std::vector<TimedState>> trajectories;  // per UAV
    std::vector<Measurement> measurements;              // merged, time ordered
    std::vector<BeliefSnapshot> timeline;
    BeliefMap final_belief;
    double prior_rmse = 0.0;
    double prior_std = 0.0;
};

// Full sensing mission: track each tour, sample the RF truth with additive
// Gaussian sensor noise every sensing period, and refresh the GP belief map
// over the test grid as measurements accumulate.
MissionResult run_mission(const Region& region, const RfSource& src, const ShadowField& shadow,
                          const RouteSolution& routes, const CostMatrix& cm,
                          const std::vector<Vec2>& depot_positions, const UavState& uav_template,
                          const TestGrid& grid, const GpHyperparams& sensor,
                          const MissionParams& params);

}  // namespace ipp
