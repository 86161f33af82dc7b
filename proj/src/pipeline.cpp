#include "ipp/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ipp/errors.hpp"
#include "ipp/planner.hpp"

namespace ipp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArtifactError("missing input artifact: " + path);
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

json load_json(const std::string& path) {
    auto in = open_in(path);
    json j;
    in >> j;
    return j;
}

}  // namespace

void write_placement_csv(const std::string& path, const Placement& placement) {
    auto out = open_out(path);
    out << "task_id,x,y\n";
    for (size_t i = 0; i < placement.locations.size(); ++i)
        out << i << ',' << fmt(placement.locations[i].x) << ',' << fmt(placement.locations[i].y)
            << '\n';
}

Placement read_placement_csv(const std::string& path) {
    auto in = open_in(path);
    Placement placement;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) throw ArtifactError("malformed placement row: " + line);
        placement.locations.push_back({std::stod(fields[1]), std::stod(fields[2])});
    }
    return placement;
}

void write_diagnostic(const std::string& path, const FitDiagnostic& diag) {
    auto out = open_out(path);
    out << "mi_tasks = " << fmt(diag.mi_tasks) << '\n';
    out << "mi_sensing = " << fmt(diag.mi_sensing) << '\n';
    out << "ratio = " << fmt(diag.ratio) << '\n';
    out << "verdict = " << to_string(diag.verdict) << '\n';
}

void write_cost_matrix_csv(const std::string& path, const CostMatrix& cm) {
    auto out = open_out(path);
    out << "from_id,to_id,cost,length\n";
    for (int i = 0; i < cm.size(); ++i)
        for (int j = 0; j < cm.size(); ++j) {
            if (i == j || !cm.has(i, j)) continue;
            out << i << ',' << j << ',' << fmt(cm.cost(i, j)) << ',' << fmt(cm.path(i, j).length)
                << '\n';
        }
}

void write_paths_json(const std::string& path, const CostMatrix& cm) {
    json paths = json::array();
    for (int i = 0; i < cm.size(); ++i)
        for (int j = 0; j < cm.size(); ++j) {
            if (i == j || !cm.has(i, j)) continue;
            json waypoints = json::array();
            for (const auto& w : cm.path(i, j).waypoints) waypoints.push_back({w.x, w.y});
            paths.push_back({{"from", i}, {"to", j}, {"waypoints", std::move(waypoints)}});
        }
    auto out = open_out(path);
    out << paths.dump(1) << '\n';
}

CostMatrix read_cost_matrix(const std::string& cost_csv, const std::string& paths_json, int n,
                            int m) {
    CostMatrix cm(n, m);
    {
        auto in = open_in(cost_csv);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto fields = split_csv_line(line);
            if (fields.size() != 4) throw ArtifactError("malformed cost matrix row: " + line);
            PlannedPath path;
            path.cost = std::stod(fields[2]);
            path.length = std::stod(fields[3]);
            cm.set(std::stoi(fields[0]), std::stoi(fields[1]), path.cost, path);
        }
    }
    if (!paths_json.empty()) {
        const json paths = load_json(paths_json);
        for (const auto& entry : paths) {
            const int from = entry.at("from").get<int>();
            const int to = entry.at("to").get<int>();
            PlannedPath path = cm.path(from, to);
            path.waypoints.clear();
            for (const auto& w : entry.at("waypoints"))
                path.waypoints.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
            cm.set(from, to, cm.cost(from, to), std::move(path));
        }
    }
    return cm;
}

void write_route_json(const std::string& path, const RouteSolution& sol, int num_tasks) {
    json uavs = json::array();
    for (size_t k = 0; k < sol.tours.size(); ++k)
        uavs.push_back({{"uav_id", k},
                        {"depot_id", num_tasks + static_cast<int>(k)},
                        {"tour", sol.tours[k]},
                        {"cost", sol.tour_costs[k]}});
    const json doc = {{"c_max", sol.c_max}, {"uavs", std::move(uavs)}};
    auto out = open_out(path);
    out << doc.dump(1) << '\n';
}

RouteSolution read_route_json(const std::string& path) {
    const json doc = load_json(path);
    RouteSolution sol;
    sol.c_max = doc.at("c_max").get<double>();
    for (const auto& uav : doc.at("uavs")) {
        sol.tours.push_back(uav.at("tour").get<std::vector<int>>());
        sol.tour_costs.push_back(uav.at("cost").get<double>());
    }
    return sol;
}

void write_trajectories_csv(const std::string& path,
                            const std::vector<std::vector<TimedState>>& trajectories) {
    auto out = open_out(path);
    out << "t,uav_id,x,y,heading\n";
    for (size_t k = 0; k < trajectories.size(); ++k)
        for (const auto& ts : trajectories[k])
            out << fmt(ts.time) << ',' << k << ',' << fmt(ts.state.position.x) << ','
                << fmt(ts.state.position.y) << ',' << fmt(ts.state.heading) << '\n';
}

void write_measurements_csv(const std::string& path,
                            const std::vector<Measurement>& measurements) {
    auto out = open_out(path);
    out << "t,uav_id,x,y,value_dbm\n";
    for (const auto& meas : measurements)
        out << fmt(meas.time) << ',' << meas.uav_id << ',' << fmt(meas.position.x) << ','
            << fmt(meas.position.y) << ',' << fmt(meas.value_dbm) << '\n';
}

std::vector<Measurement> read_measurements_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<Measurement> out;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) throw ArtifactError("malformed measurement row: " + line);
        Measurement meas;
        meas.time = std::stod(fields[0]);
        meas.uav_id = std::stoi(fields[1]);
        meas.position = {std::stod(fields[2]), std::stod(fields[3])};
        meas.value_dbm = std::stod(fields[4]);
        out.push_back(meas);
    }
    return out;
}

void write_belief_csv(const std::string& mean_path, const std::string& std_path,
                      const BeliefMap& belief) {
    auto mean_out = open_out(mean_path);
    mean_out << "x,y,mean_dbm\n";
    auto std_out = open_out(std_path);
    std_out << "x,y,std_dbm\n";
    for (size_t i = 0; i < belief.grid.points.size(); ++i) {
        const Vec2& p = belief.grid.points[i];
        mean_out << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(belief.mean[i]) << '\n';
        std_out << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(std::sqrt(belief.variance[i]))
                << '\n';
    }
}

void write_metrics_json(const std::string& path, const MissionResult& result) {
    json timeline = json::array();
    for (const auto& snap : result.timeline)
        timeline.push_back({{"measurements", snap.measurement_count},
                            {"rmse", snap.rmse},
                            {"mean_std", snap.mean_std},
                            {"cumulative_mi", snap.cumulative_mi},
                            {"sigma_f", snap.hyper.sigma_f},
                            {"length_x", snap.hyper.length_scales.x},
                            {"length_y", snap.hyper.length_scales.y}});
    const json doc = {{"prior_rmse", result.prior_rmse},
                      {"prior_std", result.prior_std},
                      {"timeline", std::move(timeline)}};
    auto out = open_out(path);
    out << doc.dump(1) << '\n';
}

void write_truth_csv(const std::string& path, const TestGrid& grid, const RfSource& src,
                     const ShadowField& shadow) {
    auto out = open_out(path);
    out << "x,y,value_dbm\n";
    for (const auto& p : grid.points)
        out << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(rf_truth(p, src, shadow)) << '\n';
}

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    fs::create_directories(cfg_.out_dir);
}

std::string Pipeline::artifact(const std::string& filename) const {
    return (fs::path(cfg_.out_dir) / filename).string();
}

const std::vector<std::string>& Pipeline::stage_names() {
    static const std::vector<std::string> names{"place", "costs", "route", "simulate",
                                                "truth-export"};
    return names;
}

WindField Pipeline::build_wind() const {
    WindParams params = cfg_.wind;
    params.seed = cfg_.seed + 1;
    return make_wind(cfg_.wind_kind, params, cfg_.region, cfg_.wind_spacing);
}

ShadowField Pipeline::build_shadow() const {
    RfSource src = cfg_.rf;
    src.seed = cfg_.seed + 2;
    return make_shadow_field(cfg_.region, cfg_.shadow_spacing, src);
}

TestGrid Pipeline::build_grid() const { return make_test_grid(cfg_.region, cfg_.grid_spacing); }

void Pipeline::stage_place() {
    const TestGrid grid = build_grid();
    PlacementOptions opts;
    opts.restarts = cfg_.placement_restarts;
    const Placement placement = optimize_task_locations(
        cfg_.region, cfg_.task_count, grid, cfg_.planning_hyper(), cfg_.seed + 3, opts,
        cfg_.threads);
    placement_objective_ = placement.objective;

    const double sensing_spacing = cfg_.uav_speed * cfg_.sensing_period;
    const FitDiagnostic diag = fitting_diagnostic(placement, sensing_spacing, cfg_.sensor, grid);

    write_placement_csv(artifact("placement.csv"), placement);
    write_diagnostic(artifact("diagnostic.txt"), diag);
}

void Pipeline::stage_costs() {
    const Placement placement = read_placement_csv(artifact("placement.csv"));
    const WindField field = build_wind();
    if (field.max_speed() >= cfg_.v0)
        throw PreconditionError("planner requires v0 above the maximum wind speed");

    std::vector<Vec2> fixed = placement.locations;
    fixed.insert(fixed.end(), cfg_.depots.begin(), cfg_.depots.end());
    SampleGraph graph = build_sample_graph(cfg_.region, field, fixed, cfg_.planner_samples,
                                           cfg_.seed + 4, cfg_.planner_gamma);

    const int n = static_cast<int>(placement.locations.size());
    const int m = static_cast<int>(cfg_.depots.size());
    std::vector<int> task_nodes(n);
    std::vector<int> depot_nodes(m);
    for (int t = 0; t < n; ++t) task_nodes[t] = t;
    for (int d = 0; d < m; ++d) depot_nodes[d] = n + d;

    const CostMatrix cm =
        build_cost_matrix(graph, depot_nodes, task_nodes, field, cfg_.v0, cfg_.threads);
    write_cost_matrix_csv(artifact("cost_matrix.csv"), cm);
    write_paths_json(artifact("paths.json"), cm);
}

void Pipeline::stage_route() {
    const Placement placement = read_placement_csv(artifact("placement.csv"));
    const int n = static_cast<int>(placement.locations.size());
    const int m = static_cast<int>(cfg_.depots.size());
    const CostMatrix cm = read_cost_matrix(artifact("cost_matrix.csv"), "", n, m);
    const RouteSolution sol = solve_ga(cm, cfg_.ga, cfg_.seed + 5);
    const auto violations = check_feasible(sol, n, m, cm);
    if (!violations.empty()) throw NumericError("routing produced an infeasible solution");
    c_max_ = sol.c_max;
    write_route_json(artifact("route.json"), sol, n);
}

void Pipeline::stage_simulate() {
    const Placement placement = read_placement_csv(artifact("placement.csv"));
    const int n = static_cast<int>(placement.locations.size());
    const int m = static_cast<int>(cfg_.depots.size());
    const CostMatrix cm =
        read_cost_matrix(artifact("cost_matrix.csv"), artifact("paths.json"), n, m);
    const RouteSolution routes = read_route_json(artifact("route.json"));

    const ShadowField shadow = build_shadow();
    const TestGrid grid = build_grid();

    UavState uav;
    uav.speed = cfg_.uav_speed;
    uav.r_min = cfg_.uav_r_min;

    MissionParams params;
    params.sensing_period = cfg_.sensing_period;
    params.refit_every = cfg_.refit_every;
    params.refit = cfg_.refit;
    params.tracking.dt = cfg_.tracking_dt;
    params.tracking.max_time = cfg_.mission_max_time;
    params.prior_mean_dbm = cfg_.prior_mean_dbm;
    params.seed = cfg_.seed + 6;
    params.threads = cfg_.threads;

    RfSource src = cfg_.rf;
    src.seed = cfg_.seed + 2;
    const MissionResult result = run_mission(cfg_.region, src, shadow, routes, cm, cfg_.depots,
                                             uav, grid, cfg_.sensor, params);
    final_rmse_ = result.timeline.back().rmse;
    final_mean_std_ = result.timeline.back().mean_std;

    write_trajectories_csv(artifact("trajectories.csv"), result.trajectories);
    write_measurements_csv(artifact("measurements.csv"), result.measurements);
    write_belief_csv(artifact("belief_mean.csv"), artifact("belief_std.csv"),
                     result.final_belief);
    write_metrics_json(artifact("metrics.json"), result);
}

void Pipeline::stage_truth_export() {
    RfSource src = cfg_.rf;
    src.seed = cfg_.seed + 2;
    write_truth_csv(artifact("truth.csv"), build_grid(), src, build_shadow());
}

void Pipeline::run_stage(const std::string& name) {
    if (name == "place")
        stage_place();
    else if (name == "costs")
        stage_costs();
    else if (name == "route")
        stage_route();
    else if (name == "simulate")
        stage_simulate();
    else if (name == "truth-export")
        stage_truth_export();
    else
        throw ConfigError("unknown stage: " + name);
}

void Pipeline::run_all() {
    using clock = std::chrono::steady_clock;
    json timings;
    for (const std::string stage : {"place", "costs", "route", "simulate"}) {
        const auto begin = clock::now();
        run_stage(stage);
        timings[stage] = std::chrono::duration<double>(clock::now() - begin).count();
    }
    // Wall-clock timings make summary.json the one non-reproducible artifact.
    const json summary = {{"placement_objective", placement_objective_},
                          {"c_max", c_max_},
                          {"final_rmse", final_rmse_},
                          {"final_mean_std", final_mean_std_},
                          {"stage_seconds", std::move(timings)}};
    auto out = open_out(artifact("summary.json"));
    out << summary.dump(1) << '\n';
}

}  // namespace ipp
