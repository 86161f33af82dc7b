#include "ipp/mission.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "ipp/errors.hpp"

namespace ipp {

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * M_PI);
    if (a <= -M_PI) a += 2.0 * M_PI;
    if (a > M_PI) a -= 2.0 * M_PI;
    return a;
}

UavState step_dubins(const UavState& state, const Vec2& carrot, double dt, double heading_gain) {
    if (dt <= 0.0) throw ConfigError("dubins step needs dt > 0");
    const Vec2 to_carrot = carrot - state.position;
    const double desired = std::atan2(to_carrot.y, to_carrot.x);
    const double err = wrap_angle(desired - state.heading);
    const double u_max = state.speed / state.r_min;
    const double u = std::clamp(heading_gain * err, -u_max, u_max);

    UavState next = state;
    next.position.x += state.speed * dt * std::cos(state.heading);
    next.position.y += state.speed * dt * std::sin(state.heading);
    next.heading = wrap_angle(state.heading + u * dt);
    return next;
}

namespace {

struct PolylineIndex {
    const std::vector<Vec2>* pts;
    std::vector<double> cum;  // cumulative arc length per vertex
    double total = 0.0;

    explicit PolylineIndex(const std::vector<Vec2>& polyline) : pts(&polyline) {
        cum.resize(polyline.size(), 0.0);
        for (size_t i = 1; i < polyline.size(); ++i)
            cum[i] = cum[i - 1] + (polyline[i] - polyline[i - 1]).norm();
        total = cum.back();
    }

    Vec2 at(double s) const {
        s = std::clamp(s, 0.0, total);
        const auto it = std::upper_bound(cum.begin(), cum.end(), s);
        const size_t i = std::min(static_cast<size_t>(it - cum.begin()), cum.size() - 1);
        if (i == 0) return pts->front();
        const double seg = cum[i] - cum[i - 1];
        const double t = seg > 0.0 ? (s - cum[i - 1]) / seg : 0.0;
        return (*pts)[i - 1] + t * ((*pts)[i] - (*pts)[i - 1]);
    }

    // Closest arc-length parameter to p within [s_lo, s_hi], never regressing.
    double project(const Vec2& p, double s_lo, double s_hi) const {
        s_hi = std::min(s_hi, total);
        double best_s = s_lo;
        double best_d = (at(s_lo) - p).norm();
        for (size_t i = 1; i < pts->size(); ++i) {
            if (cum[i] < s_lo || cum[i - 1] > s_hi) continue;
            const Vec2 a = (*pts)[i - 1];
            const Vec2 b = (*pts)[i];
            const Vec2 ab = b - a;
            const double len2 = ab.dot(ab);
            double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
            double s = std::clamp(cum[i - 1] + t * std::sqrt(len2), s_lo, s_hi);
            const double d = (at(s) - p).norm();
            if (d < best_d) {
                best_d = d;
                best_s = s;
            }
        }
        return best_s;
    }
};

}  // namespace

std::vector<TimedState> track_route(const UavState& start, const std::vector<Vec2>& reference,
                                    const TrackingParams& params) {
    if (reference.size() < 2) {
        // Nothing to fly: the trajectory is the start state alone.
        return {{0.0, start}};
    }
    const PolylineIndex line(reference);
    const double carrot_dist = params.carrot_factor * start.r_min;
    const double accept = params.accept_factor * start.r_min;

    UavState state = start;
    state.heading = [&] {
        const Vec2 d = line.at(std::min(carrot_dist, line.total)) - start.position;
        return std::atan2(d.y, d.x);
    }();

    std::vector<TimedState> trajectory{{0.0, state}};
    double s = 0.0;
    double t = 0.0;
    // Routes typically end where they start, so closeness to the final
    // waypoint only counts once the whole reference has been traversed.
    auto done = [&] {
        return line.total - s <= accept &&
               (state.position - reference.back()).norm() <= accept;
    };
    while (!done()) {
        s = line.project(state.position, s, s + 2.0 * carrot_dist + state.speed * params.dt);
        const Vec2 carrot = line.at(std::min(s + carrot_dist, line.total));
        state = step_dubins(state, carrot, params.dt, params.heading_gain);
        t += params.dt;
        trajectory.push_back({t, state});
        if (t > params.max_time)
            throw MissionError("route tracking exceeded the mission time budget");
    }
    return trajectory;
}

namespace {

std::vector<Vec2> concatenate_route(const RouteSolution& routes, int uav, const CostMatrix& cm,
                                    const Vec2& depot_pos) {
    const auto& tour = routes.tours[uav];
    if (tour.empty()) return {};
    const int depot_id = cm.num_tasks() + uav;
    std::vector<Vec2> ref{depot_pos};
    int prev = depot_id;
    auto append = [&](int from, int to) {
        const PlannedPath& path = cm.path(from, to);
        if (path.waypoints.size() < 2)
            throw MissionError("cost matrix entry is missing its planned path");
        ref.insert(ref.end(), path.waypoints.begin() + 1, path.waypoints.end());
    };
    for (int task : tour) {
        append(prev, task);
        prev = task;
    }
    append(prev, depot_id);
    return ref;
}

double grid_rmse(const std::vector<double>& mean, const std::vector<double>& truth) {
    double acc = 0.0;
    for (size_t i = 0; i < mean.size(); ++i) {
        const double e = mean[i] - truth[i];
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(mean.size()));
}

}  // namespace

MissionResult run_mission(const Region& region, const RfSource& src, const ShadowField& shadow,
                          const RouteSolution& routes, const CostMatrix& cm,
                          const std::vector<Vec2>& depot_positions, const UavState& uav_template,
                          const TestGrid& grid, const GpHyperparams& sensor,
                          const MissionParams& params) {
    sensor.validate();
    region.validate();
    const int m = static_cast<int>(routes.tours.size());
    if (static_cast<int>(depot_positions.size()) != m)
        throw ConfigError("depot positions must match the number of UAV tours");

    MissionResult result;
    result.trajectories.resize(m);

    auto fly = [&](int k) {
        UavState start = uav_template;
        start.position = depot_positions[k];
        const auto ref = concatenate_route(routes, k, cm, depot_positions[k]);
        return track_route(start, ref, params.tracking);
    };
    if (params.threads > 1) {
        std::vector<std::future<std::vector<TimedState>>> futures;
        futures.reserve(m);
        for (int k = 0; k < m; ++k) futures.push_back(std::async(std::launch::async, fly, k));
        for (int k = 0; k < m; ++k) result.trajectories[k] = futures[k].get();
    } else {
        for (int k = 0; k < m; ++k) result.trajectories[k] = fly(k);
    }

    // Sensing: one sample at t = 0 and then every sensing period, per UAV.
    for (int k = 0; k < m; ++k) {
        std::mt19937_64 rng(params.seed + 1000003ULL * static_cast<std::uint64_t>(k + 1));
        std::normal_distribution<double> gauss(0.0, 1.0);
        const auto& traj = result.trajectories[k];
        const double duration = traj.back().time;
        for (double t = 0.0; t <= duration + 1e-9; t += params.sensing_period) {
            const size_t idx =
                std::min(static_cast<size_t>(std::lround(t / params.tracking.dt)),
                         traj.size() - 1);
            Measurement meas;
            meas.time = t;
            meas.uav_id = k;
            meas.position = traj[idx].state.position;
            meas.value_dbm = rf_truth(meas.position, src, shadow) +
                             sensor.sigma_n * (sensor.sigma_n > 0.0 ? gauss(rng) : 0.0);
            result.measurements.push_back(meas);
        }
    }
    std::stable_sort(result.measurements.begin(), result.measurements.end(),
                     [](const Measurement& a, const Measurement& b) {
                         if (a.time != b.time) return a.time < b.time;
                         return a.uav_id < b.uav_id;
                     });

    // Ground truth and the prior over the grid.
    std::vector<double> truth(grid.points.size());
    for (size_t i = 0; i < grid.points.size(); ++i) truth[i] = rf_truth(grid.points[i], src, shadow);
    std::vector<double> prior_mean(grid.points.size(), params.prior_mean_dbm);
    result.prior_rmse = grid_rmse(prior_mean, truth);
    result.prior_std = sensor.sigma_f;

    // Entropy floor sigma_n^2 on the diagonal keeps both prior and posterior
    // grid covariances well conditioned across the whole mission.
    auto grid_entropy_floor = [&](const Eigen::MatrixXd& cov, double sigma_n) {
        Eigen::MatrixXd K = cov;
        K.diagonal().array() += std::max(sigma_n * sigma_n, 1e-12);
        return entropy(K);
    };

    GpHyperparams hyper = sensor;
    GpModel model;
    model.prior_mean = params.prior_mean_dbm;
    model.hyper = hyper;

    auto snapshot = [&](int count) {
        model.hyper = hyper;
        const Posterior post = predict(model, grid.points);
        BeliefSnapshot snap;
        snap.measurement_count = count;
        snap.hyper = hyper;
        snap.mean.resize(grid.points.size());
        snap.variance.resize(grid.points.size());
        double std_sum = 0.0;
        for (size_t i = 0; i < grid.points.size(); ++i) {
            snap.mean[i] = post.mean(static_cast<Eigen::Index>(i));
            snap.variance[i] = std::max(post.cov(static_cast<Eigen::Index>(i),
                                                 static_cast<Eigen::Index>(i)),
                                        0.0);
            std_sum += std::sqrt(snap.variance[i]);
        }
        snap.mean_std = std_sum / static_cast<double>(grid.points.size());
        snap.rmse = grid_rmse(snap.mean, truth);
        const double h_prior = grid_entropy_floor(gram(grid.points, hyper, false), hyper.sigma_n);
        snap.cumulative_mi = h_prior - grid_entropy_floor(post.cov, hyper.sigma_n);
        result.timeline.push_back(std::move(snap));
    };

    snapshot(0);
    const int refit_every = params.refit_every > 0 ? params.refit_every
                                                   : static_cast<int>(result.measurements.size()) + 1;
    int processed = 0;
    for (const auto& meas : result.measurements) {
        model.train_x.push_back(meas.position);
        model.train_y.push_back(meas.value_dbm);
        ++processed;
        const bool last = processed == static_cast<int>(result.measurements.size());
        if (processed % refit_every == 0 || last) {
            if (params.refit && model.train_x.size() >= 2) {
                model.hyper = hyper;
                hyper = fit_hyperparams(model, hyper);
            }
            snapshot(processed);
        }
    }

    const BeliefSnapshot& final_snap = result.timeline.back();
    result.final_belief.grid = grid;
    result.final_belief.mean = final_snap.mean;
    result.final_belief.variance = final_snap.variance;
    result.final_belief.hyper = final_snap.hyper;
    return result;
}

}  // namespace ipp
