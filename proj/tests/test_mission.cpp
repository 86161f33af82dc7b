#include <doctest.h>

#include <cmath>

#include "ipp/errors.hpp"
#include "ipp/mission.hpp"

using namespace ipp;

namespace {

Region square_region(double side) {
    Region r;
    r.bounds = {{0.0, 0.0}, {side, side}};
    return r;
}

}  // namespace

TEST_CASE("wrap_angle normalizes into (-pi, pi]") {
    CHECK(wrap_angle(0.0) == 0.0);
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(7.1) == doctest::Approx(7.1 - 2.0 * M_PI));
    CHECK(wrap_angle(-7.1) == doctest::Approx(2.0 * M_PI - 7.1));
}

TEST_CASE("step_dubins") {
    UavState s;
    s.position = {0, 0};
    s.heading = 0.0;  // facing +x
    s.speed = 10.0;
    s.r_min = 5.0;

    SUBCASE("ground speed is exact per step") {
        for (const Vec2 carrot : {Vec2{100, 0}, Vec2{0, 100}, Vec2{-50, -20}}) {
            const auto next = step_dubins(s, carrot, 0.1);
            CHECK((next.position - s.position).norm() == doctest::Approx(10.0 * 0.1).epsilon(1e-12));
        }
    }
    SUBCASE("straight flight toward a carrot dead ahead") {
        const auto next = step_dubins(s, {100, 0}, 0.1);
        CHECK(next.position.x == doctest::Approx(1.0));
        CHECK(next.position.y == doctest::Approx(0.0));
        CHECK(next.heading == doctest::Approx(0.0));
    }
    SUBCASE("turn rate saturates at v / r_min") {
        const auto next = step_dubins(s, {-100, 0}, 0.1);  // carrot behind
        const double max_turn = s.speed / s.r_min * 0.1;
        CHECK(std::abs(next.heading) <= max_turn + 1e-12);
        CHECK(std::abs(next.heading) == doctest::Approx(max_turn));
    }
    SUBCASE("minimum turn radius is respected over a full loop") {
        UavState u = s;
        double min_x = 0.0;
        for (int i = 0; i < 1000; ++i) {
            u = step_dubins(u, {u.position.x - 100.0 * std::sin(u.heading + M_PI_2),
                                u.position.y - 100.0 * std::cos(u.heading + M_PI_2)},
                            0.01);
            min_x = std::min(min_x, u.position.x);
        }
        // circling at the saturation rate: radius >= r_min (Euler error margin)
        CHECK(min_x >= -2.0 * s.r_min - 1.0);
    }
}

TEST_CASE("track_route") {
    UavState start;
    start.position = {0, 0};
    start.heading = 0.0;
    start.speed = 10.0;
    start.r_min = 5.0;
    TrackingParams params;
    params.dt = 0.05;

    SUBCASE("reaches the end of a straight reference") {
        const auto traj = track_route(start, {{0, 0}, {500, 0}}, params);
        REQUIRE(traj.size() > 2);
        CHECK((traj.back().state.position - Vec2{500, 0}).norm() <= start.r_min + 1e-9);
        // time stamps strictly increase by dt
        for (size_t i = 1; i < traj.size(); ++i)
            CHECK(traj[i].time == doctest::Approx(traj[i - 1].time + params.dt));
    }
    SUBCASE("tracks a corner without losing the path") {
        const auto traj = track_route(start, {{0, 0}, {200, 0}, {200, 200}}, params);
        CHECK((traj.back().state.position - Vec2{200, 200}).norm() <= start.r_min + 1e-9);
        // cross-track error stays bounded by a few turn radii
        for (const auto& ts : traj) {
            const double d1 = std::abs(ts.state.position.y);                       // leg 1
            const double d2 = std::abs(ts.state.position.x - 200.0);               // leg 2
            CHECK(std::min(d1, d2) < 6.0 * start.r_min);
        }
    }
    SUBCASE("short reference yields the start state only") {
        const auto traj = track_route(start, {{0, 0}}, params);
        REQUIRE(traj.size() == 1);
        CHECK(traj[0].state.position.x == 0.0);
    }
    SUBCASE("unreachable timeout raises MissionError") {
        TrackingParams tight = params;
        tight.max_time = 1.0;  // 10 m/s cannot cover 500 m in 1 s
        CHECK_THROWS_AS(track_route(start, {{0, 0}, {500, 0}}, tight), MissionError);
    }
}

TEST_CASE("run_mission on a desk-size scenario") {
    const Region region = square_region(2000.0);

    RfSource src;
    src.position = {1000, 1000};
    src.tx_power_dbm = 30.0;
    src.frequency_hz = 146e6;
    src.gain_tx_dbi = 6.0;
    src.gain_rx_dbi = 2.0;
    src.shadowing_sigma_db = 2.0;
    src.shadowing_length_m = 200.0;
    src.seed = 3;
    const ShadowField shadow = make_shadow_field(region, 50.0, src);

    const auto grid = make_test_grid(region, 200.0);

    GpHyperparams sensor;
    sensor.sigma_f = 15.0;
    sensor.sigma_n = 1.0;
    sensor.length_scales = {400.0, 400.0};

    // two tasks, two depots, straight-line paths
    const std::vector<Vec2> tasks{{500, 1500}, {1500, 500}};
    const std::vector<Vec2> depots{{100, 100}, {1900, 1900}};
    CostMatrix cm(2, 2);
    auto line = [](Vec2 a, Vec2 b) {
        PlannedPath p;
        p.waypoints = {a, b};
        p.length = (b - a).norm();
        p.cost = p.length / 50.0;
        return p;
    };
    cm.set(2, 0, line(depots[0], tasks[0]).cost, line(depots[0], tasks[0]));
    cm.set(0, 2, line(tasks[0], depots[0]).cost, line(tasks[0], depots[0]));
    cm.set(3, 1, line(depots[1], tasks[1]).cost, line(depots[1], tasks[1]));
    cm.set(1, 3, line(tasks[1], depots[1]).cost, line(tasks[1], depots[1]));
    const auto routes = evaluate_solution({{0}, {1}}, cm);

    UavState tmpl;
    tmpl.speed = 50.0;
    tmpl.r_min = 30.0;

    MissionParams params;
    params.sensing_period = 2.0;
    params.refit_every = 20;
    params.refit = false;  // keep hyperparameters fixed for the MI checks
    params.prior_mean_dbm = -60.0;
    params.seed = 17;

    const auto result = run_mission(region, src, shadow, routes, cm, depots, tmpl, grid, sensor,
                                    params);

    SUBCASE("every UAV produces a trajectory and measurements are time ordered") {
        REQUIRE(result.trajectories.size() == 2);
        for (const auto& traj : result.trajectories) CHECK(traj.size() > 1);
        REQUIRE(result.measurements.size() > 4);
        for (size_t i = 1; i < result.measurements.size(); ++i)
            CHECK(result.measurements[i].time >= result.measurements[i - 1].time);
    }
    SUBCASE("belief improves on the prior") {
        REQUIRE(!result.timeline.empty());
        const auto& last = result.timeline.back();
        CHECK(last.rmse < result.prior_rmse);
        CHECK(last.mean_std < result.prior_std);
        CHECK(result.prior_std == doctest::Approx(sensor.sigma_f).epsilon(1e-9));
    }
    SUBCASE("cumulative mutual information is non-decreasing") {
        double prev = -1e300;
        for (const auto& snap : result.timeline) {
            CHECK(snap.cumulative_mi >= prev - 1e-9);
            prev = snap.cumulative_mi;
        }
        CHECK(result.timeline.back().cumulative_mi > 0.0);
    }
    SUBCASE("deterministic: repeated run is bit-identical") {
        const auto again = run_mission(region, src, shadow, routes, cm, depots, tmpl, grid,
                                       sensor, params);
        REQUIRE(again.measurements.size() == result.measurements.size());
        for (size_t i = 0; i < again.measurements.size(); ++i) {
            CHECK(again.measurements[i].value_dbm == result.measurements[i].value_dbm);
            CHECK(again.measurements[i].position.x == result.measurements[i].position.x);
        }
        REQUIRE(again.final_belief.mean.size() == result.final_belief.mean.size());
        for (size_t i = 0; i < again.final_belief.mean.size(); ++i)
            CHECK(again.final_belief.mean[i] == result.final_belief.mean[i]);
    }
    SUBCASE("threaded tracking matches sequential") {
        MissionParams par = params;
        par.threads = 4;
        const auto threaded = run_mission(region, src, shadow, routes, cm, depots, tmpl, grid,
                                          sensor, par);
        REQUIRE(threaded.measurements.size() == result.measurements.size());
        for (size_t i = 0; i < threaded.measurements.size(); ++i)
            CHECK(threaded.measurements[i].value_dbm == result.measurements[i].value_dbm);
    }
}
