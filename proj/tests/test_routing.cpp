#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ipp/errors.hpp"
#include "ipp/routing.hpp"

using namespace ipp;

namespace {

// Euclidean cost matrix from random task/depot positions (asymmetry optional).
CostMatrix random_instance(int n, int m, std::uint64_t seed, double skew = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, 1000.0);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n + m; ++i) pts.push_back({coord(rng), coord(rng)});
    std::uniform_real_distribution<double> jitter(-skew, skew);
    CostMatrix cm(n, m);
    for (int a = 0; a < n + m; ++a)
        for (int b = 0; b < n + m; ++b) {
            if (a == b) continue;
            if (cm.is_depot(a) && cm.is_depot(b)) continue;
            const double dx = pts[a].first - pts[b].first;
            const double dy = pts[a].second - pts[b].second;
            double c = std::hypot(dx, dy);
            if (skew > 0.0) c = std::max(1.0, c + jitter(rng));
            cm.set(a, b, c);
        }
    return cm;
}

}  // namespace

TEST_CASE("route_cost and evaluate_solution") {
    CostMatrix cm(2, 2);
    cm.set(2, 0, 5.0);
    cm.set(0, 2, 7.0);
    cm.set(2, 1, 4.0);
    cm.set(1, 2, 6.0);
    cm.set(0, 1, 1.0);
    cm.set(1, 0, 2.0);
    cm.set(3, 0, 3.0);
    cm.set(0, 3, 3.5);
    cm.set(3, 1, 9.0);
    cm.set(1, 3, 9.5);

    SUBCASE("empty tour costs zero") {
        CHECK(route_cost({}, 2, cm) == 0.0);
    }
    SUBCASE("single-task tour is out-and-back") {
        CHECK(route_cost({0}, 2, cm) == doctest::Approx(12.0));  // 5 + 7
        CHECK(route_cost({0}, 3, cm) == doctest::Approx(6.5));   // 3 + 3.5
    }
    SUBCASE("ordered tour accumulates directed costs") {
        CHECK(route_cost({0, 1}, 2, cm) == doctest::Approx(5.0 + 1.0 + 6.0));
        CHECK(route_cost({1, 0}, 2, cm) == doctest::Approx(4.0 + 2.0 + 7.0));
    }
    SUBCASE("evaluate_solution fills costs and the objective") {
        const auto sol = evaluate_solution({{0}, {1}}, cm);
        CHECK(sol.tour_costs[0] == doctest::Approx(12.0));
        CHECK(sol.tour_costs[1] == doctest::Approx(18.5));
        CHECK(sol.c_max == doctest::Approx(18.5));
        CHECK(sol.total_cost() == doctest::Approx(30.5));
    }
}

TEST_CASE("check_feasible flags broken solutions") {
    const auto cm = random_instance(4, 2, 7);
    auto sol = evaluate_solution({{0, 1}, {2, 3}}, cm);
    CHECK(check_feasible(sol, 4, 2, cm).empty());

    SUBCASE("wrong number of tours") {
        auto bad = sol;
        bad.tours.push_back({});
        bad.tour_costs.push_back(0.0);
        CHECK_FALSE(check_feasible(bad, 4, 2, cm).empty());
    }
    SUBCASE("missing task") {
        const auto bad = evaluate_solution({{0, 1}, {2}}, cm);
        CHECK_FALSE(check_feasible(bad, 4, 2, cm).empty());
    }
    SUBCASE("duplicated task") {
        const auto bad = evaluate_solution({{0, 1, 2}, {2, 3}}, cm);
        CHECK_FALSE(check_feasible(bad, 4, 2, cm).empty());
    }
    SUBCASE("understated objective") {
        auto bad = sol;
        bad.c_max *= 0.5;
        CHECK_FALSE(check_feasible(bad, 4, 2, cm).empty());
    }
    SUBCASE("inconsistent stored tour cost") {
        auto bad = sol;
        bad.tour_costs[0] += 1.0;
        bad.c_max = std::max(bad.tour_costs[0], bad.tour_costs[1]);
        CHECK_FALSE(check_feasible(bad, 4, 2, cm).empty());
    }
}

TEST_CASE("brute_force") {
    SUBCASE("hand-checkable 2-task instance") {
        CostMatrix cm(2, 2);
        // task 0 near depot 2, task 1 near depot 3
        cm.set(2, 0, 1.0); cm.set(0, 2, 1.0);
        cm.set(2, 1, 10.0); cm.set(1, 2, 10.0);
        cm.set(3, 0, 10.0); cm.set(0, 3, 10.0);
        cm.set(3, 1, 1.0); cm.set(1, 3, 1.0);
        cm.set(0, 1, 10.0); cm.set(1, 0, 10.0);
        const auto sol = brute_force(cm);
        CHECK(sol.c_max == doctest::Approx(2.0));
        REQUIRE(sol.tours.size() == 2);
        CHECK(sol.tours[0] == std::vector<int>{0});
        CHECK(sol.tours[1] == std::vector<int>{1});
    }
    SUBCASE("optimum is never beaten by random feasible solutions") {
        const auto cm = random_instance(6, 2, 21, 30.0);
        const auto best = brute_force(cm);
        CHECK(check_feasible(best, 6, 2, cm).empty());
        std::mt19937_64 rng(99);
        std::vector<int> perm{0, 1, 2, 3, 4, 5};
        for (int trial = 0; trial < 200; ++trial) {
            std::shuffle(perm.begin(), perm.end(), rng);
            const int split = static_cast<int>(rng() % 7);
            std::vector<std::vector<int>> tours(2);
            tours[0].assign(perm.begin(), perm.begin() + split);
            tours[1].assign(perm.begin() + split, perm.end());
            const auto cand = evaluate_solution(tours, cm);
            CHECK(cand.c_max >= best.c_max - 1e-9);
        }
    }
    SUBCASE("size limits are enforced") {
        CHECK_THROWS_AS(brute_force(random_instance(10, 2, 3)), ConfigError);
        CHECK_THROWS_AS(brute_force(random_instance(4, 4, 3)), ConfigError);
    }
}

TEST_CASE("solve_ga") {
    GaParams params;
    params.population = 60;
    params.generations = 150;

    SUBCASE("matches brute force on small instances") {
        int hits = 0;
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            const auto cm = random_instance(7, 2, 100 + seed, 20.0);
            const auto exact = brute_force(cm);
            const auto ga = solve_ga(cm, params, seed);
            CHECK(check_feasible(ga, 7, 2, cm).empty());
            CHECK(ga.c_max >= exact.c_max - 1e-9);
            if (ga.c_max <= exact.c_max * 1.05 + 1e-9) ++hits;
        }
        CHECK(hits >= 7);
    }
    SUBCASE("deterministic for a fixed seed") {
        const auto cm = random_instance(8, 3, 55, 10.0);
        const auto a = solve_ga(cm, params, 7);
        const auto b = solve_ga(cm, params, 7);
        CHECK(a.c_max == b.c_max);
        CHECK(a.tours == b.tours);
    }
    SUBCASE("fitness trace is non-increasing under elitism") {
        const auto cm = random_instance(9, 3, 77, 10.0);
        std::vector<double> trace;
        solve_ga(cm, params, 11, &trace);
        REQUIRE(trace.size() == static_cast<size_t>(params.generations));
        for (size_t g = 1; g < trace.size(); ++g) CHECK(trace[g] <= trace[g - 1] + 1e-12);
    }
    SUBCASE("single-uav instance degenerates to a TSP tour over all tasks") {
        const auto cm = random_instance(6, 1, 42);
        const auto sol = solve_ga(cm, params, 1);
        REQUIRE(sol.tours.size() == 1);
        CHECK(sol.tours[0].size() == 6);
        CHECK(check_feasible(sol, 6, 1, cm).empty());
    }
    SUBCASE("zero tasks is rejected") {
        const auto cm = random_instance(0, 2, 5);
        CHECK_THROWS_AS(solve_ga(cm, params, 1), ConfigError);
    }
}
