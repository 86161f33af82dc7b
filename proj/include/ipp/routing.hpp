#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipp/cost_matrix.hpp"

namespace ipp {

// One ordered task tour per UAV; UAV k starts and ends at depot n + k.
struct RouteSolution {
    std::vector<std::vector<int>> tours;  // task ids, possibly empty per UAV
    std::vector<double> tour_costs;
    double c_max = 0.0;

    double total_cost() const;
};

// Depot -> first task -> ... -> last task -> depot; empty tours cost 0.
double route_cost(const std::vector<int>& tour, int depot, const CostMatrix& cm);

// Recomputes costs and the min-max objective for a set of tours.
RouteSolution evaluate_solution(std::vector<std::vector<int>> tours, const CostMatrix& cm);

// Constraint check: every task covered exactly once, per-tour costs consistent,
// every tour bounded by the reported objective. Sequence encoding satisfies
// flow conservation, depot return, and subtour exclusion by construction.
std::vector<std::string> check_feasible(const RouteSolution& sol, int n, int m,
                                        const CostMatrix& cm);

// Exhaustive enumeration over ordered task partitions; exact min-max optimum
// with a deterministic tie-break (smaller total cost, then lexicographic
// tours). Enforced limits: n <= 9, m <= 3.
RouteSolution brute_force(const CostMatrix& cm);

struct GaParams {
    int population = 100;
    int generations = 500;
    int tournament = 4;
    double crossover_rate = 0.9;
    double mutation_swap = 0.2;
    double mutation_inversion = 0.2;
    double mutation_split = 0.2;
    int elites = 2;
};

// Genetic solver over (task permutation, m-1 split points) chromosomes;
// fitness is the longest tour cost. Deterministic for a fixed seed, and every
// evaluated individual decodes to a feasible solution.
RouteSolution solve_ga(const CostMatrix& cm, const GaParams& params, std::uint64_t seed);

// Best objective per generation, non-increasing (elitism); filled by solve_ga
// when a trace sink is supplied.
RouteSolution solve_ga(const CostMatrix& cm, const GaParams& params, std::uint64_t seed,
                       std::vector<double>* fitness_trace);

}  // namespace ipp
