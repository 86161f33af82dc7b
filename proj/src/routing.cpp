#include "ipp/routing.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "ipp/errors.hpp"

namespace ipp {

double RouteSolution::total_cost() const {
    return std::accumulate(tour_costs.begin(), tour_costs.end(), 0.0);
}

double route_cost(const std::vector<int>& tour, int depot, const CostMatrix& cm) {
    if (tour.empty()) return 0.0;
    if (depot < cm.num_tasks() || depot >= cm.size())
        throw ConfigError("invalid depot id in route cost");
    std::vector<bool> seen(cm.num_tasks(), false);
    for (int t : tour) {
        if (t < 0 || t >= cm.num_tasks()) throw ConfigError("invalid task id in route cost");
        if (seen[t]) throw ConfigError("duplicate task id in route cost");
        seen[t] = true;
    }
    double cost = cm.cost(depot, tour.front());
    for (size_t i = 0; i + 1 < tour.size(); ++i) cost += cm.cost(tour[i], tour[i + 1]);
    cost += cm.cost(tour.back(), depot);
    return cost;
}

RouteSolution evaluate_solution(std::vector<std::vector<int>> tours, const CostMatrix& cm) {
    RouteSolution sol;
    sol.tours = std::move(tours);
    sol.tour_costs.resize(sol.tours.size());
    sol.c_max = 0.0;
    for (size_t k = 0; k < sol.tours.size(); ++k) {
        sol.tour_costs[k] = route_cost(sol.tours[k], cm.num_tasks() + static_cast<int>(k), cm);
        sol.c_max = std::max(sol.c_max, sol.tour_costs[k]);
    }
    return sol;
}

std::vector<std::string> check_feasible(const RouteSolution& sol, int n, int m,
                                        const CostMatrix& cm) {
    std::vector<std::string> violations;
    if (static_cast<int>(sol.tours.size()) != m) {
        violations.push_back("uav-count: expected one tour slot per UAV");
        return violations;
    }

    std::vector<int> visits(n, 0);
    for (const auto& tour : sol.tours)
        for (int t : tour) {
            if (t < 0 || t >= n) {
                violations.push_back("task-id: tour references an unknown task");
                return violations;
            }
            ++visits[t];
        }
    for (int t = 0; t < n; ++t) {
        if (visits[t] != 1) {
            std::ostringstream msg;
            msg << "task-coverage: task " << t << " visited " << visits[t]
                << " times (must be exactly once)";
            violations.push_back(msg.str());
        }
    }

    double max_cost = 0.0;
    for (int k = 0; k < m; ++k) {
        const double recomputed = route_cost(sol.tours[k], n + k, cm);
        if (k < static_cast<int>(sol.tour_costs.size()) &&
            std::abs(recomputed - sol.tour_costs[k]) > 1e-9) {
            std::ostringstream msg;
            msg << "tour-cost: UAV " << k << " cost " << sol.tour_costs[k]
                << " does not match recomputation " << recomputed;
            violations.push_back(msg.str());
        }
        max_cost = std::max(max_cost, recomputed);
    }
    if (sol.c_max < max_cost - 1e-9) {
        std::ostringstream msg;
        msg << "cost-bound: objective " << sol.c_max << " is below the longest tour cost "
            << max_cost;
        violations.push_back(msg.str());
    }

    // Depot return and subtour exclusion hold structurally: a tour is an open
    // walk depot -> tasks -> depot and never detaches from its depot.
    return violations;
}

namespace {

// Deterministic ranking: objective, then total cost, then lexicographic tours.
bool better_than(const RouteSolution& a, const RouteSolution& b) {
    if (a.c_max != b.c_max) return a.c_max < b.c_max;
    const double ta = a.total_cost();
    const double tb = b.total_cost();
    if (ta != tb) return ta < tb;
    return a.tours < b.tours;
}

std::vector<std::vector<int>> split_permutation(const std::vector<int>& perm,
                                                const std::vector<int>& splits, int m) {
    std::vector<std::vector<int>> tours(m);
    int begin = 0;
    for (int k = 0; k < m; ++k) {
        const int end = k + 1 < m ? splits[k] : static_cast<int>(perm.size());
        tours[k].assign(perm.begin() + begin, perm.begin() + end);
        begin = end;
    }
    return tours;
}

}  // namespace

RouteSolution brute_force(const CostMatrix& cm) {
    const int n = cm.num_tasks();
    const int m = cm.num_depots();
    if (n > 9 || m > 3) throw ConfigError("brute force limited to n <= 9, m <= 3");
    if (n < 1 || m < 1) throw ConfigError("brute force needs at least one task and one depot");

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    RouteSolution best;
    bool have_best = false;
    do {
        // All non-decreasing split positions, empty tours allowed.
        std::vector<int> splits(std::max(m - 1, 0), 0);
        while (true) {
            RouteSolution sol = evaluate_solution(split_permutation(perm, splits, m), cm);
            if (!have_best || better_than(sol, best)) {
                best = std::move(sol);
                have_best = true;
            }
            int k = m - 2;
            while (k >= 0 && splits[k] == n) --k;
            if (k < 0) break;
            ++splits[k];
            for (int j = k + 1; j < m - 1; ++j) splits[j] = splits[k];
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

namespace {

struct Chromosome {
    std::vector<int> perm;
    std::vector<int> splits;  // m-1 non-decreasing positions in [0, n]
    RouteSolution decoded;
};

void normalize_splits(std::vector<int>& splits, int n) {
    for (int& s : splits) s = std::clamp(s, 0, n);
    std::sort(splits.begin(), splits.end());
}

Chromosome decode(std::vector<int> perm, std::vector<int> splits, const CostMatrix& cm) {
    Chromosome c;
    c.perm = std::move(perm);
    c.splits = std::move(splits);
    c.decoded = evaluate_solution(split_permutation(c.perm, c.splits, cm.num_depots()), cm);
    return c;
}

Chromosome random_chromosome(int n, int m, const CostMatrix& cm, std::mt19937_64& rng) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> splits(m - 1);
    std::uniform_int_distribution<int> pos(0, n);
    for (int& s : splits) s = pos(rng);
    normalize_splits(splits, n);
    return decode(std::move(perm), std::move(splits), cm);
}

// Order crossover: keep a slice from parent a, fill the rest in parent b order.
std::vector<int> order_crossover(const std::vector<int>& a, const std::vector<int>& b,
                                 std::mt19937_64& rng) {
    const int n = static_cast<int>(a.size());
    if (n < 2) return a;
    std::uniform_int_distribution<int> pos(0, n - 1);
    int lo = pos(rng);
    int hi = pos(rng);
    if (lo > hi) std::swap(lo, hi);
    std::vector<int> child(n, -1);
    std::vector<bool> used(n, false);
    for (int i = lo; i <= hi; ++i) {
        child[i] = a[i];
        used[a[i]] = true;
    }
    int fill = (hi + 1) % n;
    for (int i = 0; i < n; ++i) {
        const int gene = b[(hi + 1 + i) % n];
        if (used[gene]) continue;
        child[fill] = gene;
        fill = (fill + 1) % n;
    }
    return child;
}

}  // namespace

RouteSolution solve_ga(const CostMatrix& cm, const GaParams& params, std::uint64_t seed) {
    return solve_ga(cm, params, seed, nullptr);
}

RouteSolution solve_ga(const CostMatrix& cm, const GaParams& params, std::uint64_t seed,
                       std::vector<double>* fitness_trace) {
    const int n = cm.num_tasks();
    const int m = cm.num_depots();
    if (n < 1 || m < 1) throw ConfigError("routing needs at least one task and one depot");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<Chromosome> population;
    population.reserve(params.population);
    for (int i = 0; i < params.population; ++i)
        population.push_back(random_chromosome(n, m, cm, rng));

    auto rank = [](const Chromosome& a, const Chromosome& b) {
        return better_than(a.decoded, b.decoded);
    };
    std::stable_sort(population.begin(), population.end(), rank);

    auto tournament_pick = [&]() -> const Chromosome& {
        int best = std::uniform_int_distribution<int>(0, params.population - 1)(rng);
        for (int i = 1; i < params.tournament; ++i) {
            const int c = std::uniform_int_distribution<int>(0, params.population - 1)(rng);
            if (better_than(population[c].decoded, population[best].decoded)) best = c;
        }
        return population[best];
    };

    for (int gen = 0; gen < params.generations; ++gen) {
        std::vector<Chromosome> next;
        next.reserve(params.population);
        for (int e = 0; e < std::min(params.elites, params.population); ++e)
            next.push_back(population[e]);

        while (static_cast<int>(next.size()) < params.population) {
            const Chromosome& pa = tournament_pick();
            const Chromosome& pb = tournament_pick();

            std::vector<int> perm =
                coin(rng) < params.crossover_rate ? order_crossover(pa.perm, pb.perm, rng)
                                                  : pa.perm;
            std::vector<int> splits = pa.splits;

            if (n >= 2 && coin(rng) < params.mutation_swap) {
                std::uniform_int_distribution<int> pos(0, n - 1);
                std::swap(perm[pos(rng)], perm[pos(rng)]);
            }
            if (n >= 2 && coin(rng) < params.mutation_inversion) {
                std::uniform_int_distribution<int> pos(0, n - 1);
                int lo = pos(rng);
                int hi = pos(rng);
                if (lo > hi) std::swap(lo, hi);
                std::reverse(perm.begin() + lo, perm.begin() + hi + 1);
            }
            if (!splits.empty() && coin(rng) < params.mutation_split) {
                const int idx =
                    std::uniform_int_distribution<int>(0, static_cast<int>(splits.size()) - 1)(rng);
                splits[idx] += std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? -1 : 1;
                normalize_splits(splits, n);
            }
            next.push_back(decode(std::move(perm), std::move(splits), cm));
        }

        population = std::move(next);
        std::stable_sort(population.begin(), population.end(), rank);
        if (fitness_trace) fitness_trace->push_back(population.front().decoded.c_max);
    }

    return population.front().decoded;
}

}  // namespace ipp
