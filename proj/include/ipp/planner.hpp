#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ipp/cost_matrix.hpp"
#include "ipp/geometry.hpp"
#include "ipp/wind.hpp"

namespace ipp {

// Path-planning cost of flying pq at constant airspeed v0 through the wind
// field: traversal time minus the wind line integral over v0^2. Midpoint rule
// with sub-segments no longer than min(grid spacing, length/4).
// Throws PreconditionError if the local wind speed reaches v0.
double edge_cost(const Vec2& p, const Vec2& q, const WindField& field, double v0);

// Geometric length plus the directed wind line integral of a segment.
struct EdgeEvaluation {
    double length = 0.0;
    double wind_integral = 0.0;  // p -> q direction
};
EdgeEvaluation evaluate_edge(const Vec2& p, const Vec2& q, const WindField& field);

enum class EdgeStatus : std::uint8_t { Unknown, Free, Blocked };

struct EdgeInfo {
    double length = 0.0;
    double wind_integral = 0.0;  // low-index -> high-index direction
    EdgeStatus status = EdgeStatus::Unknown;
    bool evaluated = false;
};

// Free-space samples plus all fixed (depot and task) nodes, with a shared
// cache of per-edge geometry, wind integrals, and collision results. The
// cache is safe for concurrent multi-query runs: values are pure functions
// of the endpoints, so writes are idempotent.
class SampleGraph {
public:
    SampleGraph(const Region& region, std::vector<Vec2> nodes, double radius);

    const Region& region() const { return *region_; }
    const std::vector<Vec2>& nodes() const { return nodes_; }
    double radius() const { return radius_; }

    const std::vector<int>& neighbors(int node) const { return adjacency_[node]; }

    // Cached lazily; length and wind integral in the i -> j direction.
    EdgeEvaluation edge_geometry(int i, int j, const WindField& field);
    bool edge_free(int i, int j);  // lazy collision check, cached

    long collision_checks() const { return collision_checks_.load(); }

private:
    EdgeInfo& slot(int i, int j);

    const Region* region_;
    std::vector<Vec2> nodes_;
    double radius_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<std::unordered_map<int, EdgeInfo>> cache_;  // keyed low node -> high node
    std::mutex cache_mutex_;
    std::atomic<long> collision_checks_{0};
};

// N seeded uniform free-space samples plus the fixed points (fixed points
// come first in the node order). Connection radius
// r = gamma * sqrt(ln M / M) * diam(region), M = N + |fixed|.
SampleGraph build_sample_graph(const Region& region, const WindField& field,
                               const std::vector<Vec2>& fixed, int sample_count,
                               std::uint64_t seed, double gamma = 2.0);

// Multi-query FMT*: one dynamic-programming sweep from `source` that keeps
// expanding until every reachable goal is closed. Unreachable goals map to
// an empty optional.
std::map<int, std::optional<PlannedPath>> fmt_multiquery(SampleGraph& graph, int source,
                                                         const std::vector<int>& goals,
                                                         const WindField& field, double v0);

// One multi-query run per depot/task node; depot-depot entries stay absent.
// Node ids: tasks are graph nodes [0, n), depots [n, n+m).
CostMatrix build_cost_matrix(SampleGraph& graph, const std::vector<int>& depot_nodes,
                             const std::vector<int>& task_nodes, const WindField& field,
                             double v0, int threads = 1);

}  // namespace ipp
