#include "ipp/planner.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <queue>
#include <random>
#include <sstream>

#include "ipp/errors.hpp"

namespace ipp {

namespace {

struct SegmentScan {
    double length = 0.0;
    double wind_integral = 0.0;
    double max_wind_speed = 0.0;
    int max_wind_subsegment = 0;
};

SegmentScan scan_segment(const Vec2& p, const Vec2& q, const WindField& field) {
    SegmentScan scan;
    scan.length = (q - p).norm();
    if (scan.length <= 0.0) return scan;

    // Midpoint rule; exact for uniform fields.
    const double step = std::min(field.spacing, scan.length / 4.0);
    const int nseg = std::max(4, static_cast<int>(std::ceil(scan.length / step)));
    const Vec2 dir = (q - p) * (1.0 / scan.length);
    const double ds = scan.length / nseg;
    for (int i = 0; i < nseg; ++i) {
        const Vec2 mid = p + (i + 0.5) * ds * dir;
        const Vec2 w = wind_at(field, mid);
        scan.wind_integral += w.dot(dir) * ds;
        const double speed = w.norm();
        if (speed > scan.max_wind_speed) {
            scan.max_wind_speed = speed;
            scan.max_wind_subsegment = i;
        }
    }
    return scan;
}

}  // namespace

EdgeEvaluation evaluate_edge(const Vec2& p, const Vec2& q, const WindField& field) {
    const SegmentScan scan = scan_segment(p, q, field);
    return {scan.length, scan.wind_integral};
}

double edge_cost(const Vec2& p, const Vec2& q, const WindField& field, double v0) {
    if (v0 <= 0.0) throw PreconditionError("airspeed v0 must be positive");
    const SegmentScan scan = scan_segment(p, q, field);
    if (scan.max_wind_speed >= v0) {
        std::ostringstream msg;
        msg << "wind speed " << scan.max_wind_speed << " m/s reaches v0 = " << v0
            << " m/s on sub-segment " << scan.max_wind_subsegment;
        throw PreconditionError(msg.str());
    }
    return scan.length / v0 - scan.wind_integral / (v0 * v0);
}

SampleGraph::SampleGraph(const Region& region, std::vector<Vec2> nodes, double radius)
    : region_(&region), nodes_(std::move(nodes)), radius_(radius) {
    if (radius_ <= 0.0) throw ConfigError("connection radius must be positive");
    const int m = static_cast<int>(nodes_.size());
    adjacency_.resize(m);
    cache_.resize(m);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if ((nodes_[i] - nodes_[j]).norm() <= radius_) {
                adjacency_[i].push_back(j);
                adjacency_[j].push_back(i);
            }
        }
    }
}

EdgeInfo& SampleGraph::slot(int i, int j) {
    const int lo = std::min(i, j);
    const int hi = std::max(i, j);
    return cache_[lo][hi];
}

EdgeEvaluation SampleGraph::edge_geometry(int i, int j, const WindField& field) {
    EdgeInfo info;
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        info = slot(i, j);
    }
    if (!info.evaluated) {
        const int lo = std::min(i, j);
        const int hi = std::max(i, j);
        const EdgeEvaluation eval = evaluate_edge(nodes_[lo], nodes_[hi], field);
        std::lock_guard<std::mutex> lock(cache_mutex_);
        EdgeInfo& stored = slot(i, j);
        stored.length = eval.length;
        stored.wind_integral = eval.wind_integral;
        stored.evaluated = true;
        info = stored;
    }
    const double sign = i <= j ? 1.0 : -1.0;
    return {info.length, sign * info.wind_integral};
}

bool SampleGraph::edge_free(int i, int j) {
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        const EdgeInfo& info = slot(i, j);
        if (info.status != EdgeStatus::Unknown) return info.status == EdgeStatus::Free;
    }
    const bool free = segment_free(*region_, nodes_[i], nodes_[j]);
    collision_checks_.fetch_add(1);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    slot(i, j).status = free ? EdgeStatus::Free : EdgeStatus::Blocked;
    return free;
}

SampleGraph build_sample_graph(const Region& region, const WindField& field,
                               const std::vector<Vec2>& fixed, int sample_count,
                               std::uint64_t seed, double gamma) {
    region.validate();
    if (sample_count < 1) throw ConfigError("sample count must be >= 1");
    for (const auto& p : fixed)
        if (!region.contains(p)) throw ConfigError("fixed planner node lies outside free space");
    (void)field;

    std::vector<Vec2> nodes = fixed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(region.bounds.min.x, region.bounds.max.x);
    std::uniform_real_distribution<double> uy(region.bounds.min.y, region.bounds.max.y);
    long attempts = 0;
    const long max_attempts = 1000L * sample_count;
    while (static_cast<int>(nodes.size()) < sample_count + static_cast<int>(fixed.size())) {
        if (++attempts > max_attempts)
            throw ConfigError("region has too little free space to sample");
        const Vec2 p{ux(rng), uy(rng)};
        if (region.contains(p)) nodes.push_back(p);
    }

    const double m = static_cast<double>(nodes.size());
    const double radius = gamma * std::sqrt(std::log(m) / m) * region.bounds.diagonal();
    return SampleGraph(region, std::move(nodes), radius);
}

std::map<int, std::optional<PlannedPath>> fmt_multiquery(SampleGraph& graph, int source,
                                                         const std::vector<int>& goals,
                                                         const WindField& field, double v0) {
    if (field.max_speed() >= v0)
        throw PreconditionError("airspeed v0 must exceed the maximum wind speed");
    const int m = static_cast<int>(graph.nodes().size());
    if (source < 0 || source >= m) throw ConfigError("source is not a graph node");
    for (int g : goals)
        if (g < 0 || g >= m) throw ConfigError("goal is not a graph node");

    std::vector<double> cost(m, std::numeric_limits<double>::infinity());
    std::vector<int> parent(m, -1);
    std::vector<bool> closed(m, false);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;

    cost[source] = 0.0;
    open.push({0.0, source});

    size_t goals_left = 0;
    std::vector<bool> is_goal(m, false);
    for (int g : goals) {
        if (!is_goal[g]) {
            is_goal[g] = true;
            if (g != source) ++goals_left;
        }
    }

    while (!open.empty() && goals_left > 0) {
        const auto [c, z] = open.top();
        open.pop();
        if (closed[z] || c > cost[z]) continue;
        closed[z] = true;
        if (is_goal[z] && z != source) --goals_left;

        for (int x : graph.neighbors(z)) {
            if (closed[x]) continue;
            const EdgeEvaluation e = graph.edge_geometry(z, x, field);
            const double candidate = cost[z] + e.length / v0 - e.wind_integral / (v0 * v0);
            if (candidate >= cost[x]) continue;
            if (!graph.edge_free(z, x)) continue;  // lazy: checked only when useful
            cost[x] = candidate;
            parent[x] = z;
            open.push({candidate, x});
        }
    }

    std::map<int, std::optional<PlannedPath>> result;
    for (int g : goals) {
        if (!std::isfinite(cost[g])) {
            result[g] = std::nullopt;
            continue;
        }
        PlannedPath path;
        path.cost = cost[g];
        for (int v = g; v != -1; v = parent[v]) path.waypoints.push_back(graph.nodes()[v]);
        std::reverse(path.waypoints.begin(), path.waypoints.end());
        for (size_t i = 0; i + 1 < path.waypoints.size(); ++i)
            path.length += (path.waypoints[i + 1] - path.waypoints[i]).norm();
        result[g] = std::move(path);
    }
    return result;
}

CostMatrix build_cost_matrix(SampleGraph& graph, const std::vector<int>& depot_nodes,
                             const std::vector<int>& task_nodes, const WindField& field,
                             double v0, int threads) {
    if (field.max_speed() >= v0)
        throw PreconditionError("airspeed v0 must exceed the maximum wind speed");
    const int n = static_cast<int>(task_nodes.size());
    const int m = static_cast<int>(depot_nodes.size());
    CostMatrix cm(n, m);

    // Matrix ids: tasks [0, n), depots [n, n+m); map to graph node indices.
    std::vector<int> node_of(n + m);
    for (int t = 0; t < n; ++t) node_of[t] = task_nodes[t];
    for (int d = 0; d < m; ++d) node_of[n + d] = depot_nodes[d];

    auto goals_for = [&](int id) {
        std::vector<int> goals;
        for (int other = 0; other < n + m; ++other) {
            if (other == id) continue;
            if (cm.is_depot(id) && cm.is_depot(other)) continue;  // no depot-depot edges
            goals.push_back(node_of[other]);
        }
        return goals;
    };

    using RunResult = std::map<int, std::optional<PlannedPath>>;
    std::vector<RunResult> runs(n + m);
    if (threads > 1) {
        std::vector<std::future<RunResult>> futures;
        futures.reserve(n + m);
        for (int id = 0; id < n + m; ++id)
            futures.push_back(std::async(std::launch::async, [&, id] {
                return fmt_multiquery(graph, node_of[id], goals_for(id), field, v0);
            }));
        for (int id = 0; id < n + m; ++id) runs[id] = futures[id].get();
    } else {
        for (int id = 0; id < n + m; ++id)
            runs[id] = fmt_multiquery(graph, node_of[id], goals_for(id), field, v0);
    }

    for (int from = 0; from < n + m; ++from) {
        for (const auto& [goal_node, path] : runs[from]) {
            const int to = static_cast<int>(
                std::find(node_of.begin(), node_of.end(), goal_node) - node_of.begin());
            if (!path.has_value()) {
                std::ostringstream msg;
                msg << "no collision-free path from node " << from << " to node " << to;
                throw PreconditionError(msg.str());
            }
            cm.set(from, to, path->cost, *path);
        }
    }
    return cm;
}

}  // namespace ipp
