#include "ipp/placement.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <random>

#include "ipp/errors.hpp"
#include "ipp/nelder_mead.hpp"

namespace ipp {

std::string to_string(FitVerdict v) {
    switch (v) {
        case FitVerdict::Overfitted: return "overfitted";
        case FitVerdict::Normal: return "normal";
        case FitVerdict::Underfitted: return "underfitted";
    }
    return "normal";
}

TestGrid make_test_grid(const Region& region, double spacing) {
    region.validate();
    if (spacing <= 0.0) throw ConfigError("test grid spacing must be positive");
    if (spacing > region.bounds.width() && spacing > region.bounds.height())
        throw ConfigError("test grid spacing exceeds both region sides");

    TestGrid grid;
    grid.spacing = spacing;
    const int nx = static_cast<int>(region.bounds.width() / spacing + 1e-9) + 1;
    const int ny = static_cast<int>(region.bounds.height() / spacing + 1e-9) + 1;
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const Vec2 p{region.bounds.min.x + ix * spacing, region.bounds.min.y + iy * spacing};
            if (region.contains(p)) grid.points.push_back(p);
        }
    }
    if (grid.points.size() < 4)
        throw ConfigError("test grid spacing leaves fewer than 4 points in free space");
    return grid;
}

double placement_objective(const std::vector<Vec2>& task_points, const TestGrid& grid,
                           const GpHyperparams& h) {
    if (task_points.empty()) return 0.0;
    std::vector<Vec2> joint = task_points;
    joint.insert(joint.end(), grid.points.begin(), grid.points.end());
    const Eigen::MatrixXd K = gram(joint, h, true);
    std::vector<int> block1(task_points.size());
    std::iota(block1.begin(), block1.end(), 0);
    std::vector<int> block2(grid.points.size());
    std::iota(block2.begin(), block2.end(), static_cast<int>(task_points.size()));
    return mutual_information(K, block1, block2);
}

namespace {

// Stratified start: one sample per cell of a near-square grid over the bounds.
std::vector<Vec2> stratified_start(const Region& region, int n, std::mt19937_64& rng) {
    std::vector<Vec2> pts;
    const int cols = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
    const int rows = std::max(1, (n + cols - 1) / cols);
    const double cw = region.bounds.width() / cols;
    const double ch = region.bounds.height() / rows;
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const int cx = i % cols;
        const int cy = (i / cols) % rows;
        Vec2 p;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            p = {region.bounds.min.x + (cx + uni(rng)) * cw,
                 region.bounds.min.y + (cy + uni(rng)) * ch};
            if (region.contains(p)) break;
        }
        pts.push_back(p);
    }
    return pts;
}

Vec2 clamp_to_bounds(const Vec2& p, const Rect& b) {
    return {std::clamp(p.x, b.min.x, b.max.x), std::clamp(p.y, b.min.y, b.max.y)};
}

// Penalized objective: clamp to bounds, charge per meter of displacement and
// per meter of obstacle penetration, then evaluate the MI at the clamped spot.
double penalized_objective(const std::vector<double>& coords, const Region& region,
                           const TestGrid& grid, const GpHyperparams& h, double penalty) {
    std::vector<Vec2> pts(coords.size() / 2);
    double total_penalty = 0.0;
    for (size_t i = 0; i < pts.size(); ++i) {
        const Vec2 raw{coords[2 * i], coords[2 * i + 1]};
        const Vec2 clamped = clamp_to_bounds(raw, region.bounds);
        total_penalty += penalty * (raw - clamped).norm();
        for (const auto& obs : region.obstacles) {
            if (point_in_polygon(clamped, obs))
                total_penalty += penalty * distance_to_polygon_boundary(clamped, obs);
        }
        pts[i] = clamped;
    }
    return placement_objective(pts, grid, h) - total_penalty;
}

// Project a point into free space: clamp to bounds, and if it lands inside an
// obstacle, walk it to the nearest free test-grid point.
Vec2 project_free(const Vec2& p, const Region& region, const TestGrid& grid) {
    Vec2 q = clamp_to_bounds(p, region.bounds);
    if (region.contains(q)) return q;
    Vec2 best = grid.points.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& g : grid.points) {
        const double d = (g - q).norm();
        if (d < best_d) {
            best_d = d;
            best = g;
        }
    }
    return best;
}

Placement single_restart(const Region& region, int n, const TestGrid& grid,
                         const GpHyperparams& h, std::uint64_t seed,
                         const PlacementOptions& opts) {
    std::mt19937_64 rng(seed);
    const auto start_pts = stratified_start(region, n, rng);
    std::vector<double> x0;
    x0.reserve(2 * start_pts.size());
    for (const auto& p : start_pts) {
        x0.push_back(p.x);
        x0.push_back(p.y);
    }

    auto objective = [&](const std::vector<double>& coords) {
        return -penalized_objective(coords, region, grid, h, opts.penalty_per_meter);
    };

    NelderMeadOptions nm;
    nm.max_iter = opts.max_iter;
    nm.diameter_tol = 1e-6;
    nm.initial_step = 0.1 * std::min(region.bounds.width(), region.bounds.height());
    const auto result = nelder_mead(objective, x0, nm);

    Placement placement;
    placement.locations.resize(n);
    for (int i = 0; i < n; ++i)
        placement.locations[i] =
            project_free({result.x[2 * i], result.x[2 * i + 1]}, region, grid);
    placement.objective = placement_objective(placement.locations, grid, h);

    // The simplex may only have improved on the start point.
    const double start_objective = placement_objective(start_pts, grid, h);
    if (placement.objective < start_objective) {
        placement.locations = start_pts;
        placement.objective = start_objective;
    }
    return placement;
}

}  // namespace

Placement optimize_task_locations(const Region& region, int n, const TestGrid& grid,
                                  const GpHyperparams& h_plan, std::uint64_t seed,
                                  const PlacementOptions& opts, int threads) {
    if (n < 0) throw ConfigError("task count must be nonnegative");
    if (n == 0) return Placement{};
    h_plan.validate();

    std::vector<Placement> candidates(opts.restarts);
    if (threads > 1) {
        std::vector<std::future<Placement>> futures;
        futures.reserve(opts.restarts);
        for (int r = 0; r < opts.restarts; ++r)
            futures.push_back(std::async(std::launch::async, single_restart, std::cref(region), n,
                                         std::cref(grid), std::cref(h_plan), seed + r,
                                         std::cref(opts)));
        for (int r = 0; r < opts.restarts; ++r) candidates[r] = futures[r].get();
    } else {
        for (int r = 0; r < opts.restarts; ++r)
            candidates[r] = single_restart(region, n, grid, h_plan, seed + r, opts);
    }

    // Best objective wins; ties keep the lowest restart index.
    int best = 0;
    for (int r = 1; r < opts.restarts; ++r)
        if (candidates[r].objective > candidates[best].objective) best = r;
    return candidates[best];
}

std::vector<Vec2> hamiltonian_tour(const std::vector<Vec2>& locations) {
    if (locations.empty()) return {};
    std::vector<Vec2> tour;
    std::vector<bool> used(locations.size(), false);
    size_t current = 0;
    used[0] = true;
    tour.push_back(locations[0]);
    for (size_t step = 1; step < locations.size(); ++step) {
        size_t next = 0;
        double best = std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < locations.size(); ++j) {
            if (used[j]) continue;
            const double d = (locations[j] - locations[current]).norm();
            if (d < best) {
                best = d;
                next = j;
            }
        }
        used[next] = true;
        tour.push_back(locations[next]);
        current = next;
    }
    return tour;
}

std::vector<Vec2> sample_polyline(const std::vector<Vec2>& polyline, double spacing) {
    if (polyline.empty()) return {};
    if (spacing <= 0.0) throw ConfigError("sampling spacing must be positive");
    std::vector<Vec2> samples{polyline.front()};
    double carried = 0.0;
    for (size_t i = 0; i + 1 < polyline.size(); ++i) {
        const Vec2 a = polyline[i];
        const Vec2 b = polyline[i + 1];
        const double seg = (b - a).norm();
        double s = spacing - carried;
        while (s <= seg) {
            const double t = s / seg;
            samples.push_back(a + t * (b - a));
            s += spacing;
        }
        carried = seg - (s - spacing);
    }
    if ((samples.back() - polyline.back()).norm() > 1e-9) samples.push_back(polyline.back());
    return samples;
}

FitDiagnostic fitting_diagnostic(const Placement& placement, double sensing_spacing,
                                 const GpHyperparams& h_sensor, const TestGrid& grid) {
    FitDiagnostic diag;
    diag.mi_tasks = placement_objective(placement.locations, grid, h_sensor);
    const auto tour = hamiltonian_tour(placement.locations);
    const auto samples = sample_polyline(tour, sensing_spacing);
    diag.mi_sensing = placement_objective(samples, grid, h_sensor);
    diag.ratio = diag.mi_tasks > 0.0 ? diag.mi_sensing / diag.mi_tasks : 0.0;
    if (diag.ratio < 0.9)
        diag.verdict = FitVerdict::Overfitted;
    else if (diag.ratio > 1.2)
        diag.verdict = FitVerdict::Underfitted;
    else
        diag.verdict = FitVerdict::Normal;
    return diag;
}

}  // namespace ipp
