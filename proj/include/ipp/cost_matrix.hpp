#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "ipp/geometry.hpp"

namespace ipp {

struct PlannedPath {
    std::vector<Vec2> waypoints;
    double cost = 0.0;    // seconds-equivalent (energy / (m k v0^2))
    double length = 0.0;  // meters
};

// Asymmetric travel costs and paths between tasks [0, n) and depots [n, n+m).
// Depot-depot entries and the diagonal stay absent (NaN).
class CostMatrix {
public:
    CostMatrix() = default;
    CostMatrix(int num_tasks, int num_depots)
        : n_(num_tasks),
          m_(num_depots),
          costs_(static_cast<size_t>(size()) * size(), std::numeric_limits<double>::quiet_NaN()),
          paths_(static_cast<size_t>(size()) * size()) {}

    int num_tasks() const { return n_; }
    int num_depots() const { return m_; }
    int size() const { return n_ + m_; }
    bool is_depot(int id) const { return id >= n_ && id < size(); }

    bool has(int from, int to) const { return std::isfinite(cost(from, to)); }
    double cost(int from, int to) const { return costs_[index(from, to)]; }
    const PlannedPath& path(int from, int to) const { return paths_[index(from, to)]; }

    void set(int from, int to, double cost, PlannedPath path = {}) {
        costs_[index(from, to)] = cost;
        paths_[index(from, to)] = std::move(path);
    }

private:
    size_t index(int from, int to) const {
        return static_cast<size_t>(from) * size() + to;
    }

    int n_ = 0;
    int m_ = 0;
    std::vector<double> costs_;
    std::vector<PlannedPath> paths_;
};

}  // namespace ipp
