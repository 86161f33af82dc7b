#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace ipp {

// Derivative-free simplex minimizer with the standard coefficients
// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
struct NelderMeadOptions {
    int max_iter = 200;
    double diameter_tol = 1e-6;
    double initial_step = 0.5;  // per-coordinate simplex offset
};

struct NelderMeadResult {
    std::vector<double> x;
    double fx = 0.0;
    std::vector<double> best_trace;  // best value seen after each iteration, non-increasing
};

inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x0,
                                    const NelderMeadOptions& opts = {}) {
    const size_t n = x0.size();
    struct Vertex {
        std::vector<double> x;
        double fx;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({x0, f(x0)});
    for (size_t i = 0; i < n; ++i) {
        std::vector<double> xi = x0;
        xi[i] += std::max(opts.initial_step, 0.05 * std::abs(x0[i]));
        simplex.push_back({xi, f(xi)});
    }

    NelderMeadResult out;
    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; });
    };
    auto diameter = [&] {
        double d = 0.0;
        for (size_t i = 1; i <= n; ++i)
            for (size_t k = 0; k < n; ++k)
                d = std::max(d, std::abs(simplex[i].x[k] - simplex[0].x[k]));
        return d;
    };

    order();
    for (int iter = 0; iter < opts.max_iter && n > 0; ++iter) {
        if (diameter() < opts.diameter_tol) break;

        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k) centroid[k] += simplex[i].x[k] / static_cast<double>(n);

        Vertex& worst = simplex[n];
        auto affine = [&](double coeff) {
            std::vector<double> x(n);
            for (size_t k = 0; k < n; ++k) x[k] = centroid[k] + coeff * (worst.x[k] - centroid[k]);
            return x;
        };

        std::vector<double> xr = affine(-1.0);
        const double fr = f(xr);
        if (fr < simplex[0].fx) {
            std::vector<double> xe = affine(-2.0);
            const double fe = f(xe);
            if (fe < fr)
                worst = {xe, fe};
            else
                worst = {xr, fr};
        } else if (fr < simplex[n - 1].fx) {
            worst = {xr, fr};
        } else {
            const bool outside = fr < worst.fx;
            std::vector<double> xc = affine(outside ? -0.5 : 0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, worst.fx)) {
                worst = {xc, fc};
            } else {
                for (size_t i = 1; i <= n; ++i) {
                    for (size_t k = 0; k < n; ++k)
                        simplex[i].x[k] = 0.5 * (simplex[i].x[k] + simplex[0].x[k]);
                    simplex[i].fx = f(simplex[i].x);
                }
            }
        }
        order();
        out.best_trace.push_back(simplex[0].fx);
    }

    out.x = simplex[0].x;
    out.fx = simplex[0].fx;
    return out;
}

}  // namespace ipp
