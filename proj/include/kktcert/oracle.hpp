// Copyright 2026 The kktcert Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Brute-force ground truth for small problems (n <= 3).

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "kktcert/certify.hpp"
#include "kktcert/problem.hpp"

namespace kktcert {

struct OracleResult {
    Vec argmax;
    double value = -std::numeric_limits<double>::infinity();
    double h = 0.0;
    double lipschitz = 0.0;
    /// lipschitz * h * sqrt(n): points within this of `value` count as optimal.
    double gap_bound = 0.0;
    std::size_t feasible_points = 0;
};

class NoFeasiblePoint : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleOptions {
    double feasibility_tol = 1e-12;
    double max_cells = 1e8;
    std::size_t refine_steps = 100;  // refinement step is h / refine_steps over +-h
    std::size_t lipschitz_lattice = 21;
};

namespace detail {

inline std::vector<std::size_t> grid_counts(const Box& box, double h, double max_cells) {
    if (!(h > 0) || !std::isfinite(h)) throw std::invalid_argument("grid step must be > 0");
    std::vector<std::size_t> counts(box.dim());
    double cells = 1.0;
    for (std::size_t i = 0; i < box.dim(); ++i) {
        const double k = std::floor((box.hi[i] - box.lo[i]) / h + 1e-9);
        cells *= k + 1.0;
        counts[i] = static_cast<std::size_t>(k) + 1;
    }
    if (cells > max_cells) throw std::invalid_argument("grid has more than the allowed number of cells");
    return counts;
}

/// Visits lo + k * step over an index lattice in lexicographic order
/// (first coordinate slowest).
inline void for_each_lattice(const Vec& lo, const Vec& step, const std::vector<std::size_t>& counts,
                             const std::function<void(const Vec&)>& visit) {
    const std::size_t n = lo.size();
    std::vector<std::size_t> k(n, 0);
    Vec x(n);
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) x[i] = lo[i] + static_cast<double>(k[i]) * step[i];
        visit(x);
        std::size_t d = n;
        while (d > 0) {
            --d;
            if (++k[d] < counts[d]) break;
            k[d] = 0;
            if (d == 0) return;
        }
        if (n == 0) return;
    }
}

}  // namespace detail

/// Finite-difference Lipschitz estimate of f over the box: max gradient norm
/// over a regular lattice using central differences.
inline double lipschitz_estimate(const Problem& p, std::size_t lattice = 21) {
    const std::size_t n = p.n;
    Vec step(n);
    for (std::size_t i = 0; i < n; ++i) step[i] = (p.box.hi[i] - p.box.lo[i]) / static_cast<double>(lattice - 1);
    const double delta = 1e-6 * std::max(1.0, p.box.max_width());
    double best = 0.0;
    Vec y(n);
    detail::for_each_lattice(p.box.lo, step, std::vector<std::size_t>(n, lattice), [&](const Vec& x) {
        double g2 = 0.0;
        y = x;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = x[i] + delta;
            const double fp = eval(p.objective, y);
            y[i] = x[i] - delta;
            const double fm = eval(p.objective, y);
            y[i] = x[i];
            const double gi = (fp - fm) / (2.0 * delta);
            g2 += gi * gi;
        }
        best = std::max(best, std::sqrt(g2));
    });
    return best;
}

/// Grid maximization of f over K within the box, followed by one local
/// refinement pass around the incumbent. Ties go to the lexicographically
/// smallest grid point; refinement only moves on strict improvement.
inline OracleResult grid_max(const Problem& p, double h, const OracleOptions& opt = {}) {
    const auto counts = detail::grid_counts(p.box, h, opt.max_cells);
    OracleResult res;
    res.h = h;
    detail::for_each_lattice(p.box.lo, Vec(p.n, h), counts, [&](const Vec& x) {
        if (!is_feasible(p, x, opt.feasibility_tol)) return;
        ++res.feasible_points;
        const double v = eval(p.objective, x);
        if (v > res.value) {
            res.value = v;
            res.argmax = x;
        }
    });
    if (res.feasible_points == 0) throw NoFeasiblePoint("grid_max: no feasible grid point");

    const double fine = h / static_cast<double>(opt.refine_steps);
    Vec lo(p.n);
    for (std::size_t i = 0; i < p.n; ++i) lo[i] = res.argmax[i] - h;
    detail::for_each_lattice(lo, Vec(p.n, fine), std::vector<std::size_t>(p.n, 2 * opt.refine_steps + 1),
                             [&](const Vec& x) {
                                 if (!p.box.contains(x) || !is_feasible(p, x, opt.feasibility_tol)) return;
                                 const double v = eval(p.objective, x);
                                 if (v > res.value) {
                                     res.value = v;
                                     res.argmax = x;
                                 }
                             });
    res.lipschitz = lipschitz_estimate(p, opt.lipschitz_lattice);
    res.gap_bound = res.lipschitz * h * std::sqrt(static_cast<double>(p.n));
    return res;
}

/// Feasible points of the h-grid, lexicographic order.
inline std::vector<Vec> feasible_grid_points(const Problem& p, double h, const OracleOptions& opt = {}) {
    const auto counts = detail::grid_counts(p.box, h, opt.max_cells);
    std::vector<Vec> out;
    detail::for_each_lattice(p.box.lo, Vec(p.n, h), counts, [&](const Vec& x) {
        if (is_feasible(p, x, opt.feasibility_tol)) out.push_back(x);
    });
    return out;
}

struct ScanEntry {
    Vec point;
    Verdict verdict = Verdict::NotApplicable;
};

/// kkt_check at each candidate, in input order; the Slater search runs once.
inline std::vector<ScanEntry> kkt_scan(const Problem& p, const std::vector<Vec>& candidates,
                                       const CertifyOptions& opt = {}) {
    std::vector<ScanEntry> out;
    if (candidates.empty()) return out;
    const SlaterResult slater = slater_find(p, opt);
    out.reserve(candidates.size());
    for (const auto& x : candidates) out.push_back({x, kkt_check(p, x, opt, &slater).verdict});
    return out;
}

}  // namespace kktcert
