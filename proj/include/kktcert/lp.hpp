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

// Dense phase-1 simplex for linear feasibility systems
//
//     A x = b,  x_j >= 0 or free,  sum_{j in G} x_j = 1 for each group G.
//
// Bland's rule is used for both the entering and the leaving variable so
// degenerate systems terminate and identical inputs give identical pivots.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kktcert/linalg.hpp"
#include "kktcert/polytope.hpp"

namespace kktcert {

enum class LowerBound { Zero, Free };

struct FeasibilitySystem {
    std::vector<Vec> A;  // m_eq rows, each of length N
    Vec b;
    std::vector<LowerBound> lower;  // length N
    std::vector<std::vector<std::size_t>> simplex_groups;

    std::size_t num_vars() const { return lower.size(); }
};

class SolverStalled : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LpOptions {
    double feasible_objective = 1e-9;
    double pivot_tol = 1e-11;
    double cost_tol = 1e-11;
    std::size_t max_pivots = 100000;
};

struct FeasibilityResult {
    bool feasible = false;
    Vec assignment;  // length N, meaningful when feasible
    double artificial_objective = 0.0;
    /// (entering column, leaving row) in the internal standard-form tableau.
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
};

inline void check_well_formed(const FeasibilitySystem& sys) {
    const std::size_t N = sys.num_vars();
    require_dim(sys.b.size(), sys.A.size(), "feasibility rhs");
    for (const auto& row : sys.A) require_dim(row.size(), N, "feasibility row");
    for (const auto& g : sys.simplex_groups) {
        if (g.empty()) throw std::invalid_argument("simplex group must be nonempty");
        for (std::size_t j : g) {
            if (j >= N) throw DimensionError("simplex group index out of range");
            if (sys.lower[j] != LowerBound::Zero)
                throw std::invalid_argument("simplex group variables must be nonnegative");
        }
    }
}

inline FeasibilityResult solve_feasibility(const FeasibilitySystem& sys, const LpOptions& opt = {}) {
    check_well_formed(sys);
    const std::size_t N = sys.num_vars();

    // Standard form columns: x_j (or x_j^+, x_j^- for free variables).
    std::vector<std::size_t> pos_col(N), neg_col(N, static_cast<std::size_t>(-1));
    std::size_t cols = 0;
    for (std::size_t j = 0; j < N; ++j) {
        pos_col[j] = cols++;
        if (sys.lower[j] == LowerBound::Free) neg_col[j] = cols++;
    }

    std::vector<Vec> rows;
    Vec rhs;
    for (std::size_t i = 0; i < sys.A.size(); ++i) {
        Vec r(cols, 0.0);
        for (std::size_t j = 0; j < N; ++j) {
            r[pos_col[j]] += sys.A[i][j];
            if (neg_col[j] != static_cast<std::size_t>(-1)) r[neg_col[j]] -= sys.A[i][j];
        }
        rows.push_back(std::move(r));
        rhs.push_back(sys.b[i]);
    }
    for (const auto& g : sys.simplex_groups) {
        Vec r(cols, 0.0);
        for (std::size_t j : g) r[pos_col[j]] += 1.0;
        rows.push_back(std::move(r));
        rhs.push_back(1.0);
    }
    const std::size_t m = rows.size();
    for (std::size_t i = 0; i < m; ++i) {
        if (rhs[i] < 0) {
            for (auto& v : rows[i]) v = -v;
            rhs[i] = -rhs[i];
        }
    }

    // Tableau: [structural | artificial | rhs]; artificial i is column cols + i.
    const std::size_t width = cols + m + 1;
    std::vector<Vec> T(m, Vec(width, 0.0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::copy(rows[i].begin(), rows[i].end(), T[i].begin());
        T[i][cols + i] = 1.0;
        T[i][width - 1] = rhs[i];
        basis[i] = cols + i;
    }
    // Reduced costs of the phase-1 objective sum(artificials).
    Vec cost(width, 0.0);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < m; ++i) cost[j] -= T[i][j];
    for (std::size_t i = 0; i < m; ++i) cost[width - 1] -= T[i][width - 1];

    FeasibilityResult result;
    for (;;) {
        // Bland: lowest-index improving column that admits a ratio test.
        std::size_t enter = width;
        std::size_t leave = m;
        for (std::size_t j = 0; j + 1 < width && enter == width; ++j) {
            if (cost[j] >= -opt.cost_tol) continue;
            double best = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                if (T[i][j] <= opt.pivot_tol) continue;
                const double ratio = T[i][width - 1] / T[i][j];
                const double slack = 1e-12 * std::max(1.0, std::abs(best));
                if (leave == m || ratio < best - slack ||
                    (std::abs(ratio - best) <= slack && basis[i] < basis[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            // A descent column without positive entries is roundoff (phase 1
            // is bounded below by zero); skip it.
            if (leave != m) enter = j;
        }
        if (enter == width) break;
        if (result.pivots.size() >= opt.max_pivots)
            throw SolverStalled("phase-1 simplex exceeded the pivot limit");
        result.pivots.emplace_back(enter, leave);

        const double piv = T[leave][enter];
        for (auto& v : T[leave]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            const double f = T[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width; ++j) T[i][j] -= f * T[leave][j];
            T[i][enter] = 0.0;
        }
        const double fc = cost[enter];
        for (std::size_t j = 0; j < width; ++j) cost[j] -= fc * T[leave][j];
        cost[enter] = 0.0;
        basis[leave] = enter;
    }

    Vec values(cols + m, 0.0);
    for (std::size_t i = 0; i < m; ++i) values[basis[i]] = std::max(0.0, T[i][width - 1]);
    double art = 0.0;
    for (std::size_t i = 0; i < m; ++i) art += values[cols + i];
    result.artificial_objective = art;
    result.feasible = art <= opt.feasible_objective;
    if (result.feasible) {
        result.assignment.assign(N, 0.0);
        for (std::size_t j = 0; j < N; ++j) {
            result.assignment[j] = values[pos_col[j]];
            if (neg_col[j] != static_cast<std::size_t>(-1)) result.assignment[j] -= values[neg_col[j]];
        }
    }
    return result;
}

/// max_i |(A x - b)_i| together with simplex-group sum errors.
inline double constraint_residual(const FeasibilitySystem& sys, VecView x) {
    double r = 0.0;
    for (std::size_t i = 0; i < sys.A.size(); ++i) r = std::max(r, std::abs(dot(sys.A[i], x) - sys.b[i]));
    for (const auto& g : sys.simplex_groups) {
        double s = 0.0;
        for (std::size_t j : g) s += x[j];
        r = std::max(r, std::abs(s - 1.0));
    }
    for (std::size_t j = 0; j < sys.lower.size(); ++j)
        if (sys.lower[j] == LowerBound::Zero) r = std::max(r, -x[j]);
    return r;
}

/// Convex-combination weights expressing p over P's vertices, if any.
inline std::optional<Vec> polytope_weights(VecView p, const Polytope& P, const LpOptions& opt = {}) {
    require_dim(p.size(), P.dim(), "point_in_polytope");
    const std::size_t n = p.size();
    const std::size_t k = P.size();
    FeasibilitySystem sys;
    sys.A.assign(n, Vec(k, 0.0));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i) sys.A[i][j] = P.vertices()[j][i];
    sys.b.assign(p.begin(), p.end());
    sys.lower.assign(k, LowerBound::Zero);
    std::vector<std::size_t> group(k);
    for (std::size_t j = 0; j < k; ++j) group[j] = j;
    sys.simplex_groups.push_back(std::move(group));
    auto res = solve_feasibility(sys, opt);
    if (!res.feasible) return std::nullopt;
    return res.assignment;
}

inline bool point_in_polytope(VecView p, const Polytope& P, const LpOptions& opt = {}) {
    return polytope_weights(p, P, opt).has_value();
}

}  // namespace kktcert
