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

#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kktcert/expr.hpp"

namespace kktcert {

/// Axis-aligned sampling box.
struct Box {
    Vec lo;
    Vec hi;

    std::size_t dim() const { return lo.size(); }
    bool contains(VecView x) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }
    Vec center() const {
        Vec c(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
        return c;
    }
    double max_width() const {
        double w = 0.0;
        for (std::size_t i = 0; i < lo.size(); ++i) w = std::max(w, hi[i] - lo[i]);
        return w;
    }
    void clamp(std::span<double> x) const {
        for (std::size_t i = 0; i < lo.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    }
    friend bool operator==(const Box&, const Box&) = default;
};

/// maximize objective(x) subject to constraints[i](x) >= 0.
struct Problem {
    std::size_t n = 0;
    Expr objective;
    std::vector<Expr> constraints;
    Box box;
    std::uint64_t seed = 0;

    friend bool operator==(const Problem&, const Problem&) = default;
};

/// Throws ExprError (with document paths) on any violated invariant.
inline void validate(const Problem& p) {
    if (p.n == 0) throw ExprError("/n", "n must be >= 1");
    if (p.box.lo.size() != p.n || p.box.hi.size() != p.n)
        throw ExprError("/box", "box must have n intervals");
    for (std::size_t i = 0; i < p.n; ++i) {
        if (!std::isfinite(p.box.lo[i]) || !std::isfinite(p.box.hi[i]) || !(p.box.hi[i] > p.box.lo[i]))
            throw ExprError("/box/" + std::to_string(i), "box must have positive volume (lo < hi)");
    }
    validate(p.objective, "/objective");
    if (dim(p.objective) != p.n) throw ExprError("/objective", "dimension does not match n");
    if (concavity_audit(p.objective) != Concavity::Concave)
        throw ExprError("/objective", "objective must audit Concave");
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const std::string path = "/constraints/" + std::to_string(i);
        validate(p.constraints[i], path);
        if (dim(p.constraints[i]) != p.n) throw ExprError(path, "dimension does not match n");
    }
}

inline std::vector<double> constraint_values(const Problem& p, VecView x) {
    std::vector<double> g;
    g.reserve(p.constraints.size());
    for (const auto& c : p.constraints) g.push_back(eval(c, x));
    return g;
}

/// min_i g_i(x); +inf when there are no constraints.
inline double min_constraint(const Problem& p, VecView x) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& c : p.constraints) m = std::min(m, eval(c, x));
    return m;
}

inline bool is_feasible(const Problem& p, VecView x, double tol) {
    for (const auto& c : p.constraints)
        if (eval(c, x) < -tol) return false;
    return true;
}

}  // namespace kktcert
