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

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

#include "kktcert/linalg.hpp"
#include "kktcert/polytope.hpp"
#include "kktcert/problem.hpp"

namespace kktcert {

/// Feasible points of K gathered around a base point, standing in for the
/// limiting argument behind normal-cone membership.
struct ConeSample {
    Vec base;
    std::vector<Vec> samples;
    /// Slack tau in <v, y - base> <= tau * max(1, |y - base|).
    double tau = 1e-7;
};

struct ConeSampleOptions {
    std::size_t total = 2000;
    double local_radius = 0.1;
    double min_radius = 1e-4;
    std::size_t attempts_per_sample = 50;
    double feasibility_tol = 1e-12;
    double tau = 1e-7;
};

/// Up to `count` uniform feasible points of the box, by rejection.
inline std::vector<Vec> sample_feasible(const Problem& p, std::size_t count, Rng& rng,
                                        std::size_t max_attempts, double tol = 1e-12) {
    std::vector<Vec> out;
    Vec x(p.n);
    for (std::size_t t = 0; t < max_attempts && out.size() < count; ++t) {
        for (std::size_t i = 0; i < p.n; ++i) x[i] = rng.uniform(p.box.lo[i], p.box.hi[i]);
        if (is_feasible(p, x, tol)) out.push_back(x);
    }
    return out;
}

/// Builds a ConeSample at `base`: half the points uniform over K within the
/// box (`far`, drawn here when not supplied), half within local_radius of
/// `base` at log-uniform distances down to min_radius.
inline ConeSample make_cone_sample(const Problem& p, VecView base, std::uint64_t seed,
                                   const ConeSampleOptions& opt = {}, const std::vector<Vec>* far = nullptr) {
    require_dim(base.size(), p.n, "cone sample base");
    ConeSample cs;
    cs.base.assign(base.begin(), base.end());
    cs.tau = opt.tau;
    const std::size_t far_count = opt.total / 2;
    const std::size_t local_count = opt.total - far_count;
    if (far != nullptr) {
        for (std::size_t i = 0; i < far->size() && i < far_count; ++i) cs.samples.push_back((*far)[i]);
    } else {
        Rng rng(derive_seed(seed, 1));
        cs.samples = sample_feasible(p, far_count, rng, far_count * opt.attempts_per_sample, opt.feasibility_tol);
    }
    Rng rng(derive_seed(seed, 2));
    const double log_lo = std::log(opt.min_radius);
    const double log_hi = std::log(opt.local_radius);
    Vec y(p.n);
    std::size_t got = 0;
    for (std::size_t t = 0; t < local_count * opt.attempts_per_sample && got < local_count; ++t) {
        const Vec w = rng.direction(p.n);
        const double r = std::exp(rng.uniform(log_lo, log_hi));
        for (std::size_t i = 0; i < p.n; ++i) y[i] = base[i] + r * w[i];
        if (!is_feasible(p, y, opt.feasibility_tol)) continue;
        cs.samples.push_back(y);
        ++got;
    }
    return cs;
}

struct NormalConeResult {
    bool pass = true;
    Vec witness;         // violating sample with the largest normalized product
    double worst = 0.0;  // max_y <v, y - base> / max(1, |y - base|)
};

/// Sampled test of v in N_K(base): passes iff every sample y satisfies
/// <v, y - base> <= tau * max(1, |y - base|).
inline NormalConeResult normal_cone_test(VecView v, const ConeSample& sample) {
    if (sample.samples.empty()) throw std::invalid_argument("normal_cone_test: empty sample set");
    require_dim(v.size(), sample.base.size(), "normal_cone_test");
    NormalConeResult res;
    res.worst = -std::numeric_limits<double>::infinity();
    const Vec* arg = nullptr;
    for (const auto& y : sample.samples) {
        const Vec d = sub(y, sample.base);
        const double score = dot(v, d) / std::max(1.0, norm2(d));
        if (score > res.worst) {
            res.worst = score;
            arg = &y;
        }
    }
    res.pass = res.worst <= sample.tau;
    if (!res.pass) res.witness = *arg;
    return res;
}

/// Halfspace a . x <= b.
struct Halfspace {
    Vec a;
    double b = 0.0;
};

struct TangentCone {
    /// No active constraints: the cone is all of R^n (generators are +-e_i).
    bool whole_space = false;
    std::vector<Vec> generators;
};

namespace detail {

inline std::vector<Vec> kernel_basis(const std::vector<Vec>& rows, std::size_t n) {
    std::vector<Vec> basis;
    if (rows.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            Vec e(n, 0.0);
            e[i] = 1.0;
            basis.push_back(std::move(e));
        }
        return basis;
    }
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    lu.setThreshold(1e-10);
    if (lu.dimensionOfKernel() == 0) return basis;
    const Eigen::MatrixXd K = lu.kernel();
    for (Eigen::Index c = 0; c < K.cols(); ++c) {
        Vec v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = K(static_cast<Eigen::Index>(j), c);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline Vec unit(Vec v) {
    const double len = norm2(v);
    for (auto& c : v) c /= len;
    // Snap roundoff so generators compare cleanly.
    for (auto& c : v)
        if (std::abs(c) < 1e-14) c = 0.0;
    return v;
}

inline void push_unique(std::vector<Vec>& out, Vec v) {
    for (const auto& u : out)
        if (norm_inf(sub(u, v)) <= 1e-9) return;
    out.push_back(std::move(v));
}

}  // namespace detail

/// Generators of the tangent cone {w : a_j . w <= 0 for active j} of a
/// polyhedron at xbar, by enumerating extreme rays. Intended for n <= 3.
inline TangentCone tangent_generators(const std::vector<Halfspace>& halfspaces, VecView xbar, double tol = 1e-9) {
    const std::size_t n = xbar.size();
    std::vector<Vec> active;
    for (const auto& h : halfspaces) {
        require_dim(h.a.size(), n, "tangent_generators");
        const double s = dot(h.a, xbar) - h.b;
        if (s > tol) throw std::invalid_argument("tangent_generators: base point violates a halfspace");
        if (s >= -tol && norm_inf(h.a) > 0.0) active.push_back(h.a);
    }
    TangentCone cone;
    if (active.empty()) {
        cone.whole_space = true;
        for (std::size_t i = 0; i < n; ++i) {
            Vec e(n, 0.0);
            e[i] = 1.0;
            cone.generators.push_back(e);
            e[i] = -1.0;
            cone.generators.push_back(e);
        }
        return cone;
    }

    const auto lineality = detail::kernel_basis(active, n);
    for (const auto& l : lineality) {
        detail::push_unique(cone.generators, detail::unit(l));
        detail::push_unique(cone.generators, detail::unit(scaled(l, -1.0)));
    }
    const std::size_t rank = n - lineality.size();
    if (rank == 0) return cone;

    // Extreme rays of the pointed part: one-dimensional solutions of rank-1
    // active equalities inside the orthogonal complement of the lineality.
    const std::size_t k = active.size();
    const std::size_t pick = rank - 1;
    std::vector<std::size_t> idx(pick);
    for (std::size_t i = 0; i < pick; ++i) idx[i] = i;
    for (;;) {
        if (pick <= k) {
            std::vector<Vec> rows;
            for (std::size_t i : idx) rows.push_back(active[i]);
            for (const auto& l : lineality) rows.push_back(l);
            const auto ker = detail::kernel_basis(rows, n);
            if (ker.size() == 1) {
                for (double sign : {1.0, -1.0}) {
                    const Vec w = detail::unit(scaled(ker.front(), sign));
                    bool ok = true;
                    for (const auto& a : active)
                        if (dot(a, w) > 1e-12 * std::max(1.0, norm2(a))) ok = false;
                    if (ok) detail::push_unique(cone.generators, w);
                }
            }
        }
        // next combination of `pick` indices out of k
        if (pick == 0 || pick > k) break;
        std::size_t i = pick;
        while (i > 0 && idx[i - 1] == k - pick + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < pick; ++j) idx[j] = idx[j - 1] + 1;
    }
    return cone;
}

/// v in N_K iff <v, w> <= 0 for every tangent generator w.
inline bool polarity_check(VecView v, const std::vector<Vec>& generators, double tol = 1e-9) {
    for (const auto& w : generators)
        if (dot(v, w) > tol) return false;
    return true;
}

}  // namespace kktcert
