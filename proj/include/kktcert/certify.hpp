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

// KKT certification for
//
//     maximize f(x)  subject to  g_i(x) >= 0,  i = 1..m,
//
// with f concave and K = {g_i >= 0} convex, using Frechet upper
// subdifferentials. Under Slater's condition and the nondegeneracy condition
// 0 not in -upper_subdiff(g_i)(x) at every active point, a feasible point is
// a global maximizer exactly when it admits multipliers lambda_i >= 0 with
//
//     0 in upper_subdiff(f)(x) + sum_i lambda_i upper_subdiff(g_i)(x),
//     lambda_i g_i(x) = 0.
//
// The multiplier on f is normalized to one. The inclusion is decided as an
// LP over the vertices of each set.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kktcert/expr.hpp"
#include "kktcert/geometry.hpp"
#include "kktcert/lp.hpp"
#include "kktcert/problem.hpp"

namespace kktcert {

enum class Verdict { CertifiedGlobalMax, KKTInfeasible, Degenerate, NotApplicable };

/// Outcome of the nondegeneracy check for one active constraint.
enum class AStatus { Holds, Violated, VacuousEmpty, TrivialAll };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::CertifiedGlobalMax: return "CertifiedGlobalMax";
        case Verdict::KKTInfeasible: return "KKTInfeasible";
        case Verdict::Degenerate: return "Degenerate";
        case Verdict::NotApplicable: return "NotApplicable";
    }
    return "?";
}

inline const char* to_string(AStatus s) {
    switch (s) {
        case AStatus::Holds: return "Holds";
        case AStatus::Violated: return "Violated";
        case AStatus::VacuousEmpty: return "VacuousEmpty";
        case AStatus::TrivialAll: return "TrivialAll";
    }
    return "?";
}

struct Tolerances {
    double active = 1e-7;          // |g_i(x)| <= active marks constraint i active
    double residual = 1e-7;        // certified residual bound
    double feasibility = 1e-9;     // candidate points may violate g_i by this much
    double kink = 1e-10;           // kink / cusp / min co-activity
    double slater_margin = 1e-6;   // min_i g_i(x) required of a Slater witness
    double boundary = 1e-10;       // bisection target |g_i| for boundary points
    double boundary_input = 1e-8;  // accepted |g_i| for caller-supplied boundary points
    double midpoint = 1e-9;        // convexity probe midpoint slack
};

struct CertifyOptions {
    Tolerances tol;
    std::size_t slater_points = 100000;
    std::size_t boundary_points = 64;
    std::size_t convexity_pairs = 10000;
    ConeSampleOptions cone;
    LpOptions lp;
};

class InfeasiblePoint : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Slater

struct SlaterResult {
    bool found = false;
    Vec point;      // best point seen, even when not a witness
    double margin;  // min_i g_i(point)
};

namespace detail {

inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

inline std::uint64_t nth_prime(std::size_t k) {
    static constexpr std::array<std::uint64_t, 16> primes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
    if (k < primes.size()) return primes[k];
    std::uint64_t c = primes.back();
    std::size_t found = primes.size() - 1;
    while (found < k) {
        c += 2;
        bool prime = true;
        for (std::uint64_t d = 3; d * d <= c; d += 2)
            if (c % d == 0) prime = false;
        if (prime) ++found;
    }
    return c;
}

}  // namespace detail

/// Searches the box for a point maximizing min_i g_i: a Halton sequence
/// followed by compass-search refinement. NotFound is advisory only.
inline SlaterResult slater_find(const Problem& p, const CertifyOptions& opt = {}) {
    SlaterResult res;
    if (p.constraints.empty()) {
        res.found = true;
        res.point = p.box.center();
        res.margin = std::numeric_limits<double>::infinity();
        return res;
    }
    std::vector<std::uint64_t> bases(p.n);
    for (std::size_t i = 0; i < p.n; ++i) bases[i] = detail::nth_prime(i);

    Vec x(p.n);
    res.margin = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= opt.slater_points; ++k) {
        for (std::size_t i = 0; i < p.n; ++i)
            x[i] = p.box.lo[i] + (p.box.hi[i] - p.box.lo[i]) * detail::radical_inverse(k, bases[i]);
        const double m = min_constraint(p, x);
        if (m > res.margin) {
            res.margin = m;
            res.point = x;
        }
    }

    double step = 0.1 * p.box.max_width();
    const double min_step = 1e-12 * std::max(1.0, p.box.max_width());
    for (int iter = 0; iter < 10000 && step > min_step; ++iter) {
        bool improved = false;
        for (std::size_t i = 0; i < p.n && !improved; ++i) {
            for (double sign : {1.0, -1.0}) {
                Vec y = res.point;
                y[i] += sign * step;
                p.box.clamp(y);
                const double m = min_constraint(p, y);
                if (m > res.margin) {
                    res.margin = m;
                    res.point = std::move(y);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    res.found = res.margin >= opt.tol.slater_margin;
    return res;
}

// ---------------------------------------------------------------------------
// Activity and nondegeneracy

inline std::vector<std::size_t> active_set(const std::vector<double>& values, double eps) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (std::abs(values[i]) <= eps) out.push_back(i);
    return out;
}

inline std::vector<double> require_feasible(const Problem& p, VecView x, double tol) {
    require_dim(x.size(), p.n, "point");
    if (!all_finite(x)) throw InfeasiblePoint("point has non-finite coordinates");
    auto g = constraint_values(p, x);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i] < -tol)
            throw InfeasiblePoint("point violates constraint " + std::to_string(i) + " (g = " + std::to_string(g[i]) +
                                  ")");
    return g;
}

struct AReport {
    std::size_t constraint = 0;
    double value = 0.0;  // g_i(x)
    AStatus status = AStatus::Holds;
    SubdiffSet set;      // upper_subdiff(g_i, x)
};

inline AStatus classify_nondegeneracy(const SubdiffSet& s, const LpOptions& lp = {}) {
    if (is_all(s)) return AStatus::TrivialAll;
    if (is_empty(s)) return AStatus::VacuousEmpty;
    const SubdiffSet neg = negate_set(s);
    const auto& poly = std::get<Polytope>(neg);
    const Vec zero(poly.dim(), 0.0);
    return point_in_polytope(zero, poly, lp) ? AStatus::Violated : AStatus::Holds;
}

/// Nondegeneracy check 0 not in -upper_subdiff(g_i)(x) for each active i.
inline std::vector<AReport> assumption_A_check(const Problem& p, VecView x, const CertifyOptions& opt = {}) {
    const auto g = require_feasible(p, x, opt.tol.feasibility);
    std::vector<AReport> out;
    const Thresholds th{opt.tol.kink};
    for (std::size_t i : active_set(g, opt.tol.active)) {
        AReport r;
        r.constraint = i;
        r.value = g[i];
        r.set = upper_subdiff(p.constraints[i], x, th);
        r.status = classify_nondegeneracy(r.set, opt.lp);
        out.push_back(std::move(r));
    }
    return out;
}

inline bool nondegenerate(const std::vector<AReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const AReport& r) {
        return r.status == AStatus::Holds || r.status == AStatus::VacuousEmpty;
    });
}

// ---------------------------------------------------------------------------
// Boundary sampling and the containment check -upper_subdiff(g_i) in N_K

struct BoundaryPoint {
    std::size_t constraint = 0;
    Vec point;
};

/// Exit parameter of the ray origin + t * dir from the box.
inline double box_exit(const Box& box, VecView origin, VecView dir) {
    double t = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < origin.size(); ++i) {
        if (dir[i] > 0) t = std::min(t, (box.hi[i] - origin[i]) / dir[i]);
        if (dir[i] < 0) t = std::min(t, (box.lo[i] - origin[i]) / dir[i]);
    }
    return std::max(t, 0.0);
}

/// First point on the segment [from, to] where min_i g_i crosses zero,
/// refined by bisection to |min_i g_i| <= tol. Requires min g(from) > 0.
inline std::optional<Vec> first_boundary_crossing(const Problem& p, VecView from, VecView to, double tol,
                                                  double accept, std::size_t steps = 64) {
    auto at = [&](double t) {
        Vec x(p.n);
        for (std::size_t i = 0; i < p.n; ++i) x[i] = from[i] + t * (to[i] - from[i]);
        return x;
    };
    if (!(min_constraint(p, from) > 0.0)) return std::nullopt;
    double lo = 0.0, hi = -1.0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(steps);
        const double h = min_constraint(p, at(t));
        if (std::abs(h) <= tol) return at(t);
        if (h < 0) {
            hi = t;
            break;
        }
        lo = t;
    }
    if (hi < 0) return std::nullopt;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const Vec xm = at(mid);
        const double h = min_constraint(p, xm);
        if (std::abs(h) <= tol) return xm;
        if (h > 0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 0.0) break;
    }
    const Vec xl = at(lo);
    if (std::abs(min_constraint(p, xl)) <= accept) return xl;
    return std::nullopt;
}

/// Up to `per_constraint` boundary points of each constraint, found along
/// random rays from `origin` (normally the Slater witness) to the box.
inline std::vector<BoundaryPoint> sample_boundary_points(const Problem& p, VecView origin, std::uint64_t seed,
                                                         const CertifyOptions& opt = {}) {
    const std::size_t m = p.constraints.size();
    const std::size_t want = opt.boundary_points;
    std::vector<std::vector<Vec>> per(m);
    Rng rng(derive_seed(seed, 11));
    const std::size_t max_rays = std::max<std::size_t>(want * 64, 64);
    auto done = [&] {
        for (const auto& v : per)
            if (v.size() < want) return false;
        return true;
    };
    for (std::size_t r = 0; r < max_rays && !done(); ++r) {
        const Vec dir = rng.direction(p.n);
        const double t = box_exit(p.box, origin, dir);
        if (!(t > 0)) continue;
        Vec to(p.n);
        for (std::size_t i = 0; i < p.n; ++i) to[i] = origin[i] + t * dir[i];
        const auto x = first_boundary_crossing(p, origin, to, opt.tol.boundary, opt.tol.boundary_input);
        if (!x) continue;
        if (!is_feasible(p, *x, opt.tol.feasibility)) continue;
        for (std::size_t i = 0; i < m; ++i) {
            if (per[i].size() >= want) continue;
            if (std::abs(eval(p.constraints[i], *x)) <= opt.tol.boundary_input) per[i].push_back(*x);
        }
    }
    std::vector<BoundaryPoint> out;
    for (std::size_t i = 0; i < m; ++i)
        for (auto& x : per[i]) out.push_back({i, std::move(x)});
    return out;
}

struct Prop1Entry {
    std::size_t constraint = 0;
    Vec point;
    bool contained = true;
    /// Set kind of upper_subdiff(g_i) at the point: "poly", "all" or "empty".
    std::string set_kind;
    Vec failing_vertex;  // vertex of -upper_subdiff(g_i) outside the cone
    Vec witness;         // feasible y with <vertex, y - point> > tau max(1,|y - point|)
};

struct Prop1Report {
    bool all_contained = true;
    std::vector<Prop1Entry> entries;
    std::vector<std::size_t> points_per_constraint;
};

/// For each (i, x) checks every vertex of -upper_subdiff(g_i)(x) for
/// membership in the sampled normal cone of K at x.
inline Prop1Report prop1_check(const Problem& p, const std::vector<BoundaryPoint>& boundary, std::uint64_t seed,
                               const CertifyOptions& opt = {}) {
    Prop1Report rep;
    rep.points_per_constraint.assign(p.constraints.size(), 0);
    const Thresholds th{opt.tol.kink};
    Rng far_rng(derive_seed(seed, 21));
    const std::size_t far_count = opt.cone.total / 2;
    const auto far =
        sample_feasible(p, far_count, far_rng, far_count * opt.cone.attempts_per_sample, opt.cone.feasibility_tol);

    for (std::size_t k = 0; k < boundary.size(); ++k) {
        const auto& bp = boundary[k];
        if (bp.constraint >= p.constraints.size()) throw std::invalid_argument("prop1_check: constraint index out of range");
        require_dim(bp.point.size(), p.n, "prop1_check point");
        const double gi = eval(p.constraints[bp.constraint], bp.point);
        if (std::abs(gi) > opt.tol.boundary_input)
            throw std::invalid_argument("prop1_check: point is not on the boundary of constraint " +
                                        std::to_string(bp.constraint));
        if (!is_feasible(p, bp.point, opt.tol.feasibility))
            throw InfeasiblePoint("prop1_check: boundary point is infeasible");
        ++rep.points_per_constraint[bp.constraint];

        Prop1Entry e;
        e.constraint = bp.constraint;
        e.point = bp.point;
        const SubdiffSet s = upper_subdiff(p.constraints[bp.constraint], bp.point, th);
        if (is_empty(s)) {
            e.set_kind = "empty";
        } else {
            const ConeSample cs = make_cone_sample(p, bp.point, derive_seed(seed, 1000 + k), opt.cone, &far);
            if (is_all(s)) {
                e.set_kind = "all";
                // The whole space sits inside N_K only when K is the single point x.
                for (const auto& y : cs.samples) {
                    const Vec d = sub(y, bp.point);
                    if (norm2(d) > 1e-12) {
                        e.contained = false;
                        e.failing_vertex = d;
                        e.witness = y;
                        break;
                    }
                }
            } else {
                e.set_kind = "poly";
                if (cs.samples.empty()) throw std::runtime_error("prop1_check: no feasible samples near boundary point");
                const SubdiffSet neg = negate_set(s);
                for (const auto& v : std::get<Polytope>(neg).vertices()) {
                    const auto r = normal_cone_test(v, cs);
                    if (!r.pass) {
                        e.contained = false;
                        e.failing_vertex = v;
                        e.witness = r.witness;
                        break;
                    }
                }
            }
        }
        if (!e.contained) rep.all_contained = false;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Convexity probe

struct ConvexityReport {
    bool violation = false;
    Vec y, z;  // feasible pair whose midpoint is infeasible
    std::size_t pairs_checked = 0;
};

inline ConvexityReport convexity_probe(const Problem& p, std::uint64_t seed, const CertifyOptions& opt = {}) {
    Rng rng(derive_seed(seed, 31));
    const std::size_t want = 2 * opt.convexity_pairs;
    const auto pool = sample_feasible(p, want, rng, want * 200, 1e-12);
    if (pool.size() < 2) throw std::runtime_error("convexity_probe: fewer than 2 feasible samples found");
    ConvexityReport rep;
    Vec mid(p.n);
    for (std::size_t k = 0; k < opt.convexity_pairs; ++k) {
        std::size_t a = 2 * k, b = 2 * k + 1;
        if (b >= pool.size()) {
            a = static_cast<std::size_t>(rng.next() % pool.size());
            b = static_cast<std::size_t>(rng.next() % pool.size());
        }
        for (std::size_t i = 0; i < p.n; ++i) mid[i] = 0.5 * (pool[a][i] + pool[b][i]);
        ++rep.pairs_checked;
        if (!is_feasible(p, mid, opt.tol.midpoint)) {
            rep.violation = true;
            rep.y = pool[a];
            rep.z = pool[b];
            break;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// KKT decision

/// A point of a subdifferential set chosen as vertex weights.
struct Selection {
    std::vector<Vec> vertices;
    Vec weights;    // alpha (simplex) for f, beta (>= 0) for constraints
    Vec direction;  // sum_j weights_j vertices_j / sum_j weights_j
};

struct ConstraintSelection {
    std::size_t constraint = 0;
    double lambda = 0.0;  // sum of weights
    bool whole_space = false;
    Selection selection;
};

struct Certificate {
    Vec point;
    Vec constraint_values;
    std::vector<std::size_t> active;
    Vec multipliers;  // lambda_i, zero for inactive constraints
    Selection objective;
    std::vector<ConstraintSelection> constraints;  // active constraints only
    double residual = std::numeric_limits<double>::quiet_NaN();
    bool lp_feasible = false;
    bool trivial_all = false;
    bool objective_empty = false;
    std::optional<SlaterResult> slater;
    std::vector<AReport> assumption_a;
    std::optional<ConvexityReport> convexity;
    std::optional<Prop1Report> prop1;
    bool prop1_conflict = false;
    Verdict verdict = Verdict::NotApplicable;
    Tolerances tol;
    std::uint64_t seed = 0;
};

/// | sum_j alpha_j u_j + sum_i sum_j beta_ij v_ij |_2, accumulated in
/// storage order so external re-verification reproduces it bit for bit.
inline double selection_residual(const Selection& obj, const std::vector<ConstraintSelection>& cons, std::size_t n) {
    Vec r(n, 0.0);
    for (std::size_t j = 0; j < obj.vertices.size(); ++j) axpy(obj.weights[j], obj.vertices[j], r);
    for (const auto& c : cons) {
        if (c.whole_space) {
            axpy(c.lambda, c.selection.direction, r);
            continue;
        }
        for (std::size_t j = 0; j < c.selection.vertices.size(); ++j)
            axpy(c.selection.weights[j], c.selection.vertices[j], r);
    }
    return norm2(r);
}

namespace detail {

inline Vec weighted_direction(const std::vector<Vec>& vertices, VecView w, std::size_t n) {
    Vec d(n, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < vertices.size(); ++j) {
        axpy(w[j], vertices[j], d);
        total += w[j];
    }
    if (total > 0)
        for (auto& c : d) c /= total;
    return d;
}

}  // namespace detail

/// Decides the KKT inclusion at x and assembles a certificate. Pass a
/// precomputed Slater result to avoid repeating the search across points.
inline Certificate kkt_check(const Problem& p, VecView x, const CertifyOptions& opt = {},
                             const SlaterResult* slater = nullptr) {
    Certificate c;
    c.tol = opt.tol;
    c.seed = p.seed;
    c.point.assign(x.begin(), x.end());
    c.constraint_values = require_feasible(p, x, opt.tol.feasibility);
    c.active = active_set(c.constraint_values, opt.tol.active);
    c.multipliers.assign(p.constraints.size(), 0.0);
    c.slater = slater ? *slater : slater_find(p, opt);
    c.assumption_a = assumption_A_check(p, x, opt);

    const Thresholds th{opt.tol.kink};
    const SubdiffSet s0 = upper_subdiff(p.objective, x, th);
    std::vector<SubdiffSet> d;
    for (std::size_t i : c.active) d.push_back(upper_subdiff(p.constraints[i], x, th));

    if (is_empty(s0)) {
        c.objective_empty = true;
        c.verdict = Verdict::NotApplicable;
        return c;
    }

    const std::size_t n = p.n;
    bool any_all = is_all(s0);
    for (const auto& s : d) any_all = any_all || is_all(s);

    if (any_all) {
        // 0 lies in the sum trivially; record a zero-residual selection.
        c.trivial_all = true;
        c.lp_feasible = true;
        Vec s0v(n, 0.0);
        if (const auto* P = as_poly(s0)) {
            c.objective.vertices = {P->vertices().front()};
            c.objective.weights = {1.0};
            s0v = P->vertices().front();
        }
        c.objective.direction = s0v;
        bool absorbed = false;
        for (std::size_t k = 0; k < c.active.size(); ++k) {
            ConstraintSelection cs;
            cs.constraint = c.active[k];
            if (is_all(d[k]) && !absorbed && as_poly(s0) != nullptr) {
                cs.whole_space = true;
                cs.lambda = 1.0;
                cs.selection.direction = scaled(s0v, -1.0);
                c.multipliers[cs.constraint] = 1.0;
                absorbed = true;
            } else {
                cs.whole_space = is_all(d[k]);
                cs.selection.direction.assign(n, 0.0);
            }
            c.constraints.push_back(std::move(cs));
        }
        c.residual = as_poly(s0) ? selection_residual(c.objective, c.constraints, n) : 0.0;
    } else {
        FeasibilitySystem sys;
        const auto& P0 = std::get<Polytope>(s0);
        std::vector<const Polytope*> polys;
        std::size_t cols = P0.size();
        for (const auto& s : d) {
            polys.push_back(as_poly(s));
            if (polys.back()) cols += polys.back()->size();
        }
        sys.A.assign(n, Vec(cols, 0.0));
        sys.b.assign(n, 0.0);
        sys.lower.assign(cols, LowerBound::Zero);
        std::vector<std::size_t> group;
        std::size_t col = 0;
        for (const auto& u : P0.vertices()) {
            for (std::size_t r = 0; r < n; ++r) sys.A[r][col] = u[r];
            group.push_back(col++);
        }
        sys.simplex_groups.push_back(group);
        std::vector<std::size_t> first_col(d.size(), 0);
        for (std::size_t k = 0; k < d.size(); ++k) {
            first_col[k] = col;
            if (!polys[k]) continue;  // empty set: lambda forced to zero
            for (const auto& v : polys[k]->vertices()) {
                for (std::size_t r = 0; r < n; ++r) sys.A[r][col] = v[r];
                ++col;
            }
        }
        const auto lp = solve_feasibility(sys, opt.lp);
        c.lp_feasible = lp.feasible;
        if (lp.feasible) {
            c.objective.vertices = P0.vertices();
            c.objective.weights.assign(lp.assignment.begin(), lp.assignment.begin() + static_cast<long>(P0.size()));
            c.objective.direction = detail::weighted_direction(c.objective.vertices, c.objective.weights, n);
            for (std::size_t k = 0; k < d.size(); ++k) {
                ConstraintSelection cs;
                cs.constraint = c.active[k];
                if (polys[k]) {
                    cs.selection.vertices = polys[k]->vertices();
                    cs.selection.weights.assign(lp.assignment.begin() + static_cast<long>(first_col[k]),
                                                lp.assignment.begin() +
                                                    static_cast<long>(first_col[k] + polys[k]->size()));
                    for (double w : cs.selection.weights) cs.lambda += w;
                    cs.selection.direction = detail::weighted_direction(cs.selection.vertices, cs.selection.weights, n);
                } else {
                    cs.selection.direction.assign(n, 0.0);
                }
                c.multipliers[cs.constraint] = cs.lambda;
                c.constraints.push_back(std::move(cs));
            }
            c.residual = selection_residual(c.objective, c.constraints, n);
        }
    }

    if (!c.slater->found)
        c.verdict = Verdict::NotApplicable;
    else if (!nondegenerate(c.assumption_a))
        c.verdict = Verdict::Degenerate;
    else if (c.lp_feasible && c.residual <= opt.tol.residual)
        c.verdict = Verdict::CertifiedGlobalMax;
    else
        c.verdict = Verdict::KKTInfeasible;
    return c;
}

/// Full pipeline: Slater search, convexity probe, containment check on
/// sampled boundary points, nondegeneracy and the KKT decision.
inline Certificate certify_pipeline(const Problem& p, VecView x, const CertifyOptions& opt = {}) {
    const SlaterResult slater = slater_find(p, opt);
    ConvexityReport conv = convexity_probe(p, p.seed, opt);
    Prop1Report prop1;
    if (slater.found && !p.constraints.empty()) {
        const auto boundary = sample_boundary_points(p, slater.point, p.seed, opt);
        prop1 = prop1_check(p, boundary, p.seed, opt);
    } else {
        prop1.points_per_constraint.assign(p.constraints.size(), 0);
    }
    Certificate c = kkt_check(p, x, opt, &slater);
    c.prop1_conflict = !prop1.all_contained && !conv.violation;
    if (conv.violation) c.verdict = Verdict::NotApplicable;
    c.convexity = std::move(conv);
    c.prop1 = std::move(prop1);
    return c;
}

}  // namespace kktcert
