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

// Shared test helpers: fixture loading, independent oracles and the
// candidate sets used by the equivalence suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kktcert/kktcert.hpp"

namespace kkt_test {

using kktcert::Expr;
using kktcert::Problem;
using kktcert::Vec;

inline std::string fixture_path(const std::string& name) { return std::string(KKTCERT_FIXTURE_DIR) + "/" + name + ".json"; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Problem load_fixture(const std::string& name) { return kktcert::parse_problem(read_text(fixture_path(name))); }

// ---------------------------------------------------------------------------
// Finite differences

inline Vec fd_gradient(const Expr& e, const Vec& x, double step = 1e-5) {
    Vec g(x.size());
    Vec y = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] + step;
        const double fp = kktcert::eval(e, y);
        y[i] = x[i] - step;
        const double fm = kktcert::eval(e, y);
        y[i] = x[i];
        g[i] = (fp - fm) / (2 * step);
    }
    return g;
}

// ---------------------------------------------------------------------------
// Exhaustive planar geometry: convex hull plus point location.

struct P2 {
    double x, y;
};

inline double cross(P2 o, P2 a, P2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

/// Andrew's monotone chain; collinear points dropped. Counter-clockwise.
inline std::vector<P2> hull2d(std::vector<P2> pts) {
    std::sort(pts.begin(), pts.end(), [](P2 a, P2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](P2 a, P2 b) { return a.x == b.x && a.y == b.y; }), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<P2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    return h;
}

inline double seg_dist(P2 p, P2 a, P2 b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

/// Distance from p to conv(pts); zero inside.
inline double hull_distance(P2 p, const std::vector<P2>& pts) {
    const auto h = hull2d(pts);
    if (h.size() == 1) return std::hypot(p.x - h[0].x, p.y - h[0].y);
    if (h.size() == 2) return seg_dist(p, h[0], h[1]);
    bool inside = true;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < h.size(); ++i) {
        const P2 a = h[i], b = h[(i + 1) % h.size()];
        if (cross(a, b, p) < 0) inside = false;
        d = std::min(d, seg_dist(p, a, b));
    }
    return inside ? 0.0 : d;
}

// ---------------------------------------------------------------------------
// Subdifferential test matrix: (label, expression, point).

struct SubdiffCase {
    std::string label;
    Expr expr;
    Vec point;
};

inline std::vector<SubdiffCase> subdiff_matrix() {
    using namespace kktcert;
    const std::vector<Vec> I2{{1, 0}, {0, 1}};
    const std::vector<Vec> Q2{{2, 0.5}, {0.5, 1}};
    const std::vector<Vec> I3{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const Expr aff2 = Affine{{2, -1}, 3};
    const Expr mono = Monomial{{1, 1}, 1.0};
    const Expr cubic = Monomial{{2, 1}, -0.5};
    const Expr nq = NegQuad{Q2, {1, -1}, 2};
    const Expr na = NegAbs{{1, 0}, 0};
    const Expr na_skew = NegAbs{{1, 2}, 1};
    const Expr cusp = CuspDown{{1, 0}, 0, 0.5};
    const Expr cusp2 = CuspDown{{1, -1}, 0.5, 0.3};
    const Expr min2 = Min{{Affine{{-1, 0}, 1}, Affine{{1, 0}, 1}}};
    const Expr min3 = Min{{Affine{{-1, 0}, 1}, Affine{{0, -1}, 1}, Affine{{1, 1}, 1}}};
    const Expr min_mixed = Min{{NegQuad{I2, {0, 0}, 1}, Affine{{-1, 0}, 1}}};
    const Expr sum_na = Sum{{NegQuad{I2, {0, 0}, 1}, NegAbs{{1, -1}, 0}}};
    const Expr sum_min = Sum{{Monomial{{1, 1}, 1.0}, Min{{Affine{{1, 0}, 0}, Affine{{0, 1}, 0}}}}};
    const Expr sum_cusp = Sum{{Affine{{0, 0}, 1}, CuspDown{{1, 0}, 0, 0.5}}};
    const Expr sc_na = Scale{2.0, NegAbs{{0, 1}, 1}};
    const Expr sc_min = Scale{0.5, Min{{Affine{{1, 0}, 0}, Affine{{0, 1}, 0}}}};
    const Expr nested = Min{{Sum{{Affine{{1, 1}, 0}, NegAbs{{1, 0}, 0}}}, Affine{{0, 1}, 0}}};
    const Expr ball3 = NegQuad{I3, {0, 0, 0}, 1};
    const Expr min3d = Min{{Affine{{1, 0, 0}, 0}, Affine{{0, 1, 0}, 0}, Affine{{0, 0, 1}, 0}}};
    const Expr na3 = NegAbs{{1, 1, 1}, 1};
    const Expr mono3 = Monomial{{1, 2, 1}, 2.0};

    return {
        {"affine/origin", aff2, {0, 0}},
        {"affine/far", aff2, {3.5, -2}},
        {"monomial x1x2/(1,1)", mono, {1, 1}},
        {"monomial x1x2/(-0.5,2)", mono, {-0.5, 2}},
        {"monomial cubic/(1,-1)", cubic, {1, -1}},
        {"negquad/origin", nq, {0, 0}},
        {"negquad/(0.3,-0.7)", nq, {0.3, -0.7}},
        {"negabs/kink", na, {0, 0.4}},
        {"negabs/off-kink left", na, {-0.5, 1}},
        {"negabs/off-kink right", na, {0.2, -1}},
        {"negabs skew/kink", na_skew, {1, 0}},
        {"negabs skew/off", na_skew, {0.5, 0.5}},
        {"cusp/off-cusp", cusp, {0.25, 7}},
        {"cusp/off-cusp negative", cusp, {-0.4, 0}},
        {"cusp p=0.3/off-cusp", cusp2, {1, 0}},
        {"min2/both active", min2, {0, 0.3}},
        {"min2/right active", min2, {0.5, 0}},
        {"min2/left active", min2, {-0.7, 1}},
        {"min3/all active", min3, {0, 0}},
        {"min3/two active", min3, {0.5, 0.5}},
        {"min3/one active", min3, {0.2, -0.9}},
        {"min mixed/co-active", min_mixed, {1, 0}},
        {"min mixed/one active", min_mixed, {0.5, 0}},
        {"sum negabs/kink", sum_na, {0.3, 0.3}},
        {"sum negabs/off", sum_na, {0.3, -0.2}},
        {"sum min/kink", sum_min, {0.5, 0.5}},
        {"sum min/off", sum_min, {0.2, 0.9}},
        {"sum cusp/off", sum_cusp, {0.81, 0}},
        {"scale negabs/kink", sc_na, {0.1, 1}},
        {"scale negabs/off", sc_na, {0.1, 0.2}},
        {"scale min/kink", sc_min, {-1, -1}},
        {"scale min/off", sc_min, {1, 2}},
        {"nested min-sum/kink", nested, {0, 0}},
        {"nested min-sum/off", nested, {-1, 3}},
        {"ball3/boundary", ball3, {1, 0, 0}},
        {"ball3/interior", ball3, {0.1, -0.2, 0.3}},
        {"min3d/corner", min3d, {1, 1, 1}},
        {"min3d/edge", min3d, {1, 1, 2}},
        {"negabs3/kink", na3, {0.5, 0.25, 0.25}},
        {"monomial3/(1,-1,2)", mono3, {1, -1, 2}},
    };
}

// ---------------------------------------------------------------------------
// Candidate points for the equivalence suite.

inline std::vector<Vec> ray_directions(std::size_t n) {
    std::vector<Vec> dirs;
    if (n == 1) return {{1.0}, {-1.0}};
    if (n == 2) {
        for (int k = 0; k < 16; ++k) {
            const double t = k * std::numbers::pi / 8.0;
            dirs.push_back({std::cos(t), std::sin(t)});
        }
        return dirs;
    }
    for (int a = -1; a <= 1; ++a)
        for (int b = -1; b <= 1; ++b)
            for (int c = -1; c <= 1; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                const double len = std::sqrt(static_cast<double>(a * a + b * b + c * c));
                dirs.push_back({a / len, b / len, c / len});
            }
    return dirs;
}

/// Last feasible point on the ray from `center` before K or the box ends,
/// by marching and bisecting on min_i g_i until the bracket collapses.
inline Vec ray_boundary(const Problem& p, const Vec& center, const Vec& dir) {
    const double tmax = kktcert::box_exit(p.box, center, dir);
    auto at = [&](double t) {
        Vec x(p.n);
        for (std::size_t i = 0; i < p.n; ++i) x[i] = center[i] + t * dir[i];
        return x;
    };
    double lo = 0.0, hi = -1.0;
    constexpr int kSteps = 512;
    for (int k = 1; k <= kSteps; ++k) {
        const double t = tmax * k / kSteps;
        if (kktcert::min_constraint(p, at(t)) < 0) {
            hi = t;
            break;
        }
        lo = t;
    }
    if (hi < 0) return at(tmax);
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (kktcert::min_constraint(p, at(mid)) >= 0 ? lo : hi) = mid;
    }
    return at(lo);
}

/// Center, ray boundary points, their midpoints with the center, and extras.
inline std::vector<Vec> candidates(const Problem& p, const Vec& center, const std::vector<Vec>& extra) {
    std::vector<Vec> out{center};
    for (const auto& d : ray_directions(p.n)) {
        const Vec b = ray_boundary(p, center, d);
        out.push_back(b);
        Vec mid(p.n);
        for (std::size_t i = 0; i < p.n; ++i) mid[i] = 0.5 * (center[i] + b[i]);
        out.push_back(mid);
    }
    for (const auto& e : extra) out.push_back(e);
    return out;
}

// Candidates are exact maximizers or sit more than one oracle gap bound
// below the optimum; points strictly inside that band are suboptimal yet
// indistinguishable from optimal at grid resolution, so they are avoided.
struct EquivalenceFixture {
    std::string name;
    Vec center;
    std::vector<Vec> extra;
    /// Constraints whose zero set never meets K inside the box.
    std::vector<std::size_t> unreachable;
};

inline std::vector<EquivalenceFixture> equivalence_fixtures() {
    const double r = std::sqrt(0.5);
    return {
        {"disk_linear", {0, 0}, {{r, r}}, {}},
        {"disk_negquad", {0.4, -0.3}, {{0, 0}}, {}},
        {"hyperbola", {2, 2}, {{1, 1}, {2, 0.5}}, {1}},
        {"hyperbola_center", {2, 2}, {{1, 1}, {0.5, 2}}, {1}},
        {"square_min_affine", {0, 0}, {{1, 1}, {-1, -1}, {1, -1}}, {}},
        {"disk_min_objective", {0, 0}, {{r, r}, {0.3, 0.3}}, {}},
        {"polygon", {1, 0.8}, {{1.6, 1.2}, {0, 0}, {2, 0}, {0, 2}}, {}},
        {"disk_negabs_flat", {0, 0}, {{0.5, 0.5}, {0.2, 0.8}, {0.9, 0.1}, {1, 0}, {0, 1}}, {}},
        {"triangle_face", {0, 0}, {{-1, 2}, {2, -1}, {0.3, 0.7}}, {}},
        {"cusp_slab", {0, 0}, {{0, 2}, {0, 0.5}, {1, 1}, {-1, -1}}, {}},
        {"ball3d", {0, 0, 0}, {{1 / std::sqrt(3.0), 1 / std::sqrt(3.0), 1 / std::sqrt(3.0)}}, {}},
        {"cube3d_min", {0, 0, 0}, {{1, 1, 1}, {1, 1, -1}}, {}},
    };
}

}  // namespace kkt_test
