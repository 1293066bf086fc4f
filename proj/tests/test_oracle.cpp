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

#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace kktcert;
using kkt_test::load_fixture;

TEST_CASE("grid maximization reference values", "[oracle]") {
    SECTION("linear objective on the disk") {
        const auto r = grid_max(load_fixture("disk_linear"), 0.01);
        CHECK(std::abs(r.value - std::sqrt(2.0)) <= 0.02);
        CHECK(std::abs(r.argmax[0] - 0.707) <= 0.05);
        CHECK(std::abs(r.argmax[1] - 0.707) <= 0.05);
        CHECK(r.lipschitz == Catch::Approx(std::sqrt(2.0)).epsilon(1e-6));
        CHECK(r.gap_bound == Catch::Approx(std::sqrt(2.0) * 0.01 * std::sqrt(2.0)).epsilon(1e-6));
    }
    SECTION("constant objective picks the lexicographically smallest feasible grid point") {
        auto p = load_fixture("disk_linear");
        p.objective = Affine{{0, 0}, 5};
        const auto r = grid_max(p, 0.1);
        CHECK(r.value == 5.0);
        CHECK(r.argmax == feasible_grid_points(p, 0.1).front());
        CHECK(r.gap_bound == 0.0);
    }
    SECTION("hyperbola with the unconstrained maximizer on the boundary") {
        const auto r = grid_max(load_fixture("hyperbola_center"), 0.01);
        CHECK(r.value == Catch::Approx(0.0).margin(1e-3));
        CHECK(std::abs(r.argmax[0] - 1) <= 0.05);
        CHECK(std::abs(r.argmax[1] - 1) <= 0.05);
    }
}

TEST_CASE("grid maximization errors", "[oracle]") {
    const auto p = load_fixture("disk_linear");
    CHECK_THROWS(grid_max(p, 0.0));
    CHECK_THROWS(grid_max(p, -1.0));
    CHECK_THROWS(grid_max(p, 1e-5));  // 3e5 x 3e5 cells
    auto q = p;
    q.constraints = {NegQuad{{{1, 0}, {0, 1}}, {0, 0}, -1}};
    CHECK_THROWS_AS(grid_max(q, 0.1), NoFeasiblePoint);
}

TEST_CASE("grid maximization invariants", "[oracle][property]") {
    for (const char* name : {"disk_linear", "disk_negquad", "hyperbola", "polygon", "disk_negabs_flat", "cusp_slab"}) {
        INFO(name);
        const auto p = load_fixture(name);
        double prev_value = -std::numeric_limits<double>::infinity(), prev_gap = 0;
        for (double h : {0.2, 0.1, 0.05, 0.025}) {
            const auto r = grid_max(p, h);
            CHECK(is_feasible(p, r.argmax, 1e-9));
            CHECK(r.value == eval(p.objective, r.argmax));
            CHECK(p.box.contains(r.argmax));
            CHECK(r.value >= prev_value - prev_gap);
            prev_value = r.value;
            prev_gap = r.gap_bound;
        }
        CHECK(grid_max(p, 0.05).argmax == grid_max(p, 0.05).argmax);
    }
}

TEST_CASE("KKT scan", "[oracle]") {
    SECTION("disk: sixteen boundary points and the center") {
        const auto p = load_fixture("disk_linear");
        std::vector<Vec> cands{{0, 0}};
        for (const auto& d : kkt_test::ray_directions(2)) cands.push_back(kkt_test::ray_boundary(p, {0, 0}, d));
        const auto scan = kkt_scan(p, cands);
        REQUIRE(scan.size() == 17);
        std::size_t certified = 0;
        for (std::size_t i = 0; i < scan.size(); ++i) {
            CHECK(scan[i].point == cands[i]);
            if (scan[i].verdict != Verdict::CertifiedGlobalMax) continue;
            ++certified;
            CHECK(norm2(sub(scan[i].point, Vec{std::sqrt(0.5), std::sqrt(0.5)})) <= 1e-9);
        }
        CHECK(certified == 1);
    }
    SECTION("empty sweep") { CHECK(kkt_scan(load_fixture("disk_linear"), {}).empty()); }
    SECTION("flat optimal face: every scanned face point certifies") {
        Problem p;
        p.n = 2;
        p.objective = Affine{{1, 1}, 0};
        p.constraints = {Affine{{-1, -1}, 1}, Affine{{1, 1}, 1}};
        p.box = Box{{-1, -1}, {2, 2}};
        std::vector<Vec> face;
        for (int k = 0; k <= 10; ++k) face.push_back({-0.5 + 0.2 * k, 1.5 - 0.2 * k});
        const auto scan = kkt_scan(p, face);
        for (const auto& e : scan) CHECK(e.verdict == Verdict::CertifiedGlobalMax);
        const auto r = grid_max(p, 0.01);
        for (const auto& x : face) CHECK(eval(p.objective, x) >= r.value - r.gap_bound);
    }
}
