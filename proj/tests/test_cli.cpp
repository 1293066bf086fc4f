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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>

#include "kktcert/io.hpp"
#include "support.hpp"

using kktcert::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const auto tmp = std::filesystem::temp_directory_path() /
                     ("kktcert_cli_" + std::to_string(::getpid()) + ".out");
    const std::string cmd = std::string("\"") + KKTCERT_CLI_PATH + "\" " + args + " > \"" + tmp.string() +
                            "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = kkt_test::read_text(tmp.string());
    std::filesystem::remove(tmp);
    return r;
}

std::string fx(const std::string& name) { return "\"" + kkt_test::fixture_path(name) + "\""; }

}  // namespace

TEST_CASE("certify exit codes follow the verdict", "[cli]") {
    CHECK(run("certify " + fx("disk_linear") + " --point 0.70710678118654757,0.70710678118654757").code == 0);
    CHECK(run("certify " + fx("disk_linear") + " --point 1,0").code == 2);
    CHECK(run("certify " + fx("cubic") + " --point 1,0").code == 3);
    CHECK(run("certify " + fx("disk_exterior") + " --point 1.5,1.5").code == 4);
}

TEST_CASE("bad input exits with 1", "[cli]") {
    CHECK(run("certify " + fx("disk_linear") + " --point 1,1").code == 1);        // infeasible
    CHECK(run("certify " + fx("disk_linear") + " --point 0.1").code == 1);        // wrong length
    CHECK(run("certify " + fx("disk_linear") + " --point a,b").code == 1);
    CHECK(run("certify /nonexistent/problem.json --point 0,0").code == 1);
    CHECK(run("frobnicate").code != 0);

    const auto bad = std::filesystem::temp_directory_path() / ("kktcert_bad_" + std::to_string(::getpid()) + ".json");
    {
        std::FILE* f = std::fopen(bad.string().c_str(), "w");
        REQUIRE(f);
        std::fputs(R"({"n": 2, "box": [[0, 1], [0, 1]], "objective": {"op": "monomial", "exponents": [2, 0]}})", f);
        std::fclose(f);
    }
    CHECK(run("probe \"" + bad.string() + "\"").code == 1);
    std::filesystem::remove(bad);
}

TEST_CASE("JSON certificate", "[cli]") {
    const auto r = run("certify " + fx("disk_linear") + " --point 0.70710678118654757,0.70710678118654757 --format json");
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["verdict"] == "CertifiedGlobalMax");
    CHECK(std::abs(j["multipliers"][0].get<double>() - 0.70711) <= 1e-5);
    CHECK(kktcert::residual_from_report(j) <= 1e-7);
}

TEST_CASE("tolerance flags reach the certifier", "[cli]") {
    // Slightly inside the disk: active only under the default threshold.
    const std::string pt = " --point 0.7071067632,0.7071067632";
    CHECK(run("certify " + fx("disk_linear") + pt).code == 0);
    CHECK(run("certify " + fx("disk_linear") + pt + " --tol-active 1e-12").code == 2);
}

TEST_CASE("seed override", "[cli]") {
    const std::string base = "certify " + fx("disk_linear") + " --point 0.70710678118654757,0.70710678118654757 --format json";
    const auto a = json::parse(run(base).out);
    const auto b = json::parse(run(base + " --seed 1").out);
    const auto c = json::parse(run(base + " --seed 99").out);
    CHECK(a["seed"] == 1);
    CHECK(c["seed"] == 99);
    CHECK(a == b);
    CHECK(c["verdict"] == "CertifiedGlobalMax");
}

TEST_CASE("oracle, scan and probe subcommands", "[cli]") {
    const auto o = run("oracle " + fx("disk_linear") + " --grid 0.01 --format json");
    REQUIRE(o.code == 0);
    const auto jo = json::parse(o.out);
    CHECK(std::abs(jo["value"].get<double>() - std::sqrt(2.0)) <= 0.02);

    const auto s = run("scan " + fx("disk_negquad") + " --grid 0.1 --format json");
    REQUIRE(s.code == 0);
    const auto js = json::parse(s.out);
    std::size_t certified = 0;
    for (const auto& e : js["results"]) certified += e["verdict"] == "CertifiedGlobalMax";
    CHECK(certified >= 1);

    CHECK(run("probe " + fx("disk_linear")).code == 0);
    CHECK(run("probe " + fx("disk_exterior")).code == 4);
    CHECK(run("oracle " + fx("disk_linear") + " --grid -1").code != 0);
}
