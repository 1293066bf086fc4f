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

// kktcert: certify global maximizers of concave programs from the shell.
//
//   kktcert certify problem.json --point 0.7071,0.7071 [--format json]
//   kktcert scan    problem.json --grid 0.25
//   kktcert oracle  problem.json --grid 0.01
//   kktcert probe   problem.json

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "kktcert/kktcert.hpp"

namespace {

using kktcert::json;

constexpr int kUsageError = 1;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

kktcert::Vec parse_point(const std::string& text) {
    kktcert::Vec out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const char* begin = item.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        while (end && *end == ' ') ++end;
        if (end == begin || *end != '\0' || errno == ERANGE)
            throw std::invalid_argument("--point: cannot parse \"" + item + "\" as a number");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("--point: empty coordinate list");
    return out;
}

struct Common {
    std::string file;
    std::string format = "text";
    std::optional<double> tol_residual;
    std::optional<double> tol_active;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("file", c.file, "problem file (JSON)")->required();
    sub->add_option("--format", c.format, "report format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--tol-residual", c.tol_residual, "certified residual bound (default 1e-7)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--tol-active", c.tol_active, "activity threshold on |g_i(x)| (default 1e-7)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "override the problem seed");
}

kktcert::Problem load(const Common& c) {
    kktcert::Problem p = kktcert::parse_problem(read_file(c.file));
    if (c.seed) p.seed = *c.seed;
    return p;
}

kktcert::CertifyOptions options(const Common& c) {
    kktcert::CertifyOptions opt;
    if (c.tol_residual) opt.tol.residual = *c.tol_residual;
    if (c.tol_active) opt.tol.active = *c.tol_active;
    return opt;
}

int run_certify(const Common& c, const std::string& point) {
    const auto p = load(c);
    const auto x = parse_point(point);
    if (x.size() != p.n)
        throw std::invalid_argument("--point has " + std::to_string(x.size()) + " coordinates, problem has n = " +
                                    std::to_string(p.n));
    const auto cert = kktcert::certify_pipeline(p, x, options(c));
    if (c.format == "json")
        std::cout << kktcert::certificate_to_json(cert).dump(2) << "\n";
    else
        std::cout << kktcert::certificate_to_text(cert);
    return kktcert::exit_code(cert.verdict);
}

int run_scan(const Common& c, double h) {
    const auto p = load(c);
    const auto pts = kktcert::feasible_grid_points(p, h);
    const auto scan = kktcert::kkt_scan(p, pts, options(c));
    if (c.format == "json") {
        json out = json::array();
        for (const auto& e : scan) out.push_back(json{{"point", e.point}, {"verdict", kktcert::to_string(e.verdict)}});
        std::cout << json{{"grid", h}, {"results", out}}.dump(2) << "\n";
    } else {
        std::size_t certified = 0;
        for (const auto& e : scan) {
            if (e.verdict != kktcert::Verdict::CertifiedGlobalMax) continue;
            ++certified;
            std::cout << "certified: " << kktcert::detail::fmt_vec(e.point) << "\n";
        }
        std::cout << certified << " of " << scan.size() << " feasible grid points certified\n";
    }
    return 0;
}

int run_oracle(const Common& c, double h) {
    const auto p = load(c);
    const auto r = kktcert::grid_max(p, h);
    if (c.format == "json") {
        std::cout << kktcert::oracle_to_json(r).dump(2) << "\n";
    } else {
        std::cout.precision(10);
        std::cout << "argmax: " << kktcert::detail::fmt_vec(r.argmax) << "\nvalue: " << r.value << "\ngap bound: "
                  << r.gap_bound << " (lipschitz " << r.lipschitz << ", h " << r.h << ")\nfeasible grid points: "
                  << r.feasible_points << "\n";
    }
    return 0;
}

int run_probe(const Common& c) {
    const auto p = load(c);
    const auto opt = options(c);
    const auto s = kktcert::slater_find(p, opt);
    const auto conv = kktcert::convexity_probe(p, p.seed, opt);
    if (c.format == "json") {
        json out{{"slater", json{{"found", s.found}, {"point", s.point}, {"margin", kktcert::number_json(s.margin)}}},
                 {"convexity",
                  json{{"verdict", conv.violation ? "NonconvexWitness" : "NoViolation"},
                       {"pairs_checked", conv.pairs_checked}}},
                 {"seed", p.seed}};
        if (conv.violation) {
            out["convexity"]["y"] = conv.y;
            out["convexity"]["z"] = conv.z;
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout.precision(10);
        std::cout << "slater: " << (s.found ? "witness " : "not found, best ") << kktcert::detail::fmt_vec(s.point)
                  << " margin " << s.margin << "\n";
        std::cout << "convexity probe: " << (conv.violation ? "NonconvexWitness" : "NoViolation");
        if (conv.violation)
            std::cout << " y=" << kktcert::detail::fmt_vec(conv.y) << " z=" << kktcert::detail::fmt_vec(conv.z);
        std::cout << "\n";
    }
    return s.found && !conv.violation ? 0 : kktcert::exit_code(kktcert::Verdict::NotApplicable);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Global-optimality certificates for concave maximization problems"};
    app.require_subcommand(1);

    Common certify_args, scan_args, oracle_args, probe_args;
    std::string point;
    double scan_h = 0.0, oracle_h = 0.0;

    auto* certify = app.add_subcommand("certify", "run the full certification pipeline at a point");
    add_common(certify, certify_args);
    certify->add_option("--point", point, "candidate point x1,x2[,x3]")->required();

    auto* scan = app.add_subcommand("scan", "KKT check at every feasible grid point");
    add_common(scan, scan_args);
    scan->add_option("--grid", scan_h, "grid step")->required()->check(CLI::PositiveNumber);

    auto* oracle = app.add_subcommand("oracle", "brute-force grid maximization");
    add_common(oracle, oracle_args);
    oracle->add_option("--grid", oracle_h, "grid step")->required()->check(CLI::PositiveNumber);

    auto* probe = app.add_subcommand("probe", "Slater search and convexity probe only");
    add_common(probe, probe_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*certify) return run_certify(certify_args, point);
        if (*scan) return run_scan(scan_args, scan_h);
        if (*oracle) return run_oracle(oracle_args, oracle_h);
        if (*probe) return run_probe(probe_args);
    } catch (const kktcert::ParseError& e) {
        std::cerr << "error: invalid problem file: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return kUsageError;
}
