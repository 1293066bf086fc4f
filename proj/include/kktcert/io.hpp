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

// Problem files and report serialization.
//
// Problem file:
//   {"n": 2, "box": [[lo, hi], ...], "seed": 1,
//    "objective": <node>, "constraints": [<node>, ...]}
// with nodes tagged by "op": affine {a, b}, monomial {exponents, coef},
// negquad {Q, c, d}, negabs {a, b}, cusp {a, b, p}, min {args},
// sum {args}, scale {k, arg}.

#pragma once

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kktcert/certify.hpp"
#include "kktcert/oracle.hpp"
#include "kktcert/problem.hpp"

namespace kktcert {

using json = nlohmann::json;

/// Problem file rejection. path() is a JSON pointer into the document.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, const std::string& message)
        : std::runtime_error((path.empty() ? std::string("/") : path) + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

namespace detail {

inline const json& field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path, std::string("missing field \"") + key + "\"");
    return *it;
}

inline double number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path, "expected a number");
    return j.get<double>();
}

inline Vec number_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
    Vec out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
    return out;
}

inline void only_fields(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw ParseError(path + "/" + it.key(), "unknown field");
    }
}

inline double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, path + "/" + key);
}

}  // namespace detail

inline Expr expr_from_json(const json& j, const std::string& path = "") {
    using namespace detail;
    if (!j.is_object()) throw ParseError(path, "expression node must be an object");
    const json& opj = field(j, "op", path);
    if (!opj.is_string()) throw ParseError(path + "/op", "expected a string");
    const std::string op = opj.get<std::string>();
    auto args_of = [&]() {
        const json& a = field(j, "args", path);
        if (!a.is_array()) throw ParseError(path + "/args", "expected an array of expressions");
        std::vector<Expr> out;
        for (std::size_t i = 0; i < a.size(); ++i) out.push_back(expr_from_json(a[i], path + "/args/" + std::to_string(i)));
        return out;
    };
    if (op == "affine") {
        only_fields(j, {"op", "a", "b"}, path);
        return Affine{number_array(field(j, "a", path), path + "/a"), number_or(j, "b", 0.0, path)};
    }
    if (op == "monomial") {
        only_fields(j, {"op", "exponents", "coef"}, path);
        const json& e = field(j, "exponents", path);
        if (!e.is_array()) throw ParseError(path + "/exponents", "expected an array of integers");
        std::vector<int> ex;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i].is_number_integer())
                throw ParseError(path + "/exponents/" + std::to_string(i), "expected an integer");
            ex.push_back(e[i].get<int>());
        }
        return Monomial{std::move(ex), number_or(j, "coef", 1.0, path)};
    }
    if (op == "negquad") {
        only_fields(j, {"op", "Q", "c", "d"}, path);
        const json& q = field(j, "Q", path);
        if (!q.is_array()) throw ParseError(path + "/Q", "expected a matrix (array of rows)");
        std::vector<Vec> Q;
        for (std::size_t i = 0; i < q.size(); ++i) Q.push_back(number_array(q[i], path + "/Q/" + std::to_string(i)));
        Vec c = j.contains("c") ? number_array(j["c"], path + "/c") : Vec(Q.size(), 0.0);
        return NegQuad{std::move(Q), std::move(c), number_or(j, "d", 0.0, path)};
    }
    if (op == "negabs") {
        only_fields(j, {"op", "a", "b"}, path);
        return NegAbs{number_array(field(j, "a", path), path + "/a"), number_or(j, "b", 0.0, path)};
    }
    if (op == "cusp") {
        only_fields(j, {"op", "a", "b", "p"}, path);
        return CuspDown{number_array(field(j, "a", path), path + "/a"), number_or(j, "b", 0.0, path),
                        number(field(j, "p", path), path + "/p")};
    }
    if (op == "min") {
        only_fields(j, {"op", "args"}, path);
        return Min{args_of()};
    }
    if (op == "sum") {
        only_fields(j, {"op", "args"}, path);
        return Sum{args_of()};
    }
    if (op == "scale") {
        only_fields(j, {"op", "k", "arg"}, path);
        return Scale{number(field(j, "k", path), path + "/k"), expr_from_json(field(j, "arg", path), path + "/arg")};
    }
    throw ParseError(path + "/op", "unknown op \"" + op + "\"");
}

inline json expr_to_json(const Expr& e) {
    return std::visit(
        overloaded{
            [](const Affine& f) { return json{{"op", "affine"}, {"a", f.a}, {"b", f.b}}; },
            [](const Monomial& f) { return json{{"op", "monomial"}, {"exponents", f.exponents}, {"coef", f.coef}}; },
            [](const NegQuad& f) { return json{{"op", "negquad"}, {"Q", f.Q}, {"c", f.c}, {"d", f.d}}; },
            [](const NegAbs& f) { return json{{"op", "negabs"}, {"a", f.a}, {"b", f.b}}; },
            [](const CuspDown& f) { return json{{"op", "cusp"}, {"a", f.a}, {"b", f.b}, {"p", f.p}}; },
            [](const Min& f) {
                json args = json::array();
                for (const auto& a : f.args) args.push_back(expr_to_json(a));
                return json{{"op", "min"}, {"args", args}};
            },
            [](const Sum& f) {
                json args = json::array();
                for (const auto& a : f.args) args.push_back(expr_to_json(a));
                return json{{"op", "sum"}, {"args", args}};
            },
            [](const Scale& f) { return json{{"op", "scale"}, {"k", f.k}, {"arg", expr_to_json(f.arg)}}; },
        },
        static_cast<const ExprNode::variant&>(e.node()));
}

inline Problem problem_from_json(const json& doc) {
    using namespace detail;
    if (!doc.is_object()) throw ParseError("", "problem document must be an object");
    only_fields(doc, {"n", "box", "seed", "objective", "constraints"}, "");
    Problem p;
    const json& n = field(doc, "n", "");
    if (!n.is_number_integer() || n.get<long long>() < 1) throw ParseError("/n", "n must be a positive integer");
    p.n = n.get<std::size_t>();
    const json& box = field(doc, "box", "");
    if (!box.is_array()) throw ParseError("/box", "expected [[lo, hi], ...]");
    for (std::size_t i = 0; i < box.size(); ++i) {
        const std::string bp = "/box/" + std::to_string(i);
        const Vec iv = number_array(box[i], bp);
        if (iv.size() != 2) throw ParseError(bp, "interval must be [lo, hi]");
        p.box.lo.push_back(iv[0]);
        p.box.hi.push_back(iv[1]);
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !(doc["seed"].is_number_integer() && doc["seed"].get<long long>() >= 0))
            throw ParseError("/seed", "seed must be a nonnegative integer");
        p.seed = doc["seed"].get<std::uint64_t>();
    }
    p.objective = expr_from_json(field(doc, "objective", ""), "/objective");
    if (doc.contains("constraints")) {
        const json& cs = doc["constraints"];
        if (!cs.is_array()) throw ParseError("/constraints", "expected an array of expressions");
        for (std::size_t i = 0; i < cs.size(); ++i)
            p.constraints.push_back(expr_from_json(cs[i], "/constraints/" + std::to_string(i)));
    }
    try {
        validate(p);
    } catch (const ExprError& e) {
        std::string msg = e.what();
        const std::string prefix = e.path() + ": ";
        if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
        throw ParseError(e.path(), msg);
    }
    return p;
}

/// Parses and validates a problem file's contents.
inline Problem parse_problem(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("", std::string("malformed JSON: ") + e.what());
    }
    return problem_from_json(doc);
}

inline json problem_to_json(const Problem& p) {
    json box = json::array();
    for (std::size_t i = 0; i < p.n; ++i) box.push_back({p.box.lo[i], p.box.hi[i]});
    json cons = json::array();
    for (const auto& c : p.constraints) cons.push_back(expr_to_json(c));
    return json{{"n", p.n}, {"box", box}, {"seed", p.seed}, {"objective", expr_to_json(p.objective)},
                {"constraints", cons}};
}

inline std::string serialize_problem(const Problem& p) { return problem_to_json(p).dump(2); }

// ---------------------------------------------------------------------------
// Reports

inline int exit_code(Verdict v) {
    switch (v) {
        case Verdict::CertifiedGlobalMax: return 0;
        case Verdict::KKTInfeasible: return 2;
        case Verdict::Degenerate: return 3;
        case Verdict::NotApplicable: return 4;
    }
    return 1;
}

inline json set_to_json(const SubdiffSet& s) {
    if (is_empty(s)) return json{{"kind", "empty"}};
    if (is_all(s)) return json{{"kind", "all"}};
    return json{{"kind", "poly"}, {"vertices", std::get<Polytope>(s).vertices()}};
}

/// Finite doubles as numbers; infinities become the strings "inf"/"-inf".
inline json number_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return nullptr;
    return v > 0 ? "inf" : "-inf";
}

inline json tolerances_to_json(const Tolerances& t) {
    return json{{"active", t.active},         {"residual", t.residual},
                {"feasibility", t.feasibility}, {"kink", t.kink},
                {"slater_margin", t.slater_margin}, {"boundary", t.boundary},
                {"boundary_input", t.boundary_input}, {"midpoint", t.midpoint}};
}

inline const char* kSignConvention =
    "0 in U(f)(x) + sum_i lambda_i U(g_i)(x), U = Frechet upper subdifferential, lambda_i >= 0, "
    "lambda_i g_i(x) = 0; multiplier on f normalized to 1";

inline json certificate_to_json(const Certificate& c) {
    json slater = nullptr;
    if (c.slater) {
        slater = json{{"found", c.slater->found}, {"point", c.slater->point}, {"margin", number_json(c.slater->margin)}};
    }
    json a = json::array();
    for (const auto& r : c.assumption_a)
        a.push_back(json{{"constraint", r.constraint}, {"value", r.value}, {"status", to_string(r.status)},
                         {"set", set_to_json(r.set)}});
    json prop1 = json::array();
    json prop1_summary = nullptr;
    if (c.prop1) {
        for (const auto& e : c.prop1->entries) {
            json entry{{"constraint", e.constraint}, {"point", e.point}, {"contained", e.contained}, {"set", e.set_kind}};
            if (!e.contained) {
                entry["failing_vertex"] = e.failing_vertex;
                entry["witness"] = e.witness;
            }
            prop1.push_back(std::move(entry));
        }
        prop1_summary = json{{"verdict", c.prop1->all_contained ? "AllContained" : "ContainmentFails"},
                             {"points_per_constraint", c.prop1->points_per_constraint},
                             {"conflict", c.prop1_conflict}};
    }
    json convexity = nullptr;
    if (c.convexity) {
        convexity = json{{"verdict", c.convexity->violation ? "NonconvexWitness" : "NoViolation"},
                         {"pairs_checked", c.convexity->pairs_checked}};
        if (c.convexity->violation) {
            convexity["y"] = c.convexity->y;
            convexity["z"] = c.convexity->z;
        }
    }
    json cons = json::array();
    for (const auto& s : c.constraints) {
        cons.push_back(json{{"constraint", s.constraint},
                            {"lambda", s.lambda},
                            {"whole_space", s.whole_space},
                            {"vertices", s.selection.vertices},
                            {"weights", s.selection.weights},
                            {"direction", s.selection.direction}});
    }
    json selections{{"objective",
                     json{{"vertices", c.objective.vertices},
                          {"weights", c.objective.weights},
                          {"direction", c.objective.direction}}},
                    {"constraints", cons}};
    return json{{"verdict", to_string(c.verdict)},
                {"point", c.point},
                {"constraint_values", c.constraint_values},
                {"active", c.active},
                {"multipliers", c.multipliers},
                {"residual", number_json(c.residual)},
                {"lp_feasible", c.lp_feasible},
                {"trivial_all", c.trivial_all},
                {"slater", slater},
                {"assumption_a", a},
                {"prop1", prop1},
                {"prop1_summary", prop1_summary},
                {"convexity", convexity},
                {"selections", selections},
                {"sign_convention", kSignConvention},
                {"tolerances", tolerances_to_json(c.tol)},
                {"seed", c.seed}};
}

/// Residual recomputed from a JSON report's stored weights alone.
inline double residual_from_report(const json& report) {
    const auto& sel = report.at("selections");
    const Vec point = report.at("point").get<Vec>();
    Vec r(point.size(), 0.0);
    const auto& obj = sel.at("objective");
    const auto ov = obj.at("vertices").get<std::vector<Vec>>();
    const auto ow = obj.at("weights").get<Vec>();
    for (std::size_t j = 0; j < ov.size(); ++j) axpy(ow[j], ov[j], r);
    for (const auto& c : sel.at("constraints")) {
        if (c.at("whole_space").get<bool>() && c.at("vertices").empty()) {
            axpy(c.at("lambda").get<double>(), c.at("direction").get<Vec>(), r);
            continue;
        }
        const auto cv = c.at("vertices").get<std::vector<Vec>>();
        const auto cw = c.at("weights").get<Vec>();
        for (std::size_t j = 0; j < cv.size(); ++j) axpy(cw[j], cv[j], r);
    }
    return norm2(r);
}

inline json oracle_to_json(const OracleResult& r) {
    return json{{"argmax", r.argmax},       {"value", r.value},         {"h", r.h},
                {"lipschitz", r.lipschitz}, {"gap_bound", r.gap_bound}, {"feasible_points", r.feasible_points}};
}

namespace detail {

inline std::string fmt_vec(VecView v) {
    std::ostringstream os;
    os.precision(10);
    os << "(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ")";
    return os.str();
}

}  // namespace detail

inline std::string certificate_to_text(const Certificate& c) {
    std::ostringstream os;
    os.precision(10);
    os << "verdict: " << to_string(c.verdict) << "\n";
    os << "point: " << detail::fmt_vec(c.point) << "\n";
    os << "convention: " << kSignConvention << "\n";
    if (c.slater) {
        os << "slater: " << (c.slater->found ? "witness " : "not found, best ") << detail::fmt_vec(c.slater->point)
           << " margin " << c.slater->margin << "\n";
    }
    if (c.convexity) {
        os << "convexity probe: " << (c.convexity->violation ? "NonconvexWitness" : "NoViolation");
        if (c.convexity->violation)
            os << " y=" << detail::fmt_vec(c.convexity->y) << " z=" << detail::fmt_vec(c.convexity->z);
        os << " (" << c.convexity->pairs_checked << " pairs)\n";
    }
    os << "active constraints:";
    if (c.active.empty()) os << " none";
    for (std::size_t i : c.active) os << " " << i;
    os << "\n";
    for (const auto& r : c.assumption_a)
        os << "  assumption A, g_" << r.constraint << ": " << to_string(r.status) << "\n";
    if (c.prop1) {
        std::size_t failed = 0;
        for (const auto& e : c.prop1->entries) failed += e.contained ? 0 : 1;
        os << "containment: " << (c.prop1->all_contained ? "AllContained" : "ContainmentFails") << " ("
           << c.prop1->entries.size() - failed << "/" << c.prop1->entries.size() << " boundary points)";
        if (c.prop1_conflict) os << " [conflict: convexity probe found no violation]";
        os << "\n";
        for (const auto& e : c.prop1->entries) {
            if (e.contained) continue;
            os << "  g_" << e.constraint << " at " << detail::fmt_vec(e.point) << ": vertex "
               << detail::fmt_vec(e.failing_vertex) << " fails, witness " << detail::fmt_vec(e.witness) << "\n";
            break;
        }
    }
    os << "lp: " << (c.lp_feasible ? "feasible" : "infeasible") << (c.trivial_all ? " (trivial: whole-space set)" : "")
       << "\n";
    os << "multipliers: " << detail::fmt_vec(c.multipliers) << "\n";
    if (c.lp_feasible) {
        os << "objective selection: " << detail::fmt_vec(c.objective.direction) << "\n";
        for (const auto& s : c.constraints)
            os << "  g_" << s.constraint << ": lambda " << s.lambda << " direction "
               << detail::fmt_vec(s.selection.direction) << "\n";
        os << "residual: " << c.residual << "\n";
    }
    return os.str();
}

}  // namespace kktcert
