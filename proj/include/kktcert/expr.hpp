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

// Scalar function expressions over R^n with exact Frechet upper
// subdifferentials.
//
// The grammar is closed: affine maps, polynomial monomials, concave
// quadratics, negated absolute values (kinks), negated fractional powers
// (cusps), and min / sum / positive-scale combinators. Every rule in
// upper_subdiff() is exact for this grammar, provided a sum has at most one
// nonsmooth-capable summand.

#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>

#include "kktcert/linalg.hpp"
#include "kktcert/polytope.hpp"

namespace kktcert {

struct ExprNode;

/// Immutable, cheaply copyable handle to an expression tree.
class Expr {
public:
    Expr() = default;
    template <typename Atom>
        requires(!std::is_same_v<std::decay_t<Atom>, Expr>)
    Expr(Atom atom);  // NOLINT(google-explicit-constructor)

    const ExprNode& node() const {
        if (!node_) throw std::logic_error("empty expression");
        return *node_;
    }
    bool empty() const { return node_ == nullptr; }

private:
    std::shared_ptr<const ExprNode> node_;
};

/// a . x + b
struct Affine {
    Vec a;
    double b = 0.0;
    friend bool operator==(const Affine&, const Affine&) = default;
};

/// coef * prod_j x_j^exponents[j]
struct Monomial {
    std::vector<int> exponents;
    double coef = 1.0;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// -x^T Q x + c . x + d, Q symmetric positive semidefinite.
struct NegQuad {
    std::vector<Vec> Q;
    Vec c;
    double d = 0.0;
    friend bool operator==(const NegQuad&, const NegQuad&) = default;
};

/// -|a . x - b|
struct NegAbs {
    Vec a;
    double b = 0.0;
    friend bool operator==(const NegAbs&, const NegAbs&) = default;
};

/// -|a . x - b|^p with 0 < p < 1.
struct CuspDown {
    Vec a;
    double b = 0.0;
    double p = 0.5;
    friend bool operator==(const CuspDown&, const CuspDown&) = default;
};

struct Min {
    std::vector<Expr> args;
};

struct Sum {
    std::vector<Expr> args;
};

/// k * arg with k > 0.
struct Scale {
    double k = 1.0;
    Expr arg;
};

struct ExprNode : std::variant<Affine, Monomial, NegQuad, NegAbs, CuspDown, Min, Sum, Scale> {
    using variant::variant;
};

template <typename Atom>
    requires(!std::is_same_v<std::decay_t<Atom>, Expr>)
Expr::Expr(Atom atom) : node_(std::make_shared<const ExprNode>(std::move(atom))) {}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

inline bool operator==(const Expr& lhs, const Expr& rhs);

inline bool operator==(const Min& l, const Min& r) { return l.args == r.args; }
inline bool operator==(const Sum& l, const Sum& r) { return l.args == r.args; }
inline bool operator==(const Scale& l, const Scale& r) { return l.k == r.k && l.arg == r.arg; }

inline bool operator==(const Expr& lhs, const Expr& rhs) {
    if (lhs.empty() || rhs.empty()) return lhs.empty() == rhs.empty();
    const ExprNode& a = lhs.node();
    const ExprNode& b = rhs.node();
    if (a.index() != b.index()) return false;
    return std::visit(
        [&b](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            return x == std::get<T>(static_cast<const ExprNode::variant&>(b));
        },
        static_cast<const ExprNode::variant&>(a));
}

/// Invariant violation in an expression; path() locates the offending node
/// as a JSON pointer relative to the expression root.
class ExprError : public std::invalid_argument {
public:
    ExprError(std::string path, const std::string& message)
        : std::invalid_argument(path.empty() ? message : path + ": " + message),
          path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct Thresholds {
    /// |a . x - b| at or below this counts as on the kink / cusp; also the
    /// value gap under which min arguments are treated as co-active.
    double kink = 1e-10;
};

namespace detail {

inline const ExprNode::variant& as_variant(const Expr& e) {
    return static_cast<const ExprNode::variant&>(e.node());
}

inline std::size_t dim_of(const Expr& e) {
    return std::visit(overloaded{
                          [](const Affine& x) { return x.a.size(); },
                          [](const Monomial& x) { return x.exponents.size(); },
                          [](const NegQuad& x) { return x.c.size(); },
                          [](const NegAbs& x) { return x.a.size(); },
                          [](const CuspDown& x) { return x.a.size(); },
                          [](const Min& x) { return x.args.empty() ? 0 : dim_of(x.args.front()); },
                          [](const Sum& x) { return x.args.empty() ? 0 : dim_of(x.args.front()); },
                          [](const Scale& x) { return dim_of(x.arg); },
                      },
                      as_variant(e));
}

inline double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace detail

inline std::size_t dim(const Expr& e) { return detail::dim_of(e); }

/// True for nodes whose upper subdifferential can be a non-singleton.
inline bool nonsmooth_capable(const Expr& e) {
    return std::visit(overloaded{
                          [](const NegAbs&) { return true; },
                          [](const CuspDown&) { return true; },
                          [](const Min&) { return true; },
                          [](const Sum& x) {
                              for (const auto& a : x.args)
                                  if (nonsmooth_capable(a)) return true;
                              return false;
                          },
                          [](const Scale& x) { return nonsmooth_capable(x.arg); },
                          [](const auto&) { return false; },
                      },
                      detail::as_variant(e));
}

/// Eigenvalue test for a symmetric positive semidefinite matrix.
inline bool is_symmetric_psd(const std::vector<Vec>& Q, std::string* why = nullptr) {
    const std::size_t n = Q.size();
    Eigen::MatrixXd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    double scale = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (Q[i].size() != n) {
            if (why) *why = "Q must be square";
            return false;
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(Q[i][j])) {
                if (why) *why = "Q entries must be finite";
                return false;
            }
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Q[i][j];
            scale = std::max(scale, std::abs(Q[i][j]));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(Q[i][j] - Q[j][i]) > 1e-12 * scale) {
                if (why) *why = "Q must be symmetric";
                return false;
            }
    if (n == 0) return true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10 * scale) {
        if (why) *why = "Q must be positive semidefinite";
        return false;
    }
    return true;
}

/// Checks every grammar invariant; throws ExprError naming the first
/// violation. `path` is the JSON pointer of `e` within its document.
inline void validate(const Expr& e, const std::string& path = "") {
    if (e.empty()) throw ExprError(path, "expression is empty");
    auto finite_vec = [&](const Vec& v, const char* field) {
        if (!all_finite(v)) throw ExprError(path + "/" + field, "entries must be finite");
    };
    auto finite = [&](double v, const char* field) {
        if (!std::isfinite(v)) throw ExprError(path + "/" + field, "must be finite");
    };
    std::visit(
        overloaded{
            [&](const Affine& x) {
                finite_vec(x.a, "a");
                finite(x.b, "b");
            },
            [&](const Monomial& x) {
                for (int ex : x.exponents)
                    if (ex < 0) throw ExprError(path + "/exponents", "monomial exponents must be >= 0");
                finite(x.coef, "coef");
            },
            [&](const NegQuad& x) {
                if (x.Q.size() != x.c.size())
                    throw ExprError(path + "/Q", "negquad.Q must be n x n with n = len(c)");
                std::string why;
                if (!is_symmetric_psd(x.Q, &why)) throw ExprError(path + "/Q", "negquad." + why);
                finite_vec(x.c, "c");
                finite(x.d, "d");
            },
            [&](const NegAbs& x) {
                finite_vec(x.a, "a");
                finite(x.b, "b");
            },
            [&](const CuspDown& x) {
                finite_vec(x.a, "a");
                finite(x.b, "b");
                if (!(x.p > 0.0 && x.p < 1.0)) throw ExprError(path + "/p", "cusp.p must be in (0,1)");
            },
            [&](const Min& x) {
                if (x.args.empty()) throw ExprError(path + "/args", "min needs at least one argument");
                for (std::size_t i = 0; i < x.args.size(); ++i)
                    validate(x.args[i], path + "/args/" + std::to_string(i));
                const std::size_t n = dim(x.args.front());
                for (std::size_t i = 1; i < x.args.size(); ++i)
                    if (dim(x.args[i]) != n)
                        throw ExprError(path + "/args/" + std::to_string(i), "argument dimension mismatch");
            },
            [&](const Sum& x) {
                if (x.args.empty()) throw ExprError(path + "/args", "sum needs at least one argument");
                int nonsmooth = 0;
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    validate(x.args[i], path + "/args/" + std::to_string(i));
                    if (nonsmooth_capable(x.args[i])) ++nonsmooth;
                }
                if (nonsmooth > 1)
                    throw ExprError(path, "sum may contain at most one nonsmooth summand (negabs, cusp, min)");
                const std::size_t n = dim(x.args.front());
                for (std::size_t i = 1; i < x.args.size(); ++i)
                    if (dim(x.args[i]) != n)
                        throw ExprError(path + "/args/" + std::to_string(i), "argument dimension mismatch");
            },
            [&](const Scale& x) {
                if (!(x.k > 0.0) || !std::isfinite(x.k)) throw ExprError(path + "/k", "scale.k must be > 0");
                validate(x.arg, path + "/arg");
            },
        },
        detail::as_variant(e));
}

inline double eval(const Expr& e, VecView x) {
    return std::visit(overloaded{
                          [&](const Affine& f) { return dot(f.a, x) + f.b; },
                          [&](const Monomial& f) {
                              double r = f.coef;
                              for (std::size_t j = 0; j < x.size(); ++j) r *= detail::ipow(x[j], f.exponents[j]);
                              return r;
                          },
                          [&](const NegQuad& f) {
                              double q = 0.0;
                              for (std::size_t i = 0; i < x.size(); ++i) q += x[i] * dot(f.Q[i], x);
                              return -q + dot(f.c, x) + f.d;
                          },
                          [&](const NegAbs& f) { return -std::abs(dot(f.a, x) - f.b); },
                          [&](const CuspDown& f) { return -std::pow(std::abs(dot(f.a, x) - f.b), f.p); },
                          [&](const Min& f) {
                              double m = std::numeric_limits<double>::infinity();
                              for (const auto& a : f.args) m = std::min(m, eval(a, x));
                              return m;
                          },
                          [&](const Sum& f) {
                              double s = 0.0;
                              for (const auto& a : f.args) s += eval(a, x);
                              return s;
                          },
                          [&](const Scale& f) { return f.k * eval(f.arg, x); },
                      },
                      detail::as_variant(e));
}

/// Dimension-checked evaluation.
inline double eval_checked(const Expr& e, VecView x) {
    require_dim(x.size(), dim(e), "eval");
    return eval(e, x);
}

/// Exact Frechet upper subdifferential of `e` at `x`.
inline SubdiffSet upper_subdiff(const Expr& e, VecView x, const Thresholds& th = {}) {
    return std::visit(
        overloaded{
            [&](const Affine& f) -> SubdiffSet { return Polytope::singleton(f.a); },
            [&](const Monomial& f) -> SubdiffSet {
                Vec g(x.size());
                for (std::size_t k = 0; k < x.size(); ++k) {
                    if (f.exponents[k] == 0) continue;
                    double r = f.coef * f.exponents[k] * detail::ipow(x[k], f.exponents[k] - 1);
                    for (std::size_t j = 0; j < x.size(); ++j)
                        if (j != k) r *= detail::ipow(x[j], f.exponents[j]);
                    g[k] = r;
                }
                return Polytope::singleton(std::move(g));
            },
            [&](const NegQuad& f) -> SubdiffSet {
                Vec g(f.c);
                for (std::size_t i = 0; i < x.size(); ++i) g[i] -= 2.0 * dot(f.Q[i], x);
                return Polytope::singleton(std::move(g));
            },
            [&](const NegAbs& f) -> SubdiffSet {
                const double t = dot(f.a, x) - f.b;
                if (std::abs(t) <= th.kink) return Polytope({scaled(f.a, -1.0), f.a});
                return Polytope::singleton(scaled(f.a, t > 0 ? -1.0 : 1.0));
            },
            [&](const CuspDown& f) -> SubdiffSet {
                const double t = dot(f.a, x) - f.b;
                if (std::abs(t) <= th.kink) {
                    // A zero normal makes the atom constant.
                    if (norm_inf(f.a) == 0.0) return Polytope::singleton(Vec(x.size(), 0.0));
                    return WholeSpace{};
                }
                const double slope = -f.p * std::pow(std::abs(t), f.p - 1.0) * (t > 0 ? 1.0 : -1.0);
                return Polytope::singleton(scaled(f.a, slope));
            },
            [&](const Min& f) -> SubdiffSet {
                std::vector<double> vals;
                vals.reserve(f.args.size());
                for (const auto& a : f.args) vals.push_back(eval(a, x));
                const double m = *std::min_element(vals.begin(), vals.end());
                std::vector<SubdiffSet> active;
                for (std::size_t i = 0; i < f.args.size(); ++i)
                    if (vals[i] - m <= th.kink) active.push_back(upper_subdiff(f.args[i], x, th));
                return hull_union(active);
            },
            [&](const Sum& f) -> SubdiffSet {
                SubdiffSet acc = upper_subdiff(f.args.front(), x, th);
                for (std::size_t i = 1; i < f.args.size(); ++i)
                    acc = minkowski_sum(acc, upper_subdiff(f.args[i], x, th));
                return acc;
            },
            [&](const Scale& f) -> SubdiffSet { return scale_set(upper_subdiff(f.arg, x, th), f.k); },
        },
        detail::as_variant(e));
}

inline SubdiffSet upper_subdiff_checked(const Expr& e, VecView x, const Thresholds& th = {}) {
    require_dim(x.size(), dim(e), "upper_subdiff");
    return upper_subdiff(e, x, th);
}

enum class Concavity { Concave, Unknown };

/// Syntactic concavity audit. Monomials of degree >= 2 and cusps are not
/// certified concave (-|t|^p is convex on each side of its cusp).
inline Concavity concavity_audit(const Expr& e) {
    return std::visit(overloaded{
                          [](const Affine&) { return Concavity::Concave; },
                          [](const Monomial& f) {
                              int degree = 0;
                              for (int ex : f.exponents) degree += ex;
                              return degree <= 1 ? Concavity::Concave : Concavity::Unknown;
                          },
                          [](const NegQuad&) { return Concavity::Concave; },
                          [](const NegAbs&) { return Concavity::Concave; },
                          [](const CuspDown&) { return Concavity::Unknown; },
                          [](const Min& f) {
                              for (const auto& a : f.args)
                                  if (concavity_audit(a) != Concavity::Concave) return Concavity::Unknown;
                              return Concavity::Concave;
                          },
                          [](const Sum& f) {
                              for (const auto& a : f.args)
                                  if (concavity_audit(a) != Concavity::Concave) return Concavity::Unknown;
                              return Concavity::Concave;
                          },
                          [](const Scale& f) { return concavity_audit(f.arg); },
                      },
                      detail::as_variant(e));
}

struct ProbeOptions {
    /// Strictly decreasing sphere radii; default 2^-k for k = 4..16.
    std::vector<double> radii;
    std::size_t directions = 64;
    /// limsup estimate = max over the last `tail_tiers` radii.
    std::size_t tail_tiers = 4;
    std::uint64_t seed = 0x6c696d737570ULL;

    static std::vector<double> default_radii() {
        std::vector<double> r;
        for (int k = 4; k <= 16; ++k) r.push_back(std::ldexp(1.0, -k));
        return r;
    }
};

/// Per-tier maxima of (e(x) - e(xbar) - <v, x - xbar>) / |x - xbar| over
/// fresh random directions on each sphere |x - xbar| = r.
inline std::vector<double> limsup_profile(const Expr& e, VecView xbar, VecView v, ProbeOptions opt = {}) {
    if (opt.radii.empty()) opt.radii = ProbeOptions::default_radii();
    const std::size_t n = xbar.size();
    require_dim(v.size(), n, "limsup_probe");
    Rng rng(opt.seed);
    const double f0 = eval(e, xbar);
    std::vector<double> out;
    out.reserve(opt.radii.size());
    Vec x(n);
    for (double r : opt.radii) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < opt.directions; ++s) {
            const Vec w = rng.direction(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = xbar[i] + r * w[i];
            const Vec step = sub(x, xbar);
            const double len = norm2(step);
            if (len == 0.0) continue;
            best = std::max(best, (eval(e, x) - f0 - dot(v, step)) / len);
        }
        out.push_back(best);
    }
    return out;
}

/// Sampled estimate of the limsup quotient defining the upper
/// subdifferential; a value <= 0.05 supports v in upper_subdiff(e, xbar).
inline double limsup_probe(const Expr& e, VecView xbar, VecView v, ProbeOptions opt = {}) {
    const auto profile = limsup_profile(e, xbar, v, opt);
    const std::size_t tail = std::min(std::max<std::size_t>(opt.tail_tiers, 1), profile.size());
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = profile.size() - tail; i < profile.size(); ++i) m = std::max(m, profile[i]);
    return m;
}

}  // namespace kktcert
