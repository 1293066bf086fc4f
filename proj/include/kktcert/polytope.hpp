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

#include <algorithm>
#include <stdexcept>
#include <variant>
#include <vector>

#include "kktcert/linalg.hpp"

namespace kktcert {

/// Convex polytope in V-representation. Vertices are kept sorted
/// lexicographically with exact duplicates removed; redundant (non-extreme)
/// points are allowed.
class Polytope {
public:
    Polytope() = default;

    explicit Polytope(std::vector<Vec> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.empty()) throw std::invalid_argument("polytope needs at least one vertex");
        const std::size_t n = vertices_.front().size();
        for (const auto& v : vertices_) {
            require_dim(v.size(), n, "polytope vertex");
            if (!all_finite(v)) throw std::invalid_argument("polytope vertex is not finite");
        }
        std::sort(vertices_.begin(), vertices_.end());
        vertices_.erase(std::unique(vertices_.begin(), vertices_.end()), vertices_.end());
    }

    static Polytope singleton(Vec v) { return Polytope(std::vector<Vec>{std::move(v)}); }

    const std::vector<Vec>& vertices() const { return vertices_; }
    std::size_t dim() const { return vertices_.empty() ? 0 : vertices_.front().size(); }
    std::size_t size() const { return vertices_.size(); }
    bool is_singleton() const { return vertices_.size() == 1; }

    friend bool operator==(const Polytope&, const Polytope&) = default;

private:
    std::vector<Vec> vertices_;
};

struct EmptySet {
    friend bool operator==(EmptySet, EmptySet) { return true; }
};

struct WholeSpace {
    friend bool operator==(WholeSpace, WholeSpace) { return true; }
};

/// Value of an upper subdifferential at a point.
using SubdiffSet = std::variant<EmptySet, WholeSpace, Polytope>;

inline bool is_empty(const SubdiffSet& s) { return std::holds_alternative<EmptySet>(s); }
inline bool is_all(const SubdiffSet& s) { return std::holds_alternative<WholeSpace>(s); }
inline const Polytope* as_poly(const SubdiffSet& s) { return std::get_if<Polytope>(&s); }

inline SubdiffSet scale_set(const SubdiffSet& s, double k) {
    const auto* p = as_poly(s);
    if (p == nullptr) return s;
    std::vector<Vec> out;
    out.reserve(p->size());
    for (const auto& v : p->vertices()) out.push_back(scaled(v, k));
    return Polytope(std::move(out));
}

inline SubdiffSet negate_set(const SubdiffSet& s) { return scale_set(s, -1.0); }

inline SubdiffSet minkowski_sum(const SubdiffSet& a, const SubdiffSet& b) {
    if (is_empty(a) || is_empty(b)) return EmptySet{};
    if (is_all(a) || is_all(b)) return WholeSpace{};
    const auto& pa = std::get<Polytope>(a);
    const auto& pb = std::get<Polytope>(b);
    require_dim(pb.dim(), pa.dim(), "minkowski_sum");
    std::vector<Vec> out;
    out.reserve(pa.size() * pb.size());
    for (const auto& u : pa.vertices())
        for (const auto& v : pb.vertices()) out.push_back(add(u, v));
    return Polytope(std::move(out));
}

/// Convex hull of a union; Empty and All absorb as for the min rule.
inline SubdiffSet hull_union(const std::vector<SubdiffSet>& parts) {
    if (parts.empty()) return EmptySet{};
    for (const auto& s : parts)
        if (is_empty(s)) return EmptySet{};
    for (const auto& s : parts)
        if (is_all(s)) return WholeSpace{};
    std::vector<Vec> out;
    for (const auto& s : parts) {
        const auto& vs = std::get<Polytope>(s).vertices();
        out.insert(out.end(), vs.begin(), vs.end());
    }
    return Polytope(std::move(out));
}

}  // namespace kktcert
