#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rnc/errors.hpp"

namespace rnc {

// A total function on {0, ..., n-1}, stored as the image array.
using transformation = std::vector<int>;

inline transformation identity_transformation(int n) {
    transformation t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = i;
    return t;
}

// Word-order composition: (f * g)(q) = g(f(q)), i.e. apply f first. Matches
// reading an input word left to right.
inline transformation compose(const transformation& f, const transformation& g) {
    if (f.size() != g.size())
        throw invalid_input_error("compose: mismatched state-set sizes");
    transformation h(f.size());
    for (std::size_t q = 0; q < f.size(); ++q)
        h[q] = g[static_cast<std::size_t>(f[q])];
    return h;
}

inline bool valid_transformation(const transformation& t) {
    for (int img : t)
        if (img < 0 || static_cast<std::size_t>(img) >= t.size()) return false;
    return !t.empty();
}

enum class transformation_class { identity, reset, permutation, other };

inline const char* to_string(transformation_class c) {
    switch (c) {
        case transformation_class::identity: return "identity";
        case transformation_class::reset: return "reset";
        case transformation_class::permutation: return "non-identity permutation";
        case transformation_class::other: return "other";
    }
    return "other";
}

// Total and mutually exclusive: identity wins over reset on a single state;
// "permutation" is reserved for non-identity bijections.
inline transformation_class classify(const transformation& t) {
    if (!valid_transformation(t))
        throw invalid_input_error("classify: image index out of range");
    bool is_identity = true;
    bool is_constant = true;
    std::vector<bool> hit(t.size(), false);
    bool is_bijection = true;
    for (std::size_t q = 0; q < t.size(); ++q) {
        if (t[q] != static_cast<int>(q)) is_identity = false;
        if (t[q] != t[0]) is_constant = false;
        if (hit[static_cast<std::size_t>(t[q])]) is_bijection = false;
        hit[static_cast<std::size_t>(t[q])] = true;
    }
    if (is_identity) return transformation_class::identity;
    if (is_constant) return transformation_class::reset;
    if (is_bijection) return transformation_class::permutation;
    return transformation_class::other;
}

// Finite transformation semigroup: deduplicated element list closed under
// composition, with the full composition table. The table is quadratic in
// |S|, so generation is capped; closures beyond the cap raise capacity_error.
struct transformation_semigroup {
    std::vector<transformation> elements;
    std::vector<int> generators;     // indices into elements
    std::vector<int> table;          // table[i * size() + j] = index of elements[i] * elements[j]
    int at(int i, int j) const { return table[static_cast<std::size_t>(i) * elements.size() + static_cast<std::size_t>(j)]; }
    int size() const { return static_cast<int>(elements.size()); }
};

inline constexpr int default_semigroup_cap = 4096;

// Closure of the generators under composition, breadth-first, elements
// deduplicated by exact array equality.
inline transformation_semigroup generate_semigroup(
    const std::vector<transformation>& generators, int cap = default_semigroup_cap) {
    if (generators.empty())
        throw invalid_input_error("generate_semigroup: no generators");
    const std::size_t n = generators[0].size();
    for (const auto& g : generators) {
        if (!valid_transformation(g))
            throw invalid_input_error("generate_semigroup: image index out of range");
        if (g.size() != n)
            throw invalid_input_error("generate_semigroup: mismatched state-set sizes");
    }

    transformation_semigroup s;
    std::map<transformation, int> index;
    std::vector<int> gen_indices;
    for (const auto& g : generators) {
        auto [it, fresh] = index.emplace(g, static_cast<int>(s.elements.size()));
        if (fresh) s.elements.push_back(g);
        gen_indices.push_back(it->second);
    }
    s.generators = gen_indices;

    // Right-multiply frontier elements by generators until closed.
    for (std::size_t i = 0; i < s.elements.size(); ++i) {
        for (const auto& g : generators) {
            transformation prod = compose(s.elements[i], g);
            auto [it, fresh] = index.emplace(std::move(prod), static_cast<int>(s.elements.size()));
            if (fresh) {
                if (static_cast<int>(s.elements.size()) >= cap)
                    throw capacity_error("generate_semigroup: closure exceeds cap of " + std::to_string(cap));
                s.elements.push_back(it->first);
            }
        }
    }

    const std::size_t m = s.elements.size();
    s.table.assign(m * m, -1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            s.table[i * m + j] = index.at(compose(s.elements[i], s.elements[j]));
    return s;
}

// Aperiodicity: every element's power chain stabilizes, i.e. for each x some
// k <= |S| has x^k = x^(k+1). Equivalent to having no nontrivial group
// divisor; the equivalence is exercised against the divisor oracle below.
inline bool is_aperiodic(const transformation_semigroup& s) {
    for (int x = 0; x < s.size(); ++x) {
        int p = x;  // x^1
        bool stable = false;
        for (int k = 1; k <= s.size(); ++k) {
            int nxt = s.at(p, x);  // x^(k+1)
            if (nxt == p) {
                stable = true;
                break;
            }
            p = nxt;
        }
        if (!stable) return false;
    }
    return true;
}

// Element whose power chain never stabilizes (cycles with period >= 2), or -1.
inline int aperiodicity_witness(const transformation_semigroup& s) {
    for (int x = 0; x < s.size(); ++x) {
        int p = x;
        bool stable = false;
        for (int k = 1; k <= s.size(); ++k) {
            int nxt = s.at(p, x);
            if (nxt == p) {
                stable = true;
                break;
            }
            p = nxt;
        }
        if (!stable) return x;
    }
    return -1;
}

// Independent group-divisor oracle. A finite semigroup has a nontrivial group
// divisor iff it has a nontrivial subgroup, iff the unit group of some local
// monoid eSe (e idempotent) is nontrivial. This walks a genuinely different
// code path from the power-chain criterion: local monoids plus inverses.
inline bool has_nontrivial_group_divisor(const transformation_semigroup& s, int bound = 64) {
    if (s.size() > bound)
        throw capacity_error("has_nontrivial_group_divisor: |S|=" + std::to_string(s.size()) +
                             " exceeds brute-force bound " + std::to_string(bound));
    for (int e = 0; e < s.size(); ++e) {
        if (s.at(e, e) != e) continue;  // not idempotent
        // Local monoid eSe, with e as its identity.
        std::vector<int> local;
        std::vector<bool> in_local(static_cast<std::size_t>(s.size()), false);
        for (int x = 0; x < s.size(); ++x) {
            int exe = s.at(s.at(e, x), e);
            if (!in_local[static_cast<std::size_t>(exe)]) {
                in_local[static_cast<std::size_t>(exe)] = true;
                local.push_back(exe);
            }
        }
        // Units of eSe form the maximal subgroup at e.
        int units = 0;
        for (int u : local) {
            for (int v : local) {
                if (s.at(u, v) == e && s.at(v, u) == e) {
                    ++units;
                    break;
                }
            }
        }
        if (units >= 2) return true;
    }
    return false;
}

}  // namespace rnc
