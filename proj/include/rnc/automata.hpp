#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rnc/errors.hpp"
#include "rnc/semigroups.hpp"

namespace rnc {

// Finite semiautomaton. Letters and states are strings; transitions are kept
// index-based for speed. When an input function phi is present, delta is
// keyed by the internal alphabet, otherwise by the external one.
struct semiautomaton {
    std::vector<std::string> alphabet;           // external letters, order significant
    std::vector<std::string> internal_alphabet;  // empty when delta is keyed by alphabet
    std::vector<int> input_fn;                   // |alphabet| entries into internal_alphabet; empty iff none
    std::vector<std::string> states;
    std::vector<int> delta;  // [q * n_keys() + key] -> q'

    int n_states() const { return static_cast<int>(states.size()); }
    int n_letters() const { return static_cast<int>(alphabet.size()); }
    int n_keys() const {
        return internal_alphabet.empty() ? n_letters()
                                         : static_cast<int>(internal_alphabet.size());
    }
    int key_of(int letter) const {
        return input_fn.empty() ? letter : input_fn[static_cast<std::size_t>(letter)];
    }
    int step(int q, int letter) const {
        return delta[static_cast<std::size_t>(q) * static_cast<std::size_t>(n_keys()) +
                     static_cast<std::size_t>(key_of(letter))];
    }
    int letter_index(const std::string& l) const {
        for (int i = 0; i < n_letters(); ++i)
            if (alphabet[static_cast<std::size_t>(i)] == l) return i;
        return -1;
    }
    int state_index(const std::string& s) const {
        for (int i = 0; i < n_states(); ++i)
            if (states[static_cast<std::size_t>(i)] == s) return i;
        return -1;
    }
};

inline void validate(const semiautomaton& s) {
    if (s.alphabet.empty()) throw invalid_input_error("semiautomaton: empty alphabet");
    if (s.states.empty()) throw invalid_input_error("semiautomaton: empty state set");
    if (s.internal_alphabet.empty() != s.input_fn.empty())
        throw invalid_input_error("semiautomaton: input function and internal alphabet must come together");
    if (!s.input_fn.empty()) {
        if (s.input_fn.size() != s.alphabet.size())
            throw invalid_input_error("semiautomaton: input function not total");
        std::vector<bool> hit(s.internal_alphabet.size(), false);
        for (int k : s.input_fn) {
            if (k < 0 || static_cast<std::size_t>(k) >= s.internal_alphabet.size())
                throw invalid_input_error("semiautomaton: input function image out of range");
            hit[static_cast<std::size_t>(k)] = true;
        }
        for (bool h : hit)
            if (!h) throw invalid_input_error("semiautomaton: internal alphabet has unused letters");
    }
    if (s.delta.size() != static_cast<std::size_t>(s.n_states()) * static_cast<std::size_t>(s.n_keys()))
        throw invalid_input_error("semiautomaton: transition table not total");
    for (int q : s.delta)
        if (q < 0 || q >= s.n_states())
            throw invalid_input_error("semiautomaton: transition target out of range");
}

namespace detail {

// Shared scaffolding for the two-state primes. `pairs` lists (external
// letter, internal letter name); unused internal letters are stripped.
inline semiautomaton two_state_prime(const std::vector<std::pair<std::string, std::string>>& pairs,
                                     const std::vector<std::string>& internal_names,
                                     const std::vector<int>& delta_by_internal) {
    if (pairs.empty()) throw invalid_input_error("prime constructor: empty input function");
    semiautomaton s;
    s.states = {"low", "high"};
    std::vector<int> raw_fn;
    for (const auto& [letter, internal] : pairs) {
        if (s.letter_index(letter) >= 0)
            throw invalid_input_error("prime constructor: duplicate letter " + letter);
        auto it = std::find(internal_names.begin(), internal_names.end(), internal);
        if (it == internal_names.end())
            throw invalid_input_error("prime constructor: input function maps " + letter +
                                      " to unknown internal letter " + internal);
        s.alphabet.push_back(letter);
        raw_fn.push_back(static_cast<int>(it - internal_names.begin()));
    }
    // Strip unused internal letters, preserving canonical order.
    std::vector<int> remap(internal_names.size(), -1);
    for (std::size_t k = 0; k < internal_names.size(); ++k) {
        if (std::find(raw_fn.begin(), raw_fn.end(), static_cast<int>(k)) == raw_fn.end()) continue;
        remap[k] = static_cast<int>(s.internal_alphabet.size());
        s.internal_alphabet.push_back(internal_names[k]);
    }
    for (int k : raw_fn) s.input_fn.push_back(remap[static_cast<std::size_t>(k)]);
    for (int q = 0; q < 2; ++q)
        for (std::size_t k = 0; k < internal_names.size(); ++k)
            if (remap[k] >= 0)
                s.delta.push_back(delta_by_internal[static_cast<std::size_t>(q) * internal_names.size() + k]);
    validate(s);
    return s;
}

}  // namespace detail

// Core flip-flop: states {low, high}; set forces high, reset forces low,
// read preserves.
inline semiautomaton flipflop_semiautomaton(
    const std::vector<std::pair<std::string, std::string>>& input_fn) {
    return detail::two_state_prime(input_fn, {"set", "reset", "read"},
                                   {1, 0, 0,    // from low: set, reset, read
                                    1, 0, 1});  // from high
}

inline semiautomaton flipflop_semiautomaton() {
    return flipflop_semiautomaton({{"set", "set"}, {"reset", "reset"}, {"read", "read"}});
}

// Core toggle: as the flip-flop, except toggle swaps the two states.
inline semiautomaton toggle_semiautomaton(
    const std::vector<std::pair<std::string, std::string>>& input_fn) {
    return detail::two_state_prime(input_fn, {"set", "reset", "toggle"},
                                   {1, 0, 1,    // from low
                                    1, 0, 0});  // from high
}

inline semiautomaton toggle_semiautomaton() {
    return toggle_semiautomaton({{"set", "set"}, {"reset", "reset"}, {"toggle", "toggle"}});
}

// Group-table validation; the error names the failed axiom.
inline void validate_group_table(const std::vector<std::vector<int>>& cayley) {
    const int n = static_cast<int>(cayley.size());
    if (n == 0) throw invalid_input_error("group table: empty");
    for (const auto& row : cayley) {
        if (static_cast<int>(row.size()) != n)
            throw invalid_input_error("group table: not square");
        for (int v : row)
            if (v < 0 || v >= n) throw invalid_input_error("group table: entry out of range");
    }
    int e = -1;
    for (int cand = 0; cand < n; ++cand) {
        bool ok = true;
        for (int x = 0; x < n && ok; ++x)
            ok = cayley[static_cast<std::size_t>(cand)][static_cast<std::size_t>(x)] == x &&
                 cayley[static_cast<std::size_t>(x)][static_cast<std::size_t>(cand)] == x;
        if (ok) {
            e = cand;
            break;
        }
    }
    if (e < 0) throw invalid_input_error("group table: no identity element");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                int ab_c = cayley[static_cast<std::size_t>(cayley[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])][static_cast<std::size_t>(c)];
                int a_bc = cayley[static_cast<std::size_t>(a)][static_cast<std::size_t>(cayley[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)])];
                if (ab_c != a_bc) throw invalid_input_error("group table: not associative");
            }
    for (int a = 0; a < n; ++a) {
        bool has_inverse = false;
        for (int b = 0; b < n && !has_inverse; ++b)
            has_inverse = cayley[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] == e &&
                          cayley[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] == e;
        if (!has_inverse) throw invalid_input_error("group table: element without inverse");
    }
}

// Core grouplike semiautomaton: states are group elements (named by index),
// input h sends state g to g*h (right multiplication).
inline semiautomaton group_semiautomaton(
    const std::vector<std::vector<int>>& cayley,
    const std::vector<std::pair<std::string, std::string>>& input_fn) {
    validate_group_table(cayley);
    const int n = static_cast<int>(cayley.size());
    semiautomaton s;
    for (int g = 0; g < n; ++g) s.states.push_back(std::to_string(g));
    std::vector<int> raw_fn;
    for (const auto& [letter, element] : input_fn) {
        if (s.letter_index(letter) >= 0)
            throw invalid_input_error("group semiautomaton: duplicate letter " + letter);
        int h = -1;
        for (int g = 0; g < n; ++g)
            if (std::to_string(g) == element) h = g;
        if (h < 0)
            throw invalid_input_error("group semiautomaton: input function maps " + letter +
                                      " to unknown element " + element);
        s.alphabet.push_back(letter);
        raw_fn.push_back(h);
    }
    if (s.alphabet.empty()) throw invalid_input_error("group semiautomaton: empty input function");
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    for (int h = 0; h < n; ++h) {
        if (std::find(raw_fn.begin(), raw_fn.end(), h) == raw_fn.end()) continue;
        remap[static_cast<std::size_t>(h)] = static_cast<int>(s.internal_alphabet.size());
        s.internal_alphabet.push_back(std::to_string(h));
    }
    for (int h : raw_fn) s.input_fn.push_back(remap[static_cast<std::size_t>(h)]);
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h)
            if (remap[static_cast<std::size_t>(h)] >= 0)
                s.delta.push_back(cayley[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)]);
    validate(s);
    return s;
}

// Convenience: the full grouplike semiautomaton with identity input function.
inline semiautomaton group_semiautomaton(const std::vector<std::vector<int>>& cayley) {
    std::vector<std::pair<std::string, std::string>> id;
    for (std::size_t g = 0; g < cayley.size(); ++g)
        id.emplace_back(std::to_string(g), std::to_string(g));
    return group_semiautomaton(cayley, id);
}

inline std::vector<std::vector<int>> cyclic_group_table(int n) {
    std::vector<std::vector<int>> t(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = (a + b) % n;
    return t;
}

// ---------------------------------------------------------------------------
// Automaton: semiautomaton + initial state + output table. Outputs read the
// pre-transition state: y_t = theta(x_{t-1}, u_t).

struct automaton {
    semiautomaton sa;
    int initial = 0;
    std::vector<std::string> output_alphabet;
    std::vector<int> outputs;  // [q * |alphabet| + letter] -> output letter index

    int output(int q, int letter) const {
        return outputs[static_cast<std::size_t>(q) * static_cast<std::size_t>(sa.n_letters()) +
                       static_cast<std::size_t>(letter)];
    }
};

inline void validate(const automaton& a) {
    validate(a.sa);
    if (a.initial < 0 || a.initial >= a.sa.n_states())
        throw invalid_input_error("automaton: initial state out of range");
    if (a.output_alphabet.empty()) throw invalid_input_error("automaton: empty output alphabet");
    if (a.outputs.size() != static_cast<std::size_t>(a.sa.n_states()) * static_cast<std::size_t>(a.sa.n_letters()))
        throw invalid_input_error("automaton: output table not total");
    for (int y : a.outputs)
        if (y < 0 || static_cast<std::size_t>(y) >= a.output_alphabet.size())
            throw invalid_input_error("automaton: output out of range");
}

inline std::vector<std::string> run_automaton(const automaton& a,
                                              const std::vector<std::string>& input) {
    std::vector<std::string> out;
    out.reserve(input.size());
    int q = a.initial;
    for (std::size_t t = 0; t < input.size(); ++t) {
        int letter = a.sa.letter_index(input[t]);
        if (letter < 0)
            throw invalid_input_error("run_automaton: unknown letter '" + input[t] +
                                      "' at position " + std::to_string(t));
        out.push_back(a.output_alphabet[static_cast<std::size_t>(a.output(q, letter))]);
        q = a.sa.step(q, letter);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Characteristic semigroup and group-freeness.

inline std::vector<transformation> letter_transformations(const semiautomaton& s) {
    std::vector<transformation> gens;
    for (int letter = 0; letter < s.n_letters(); ++letter) {
        transformation t(static_cast<std::size_t>(s.n_states()));
        for (int q = 0; q < s.n_states(); ++q) t[static_cast<std::size_t>(q)] = s.step(q, letter);
        gens.push_back(std::move(t));
    }
    return gens;
}

inline transformation_semigroup characteristic_semigroup(const semiautomaton& s,
                                                         int cap = default_semigroup_cap) {
    return generate_semigroup(letter_transformations(s), cap);
}

namespace detail {

struct transformation_hash {
    std::size_t operator()(const transformation& t) const {
        std::size_t h = 1469598103934665603ull;
        for (int v : t) {
            h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

// An element x is aperiodic iff some power is idempotent-like (x^k = x^(k+1)),
// iff every cycle of its functional graph is a fixed point. O(n) per element.
inline bool element_aperiodic(const transformation& t) {
    const int n = static_cast<int>(t.size());
    std::vector<int> stamp(static_cast<std::size_t>(n), -1);
    for (int start = 0; start < n; ++start) {
        if (stamp[static_cast<std::size_t>(start)] >= 0) continue;
        int q = start;
        std::vector<int> path;
        while (stamp[static_cast<std::size_t>(q)] == -1) {
            stamp[static_cast<std::size_t>(q)] = start;
            path.push_back(q);
            q = t[static_cast<std::size_t>(q)];
        }
        if (stamp[static_cast<std::size_t>(q)] == start && t[static_cast<std::size_t>(q)] != q) {
            // Walked into a fresh cycle longer than a self-loop.
            return false;
        }
    }
    return true;
}

}  // namespace detail

// Group-freeness: aperiodicity of the characteristic semigroup. Computed
// without the quadratic composition table so that large flattened products
// stay in reach; the element budget caps closure memory (elements * states).
inline bool is_group_free(const semiautomaton& s, std::size_t budget_ints = 128'000'000) {
    const auto gens = letter_transformations(s);
    const std::size_t n = static_cast<std::size_t>(s.n_states());
    const std::size_t max_elements = std::max<std::size_t>(budget_ints / std::max<std::size_t>(n, 1), 4);

    std::unordered_map<transformation, int, detail::transformation_hash> index;
    std::vector<const transformation*> elements;
    auto add = [&](transformation t) -> bool {
        auto [it, fresh] = index.emplace(std::move(t), static_cast<int>(index.size()));
        if (fresh) {
            if (index.size() > max_elements)
                throw capacity_error("is_group_free: characteristic semigroup exceeds element budget");
            elements.push_back(&it->first);
        }
        return fresh;
    };
    for (const auto& g : gens) add(g);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (!detail::element_aperiodic(*elements[i])) return false;
        for (const auto& g : gens) add(compose(*elements[i], g));
    }
    return true;
}

// ---------------------------------------------------------------------------
// Cascade and network specifications and their flattenings.

enum class prime_kind { flipflop, toggle, group };

inline const char* to_string(prime_kind k) {
    switch (k) {
        case prime_kind::flipflop: return "flipflop";
        case prime_kind::toggle: return "toggle";
        case prime_kind::group: return "group";
    }
    return "flipflop";
}

// Canonical internal letter order for the two-state primes.
inline const std::vector<std::string>& internal_letters(prime_kind k, int group_order = 0) {
    static const std::vector<std::string> ff{"set", "reset", "read"};
    static const std::vector<std::string> tog{"set", "reset", "toggle"};
    static std::map<int, std::vector<std::string>> group_cache;
    switch (k) {
        case prime_kind::flipflop: return ff;
        case prime_kind::toggle: return tog;
        case prime_kind::group: {
            auto& names = group_cache[group_order];
            if (names.empty())
                for (int g = 0; g < group_order; ++g) names.push_back(std::to_string(g));
            return names;
        }
    }
    return ff;
}

// One cascade/network component: a prime kind plus a symbolic input function
// from (external letter, other components' states) to its internal alphabet.
// The function is the in-memory representation; exhaustive tables are
// materialized only for serialization and bounded by a capacity cap.
struct cascade_component {
    prime_kind kind = prime_kind::flipflop;
    std::vector<std::vector<int>> cayley;  // group components only
    int initial = 0;
    std::function<int(int letter, const std::vector<int>& states)> input_fn;

    int n_states() const {
        return kind == prime_kind::group ? static_cast<int>(cayley.size()) : 2;
    }
    int n_internal() const {
        return kind == prime_kind::group ? static_cast<int>(cayley.size()) : 3;
    }
    int step(int q, int internal) const {
        switch (kind) {
            case prime_kind::flipflop:
                return internal == 0 ? 1 : internal == 1 ? 0 : q;
            case prime_kind::toggle:
                return internal == 0 ? 1 : internal == 1 ? 0 : 1 - q;
            case prime_kind::group:
                return cayley[static_cast<std::size_t>(q)][static_cast<std::size_t>(internal)];
        }
        return q;
    }
    const std::string& state_name(int q) const {
        static const std::vector<std::string> two{"low", "high"};
        return kind == prime_kind::group ? internal_letters(prime_kind::group, n_states())[static_cast<std::size_t>(q)]
                                         : two[static_cast<std::size_t>(q)];
    }
};

// Ordered component list; component i's input function may read only the
// states of components j < i (enforced semantically by construction and by
// the serialization format, which only covers those coordinates).
struct cascade_spec {
    std::vector<std::string> alphabet;
    std::vector<cascade_component> components;
};

// As cascade_spec, but component i's input function may read all j != i.
struct network_spec {
    std::vector<std::string> alphabet;
    std::vector<cascade_component> components;
};

namespace detail {

inline void validate_components(const std::vector<std::string>& alphabet,
                                const std::vector<cascade_component>& components) {
    if (alphabet.empty()) throw invalid_input_error("composition: empty alphabet");
    if (components.empty()) throw invalid_input_error("composition: empty component list");
    for (const auto& c : components) {
        if (c.kind == prime_kind::group) validate_group_table(c.cayley);
        if (c.kind == prime_kind::group && c.n_states() > 255)
            throw invalid_input_error("composition: group order beyond 255 unsupported");
        if (!c.input_fn) throw invalid_input_error("composition: component without input function");
        if (c.initial < 0 || c.initial >= c.n_states())
            throw invalid_input_error("composition: component initial state out of range");
    }
}

// Product flattening shared by cascades and networks; the visibility
// discipline lives in the input functions themselves.
inline semiautomaton flatten(const std::vector<std::string>& alphabet,
                             const std::vector<cascade_component>& components,
                             std::size_t cap_entries) {
    validate_components(alphabet, components);
    const std::size_t d = components.size();
    std::size_t product = 1;
    for (const auto& c : components) {
        product *= static_cast<std::size_t>(c.n_states());
        if (product > 1u << 26)
            throw capacity_error("composition: product state space too large to flatten");
    }
    const std::size_t entries = product * alphabet.size();
    if (entries > cap_entries)
        throw capacity_error("composition: flattened table of " + std::to_string(entries) +
                             " entries exceeds cap " + std::to_string(cap_entries));

    semiautomaton s;
    s.alphabet = alphabet;
    s.states.resize(product);
    s.delta.resize(entries);

    std::vector<int> digits(d, 0);   // odometer, component 0 least significant
    std::vector<int> next(d, 0);
    std::vector<std::size_t> stride(d, 1);
    for (std::size_t i = 1; i < d; ++i)
        stride[i] = stride[i - 1] * static_cast<std::size_t>(components[i - 1].n_states());

    const int n_letters = static_cast<int>(alphabet.size());
    for (std::size_t q = 0; q < product; ++q) {
        std::string name = components[0].state_name(digits[0]);
        for (std::size_t i = 1; i < d; ++i) {
            name += '|';
            name += components[i].state_name(digits[i]);
        }
        s.states[q] = std::move(name);
        for (int letter = 0; letter < n_letters; ++letter) {
            std::size_t target = 0;
            for (std::size_t i = 0; i < d; ++i) {
                const int internal = components[i].input_fn(letter, digits);
                if (internal < 0 || internal >= components[i].n_internal())
                    throw invalid_input_error("composition: input function value out of range");
                next[i] = components[i].step(digits[i], internal);
                target += static_cast<std::size_t>(next[i]) * stride[i];
            }
            s.delta[q * static_cast<std::size_t>(n_letters) + static_cast<std::size_t>(letter)] =
                static_cast<int>(target);
        }
        for (std::size_t i = 0; i < d; ++i) {  // odometer increment
            if (++digits[i] < components[i].n_states()) break;
            digits[i] = 0;
        }
    }
    return s;
}

}  // namespace detail

inline semiautomaton compose_cascade(const cascade_spec& spec,
                                     std::size_t cap_entries = 128'000'000) {
    return detail::flatten(spec.alphabet, spec.components, cap_entries);
}

inline semiautomaton compose_network(const network_spec& spec,
                                     std::size_t cap_entries = 128'000'000) {
    return detail::flatten(spec.alphabet, spec.components, cap_entries);
}

// Component-wise synchronous step: every input function reads the time-(t-1)
// state vector. This is the semantics the flattening must agree with.
inline void step_components(const std::vector<cascade_component>& components,
                            std::vector<int>& states, int letter) {
    static thread_local std::vector<int> scratch;
    scratch.resize(states.size());
    for (std::size_t i = 0; i < components.size(); ++i) {
        const int internal = components[i].input_fn(letter, states);
        if (internal < 0 || internal >= components[i].n_internal())
            throw invalid_input_error("composition: input function value out of range");
        scratch[i] = components[i].step(states[i], internal);
    }
    states = scratch;
}

inline std::vector<int> component_initials(const std::vector<cascade_component>& components) {
    std::vector<int> init;
    init.reserve(components.size());
    for (const auto& c : components) init.push_back(c.initial);
    return init;
}

// Index of a component state vector inside the flattened product.
inline std::size_t product_index(const std::vector<cascade_component>& components,
                                 const std::vector<int>& states) {
    std::size_t idx = 0, stride = 1;
    for (std::size_t i = 0; i < components.size(); ++i) {
        idx += static_cast<std::size_t>(states[i]) * stride;
        stride *= static_cast<std::size_t>(components[i].n_states());
    }
    return idx;
}

// ---------------------------------------------------------------------------
// Canonicalization: reachable states only, then Moore refinement down to the
// coarsest output-respecting partition. The result computes the same
// string-to-output function; class representatives keep their original names.

inline automaton canonicalize(const automaton& a) {
    validate(a);
    const int n_letters = a.sa.n_letters();

    // Reachability, BFS in letter order.
    std::vector<int> order;
    std::vector<int> seen(static_cast<std::size_t>(a.sa.n_states()), -1);
    order.push_back(a.initial);
    seen[static_cast<std::size_t>(a.initial)] = 0;
    for (std::size_t head = 0; head < order.size(); ++head)
        for (int letter = 0; letter < n_letters; ++letter) {
            int q = a.sa.step(order[head], letter);
            if (seen[static_cast<std::size_t>(q)] < 0) {
                seen[static_cast<std::size_t>(q)] = static_cast<int>(order.size());
                order.push_back(q);
            }
        }

    // Moore refinement over reachable states; initial split by output rows.
    const int m = static_cast<int>(order.size());
    std::vector<int> block(static_cast<std::size_t>(m), 0);
    {
        std::map<std::vector<int>, int> by_row;
        for (int i = 0; i < m; ++i) {
            std::vector<int> row;
            for (int letter = 0; letter < n_letters; ++letter)
                row.push_back(a.output(order[static_cast<std::size_t>(i)], letter));
            auto [it, fresh] = by_row.emplace(std::move(row), static_cast<int>(by_row.size()));
            (void)fresh;
            block[static_cast<std::size_t>(i)] = it->second;
        }
    }
    for (;;) {
        std::map<std::vector<int>, int> by_sig;
        std::vector<int> next_block(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            std::vector<int> sig{block[static_cast<std::size_t>(i)]};
            for (int letter = 0; letter < n_letters; ++letter) {
                int q = a.sa.step(order[static_cast<std::size_t>(i)], letter);
                sig.push_back(block[static_cast<std::size_t>(seen[static_cast<std::size_t>(q)])]);
            }
            auto [it, fresh] = by_sig.emplace(std::move(sig), static_cast<int>(by_sig.size()));
            (void)fresh;
            next_block[static_cast<std::size_t>(i)] = it->second;
        }
        bool stable = static_cast<int>(by_sig.size()) ==
                      1 + *std::max_element(block.begin(), block.end());
        block = std::move(next_block);
        if (stable) break;
    }

    // Renumber blocks in BFS discovery order for a canonical layout.
    const int n_blocks = 1 + *std::max_element(block.begin(), block.end());
    std::vector<int> canon(static_cast<std::size_t>(n_blocks), -1);
    std::vector<int> rep;  // representative reachable-index per canonical block
    canon[static_cast<std::size_t>(block[0])] = 0;
    rep.push_back(0);  // reachable index of the initial state
    for (std::size_t head = 0; head < rep.size(); ++head)
        for (int letter = 0; letter < n_letters; ++letter) {
            int q = a.sa.step(order[static_cast<std::size_t>(rep[head])], letter);
            int b = block[static_cast<std::size_t>(seen[static_cast<std::size_t>(q)])];
            if (canon[static_cast<std::size_t>(b)] < 0) {
                canon[static_cast<std::size_t>(b)] = static_cast<int>(rep.size());
                rep.push_back(seen[static_cast<std::size_t>(q)]);
            }
        }

    automaton r;
    r.sa.alphabet = a.sa.alphabet;
    r.output_alphabet = a.output_alphabet;
    r.initial = canon[static_cast<std::size_t>(block[0])];
    const int k = static_cast<int>(rep.size());
    r.sa.states.resize(static_cast<std::size_t>(k));
    r.sa.delta.resize(static_cast<std::size_t>(k) * static_cast<std::size_t>(n_letters));
    r.outputs.resize(static_cast<std::size_t>(k) * static_cast<std::size_t>(n_letters));
    for (int b = 0; b < k; ++b) {
        const int src = order[static_cast<std::size_t>(rep[static_cast<std::size_t>(b)])];
        r.sa.states[static_cast<std::size_t>(b)] = a.sa.states[static_cast<std::size_t>(src)];
        for (int letter = 0; letter < n_letters; ++letter) {
            int q = a.sa.step(src, letter);
            r.sa.delta[static_cast<std::size_t>(b) * static_cast<std::size_t>(n_letters) + static_cast<std::size_t>(letter)] =
                canon[static_cast<std::size_t>(block[static_cast<std::size_t>(seen[static_cast<std::size_t>(q)])])];
            r.outputs[static_cast<std::size_t>(b) * static_cast<std::size_t>(n_letters) + static_cast<std::size_t>(letter)] =
                a.output(src, letter);
        }
    }
    validate(r);
    return r;
}

}  // namespace rnc
