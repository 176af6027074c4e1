#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "rnc/automata.hpp"
#include "rnc/cascade_compiler.hpp"
#include "rnc/errors.hpp"
#include "rnc/neurons.hpp"
#include "rnc/patterns.hpp"

namespace rnc {

using json = nlohmann::json;

namespace detail {

// Table keys are tuples joined with '|'. Letters and prime state names must
// stay '|'-free so keys parse unambiguously; product state names may not.
inline void require_plain(const std::string& name, const char* what) {
    if (name.empty() || name.find('|') != std::string::npos)
        throw invalid_input_error(std::string(what) + " '" + name +
                                  "' must be nonempty and '|'-free");
}

inline std::pair<std::string, std::string> rsplit_key(const std::string& key) {
    const std::size_t bar = key.rfind('|');
    if (bar == std::string::npos)
        throw invalid_input_error("malformed table key '" + key + "'");
    return {key.substr(0, bar), key.substr(bar + 1)};
}

inline const json& field(const json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end())
        throw invalid_input_error(std::string("missing field '") + name + "'");
    return *it;
}

// Caps for exhaustive table materialization; beyond them the document format
// is the wrong tool and the caller should keep the object in memory.
constexpr std::size_t max_table_entries = 1u << 18;

}  // namespace detail

// ---------------------------------------------------------------------------
// Intervals and bounds: finite ends are numbers, infinite ends the strings
// "-inf" / "inf".

inline json bound_to_json(double v) {
    if (std::isnan(v)) throw invalid_input_error("cannot serialize a NaN bound");
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double bound_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw invalid_input_error("bound must be a number, \"inf\", or \"-inf\"");
}

inline json interval_to_json(const interval& iv) {
    return {{"lo", bound_to_json(iv.lo)}, {"hi", bound_to_json(iv.hi)}};
}

inline interval interval_from_json(const json& j) {
    interval iv{bound_from_json(detail::field(j, "lo")), bound_from_json(detail::field(j, "hi"))};
    if (iv.lo > iv.hi) throw invalid_input_error("interval with lo > hi");
    return iv;
}

// ---------------------------------------------------------------------------
// Semiautomata and automata.

inline json semiautomaton_to_json(const semiautomaton& s) {
    validate(s);
    json j;
    for (const auto& l : s.alphabet) detail::require_plain(l, "letter");
    j["alphabet"] = s.alphabet;
    j["states"] = s.states;
    const bool internal = !s.internal_alphabet.empty();
    if (internal) {
        for (const auto& l : s.internal_alphabet) detail::require_plain(l, "internal letter");
        j["internal_alphabet"] = s.internal_alphabet;
        json fn = json::object();
        for (int l = 0; l < s.n_letters(); ++l)
            fn[s.alphabet[static_cast<std::size_t>(l)]] =
                s.internal_alphabet[static_cast<std::size_t>(s.key_of(l))];
        j["input_fn"] = fn;
    }
    const auto& keys = internal ? s.internal_alphabet : s.alphabet;
    json tr = json::object();
    for (int q = 0; q < s.n_states(); ++q)
        for (std::size_t k = 0; k < keys.size(); ++k)
            tr[s.states[static_cast<std::size_t>(q)] + "|" + keys[k]] =
                s.states[static_cast<std::size_t>(
                    s.delta[static_cast<std::size_t>(q) * keys.size() + k])];
    j["transitions"] = tr;
    return j;
}

inline semiautomaton semiautomaton_from_json(const json& j) {
    semiautomaton s;
    s.alphabet = detail::field(j, "alphabet").get<std::vector<std::string>>();
    s.states = detail::field(j, "states").get<std::vector<std::string>>();
    if (j.contains("internal_alphabet") != j.contains("input_fn"))
        throw invalid_input_error("internal_alphabet and input_fn must appear together");
    if (j.contains("internal_alphabet")) {
        s.internal_alphabet = j["internal_alphabet"].get<std::vector<std::string>>();
        const json& fn = j["input_fn"];
        for (const auto& letter : s.alphabet) {
            if (!fn.contains(letter))
                throw invalid_input_error("input_fn missing letter '" + letter + "'");
            const std::string k = fn[letter].get<std::string>();
            int ki = -1;
            for (std::size_t i = 0; i < s.internal_alphabet.size(); ++i)
                if (s.internal_alphabet[i] == k) ki = static_cast<int>(i);
            if (ki < 0) throw invalid_input_error("input_fn maps to unknown key '" + k + "'");
            s.input_fn.push_back(ki);
        }
    }
    const auto& keys = s.internal_alphabet.empty() ? s.alphabet : s.internal_alphabet;
    const json& tr = detail::field(j, "transitions");
    s.delta.assign(s.states.size() * keys.size(), -1);
    for (std::size_t q = 0; q < s.states.size(); ++q)
        for (std::size_t k = 0; k < keys.size(); ++k) {
            const std::string key = s.states[q] + "|" + keys[k];
            if (!tr.contains(key))
                throw invalid_input_error("transitions missing key '" + key + "'");
            const int target = s.state_index(tr[key].get<std::string>());
            if (target < 0)
                throw invalid_input_error("transition '" + key + "' targets unknown state");
            s.delta[q * keys.size() + k] = target;
        }
    validate(s);
    return s;
}

inline json automaton_to_json(const automaton& a) {
    validate(a);
    json j = semiautomaton_to_json(a.sa);
    j["initial"] = a.sa.states[static_cast<std::size_t>(a.initial)];
    j["output_alphabet"] = a.output_alphabet;
    json out = json::object();
    for (int q = 0; q < a.sa.n_states(); ++q)
        for (int l = 0; l < a.sa.n_letters(); ++l)
            out[a.sa.states[static_cast<std::size_t>(q)] + "|" +
                a.sa.alphabet[static_cast<std::size_t>(l)]] =
                a.output_alphabet[static_cast<std::size_t>(a.output(q, l))];
    j["outputs"] = out;
    return j;
}

inline automaton automaton_from_json(const json& j) {
    automaton a;
    a.sa = semiautomaton_from_json(j);
    a.initial = a.sa.state_index(detail::field(j, "initial").get<std::string>());
    if (a.initial < 0) throw invalid_input_error("initial state not in state set");
    a.output_alphabet = detail::field(j, "output_alphabet").get<std::vector<std::string>>();
    const json& out = detail::field(j, "outputs");
    for (int q = 0; q < a.sa.n_states(); ++q)
        for (int l = 0; l < a.sa.n_letters(); ++l) {
            const std::string key = a.sa.states[static_cast<std::size_t>(q)] + "|" +
                                    a.sa.alphabet[static_cast<std::size_t>(l)];
            if (!out.contains(key))
                throw invalid_input_error("outputs missing key '" + key + "'");
            const std::string y = out[key].get<std::string>();
            int yi = -1;
            for (std::size_t k = 0; k < a.output_alphabet.size(); ++k)
                if (a.output_alphabet[k] == y) yi = static_cast<int>(k);
            if (yi < 0) throw invalid_input_error("output '" + y + "' not in output alphabet");
            a.outputs.push_back(yi);
        }
    validate(a);
    return a;
}

// ---------------------------------------------------------------------------
// Cascade and network specs. Input functions are materialized as exhaustive
// tables over each component's visible coordinates: strictly earlier
// components for cascades, all other components for networks. Keys are the
// external letter followed by the visible state names, joined with '|'.

namespace detail {

inline std::vector<int> visible_of(std::size_t i, std::size_t d, bool network) {
    std::vector<int> vis;
    for (std::size_t j = 0; j < d; ++j)
        if (network ? j != i : j < i) vis.push_back(static_cast<int>(j));
    return vis;
}

inline json spec_to_json(const std::vector<std::string>& alphabet,
                         const std::vector<cascade_component>& components, bool network) {
    validate_components(alphabet, components);
    for (const auto& l : alphabet) require_plain(l, "letter");
    json j;
    j["type"] = network ? "network" : "cascade";
    j["alphabet"] = alphabet;
    json comps = json::array();
    for (std::size_t i = 0; i < components.size(); ++i) {
        const cascade_component& c = components[i];
        json cj;
        cj["kind"] = c.kind == prime_kind::flipflop ? "flipflop"
                     : c.kind == prime_kind::toggle ? "toggle"
                                                    : "group";
        if (c.kind == prime_kind::group) cj["cayley"] = c.cayley;
        cj["initial"] = c.state_name(c.initial);

        const auto vis = visible_of(i, components.size(), network);
        std::size_t entries = alphabet.size();
        for (int v : vis) {
            entries *= static_cast<std::size_t>(components[static_cast<std::size_t>(v)].n_states());
            if (entries > max_table_entries)
                throw capacity_error("component " + std::to_string(i) +
                                     ": input table too large to materialize");
        }
        const auto& internal =
            internal_letters(c.kind, c.kind == prime_kind::group ? c.n_states() : 0);
        json fn = json::object();
        std::vector<int> digits(vis.size(), 0);
        std::vector<int> full(components.size(), 0);
        for (std::size_t count = 0;; ++count) {
            for (std::size_t v = 0; v < vis.size(); ++v)
                full[static_cast<std::size_t>(vis[v])] = digits[v];
            for (std::size_t l = 0; l < alphabet.size(); ++l) {
                std::string key = alphabet[l];
                for (std::size_t v = 0; v < vis.size(); ++v) {
                    key += '|';
                    key += components[static_cast<std::size_t>(vis[v])].state_name(digits[v]);
                }
                const int k = c.input_fn(static_cast<int>(l), full);
                if (k < 0 || k >= c.n_internal())
                    throw invalid_input_error("component " + std::to_string(i) +
                                              ": input function value out of range");
                fn[key] = internal[static_cast<std::size_t>(k)];
            }
            std::size_t v = 0;
            for (; v < vis.size(); ++v) {
                if (++digits[v] < components[static_cast<std::size_t>(vis[v])].n_states()) break;
                digits[v] = 0;
            }
            if (v == vis.size()) break;
        }
        cj["input_fn"] = fn;
        comps.push_back(std::move(cj));
    }
    j["components"] = comps;
    return j;
}

inline std::vector<cascade_component> components_from_json(
    const json& j, std::vector<std::string>& alphabet, bool network) {
    alphabet = field(j, "alphabet").get<std::vector<std::string>>();
    const json& comps = field(j, "components");
    if (!comps.is_array() || comps.empty())
        throw invalid_input_error("components must be a nonempty array");

    // First pass: kinds and state counts, needed to decode the tables.
    std::vector<cascade_component> out;
    for (const json& cj : comps) {
        cascade_component c;
        const std::string kind = field(cj, "kind").get<std::string>();
        if (kind == "flipflop") c.kind = prime_kind::flipflop;
        else if (kind == "toggle") c.kind = prime_kind::toggle;
        else if (kind == "group") c.kind = prime_kind::group;
        else throw invalid_input_error("unknown component kind '" + kind + "'");
        if (c.kind == prime_kind::group) {
            c.cayley = field(cj, "cayley").get<std::vector<std::vector<int>>>();
            validate_group_table(c.cayley);
        }
        const std::string init = field(cj, "initial").get<std::string>();
        c.initial = -1;
        for (int q = 0; q < c.n_states(); ++q)
            if (c.state_name(q) == init) c.initial = q;
        if (c.initial < 0) throw invalid_input_error("unknown initial state '" + init + "'");
        out.push_back(std::move(c));
    }

    for (std::size_t i = 0; i < out.size(); ++i) {
        cascade_component& c = out[i];
        const auto vis = visible_of(i, out.size(), network);
        std::vector<std::vector<std::string>> vis_names;
        for (int v : vis) {
            std::vector<std::string> names;
            for (int q = 0; q < out[static_cast<std::size_t>(v)].n_states(); ++q)
                names.push_back(out[static_cast<std::size_t>(v)].state_name(q));
            vis_names.push_back(std::move(names));
        }
        const auto internal = internal_letters(c.kind, c.kind == prime_kind::group ? c.n_states() : 0);
        std::unordered_map<std::string, int> table;
        for (const auto& [key, val] : field(comps[i], "input_fn").items()) {
            const std::string name = val.get<std::string>();
            int k = -1;
            for (std::size_t m = 0; m < internal.size(); ++m)
                if (internal[m] == name) k = static_cast<int>(m);
            if (k < 0)
                throw invalid_input_error("component " + std::to_string(i) +
                                          ": unknown internal letter '" + name + "'");
            table[key] = k;
        }
        const std::vector<std::string> letters = alphabet;
        const std::vector<int> vis_copy = vis;
        const std::size_t comp_index = i;
        c.input_fn = [table = std::move(table), letters, vis_copy, vis_names, comp_index](
                         int letter, const std::vector<int>& states) -> int {
            std::string key = letters[static_cast<std::size_t>(letter)];
            for (std::size_t v = 0; v < vis_copy.size(); ++v) {
                key += '|';
                key += vis_names[v][static_cast<std::size_t>(
                    states[static_cast<std::size_t>(vis_copy[v])])];
            }
            const auto it = table.find(key);
            if (it == table.end())
                throw invalid_input_error("component " + std::to_string(comp_index) +
                                          ": input table has no entry for '" + key + "'");
            return it->second;
        };
    }
    return out;
}

}  // namespace detail

inline std::string spec_type(const json& j) {
    return detail::field(j, "type").get<std::string>();
}

inline json cascade_to_json(const cascade_spec& spec) {
    return detail::spec_to_json(spec.alphabet, spec.components, false);
}

inline json network_to_json(const network_spec& spec) {
    return detail::spec_to_json(spec.alphabet, spec.components, true);
}

inline cascade_spec cascade_from_json(const json& j) {
    if (spec_type(j) != "cascade") throw invalid_input_error("document is not a cascade");
    cascade_spec spec;
    spec.components = detail::components_from_json(j, spec.alphabet, false);
    detail::validate_components(spec.alphabet, spec.components);
    return spec;
}

inline network_spec network_from_json(const json& j) {
    if (spec_type(j) != "network") throw invalid_input_error("document is not a network");
    network_spec spec;
    spec.components = detail::components_from_json(j, spec.alphabet, true);
    detail::validate_components(spec.alphabet, spec.components);
    return spec;
}

// A pattern bundle document is a cascade document plus its symbolic output
// function, materialized over component state names and letters.
inline json bundle_to_json(const pattern_bundle& b) {
    json j = cascade_to_json(b.spec);
    j["output_alphabet"] = b.output_alphabet;
    std::size_t entries = b.spec.alphabet.size();
    for (const auto& c : b.spec.components) {
        entries *= static_cast<std::size_t>(c.n_states());
        if (entries > detail::max_table_entries)
            throw capacity_error("bundle output table too large to materialize");
    }
    json out = json::object();
    std::vector<int> digits(b.spec.components.size(), 0);
    for (;;) {
        std::vector<std::string> names;
        std::string prefix;
        for (std::size_t i = 0; i < b.spec.components.size(); ++i) {
            names.push_back(b.spec.components[i].state_name(digits[i]));
            if (i) prefix += '|';
            prefix += names.back();
        }
        for (const auto& letter : b.spec.alphabet)
            out[prefix + "|" + letter] = b.output_table(names, letter);
        std::size_t i = 0;
        for (; i < b.spec.components.size(); ++i) {
            if (++digits[i] < b.spec.components[i].n_states()) break;
            digits[i] = 0;
        }
        if (i == b.spec.components.size()) break;
    }
    j["output_table"] = out;
    return j;
}

// Output table of a bundle document as a callable; `output_alphabet` is
// filled from the document.
inline output_table_fn output_table_from_json(const json& j,
                                              std::vector<std::string>& output_alphabet) {
    output_alphabet = detail::field(j, "output_alphabet").get<std::vector<std::string>>();
    std::unordered_map<std::string, std::string> table;
    for (const auto& [key, val] : detail::field(j, "output_table").items())
        table[key] = val.get<std::string>();
    return [table = std::move(table)](const std::vector<std::string>& names,
                                      const std::string& letter) -> std::string {
        std::string key;
        for (const auto& n : names) {
            key += n;
            key += '|';
        }
        key += letter;
        const auto it = table.find(key);
        if (it == table.end())
            throw invalid_input_error("output table has no entry for '" + key + "'");
        return it->second;
    };
}

// ---------------------------------------------------------------------------
// Neuron specs.

inline json neuron_spec_to_json(const neuron_spec& s) {
    json j;
    switch (s.activation) {
        case activation_kind::sign: j["activation"] = "sign"; break;
        case activation_kind::tanh: j["activation"] = "tanh"; break;
        case activation_kind::synthetic: j["activation"] = "synthetic"; break;
    }
    j["order"] = s.order == neuron_order::first ? "first" : "second";
    json params = json::object();
    if (!std::isnan(s.w)) j["w"] = s.w;
    if (!std::isnan(s.a)) params["a"] = s.a;
    if (!std::isnan(s.b)) params["b"] = s.b;
    if (!std::isnan(s.margin)) params["margin"] = s.margin;
    j["params"] = params;
    if (s.family == neuron_family::group) j["cayley"] = s.cayley;
    json st = json::array(), in = json::array();
    for (const auto& p : s.state_partition) {
        detail::require_plain(p.name, "state interval name");
        st.push_back({{"name", p.name}, {"lo", bound_to_json(p.iv.lo)}, {"hi", bound_to_json(p.iv.hi)}});
    }
    for (const auto& p : s.input_partition) {
        detail::require_plain(p.name, "input interval name");
        in.push_back({{"name", p.name}, {"lo", bound_to_json(p.iv.lo)}, {"hi", bound_to_json(p.iv.hi)}});
    }
    j["state_partition"] = st;
    j["input_partition"] = in;
    return j;
}

inline neuron_spec neuron_spec_from_json(const json& j) {
    neuron_spec s;
    const std::string act = detail::field(j, "activation").get<std::string>();
    if (act == "sign") s.activation = activation_kind::sign;
    else if (act == "tanh") s.activation = activation_kind::tanh;
    else if (act == "synthetic") s.activation = activation_kind::synthetic;
    else throw invalid_input_error("unknown activation '" + act + "'");
    const std::string order = detail::field(j, "order").get<std::string>();
    if (order == "first") s.order = neuron_order::first;
    else if (order == "second") s.order = neuron_order::second;
    else throw invalid_input_error("unknown order '" + order + "'");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.w = j.contains("w") ? j["w"].get<double>() : nan;
    const json params = j.contains("params") ? j["params"] : json::object();
    s.a = params.contains("a") ? params["a"].get<double>() : nan;
    s.b = params.contains("b") ? params["b"].get<double>() : nan;
    s.margin = params.contains("margin") ? params["margin"].get<double>() : nan;

    auto read_partition = [&](const char* name) {
        std::vector<named_interval> parts;
        for (const json& p : detail::field(j, name)) {
            named_interval ni;
            ni.name = detail::field(p, "name").get<std::string>();
            ni.iv = {bound_from_json(detail::field(p, "lo")),
                     bound_from_json(detail::field(p, "hi"))};
            if (ni.iv.lo > ni.iv.hi)
                throw invalid_input_error("interval '" + ni.name + "' has lo > hi");
            parts.push_back(std::move(ni));
        }
        if (parts.empty()) throw invalid_input_error(std::string(name) + " must be nonempty");
        return parts;
    };
    s.state_partition = read_partition("state_partition");
    s.input_partition = read_partition("input_partition");

    if (j.contains("cayley")) {
        s.family = neuron_family::group;
        s.cayley = j["cayley"].get<std::vector<std::vector<int>>>();
        validate_group_table(s.cayley);
    } else {
        s.family = s.input_index("toggle") >= 0 ? neuron_family::toggle : neuron_family::flipflop;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Groundings.

inline json grounding_to_json(const symbol_grounding& g) {
    validate(g);
    json j;
    for (const auto& l : g.letters) detail::require_plain(l, "letter");
    j["letters"] = g.letters;
    json regions = json::array();
    for (const auto& r : g.regions) regions.push_back(interval_to_json(r));
    j["regions"] = regions;
    j["radius"] = g.radius;
    return j;
}

inline symbol_grounding grounding_from_json(const json& j) {
    symbol_grounding g;
    g.letters = detail::field(j, "letters").get<std::vector<std::string>>();
    for (const json& r : detail::field(j, "regions")) g.regions.push_back(interval_from_json(r));
    g.radius = detail::field(j, "radius").get<double>();
    validate(g);
    return g;
}

// ---------------------------------------------------------------------------
// Compiled cascades. Input maps and the output table are materialized over
// the symbolic domain; the `approximator` field is reserved for a learned
// implementation and must be null.

inline json rnc_to_json(const recurrent_cascade& r) {
    json j;
    j["alphabet"] = r.alphabet;
    j["grounding"] = grounding_to_json(r.grounding);
    j["network"] = r.network;

    json neurons = json::array();
    for (std::size_t i = 0; i < r.neurons.size(); ++i) {
        const rnc_neuron& n = r.neurons[i];
        json nj = neuron_spec_to_json(n.spec);
        nj["reads"] = n.input_map.reads;

        const auto& internal = internal_letters(
            n.spec.family == neuron_family::toggle     ? prime_kind::toggle
            : n.spec.family == neuron_family::flipflop ? prime_kind::flipflop
                                                       : prime_kind::group,
            n.spec.family == neuron_family::group ? static_cast<int>(n.spec.cayley.size()) : 0);
        if (internal.size() != n.input_map.values.size())
            throw integrity_error("input map values do not match the internal alphabet");
        json values = json::object();
        for (std::size_t k = 0; k < internal.size(); ++k)
            values[internal[k]] = n.input_map.values[k];
        nj["values"] = values;

        std::size_t entries = r.alphabet.size();
        for (int v : n.input_map.reads) {
            entries *= r.neurons[static_cast<std::size_t>(v)].spec.state_partition.size();
            if (entries > detail::max_table_entries)
                throw capacity_error("neuron " + std::to_string(i) +
                                     ": input map too large to materialize");
        }
        json fn = json::object();
        std::vector<int> digits(n.input_map.reads.size(), 0);
        std::vector<int> full(r.neurons.size(), 0);
        for (;;) {
            for (std::size_t v = 0; v < digits.size(); ++v)
                full[static_cast<std::size_t>(n.input_map.reads[v])] = digits[v];
            for (std::size_t l = 0; l < r.alphabet.size(); ++l) {
                std::string key = r.alphabet[l];
                for (std::size_t v = 0; v < digits.size(); ++v) {
                    key += '|';
                    key += r.neurons[static_cast<std::size_t>(n.input_map.reads[v])]
                               .spec.state_partition[static_cast<std::size_t>(digits[v])]
                               .name;
                }
                const int k = n.input_map.target(static_cast<int>(l), full);
                if (k < 0 || static_cast<std::size_t>(k) >= internal.size())
                    throw integrity_error("input map produced an out-of-range interval index");
                fn[key] = internal[static_cast<std::size_t>(k)];
            }
            std::size_t v = 0;
            for (; v < digits.size(); ++v) {
                if (++digits[v] < static_cast<int>(r.neurons[static_cast<std::size_t>(
                                                                 n.input_map.reads[v])]
                                                       .spec.state_partition.size()))
                    break;
                digits[v] = 0;
            }
            if (v == digits.size()) break;
        }
        nj["input_map"] = fn;
        neurons.push_back(std::move(nj));
    }
    j["neurons"] = neurons;
    j["initial"] = r.initial;
    j["output_alphabet"] = r.output_alphabet;
    j["output_grounding"] = grounding_to_json(r.output_grounding);

    std::size_t entries = r.alphabet.size();
    for (const auto& n : r.neurons) {
        entries *= n.spec.state_partition.size();
        if (entries > detail::max_table_entries)
            throw capacity_error("output table too large to materialize");
    }
    json out = json::object();
    std::vector<int> interp(r.neurons.size(), 0);
    for (;;) {
        std::string prefix;
        for (std::size_t i = 0; i < r.neurons.size(); ++i) {
            if (i) prefix += '|';
            prefix += r.neurons[i].spec.state_partition[static_cast<std::size_t>(interp[i])].name;
        }
        for (std::size_t l = 0; l < r.alphabet.size(); ++l) {
            const int y = r.output_fn(interp, static_cast<int>(l));
            out[prefix + "|" + r.alphabet[l]] = r.output_alphabet[static_cast<std::size_t>(y)];
        }
        std::size_t i = 0;
        for (; i < r.neurons.size(); ++i) {
            if (++interp[i] < static_cast<int>(r.neurons[i].spec.state_partition.size())) break;
            interp[i] = 0;
        }
        if (i == r.neurons.size()) break;
    }
    j["output_table"] = out;
    j["approximator"] = nullptr;
    return j;
}

inline recurrent_cascade rnc_from_json(const json& j) {
    if (j.contains("approximator") && !j["approximator"].is_null())
        throw invalid_input_error("learned approximators are not supported");
    recurrent_cascade r;
    r.alphabet = detail::field(j, "alphabet").get<std::vector<std::string>>();
    r.grounding = grounding_from_json(detail::field(j, "grounding"));
    if (r.grounding.letters != r.alphabet)
        throw invalid_input_error("grounding letters must match the alphabet");
    r.network = detail::field(j, "network").get<bool>();

    for (const json& nj : detail::field(j, "neurons")) {
        rnc_neuron n;
        n.spec = neuron_spec_from_json(nj);
        n.input_map.reads = detail::field(nj, "reads").get<std::vector<int>>();

        const auto& internal = internal_letters(
            n.spec.family == neuron_family::toggle     ? prime_kind::toggle
            : n.spec.family == neuron_family::flipflop ? prime_kind::flipflop
                                                       : prime_kind::group,
            n.spec.family == neuron_family::group ? static_cast<int>(n.spec.cayley.size()) : 0);
        const json& values = detail::field(nj, "values");
        for (const auto& name : internal) {
            if (!values.contains(name))
                throw invalid_input_error("values missing internal letter '" + name + "'");
            n.input_map.values.push_back(values[name].get<double>());
        }
        r.neurons.push_back(std::move(n));
    }

    // Second pass: bind input map targets now that every neuron's partition
    // names exist (a map may read any other neuron in a network).
    const json& neurons_json = detail::field(j, "neurons");
    for (std::size_t i = 0; i < r.neurons.size(); ++i) {
        rnc_neuron& n = r.neurons[i];
        const auto& internal = internal_letters(
            n.spec.family == neuron_family::toggle     ? prime_kind::toggle
            : n.spec.family == neuron_family::flipflop ? prime_kind::flipflop
                                                       : prime_kind::group,
            n.spec.family == neuron_family::group ? static_cast<int>(n.spec.cayley.size()) : 0);
        std::unordered_map<std::string, int> table;
        for (const auto& [key, val] : detail::field(neurons_json[i], "input_map").items()) {
            const std::string name = val.get<std::string>();
            int k = -1;
            for (std::size_t m = 0; m < internal.size(); ++m)
                if (internal[m] == name) k = static_cast<int>(m);
            if (k < 0) throw invalid_input_error("unknown internal letter '" + name + "'");
            table[key] = k;
        }
        std::vector<std::vector<std::string>> read_names;
        for (int v : n.input_map.reads) {
            if (v < 0 || static_cast<std::size_t>(v) >= r.neurons.size())
                throw invalid_input_error("reads index out of range");
            std::vector<std::string> names;
            for (const auto& p : r.neurons[static_cast<std::size_t>(v)].spec.state_partition)
                names.push_back(p.name);
            read_names.push_back(std::move(names));
        }
        const std::vector<std::string> letters = r.alphabet;
        const std::vector<int> reads = n.input_map.reads;
        const std::size_t index = i;
        n.input_map.target = [table = std::move(table), letters, reads, read_names, index](
                                 int letter, const std::vector<int>& interp) -> int {
            std::string key = letters[static_cast<std::size_t>(letter)];
            for (std::size_t v = 0; v < reads.size(); ++v) {
                const int q = interp[static_cast<std::size_t>(reads[v])];
                if (q < 0) throw integrity_error("neuron " + std::to_string(reads[v]) +
                                                 " has no interpretation");
                key += '|';
                key += read_names[v][static_cast<std::size_t>(q)];
            }
            const auto it = table.find(key);
            if (it == table.end())
                throw invalid_input_error("neuron " + std::to_string(index) +
                                          ": input map has no entry for '" + key + "'");
            return it->second;
        };
    }

    r.initial = detail::field(j, "initial").get<std::vector<double>>();
    if (r.initial.size() != r.neurons.size())
        throw invalid_input_error("initial vector length must match the neuron count");
    r.output_alphabet = detail::field(j, "output_alphabet").get<std::vector<std::string>>();
    r.output_grounding = grounding_from_json(detail::field(j, "output_grounding"));
    if (r.output_grounding.letters != r.output_alphabet)
        throw invalid_input_error("output grounding letters must match the output alphabet");

    std::unordered_map<std::string, int> out_table;
    for (const auto& [key, val] : detail::field(j, "output_table").items()) {
        const std::string y = val.get<std::string>();
        int yi = -1;
        for (std::size_t k = 0; k < r.output_alphabet.size(); ++k)
            if (r.output_alphabet[k] == y) yi = static_cast<int>(k);
        if (yi < 0) throw invalid_input_error("output '" + y + "' not in output alphabet");
        out_table[key] = yi;
    }
    std::vector<std::vector<std::string>> state_names;
    for (const auto& n : r.neurons) {
        std::vector<std::string> names;
        for (const auto& p : n.spec.state_partition) names.push_back(p.name);
        state_names.push_back(std::move(names));
    }
    const std::vector<std::string> letters = r.alphabet;
    r.output_fn = [out_table = std::move(out_table), state_names, letters](
                      const std::vector<int>& interp, int letter) -> int {
        std::string key;
        for (std::size_t i = 0; i < interp.size(); ++i) {
            key += state_names[i][static_cast<std::size_t>(interp[i])];
            key += '|';
        }
        key += letters[static_cast<std::size_t>(letter)];
        const auto it = out_table.find(key);
        if (it == out_table.end())
            throw invalid_input_error("output table has no entry for '" + key + "'");
        return it->second;
    };
    return r;
}

// ---------------------------------------------------------------------------
// Traces and cookie episodes.

inline json trace_row_to_json(const trace_row& row) {
    return {{"t", row.t},         {"u", row.u},           {"letter", row.letter},
            {"state", row.state}, {"interp", row.interp}, {"y", row.y}};
}

inline json cookie_observation_to_json(const cookie_observation& o) {
    return {{"cookie", o.cookie},
            {"cookieEaten", o.cookie_eaten},
            {"buttonPushed", o.button_pushed},
            {"greenRoom", o.green_room},
            {"orangeRoom", o.orange_room},
            {"blueRoom", o.blue_room},
            {"hallway", o.hallway}};
}

inline cookie_observation cookie_observation_from_json(const json& j) {
    cookie_observation o;
    o.cookie = detail::field(j, "cookie").get<bool>();
    o.cookie_eaten = detail::field(j, "cookieEaten").get<bool>();
    o.button_pushed = detail::field(j, "buttonPushed").get<bool>();
    o.green_room = detail::field(j, "greenRoom").get<bool>();
    o.orange_room = detail::field(j, "orangeRoom").get<bool>();
    o.blue_room = detail::field(j, "blueRoom").get<bool>();
    o.hallway = detail::field(j, "hallway").get<bool>();
    const int locations = int(o.hallway) + int(o.orange_room) + int(o.green_room) + int(o.blue_room);
    if (locations != 1)
        throw invalid_input_error("observation must have exactly one location property");
    return o;
}

// ---------------------------------------------------------------------------
// Files.

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw io_error(path + ": " + e.what());
    }
    return j;
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw io_error("write to " + path + " failed");
}

}  // namespace rnc
