#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "rnc/automata.hpp"
#include "rnc/errors.hpp"
#include "rnc/interval.hpp"
#include "rnc/neurons.hpp"
#include "rnc/rng.hpp"

namespace rnc {

// ---------------------------------------------------------------------------
// Symbol groundings: letters realized as disjoint closed regions of R.

struct symbol_grounding {
    std::vector<std::string> letters;
    std::vector<interval> regions;  // parallel to letters
    double radius = 0.0;            // robustness radius

    int index_of(const std::string& letter) const {
        for (std::size_t i = 0; i < letters.size(); ++i)
            if (letters[i] == letter) return static_cast<int>(i);
        return -1;
    }
    int letter_at(double u) const {
        for (std::size_t i = 0; i < regions.size(); ++i)
            if (regions[i].contains(u)) return static_cast<int>(i);
        return -1;
    }
};

inline void validate(const symbol_grounding& g) {
    if (g.letters.empty()) throw invalid_input_error("grounding: empty alphabet");
    if (g.letters.size() != g.regions.size())
        throw invalid_input_error("grounding: letters and regions differ in size");
    if (!(g.radius > 0.0)) throw invalid_input_error("grounding: radius must be positive");
    for (std::size_t i = 0; i < g.regions.size(); ++i) {
        if (!g.regions[i].bounded()) throw invalid_input_error("grounding: regions must be bounded");
        if (!(g.regions[i].length() >= 2.0 * g.radius))
            throw invalid_input_error("grounding: region shorter than 2*radius");
        for (std::size_t j = i + 1; j < g.regions.size(); ++j) {
            if (!disjoint(g.regions[i], g.regions[j]))
                throw invalid_input_error("grounding: overlapping regions");
            if (g.letters[i] == g.letters[j])
                throw invalid_input_error("grounding: duplicate letter");
        }
    }
}

// Letter k sits at [k - 0.25, k + 0.25].
inline symbol_grounding default_grounding(const std::vector<std::string>& alphabet) {
    if (alphabet.empty()) throw invalid_input_error("default_grounding: empty alphabet");
    symbol_grounding g;
    g.letters = alphabet;
    g.radius = 0.25;
    for (std::size_t k = 0; k < alphabet.size(); ++k) {
        const double c = static_cast<double>(k);
        g.regions.push_back({c - 0.25, c + 0.25});
    }
    return g;
}

inline std::optional<std::string> ground(const symbol_grounding& g, double u) {
    const int i = g.letter_at(u);
    if (i < 0) return std::nullopt;
    return g.letters[static_cast<std::size_t>(i)];
}

// ---------------------------------------------------------------------------
// Piecewise input maps and the compiled cascade.

// Sends (external letter, interpreted predecessor states) to a real value,
// always the representative point of one of the neuron's input intervals.
// `target` composes the component's symbolic input function; the full state
// index vector is passed and the function reads only its visible components.
struct piecewise_input_map {
    std::vector<int> reads;  // visible component indices (cascade: < own; network: != own)
    std::function<int(int letter, const std::vector<int>& interp)> target;
    std::vector<double> values;  // per input interval of the neuron

    double operator()(int letter, const std::vector<int>& interp) const {
        const int k = target(letter, interp);
        if (k < 0 || static_cast<std::size_t>(k) >= values.size())
            throw integrity_error("input map produced an out-of-range interval index");
        return values[static_cast<std::size_t>(k)];
    }
};

struct rnc_neuron {
    neuron_spec spec;
    piecewise_input_map input_map;
};

struct recurrent_cascade {
    std::vector<std::string> alphabet;
    symbol_grounding grounding;  // over alphabet
    std::vector<rnc_neuron> neurons;
    std::vector<double> initial;
    bool network = false;
    std::vector<std::string> output_alphabet;
    symbol_grounding output_grounding;  // over output_alphabet
    // Output table on the pre-transition interpreted state; values index
    // output_alphabet. Function-backed so large products stay viable.
    std::function<int(const std::vector<int>& interp, int letter)> output_fn;

    std::size_t size() const { return neurons.size(); }
};

namespace detail {

// Interpretation indices of a real state vector; -1 marks a gap.
inline std::vector<int> interpret_indices(const recurrent_cascade& r, const std::vector<double>& x) {
    std::vector<int> interp(r.neurons.size(), -1);
    for (std::size_t i = 0; i < r.neurons.size(); ++i) {
        const auto& parts = r.neurons[i].spec.state_partition;
        for (std::size_t k = 0; k < parts.size(); ++k)
            if (parts[k].iv.contains(x[i])) {
                interp[i] = static_cast<int>(k);
                break;
            }
    }
    return interp;
}

inline std::vector<double> rnc_step(const recurrent_cascade& r, const std::vector<double>& x,
                                    const std::vector<int>& interp, int letter) {
    std::vector<double> next(x.size());
    for (std::size_t i = 0; i < r.neurons.size(); ++i) {
        const double v = r.neurons[i].input_map(letter, interp);
        next[i] = neuron_step(r.neurons[i].spec, x[i], v);
    }
    return next;
}

inline std::string joined_names(const recurrent_cascade& r, const std::vector<int>& interp) {
    std::string out;
    for (std::size_t i = 0; i < interp.size(); ++i) {
        if (i) out += '|';
        out += r.neurons[i].spec.state_partition[static_cast<std::size_t>(interp[i])].name;
    }
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Compilation.

struct neuron_choice {
    activation_kind activation = activation_kind::tanh;
    double w = 0.0;
    double a = 0.0;
    double b = 0.0;       // tanh flip-flop / toggle only
    double margin = 0.1;  // synthetic only
};

namespace detail {

inline neuron_spec realize_neuron(const cascade_component& comp, const neuron_choice& c) {
    switch (comp.kind) {
        case prime_kind::flipflop:
            if (c.activation == activation_kind::sign) return make_sign_flipflop(c.w, c.a);
            if (c.activation == activation_kind::tanh) return make_tanh_flipflop(c.w, c.a, c.b);
            throw invalid_input_error("kind mismatch: flip-flop component needs a flip-flop neuron");
        case prime_kind::toggle:
            if (c.activation == activation_kind::sign) return make_sign_toggle(c.w, c.a);
            if (c.activation == activation_kind::tanh) return make_tanh_toggle(c.w, c.a, c.b);
            throw invalid_input_error("kind mismatch: toggle component needs a toggle neuron");
        case prime_kind::group:
            if (c.activation == activation_kind::synthetic)
                return make_synthetic_group_neuron(comp.cayley, c.margin);
            if (comp.cayley.size() != 2)
                throw invalid_input_error("C2 neuron requested for non-C2 group");
            return c.activation == activation_kind::sign ? make_c2_sign(c.w, c.a)
                                                         : make_c2_tanh(c.w, c.a);
    }
    throw invalid_input_error("unknown component kind");
}

template <typename Spec>
recurrent_cascade compile_impl(const Spec& spec, const std::vector<neuron_choice>& choices,
                 const symbol_grounding& grounding,
                 const std::vector<std::string>& output_alphabet,
                 std::function<std::string(const std::vector<std::string>&, const std::string&)>
                     output_table,
                 bool network) {
    if (spec.components.empty()) throw invalid_input_error("compile: empty component list");
    if (choices.size() != spec.components.size())
        throw invalid_input_error("compile: one neuron choice per component required");
    validate(grounding);
    if (grounding.letters != spec.alphabet)
        throw invalid_input_error("compile: grounding letters must match the spec alphabet");
    if (output_alphabet.empty()) throw invalid_input_error("compile: empty output alphabet");
    if (!output_table) throw invalid_input_error("compile: output table required");
    detail::validate_components(spec.alphabet, spec.components);

    recurrent_cascade r;
    r.alphabet = spec.alphabet;
    r.grounding = grounding;
    r.network = network;
    r.output_alphabet = output_alphabet;
    r.output_grounding = default_grounding(output_alphabet);

    for (std::size_t i = 0; i < spec.components.size(); ++i) {
        const cascade_component& comp = spec.components[i];
        rnc_neuron n;
        n.spec = realize_neuron(comp, choices[i]);
        const auto names = internal_letters(
            comp.kind, comp.kind == prime_kind::group ? static_cast<int>(comp.cayley.size()) : 0);
        for (const auto& name : names) {
            const int k = n.spec.input_index(name);
            if (k < 0) throw integrity_error("neuron lacks input interval for letter " + name);
            n.input_map.values.push_back(
                n.spec.input_partition[static_cast<std::size_t>(k)].iv.representative());
        }
        for (std::size_t j = 0; j < spec.components.size(); ++j)
            if (network ? j != i : j < i) n.input_map.reads.push_back(static_cast<int>(j));
        n.input_map.target = comp.input_fn;

        const int q0 = comp.initial;
        const std::string init_name = comp.state_name(q0);
        const int si = n.spec.state_index(init_name);
        if (si < 0) throw integrity_error("neuron lacks state interval for " + init_name);
        r.initial.push_back(
            n.spec.state_partition[static_cast<std::size_t>(si)].iv.representative());
        r.neurons.push_back(std::move(n));
    }

    // Output table closure: translate interpretation indices to names once.
    std::vector<std::vector<std::string>> state_names;
    for (const auto& n : r.neurons) {
        std::vector<std::string> names;
        for (const auto& p : n.spec.state_partition) names.push_back(p.name);
        state_names.push_back(std::move(names));
    }
    const std::vector<std::string> alphabet = spec.alphabet;
    const std::vector<std::string> out_alpha = output_alphabet;
    r.output_fn = [state_names, alphabet, out_alpha, output_table](
                      const std::vector<int>& interp, int letter) -> int {
        std::vector<std::string> named(interp.size());
        for (std::size_t i = 0; i < interp.size(); ++i)
            named[i] = state_names[i][static_cast<std::size_t>(interp[i])];
        const std::string y = output_table(named, alphabet[static_cast<std::size_t>(letter)]);
        for (std::size_t k = 0; k < out_alpha.size(); ++k)
            if (out_alpha[k] == y) return static_cast<int>(k);
        throw integrity_error("output table produced a letter outside the output alphabet: " + y);
    };
    return r;
}

}  // namespace detail

inline recurrent_cascade compile(const cascade_spec& spec, const std::vector<neuron_choice>& choices,
                   const symbol_grounding& grounding,
                   const std::vector<std::string>& output_alphabet,
                   std::function<std::string(const std::vector<std::string>&, const std::string&)>
                       output_table) {
    return detail::compile_impl(spec, choices, grounding, output_alphabet,
                                std::move(output_table), false);
}

inline recurrent_cascade compile(const network_spec& spec, const std::vector<neuron_choice>& choices,
                   const symbol_grounding& grounding,
                   const std::vector<std::string>& output_alphabet,
                   std::function<std::string(const std::vector<std::string>&, const std::string&)>
                       output_table) {
    return detail::compile_impl(spec, choices, grounding, output_alphabet,
                                std::move(output_table), true);
}

// ---------------------------------------------------------------------------
// Simulation.

struct trace_row {
    int t = 0;  // 1-based step index
    double u = 0.0;
    std::string letter;
    std::vector<double> state;         // post-transition
    std::vector<std::string> interp;   // of the post-transition state
    std::string y;                     // output, read pre-transition
};

struct rnc_run_result {
    std::vector<std::string> outputs;
    std::vector<trace_row> trace;
    std::vector<double> final_state;
};

inline std::vector<std::string> interpret_or_throw(const recurrent_cascade& r, const std::vector<double>& x) {
    const auto idx = detail::interpret_indices(r, x);
    std::vector<std::string> names(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] < 0)
            throw integrity_error("state of neuron " + std::to_string(i) +
                                  " is outside every state interval");
        names[i] = r.neurons[i].spec.state_partition[static_cast<std::size_t>(idx[i])].name;
    }
    return names;
}

inline rnc_run_result rnc_run(const recurrent_cascade& r, const std::vector<double>& inputs) {
    rnc_run_result res;
    std::vector<double> x = r.initial;
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        const double u = inputs[t];
        const int letter = r.grounding.letter_at(u);
        if (letter < 0)
            throw grounding_error("input at position " + std::to_string(t) +
                                      " grounds to no letter",
                                  t);
        const auto interp = detail::interpret_indices(r, x);
        for (std::size_t i = 0; i < interp.size(); ++i)
            if (interp[i] < 0)
                throw integrity_error("state of neuron " + std::to_string(i) +
                                      " is outside every state interval");
        const int y = r.output_fn(interp, letter);
        x = detail::rnc_step(r, x, interp, letter);

        trace_row row;
        row.t = static_cast<int>(t) + 1;
        row.u = u;
        row.letter = r.grounding.letters[static_cast<std::size_t>(letter)];
        row.state = x;
        row.interp = interpret_or_throw(r, x);
        row.y = r.output_alphabet[static_cast<std::size_t>(y)];
        res.outputs.push_back(row.y);
        res.trace.push_back(std::move(row));
    }
    res.final_state = std::move(x);
    return res;
}

// ---------------------------------------------------------------------------
// Homomorphism check: psi(f(x,u)) == delta(psi(x), lambda(u)) on random
// samples, componentwise from the state intervals with endpoints always in
// the pool, inputs from the letter regions likewise.

struct homomorphism_violation {
    std::uint64_t sample = 0;
    std::vector<double> x;
    double u = 0.0;
    std::string letter;
    std::string got;       // psi(f(x,u))
    std::string expected;  // delta(psi(x), lambda(u))
};

struct homomorphism_report {
    std::uint64_t checked = 0;
    std::uint64_t violation_count = 0;
    std::vector<homomorphism_violation> violations;  // first few, by sample index
    std::string equation = "psi(f(x,u)) == delta(psi(x), lambda(u))";
    static constexpr std::size_t max_recorded = 32;
    bool pass() const { return violation_count == 0; }
};

namespace detail {

inline double sample_point(const interval& iv, rng& g) {
    switch (g.below(3)) {
        case 0: return iv.lo;
        case 1: return iv.hi;
        default: return g.uniform(iv.lo, iv.hi);
    }
}

}  // namespace detail

inline homomorphism_report check_homomorphism(const recurrent_cascade& r, const semiautomaton& s,
                                              const symbol_grounding& grounding,
                                              std::uint64_t samples, std::uint64_t seed,
                                              unsigned threads = 1) {
    validate(grounding);
    if (grounding.letters != s.alphabet)
        throw invalid_input_error("check_homomorphism: grounding must cover the semiautomaton alphabet");
    if (grounding.letters != r.alphabet)
        throw invalid_input_error("check_homomorphism: grounding must match the RNC alphabet");
    std::unordered_map<std::string, int> state_index;
    state_index.reserve(s.states.size() * 2);
    for (std::size_t q = 0; q < s.states.size(); ++q)
        state_index.emplace(s.states[q], static_cast<int>(q));

    const unsigned workers = std::max(1u, threads);
    std::vector<homomorphism_report> parts(workers);

    auto run_shard = [&](unsigned shard) {
        homomorphism_report& rep = parts[shard];
        for (std::uint64_t k = shard; k < samples; k += workers) {
            rng g = rng_at(seed, k);
            std::vector<double> x(r.neurons.size());
            std::vector<int> interp(r.neurons.size());
            for (std::size_t i = 0; i < r.neurons.size(); ++i) {
                const auto& parts_i = r.neurons[i].spec.state_partition;
                const int q = static_cast<int>(g.below(parts_i.size()));
                interp[i] = q;
                x[i] = detail::sample_point(parts_i[static_cast<std::size_t>(q)].iv, g);
            }
            const int letter = static_cast<int>(g.below(grounding.letters.size()));
            const double u =
                detail::sample_point(grounding.regions[static_cast<std::size_t>(letter)], g);

            ++rep.checked;
            // Right side: the symbolic transition from psi(x).
            const std::string from = detail::joined_names(r, interp);
            const auto it = state_index.find(from);
            std::string expected = "(state missing from semiautomaton)";
            if (it != state_index.end())
                expected = s.states[static_cast<std::size_t>(s.step(it->second, letter))];
            // Left side: interpret the concrete step.
            const auto next = detail::rnc_step(r, x, interp, letter);
            const auto next_interp = detail::interpret_indices(r, next);
            std::string got;
            bool gap = false;
            for (std::size_t i = 0; i < next_interp.size(); ++i)
                if (next_interp[i] < 0) {
                    got = "(gap at neuron " + std::to_string(i) + ")";
                    gap = true;
                    break;
                }
            if (!gap) got = detail::joined_names(r, next_interp);
            if (gap || it == state_index.end() || got != expected) {
                ++rep.violation_count;
                if (rep.violations.size() < homomorphism_report::max_recorded) {
                    homomorphism_violation v;
                    v.sample = k;
                    v.x = x;
                    v.u = u;
                    v.letter = grounding.letters[static_cast<std::size_t>(letter)];
                    v.got = got;
                    v.expected = expected;
                    rep.violations.push_back(std::move(v));
                }
            }
        }
    };

    if (workers == 1) {
        run_shard(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run_shard, t);
        for (auto& t : pool) t.join();
    }

    homomorphism_report rep;
    for (const auto& p : parts) {
        rep.checked += p.checked;
        rep.violation_count += p.violation_count;
        for (const auto& v : p.violations) rep.violations.push_back(v);
    }
    std::sort(rep.violations.begin(), rep.violations.end(),
              [](const homomorphism_violation& a, const homomorphism_violation& b) {
                  return a.sample < b.sample;
              });
    if (rep.violations.size() > homomorphism_report::max_recorded)
        rep.violations.resize(homomorphism_report::max_recorded);
    return rep;
}

// ---------------------------------------------------------------------------
// Equivalence check: random strings realized as region midpoints plus
// adversarial noise within the robustness radius (endpoints included).

struct equivalence_mismatch {
    std::uint64_t trial = 0;
    int step = 0;  // 1-based
    std::vector<double> inputs;
    std::string expected;  // automaton output
    std::string got;       // rnc output
};

struct equivalence_report {
    bool equivalent = true;
    std::uint64_t trials = 0;
    std::optional<equivalence_mismatch> mismatch;
};

inline equivalence_report check_equivalence(const recurrent_cascade& r, const automaton& a,
                                            const symbol_grounding& grounding,
                                            std::uint64_t trials, int max_len,
                                            std::uint64_t seed) {
    validate(grounding);
    if (grounding.letters != a.sa.alphabet)
        throw invalid_input_error("check_equivalence: grounding must cover the automaton alphabet");
    if (grounding.letters != r.alphabet)
        throw invalid_input_error("check_equivalence: grounding must match the RNC alphabet");
    if (max_len < 0) throw invalid_input_error("check_equivalence: max_len must be non-negative");
    equivalence_report rep;
    for (std::uint64_t k = 0; k < trials; ++k) {
        rng g = rng_at(seed, k);
        const int len = static_cast<int>(g.below(static_cast<std::uint64_t>(max_len) + 1));
        std::vector<std::string> letters;
        std::vector<double> us;
        for (int t = 0; t < len; ++t) {
            const auto letter = static_cast<std::size_t>(g.below(grounding.letters.size()));
            const interval& region = grounding.regions[letter];
            const double mid = 0.5 * (region.lo + region.hi);
            double noise = 0.0;
            switch (g.below(3)) {
                case 0: noise = -grounding.radius; break;
                case 1: noise = grounding.radius; break;
                default: noise = g.uniform(-grounding.radius, grounding.radius);
            }
            letters.push_back(grounding.letters[letter]);
            us.push_back(mid + noise);
        }
        const auto expected = run_automaton(a, letters);
        const auto got = rnc_run(r, us);
        ++rep.trials;
        for (int t = 0; t < len; ++t)
            if (got.outputs[static_cast<std::size_t>(t)] !=
                expected[static_cast<std::size_t>(t)]) {
                rep.equivalent = false;
                if (!rep.mismatch) {
                    equivalence_mismatch m;
                    m.trial = k;
                    m.step = t + 1;
                    m.inputs = us;
                    m.expected = expected[static_cast<std::size_t>(t)];
                    m.got = got.outputs[static_cast<std::size_t>(t)];
                    rep.mismatch = std::move(m);
                }
                break;
            }
    }
    return rep;
}

// Constant "third letter" drive: toggles alternate, flip-flops hold. True iff
// the interpreted state changes on every one of `steps` steps.
inline bool alternation_probe(const recurrent_cascade& r, int steps) {
    if (r.neurons.size() != 1)
        throw invalid_input_error("alternation_probe: single-neuron RNC required");
    const neuron_spec& s = r.neurons[0].spec;
    int k = s.input_index("toggle");
    if (k < 0) k = s.input_index("read");
    if (k < 0)
        throw invalid_input_error("alternation_probe: neuron has no toggle or read interval");
    const double v = s.input_partition[static_cast<std::size_t>(k)].iv.representative();
    double x = r.initial[0];
    auto prev = state_interpretation(s, x);
    if (!prev) return false;
    for (int i = 0; i < steps; ++i) {
        x = neuron_step(s, x, v);
        const auto cur = state_interpretation(s, x);
        if (!cur || *cur == *prev) return false;
        prev = cur;
    }
    return true;
}

}  // namespace rnc
