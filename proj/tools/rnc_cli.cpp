// Command-line front end: compile cascade documents to neuron cascades, run
// and trace them, check their guarantees, and reproduce the worked demos.
// Machine-readable JSON goes to stdout, human summaries to stderr. Exit
// codes: 0 pass, 1 I/O, 2 parameters, 3 grounding, 4 check failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rnc/json_io.hpp"

using namespace rnc;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitIo = 1;
constexpr int kExitParams = 2;
constexpr int kExitGrounding = 3;
constexpr int kExitCheckFailed = 4;

void emit(const json& report) { std::cout << report.dump() << "\n"; }

void note(const std::string& line) { std::cerr << line << "\n"; }

double nan_default() { return std::numeric_limits<double>::quiet_NaN(); }

struct options {
    std::string spec_path, rnc_path, machine_path, out_path;
    std::string activation = "tanh";
    double weight = 2.0;
    double a = nan_default();
    double b = nan_default();
    double margin = 0.1;
    std::vector<std::string> inputs;
    std::string input_file;
    bool trace = false;
    std::string subject, demo_name;
    std::vector<std::string> files;
    std::uint64_t trials = 0;  // 0: per-command default
    int max_len = -1;
    int episodes = 100;
    int bits = 4;
    std::uint64_t seed = 42;
    int grid = 1000;
    unsigned threads = 1;
    std::string prices_file, episode_file;
};

// ---------------------------------------------------------------------------
// compile

neuron_choice choice_for(const cascade_component& comp, const options& opt) {
    neuron_choice c;
    c.margin = opt.margin;
    c.w = opt.weight;
    if (opt.activation == "sign") c.activation = activation_kind::sign;
    else if (opt.activation == "tanh") c.activation = activation_kind::tanh;
    else if (opt.activation == "synthetic") c.activation = activation_kind::synthetic;
    else throw invalid_input_error("unknown activation '" + opt.activation + "'");

    const bool has_a = !std::isnan(opt.a), has_b = !std::isnan(opt.b);
    c.a = opt.a;
    c.b = opt.b;
    if (c.activation == activation_kind::sign) {
        if (!has_a) c.a = comp.kind == prime_kind::group && opt.weight < 0 ? -0.5 : 0.5;
    } else if (c.activation == activation_kind::tanh) {
        if (comp.kind == prime_kind::group) {
            if (!has_a) c.a = opt.weight < 0 ? -0.5 : 0.5;
        } else if (!has_a && !has_b) {
            // Optimal window at |w|; the toggle mirrors the flip-flop's pair.
            const auto [oa, ob] = optimal_tanh_ab(std::abs(opt.weight));
            c.a = oa;
            c.b = ob;
        } else if (!has_a || !has_b) {
            throw invalid_input_error("tanh neurons need both --a and --b, or neither");
        }
    }
    return c;
}

int cmd_compile(const options& opt) {
    const json doc = load_json(opt.spec_path);

    bool network = false;
    cascade_spec cascade;
    network_spec net;
    std::vector<std::string> output_alphabet;
    output_table_fn table;
    try {
        network = spec_type(doc) == "network";
        if (network) net = network_from_json(doc);
        else cascade = cascade_from_json(doc);
        if (doc.contains("output_table")) table = output_table_from_json(doc, output_alphabet);
    } catch (const invalid_input_error& e) {
        note(std::string("invalid spec: ") + e.what());
        return kExitIo;
    }
    const auto& components = network ? net.components : cascade.components;
    const auto& alphabet = network ? net.alphabet : cascade.alphabet;

    std::vector<neuron_choice> choices;
    choices.reserve(components.size());
    for (const auto& comp : components) choices.push_back(choice_for(comp, opt));

    if (!table) {
        // Default output: the interpreted state vector itself, joined.
        std::size_t entries = 1;
        for (const auto& comp : components) {
            entries *= static_cast<std::size_t>(comp.n_states());
            if (entries > (1u << 18))
                throw invalid_input_error(
                    "spec has no output_table and the default state-name output is too large");
        }
        std::vector<int> digits(components.size(), 0);
        for (;;) {
            std::string name;
            for (std::size_t i = 0; i < components.size(); ++i) {
                if (i) name += '|';
                name += components[i].state_name(digits[i]);
            }
            output_alphabet.push_back(std::move(name));
            std::size_t i = 0;
            for (; i < components.size(); ++i) {
                if (++digits[i] < components[i].n_states()) break;
                digits[i] = 0;
            }
            if (i == components.size()) break;
        }
        table = [](const std::vector<std::string>& names, const std::string&) {
            std::string joined;
            for (std::size_t i = 0; i < names.size(); ++i) {
                if (i) joined += '|';
                joined += names[i];
            }
            return joined;
        };
    }

    const symbol_grounding grounding = default_grounding(alphabet);
    const recurrent_cascade r =
        network ? compile(net, choices, grounding, output_alphabet, table)
                : compile(cascade, choices, grounding, output_alphabet, table);

    const std::string out = opt.out_path.empty() ? "rnc.json" : opt.out_path;
    save_json(out, rnc_to_json(r));

    json report;
    report["command"] = "compile";
    report["neurons"] = r.neurons.size();
    report["network"] = r.network;
    report["alphabet_size"] = r.alphabet.size();
    report["out"] = out;
    emit(report);
    note("compiled " + std::to_string(r.neurons.size()) + " neuron(s) over " +
         std::to_string(r.alphabet.size()) + " letter(s) -> " + out);
    return kExitPass;
}

// ---------------------------------------------------------------------------
// run

std::vector<double> parse_inputs(const recurrent_cascade& r, const std::vector<std::string>& tokens) {
    std::vector<double> inputs;
    auto letter_value = [&r](const std::string& name) -> std::optional<double> {
        const int k = r.grounding.index_of(name);
        if (k < 0) return std::nullopt;
        return r.grounding.regions[static_cast<std::size_t>(k)].representative();
    };
    for (const std::string& tok : tokens) {
        if (tok.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() + tok.size()) {
            inputs.push_back(v);
            continue;
        }
        if (const auto lv = letter_value(tok)) {
            inputs.push_back(*lv);
            continue;
        }
        // A word of single-letter names, e.g. "aaa" over the alphabet {a}.
        std::vector<double> expanded;
        bool ok = true;
        for (char ch : tok) {
            const auto cv = letter_value(std::string(1, ch));
            if (!cv) {
                ok = false;
                break;
            }
            expanded.push_back(*cv);
        }
        if (!ok) throw invalid_input_error("input token '" + tok + "' is neither a number nor letters");
        inputs.insert(inputs.end(), expanded.begin(), expanded.end());
    }
    return inputs;
}

int cmd_run(const options& opt) {
    const json doc = load_json(opt.rnc_path);
    recurrent_cascade r;
    try {
        r = rnc_from_json(doc);
    } catch (const invalid_input_error& e) {
        note(std::string("invalid rnc document: ") + e.what());
        return kExitIo;
    }

    std::vector<std::string> tokens = opt.inputs;
    if (!opt.input_file.empty()) {
        const json arr = load_json(opt.input_file);
        if (!arr.is_array()) throw invalid_input_error("input file must hold a JSON array");
        for (const json& v : arr) {
            if (v.is_number()) tokens.push_back(std::to_string(v.get<double>()));
            else tokens.push_back(v.get<std::string>());
        }
    }
    const std::vector<double> inputs = parse_inputs(r, tokens);
    const rnc_run_result res = rnc_run(r, inputs);

    std::string line;
    for (std::size_t i = 0; i < res.outputs.size(); ++i) {
        if (i) line += ' ';
        line += res.outputs[i];
    }
    std::cout << line << "\n";
    if (opt.trace)
        for (const trace_row& row : res.trace) std::cout << trace_row_to_json(row).dump() << "\n";
    note("ran " + std::to_string(inputs.size()) + " step(s)");
    return kExitPass;
}

// ---------------------------------------------------------------------------
// check

semiautomaton machine_from_doc(const json& doc) {
    if (doc.contains("type")) {
        if (spec_type(doc) == "network") return compose_network(network_from_json(doc));
        return compose_cascade(cascade_from_json(doc));
    }
    return semiautomaton_from_json(doc);
}

int cmd_check_aperiodic(const options& opt) {
    semiautomaton s;
    try {
        s = machine_from_doc(load_json(opt.files.at(0)));
    } catch (const invalid_input_error& e) {
        note(std::string("invalid machine document: ") + e.what());
        return kExitIo;
    }
    const transformation_semigroup ts = characteristic_semigroup(s);
    const bool aperiodic = is_aperiodic(ts);
    const int witness = aperiodicity_witness(ts);

    json report;
    report["subject"] = "aperiodic";
    report["semigroup_size"] = ts.size();
    report["aperiodic"] = aperiodic;
    if (witness >= 0) report["witness"] = ts.elements[static_cast<std::size_t>(witness)];
    emit(report);
    note(aperiodic ? "PASS: characteristic semigroup is aperiodic (group-free)"
                   : "FAIL: nontrivial group divisor; witness element in report");
    return aperiodic ? kExitPass : kExitCheckFailed;
}

int cmd_check_neuron(const options& opt) {
    neuron_spec s;
    try {
        s = neuron_spec_from_json(load_json(opt.files.at(0)));
    } catch (const invalid_input_error& e) {
        note(std::string("invalid neuron document: ") + e.what());
        return kExitIo;
    }
    const core_condition_report rep = verify_core_conditions(s, opt.grid);

    json conditions = json::array();
    for (const auto& c : rep.conditions) {
        json cj;
        cj["name"] = c.name;
        cj["method"] = c.method;
        cj["corner_pass"] = c.corner_pass;
        cj["grid_pass"] = c.grid_pass;
        if (c.has_witness) {
            cj["witness"] = {{"x", c.witness_x}, {"v", c.witness_v}, {"result", c.witness_result}};
        }
        conditions.push_back(std::move(cj));
    }
    json report;
    report["subject"] = "neuron";
    report["grid"] = rep.grid;
    report["conditions"] = conditions;
    report["bound_violations"] = rep.bound_violations;
    report["all_pass"] = rep.all_pass;
    report["bounds_pass"] = rep.bounds_pass;
    emit(report);
    note(rep.pass() ? "PASS: all core conditions hold" : "FAIL: see report");
    return rep.pass() ? kExitPass : kExitCheckFailed;
}

int cmd_check_homomorphism(const options& opt) {
    recurrent_cascade r;
    semiautomaton s;
    try {
        r = rnc_from_json(load_json(opt.files.at(0)));
        s = machine_from_doc(load_json(opt.files.at(1)));
    } catch (const invalid_input_error& e) {
        note(std::string("invalid document: ") + e.what());
        return kExitIo;
    }
    const std::uint64_t samples = opt.trials ? opt.trials : 10000;
    const homomorphism_report rep =
        check_homomorphism(r, s, r.grounding, samples, opt.seed, opt.threads);

    json violations = json::array();
    for (const auto& v : rep.violations)
        violations.push_back({{"sample", v.sample},
                              {"x", v.x},
                              {"u", v.u},
                              {"letter", v.letter},
                              {"got", v.got},
                              {"expected", v.expected}});
    json report;
    report["subject"] = "homomorphism";
    report["equation"] = rep.equation;
    report["checked"] = rep.checked;
    report["violations"] = rep.violation_count;
    report["witnesses"] = violations;
    emit(report);
    note(rep.pass() ? "PASS: " + std::to_string(rep.checked) + " samples, no violations"
                    : "FAIL: " + std::to_string(rep.violation_count) + " violation(s)");
    return rep.pass() ? kExitPass : kExitCheckFailed;
}

int cmd_check_equivalence(const options& opt) {
    recurrent_cascade r;
    automaton a;
    try {
        r = rnc_from_json(load_json(opt.files.at(0)));
        a = automaton_from_json(load_json(opt.files.at(1)));
    } catch (const invalid_input_error& e) {
        note(std::string("invalid document: ") + e.what());
        return kExitIo;
    }
    const std::uint64_t trials = opt.trials ? opt.trials : 200;
    const int max_len = opt.max_len < 0 ? 100 : opt.max_len;
    const equivalence_report rep = check_equivalence(r, a, r.grounding, trials, max_len, opt.seed);

    json report;
    report["subject"] = "equivalence";
    report["trials"] = rep.trials;
    report["equivalent"] = rep.equivalent;
    if (rep.mismatch) {
        report["mismatch"] = {{"trial", rep.mismatch->trial},
                              {"step", rep.mismatch->step},
                              {"expected", rep.mismatch->expected},
                              {"got", rep.mismatch->got}};
    }
    emit(report);
    note(rep.equivalent ? "PASS: behaviorally equivalent on all trials"
                        : "FAIL: mismatch recorded in report");
    return rep.equivalent ? kExitPass : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// demos

int cmd_demo_ttop(const options& opt) {
    const pattern_bundle bundle = ttop_cascade(opt.bits);
    std::vector<neuron_choice> choices(bundle.spec.components.size());
    const auto [oa, ob] = optimal_tanh_ab(2.0);
    for (auto& c : choices) {
        c.activation = activation_kind::tanh;
        c.w = 2.0;
        c.a = oa;
        c.b = ob;
    }
    const symbol_grounding g = default_grounding(bundle.spec.alphabet);
    const recurrent_cascade r =
        compile(bundle.spec, choices, g, bundle.output_alphabet, bundle.output_table);

    std::vector<std::vector<int>> sequences;
    if (!opt.prices_file.empty()) {
        const json arr = load_json(opt.prices_file);
        if (!arr.is_array()) throw invalid_input_error("prices file must hold a JSON array");
        sequences.push_back(arr.get<std::vector<int>>());
    } else {
        const std::uint64_t trials = opt.trials ? opt.trials : 200;
        for (std::uint64_t t = 0; t < trials; ++t) {
            rng gen = rng_at(opt.seed, t);
            const int len = 1 + static_cast<int>(gen.below(40));
            std::vector<int> prices;
            for (int k = 0; k < len; ++k)
                prices.push_back(static_cast<int>(gen.below(1u << opt.bits)));
            sequences.push_back(std::move(prices));
        }
    }

    std::uint64_t agreements = 0;
    json mismatch;
    for (std::size_t t = 0; t < sequences.size(); ++t) {
        const auto& prices = sequences[t];
        std::vector<double> inputs;
        inputs.reserve(prices.size());
        for (int p : prices)
            inputs.push_back(g.regions[static_cast<std::size_t>(p)].representative());
        const auto got = rnc_run(r, inputs).outputs;
        const auto want_bits = ttop_reference(prices, opt.bits);
        std::vector<std::string> want;
        want.reserve(want_bits.size());
        for (int bit : want_bits) want.push_back(bit ? "1" : "0");
        if (got == want) {
            ++agreements;
        } else if (mismatch.is_null()) {
            mismatch = {{"trial", t}, {"prices", prices}, {"expected", want}, {"got", got}};
        }
    }
    if (!opt.out_path.empty()) save_json(opt.out_path, json(sequences.back()));

    json report;
    report["demo"] = "ttop";
    report["bits"] = opt.bits;
    report["trials"] = sequences.size();
    report["agreements"] = agreements;
    if (!mismatch.is_null()) report["mismatch"] = mismatch;
    emit(report);
    const bool pass = agreements == sequences.size();
    note((pass ? "PASS " : "FAIL ") + std::to_string(agreements) + "/" +
         std::to_string(sequences.size()));
    return pass ? kExitPass : kExitCheckFailed;
}

int cmd_demo_cookie(const options& opt) {
    const pattern_bundle bundle = cookie_cascade();
    std::vector<neuron_choice> choices(bundle.spec.components.size());
    const auto [oa, ob] = optimal_tanh_ab(2.0);
    for (auto& c : choices) {
        c.activation = activation_kind::tanh;
        c.w = 2.0;
        c.a = oa;
        c.b = ob;
    }
    const symbol_grounding g = default_grounding(bundle.spec.alphabet);
    const recurrent_cascade r =
        compile(bundle.spec, choices, g, bundle.output_alphabet, bundle.output_table);

    auto prob_name = [](double p) {
        return p == 0.0 ? std::string("0") : p == 0.5 ? std::string("0.5") : std::string("1");
    };

    std::vector<cookie_episode> episodes;
    if (!opt.episode_file.empty()) {
        std::ifstream in(opt.episode_file);
        if (!in) throw io_error("cannot open " + opt.episode_file);
        cookie_episode ep;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json row;
            try {
                row = json::parse(line);
            } catch (const json::parse_error& e) {
                throw io_error(opt.episode_file + ": " + e.what());
            }
            ep.observations.push_back(cookie_observation_from_json(row));
            if (!row.contains("y")) throw invalid_input_error("episode record lacks 'y'");
            const std::string y = row["y"].get<std::string>();
            ep.probabilities.push_back(y == "0" ? 0.0 : y == "0.5" ? 0.5 : 1.0);
        }
        if (ep.observations.empty()) throw invalid_input_error("episode file is empty");
        episodes.push_back(std::move(ep));
    } else {
        const int steps = opt.max_len < 0 ? 100 : opt.max_len;
        for (int e = 0; e < opt.episodes; ++e)
            episodes.push_back(cookie_reference(derive_seed(opt.seed, static_cast<std::uint64_t>(e)), steps));
    }

    std::uint64_t agreements = 0;
    json mismatch;
    for (std::size_t e = 0; e < episodes.size(); ++e) {
        const cookie_episode& ep = episodes[e];
        std::vector<double> inputs;
        std::vector<std::string> want;
        for (const auto& o : ep.observations) {
            const int k = g.index_of(cookie_letter(o));
            inputs.push_back(g.regions[static_cast<std::size_t>(k)].representative());
        }
        for (double p : ep.probabilities) want.push_back(prob_name(p));
        const auto got = rnc_run(r, inputs).outputs;
        if (got == want) {
            ++agreements;
        } else if (mismatch.is_null()) {
            mismatch = {{"episode", e}, {"expected", want}, {"got", got}};
        }
    }

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw io_error("cannot open " + opt.out_path + " for writing");
        const cookie_episode& ep = episodes.back();
        for (std::size_t t = 0; t < ep.observations.size(); ++t) {
            json row = cookie_observation_to_json(ep.observations[t]);
            row["t"] = t + 1;
            row["y"] = prob_name(ep.probabilities[t]);
            out << row.dump() << "\n";
        }
    }

    json report;
    report["demo"] = "cookie";
    report["episodes"] = episodes.size();
    report["agreements"] = agreements;
    if (!mismatch.is_null()) report["mismatch"] = mismatch;
    emit(report);
    const bool pass = agreements == episodes.size();
    note((pass ? "PASS " : "FAIL ") + std::to_string(agreements) + "/" +
         std::to_string(episodes.size()));
    return pass ? kExitPass : kExitCheckFailed;
}

int cmd_demo_parity(const options& opt) {
    const parity_pair p = parity_spec();
    const auto [oa, ob] = optimal_tanh_ab(2.0);
    std::vector<neuron_choice> choices(1);
    choices[0].activation = activation_kind::tanh;
    choices[0].w = -2.0;
    choices[0].a = oa;
    choices[0].b = ob;
    const symbol_grounding g = default_grounding(p.spec.alphabet);
    const recurrent_cascade r =
        compile(p.spec, choices, g, {"0", "1"},
                [](const std::vector<std::string>& names, const std::string&) {
                    return names[0] == "low" ? std::string("1") : std::string("0");
                });

    const int max_len = opt.max_len < 0 ? 1000 : opt.max_len;
    const std::vector<std::string> word(static_cast<std::size_t>(max_len), "a");
    const std::vector<std::string> want = run_automaton(p.acceptor, word);

    // Noisy grounding: anywhere within the robustness radius of the letter.
    rng gen(derive_seed(opt.seed, 0x706172697479ULL));
    std::vector<double> inputs;
    const double center = g.regions[0].representative();
    for (int k = 0; k < max_len; ++k)
        inputs.push_back(center + gen.uniform(-g.radius, g.radius));
    const auto got = rnc_run(r, inputs).outputs;

    int first_mismatch = -1;
    for (int k = 0; k < max_len; ++k)
        if (got[static_cast<std::size_t>(k)] != want[static_cast<std::size_t>(k)]) {
            first_mismatch = k + 1;
            break;
        }
    const bool alternates = alternation_probe(r, max_len);

    json report;
    report["demo"] = "parity";
    report["max_len"] = max_len;
    report["equivalent"] = first_mismatch < 0;
    report["alternates"] = alternates;
    if (first_mismatch > 0) report["first_mismatch_length"] = first_mismatch;
    emit(report);
    const bool pass = first_mismatch < 0 && alternates;
    note(pass ? "PASS: outputs match on every prefix and the state alternates"
              : "FAIL: see report");
    return pass ? kExitPass : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"recurrent neuron cascades: compile, run, check, demo"};
    app.require_subcommand(1);
    options opt;

    CLI::App* compile = app.add_subcommand("compile", "compile a cascade document to rnc.json");
    compile->add_option("spec", opt.spec_path, "cascade/network JSON document")->required();
    compile->add_option("--activation", opt.activation, "sign|tanh|synthetic");
    compile->add_option("--weight,-w", opt.weight, "self-loop weight");
    compile->add_option("--a", opt.a, "lower threshold parameter");
    compile->add_option("--b", opt.b, "upper threshold parameter (tanh)");
    compile->add_option("--margin", opt.margin, "synthetic group neuron margin");
    compile->add_option("-o,--out", opt.out_path, "output path (default rnc.json)");

    CLI::App* run = app.add_subcommand("run", "run an rnc.json on an input sequence");
    run->add_option("rnc", opt.rnc_path, "compiled rnc.json")->required();
    run->add_option("inputs", opt.inputs, "numbers or letter names");
    run->add_option("--input-file", opt.input_file, "JSON array of inputs");
    run->add_flag("--trace", opt.trace, "emit JSON-lines state trace");

    CLI::App* check = app.add_subcommand("check", "verify a guarantee");
    check->add_option("subject", opt.subject, "aperiodic|neuron|homomorphism|equivalence")
        ->required();
    check->add_option("files", opt.files, "subject documents");
    check->add_option("--trials", opt.trials, "sample/trial count");
    check->add_option("--max-len", opt.max_len, "maximum string length");
    check->add_option("--seed", opt.seed, "rng seed");
    check->add_option("--grid", opt.grid, "grid resolution per axis");
    check->add_option("--threads", opt.threads, "checker shards");

    CLI::App* demo = app.add_subcommand("demo", "run a worked construction end to end");
    demo->add_option("name", opt.demo_name, "ttop|cookie|parity")->required();
    demo->add_option("--bits", opt.bits, "ttop price width");
    demo->add_option("--trials", opt.trials, "ttop price sequences");
    demo->add_option("--episodes", opt.episodes, "cookie episodes");
    demo->add_option("--max-len", opt.max_len, "parity length / cookie steps");
    demo->add_option("--seed", opt.seed, "rng seed");
    demo->add_option("--prices-file", opt.prices_file, "replay a stored price sequence");
    demo->add_option("--episode-file", opt.episode_file, "replay a stored cookie episode");
    demo->add_option("-o,--out", opt.out_path, "emit the last generated fixture");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParams;
    }

    try {
        if (app.got_subcommand(compile)) return cmd_compile(opt);
        if (app.got_subcommand(run)) return cmd_run(opt);
        if (app.got_subcommand(check)) {
            const std::size_t need = opt.subject == "homomorphism" || opt.subject == "equivalence"
                                         ? 2
                                         : 1;
            if (opt.files.size() < need)
                throw invalid_input_error("check " + opt.subject + " needs " +
                                          std::to_string(need) + " file argument(s)");
            if (opt.subject == "aperiodic") return cmd_check_aperiodic(opt);
            if (opt.subject == "neuron") return cmd_check_neuron(opt);
            if (opt.subject == "homomorphism") return cmd_check_homomorphism(opt);
            if (opt.subject == "equivalence") return cmd_check_equivalence(opt);
            throw invalid_input_error("unknown check subject '" + opt.subject + "'");
        }
        if (app.got_subcommand(demo)) {
            if (opt.demo_name == "ttop") return cmd_demo_ttop(opt);
            if (opt.demo_name == "cookie") return cmd_demo_cookie(opt);
            if (opt.demo_name == "parity") return cmd_demo_parity(opt);
            throw invalid_input_error("unknown demo '" + opt.demo_name + "'");
        }
    } catch (const grounding_error& e) {
        note(std::string("grounding error: ") + e.what());
        return kExitGrounding;
    } catch (const io_error& e) {
        note(std::string("io error: ") + e.what());
        return kExitIo;
    } catch (const capacity_error& e) {
        note(std::string("capacity: ") + e.what());
        return kExitIo;
    } catch (const integrity_error& e) {
        note(std::string("integrity: ") + e.what());
        return kExitIo;
    } catch (const invalid_input_error& e) {
        note(std::string("invalid parameters: ") + e.what());
        return kExitParams;
    }
    return kExitParams;
}
