// The triple-top detector end to end: build the flip-flop cascade over 4-bit
// prices, compile it to tanh neurons, and compare against the streaming
// reference scanner on a series with three descending tops.

#include <cstdio>
#include <vector>

#include "rnc/cascade_compiler.hpp"
#include "rnc/patterns.hpp"

using namespace rnc;

int main() {
    const int bits = 4;
    const pattern_bundle bundle = ttop_cascade(bits);
    const auto [a, b] = optimal_tanh_ab(2.0);
    std::vector<neuron_choice> choices(bundle.spec.components.size());
    for (auto& c : choices) {
        c.activation = activation_kind::tanh;
        c.w = 2.0;
        c.a = a;
        c.b = b;
    }
    const symbol_grounding g = default_grounding(bundle.spec.alphabet);
    const recurrent_cascade r =
        compile(bundle.spec, choices, g, bundle.output_alphabet, bundle.output_table);

    const std::vector<int> prices{1, 9, 2, 8, 3, 7, 4, 6, 5, 9, 0};
    std::vector<double> inputs;
    for (int p : prices) inputs.push_back(g.regions[static_cast<std::size_t>(p)].representative());
    const auto flags = rnc_run(r, inputs).outputs;
    const auto reference = ttop_reference(prices, bits);

    std::printf("%-6s %-4s %s\n", "price", "rnc", "reference");
    bool agree = true;
    for (std::size_t i = 0; i < prices.size(); ++i) {
        std::printf("%-6d %-4s %d\n", prices[i], flags[i].c_str(), reference[i]);
        agree &= flags[i] == (reference[i] ? "1" : "0");
    }
    std::printf("%s\n", agree ? "cascade and reference agree" : "DISAGREEMENT");
    return agree ? 0 : 1;
}
