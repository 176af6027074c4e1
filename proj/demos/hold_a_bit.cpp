// One sign flip-flop neuron driven through its input intervals: set, hold
// under reads, reset. Prints the raw state next to its interpretation.

#include <cstdio>

#include "rnc/neurons.hpp"

using namespace rnc;

int main() {
    const neuron_spec s = make_sign_flipflop(2.0, 0.5);
    double x = -1.0;  // X_low
    std::printf("%-6s %8s  %s\n", "input", "state", "reads as");
    for (const char* name : {"set", "read", "read", "reset", "read"}) {
        const auto& iv = s.input_partition[static_cast<std::size_t>(s.input_index(name))].iv;
        x = neuron_step(s, x, iv.representative());
        std::printf("%-6s %8.4f  %s\n", name, x, state_interpretation(s, x)->c_str());
    }
    return 0;
}
