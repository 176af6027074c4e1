#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rnc {

// Malformed values, violated constructor preconditions, mismatched sizes.
struct invalid_input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inputs valid but beyond a configured brute-force or materialization bound.
struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A real input fell outside every grounding region. Position is the index of
// the offending input in its sequence.
struct grounding_error : std::runtime_error {
    std::size_t position;
    grounding_error(const std::string& what, std::size_t pos)
        : std::runtime_error(what), position(pos) {}
};

// Internal consistency breach while running, e.g. a neuron state that no
// state interval interprets during plain simulation.
struct integrity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable or unparsable files.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace rnc
