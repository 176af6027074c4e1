#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rnc/automata.hpp"
#include "rnc/errors.hpp"
#include "rnc/rng.hpp"

namespace rnc {

using output_table_fn =
    std::function<std::string(const std::vector<std::string>&, const std::string&)>;

// A cascade together with its symbolic output function, ready for compile()
// or for flattening into an automaton.
struct pattern_bundle {
    cascade_spec spec;
    std::vector<std::string> output_alphabet;
    output_table_fn output_table;
};

// ---------------------------------------------------------------------------
// Triple-top detection.

// Reference detector: slope tracking with plateau hold, strictly decreasing
// maxima, strictly increasing minima, count saturating at 5, count forced to
// one/two when a maximum/minimum breaks the monotone chain. Output at step t
// is 1 iff the count is 5 after processing price t. prev starts at 0 and the
// initial slope is positive.
inline std::vector<int> ttop_reference(const std::vector<int>& prices, int bits) {
    if (bits < 1 || bits > 16) throw invalid_input_error("ttop: bits must be in [1, 16]");
    if (prices.empty()) throw invalid_input_error("ttop: at least one price required");
    const long long limit = 1LL << bits;
    for (int p : prices)
        if (p < 0 || p >= limit)
            throw invalid_input_error("ttop: price " + std::to_string(p) + " needs more than " +
                                      std::to_string(bits) + " bits");
    long long last_max = limit;  // maxPossible + 1
    long long last_min = -1;     // minPossible - 1
    int count = 0;
    bool slope_positive = true;
    long long prev = 0;
    std::vector<int> out;
    out.reserve(prices.size());
    for (const int cur : prices) {
        if (slope_positive && prev > cur) {
            if (prev < last_max) {
                last_max = prev;
                count = std::min(count + 1, 5);
            } else {
                count = 1;  // chain broken; this maximum starts a new one
            }
        } else if (!slope_positive && prev < cur) {
            if (prev > last_min) {
                last_min = prev;
                count = std::min(count + 1, 5);
            } else {
                count = 2;
            }
        }
        if (prev < cur) slope_positive = true;
        else if (prev > cur) slope_positive = false;  // equal holds the slope
        out.push_back(count == 5 ? 1 : 0);
        prev = cur;
    }
    return out;
}

// Cascade of 3N+9 flip-flops over the alphabet {"0", ..., "2^N-1"}:
//   0..N-1      Previous price bits, most significant first
//   N           Slope, high = ascending, initially high
//   N+1         LastMax flag (a maximum has been stored)
//   N+2..2N+1   LastMax bits
//   2N+2        LastMin flag
//   2N+3..3N+2  LastMin bits
//   3N+3..3N+8  Count one-hot 0..5, initially Count-0
// All comparisons are computed from bit states, most-significant-bit-first.
// The output is the Count-5 state after the transition.
inline pattern_bundle ttop_cascade(int bits) {
    if (bits < 1 || bits > 16) throw invalid_input_error("ttop_cascade: bits must be in [1, 16]");
    const int N = bits;
    const int slope = N;
    const int flag_max = N + 1;
    const int max0 = N + 2;
    const int flag_min = 2 * N + 2;
    const int min0 = 2 * N + 3;
    const int count0 = 3 * N + 3;
    constexpr int kSet = 0, kReset = 1, kRead = 2;

    const auto bit = [N](int value, int i) { return (value >> (N - 1 - i)) & 1; };
    const auto prev_value = [N](const std::vector<int>& st) {
        int v = 0;
        for (int i = 0; i < N; ++i) v = (v << 1) | st[static_cast<std::size_t>(i)];
        return v;
    };
    const auto stored_value = [N](const std::vector<int>& st, int base) {
        int v = 0;
        for (int i = 0; i < N; ++i) v = (v << 1) | st[static_cast<std::size_t>(base + i)];
        return v;
    };
    const auto max_event = [=](int cur, const std::vector<int>& st) {
        return st[static_cast<std::size_t>(slope)] == 1 && prev_value(st) > cur;
    };
    const auto min_event = [=](int cur, const std::vector<int>& st) {
        return st[static_cast<std::size_t>(slope)] == 0 && prev_value(st) < cur;
    };
    const auto valid_max = [=](int cur, const std::vector<int>& st) {
        return max_event(cur, st) && (st[static_cast<std::size_t>(flag_max)] == 0 ||
                                      prev_value(st) < stored_value(st, max0));
    };
    const auto valid_min = [=](int cur, const std::vector<int>& st) {
        return min_event(cur, st) && (st[static_cast<std::size_t>(flag_min)] == 0 ||
                                      prev_value(st) > stored_value(st, min0));
    };

    pattern_bundle b;
    for (int v = 0; v < (1 << N); ++v) b.spec.alphabet.push_back(std::to_string(v));

    auto add = [&b](int initial, std::function<int(int, const std::vector<int>&)> fn) {
        cascade_component c;
        c.kind = prime_kind::flipflop;
        c.initial = initial;
        c.input_fn = std::move(fn);
        b.spec.components.push_back(std::move(c));
    };

    for (int i = 0; i < N; ++i)
        add(0, [=](int cur, const std::vector<int>&) { return bit(cur, i) ? kSet : kReset; });

    add(1, [=](int cur, const std::vector<int>& st) {
        const int prev = prev_value(st);
        if (prev < cur) return kSet;
        if (prev > cur) return kReset;
        return kRead;
    });

    add(0, [=](int cur, const std::vector<int>& st) {
        return max_event(cur, st) ? kSet : kRead;
    });
    // A stored maximum only ever decreases: bitwise minimum with prev, decided
    // per bit by the most-significant-bit-first prefix comparison.
    for (int i = 0; i < N; ++i)
        add(0, [=](int cur, const std::vector<int>& st) {
            if (!max_event(cur, st)) return kRead;
            const int prev_i = st[static_cast<std::size_t>(i)];
            if (st[static_cast<std::size_t>(flag_max)] == 0) return prev_i ? kSet : kReset;
            for (int j = 0; j < i; ++j) {
                const int sj = st[static_cast<std::size_t>(max0 + j)];
                const int pj = st[static_cast<std::size_t>(j)];
                if (sj > pj) return prev_i ? kSet : kReset;  // prev smaller, take its bit
                if (sj < pj) return kRead;                   // stored smaller, keep it
            }
            return prev_i ? kRead : kReset;  // equal prefixes: min of the two bits
        });

    add(0, [=](int cur, const std::vector<int>& st) {
        return min_event(cur, st) ? kSet : kRead;
    });
    for (int i = 0; i < N; ++i)
        add(0, [=](int cur, const std::vector<int>& st) {
            if (!min_event(cur, st)) return kRead;
            const int prev_i = st[static_cast<std::size_t>(i)];
            if (st[static_cast<std::size_t>(flag_min)] == 0) return prev_i ? kSet : kReset;
            for (int j = 0; j < i; ++j) {
                const int sj = st[static_cast<std::size_t>(min0 + j)];
                const int pj = st[static_cast<std::size_t>(j)];
                if (sj < pj) return prev_i ? kSet : kReset;  // prev larger, take its bit
                if (sj > pj) return kRead;
            }
            return prev_i ? kSet : kRead;  // equal prefixes: max of the two bits
        });

    for (int i = 0; i < 6; ++i)
        add(i == 0 ? 1 : 0, [=](int cur, const std::vector<int>& st) {
            if (valid_max(cur, st) || valid_min(cur, st)) {
                const int below = i == 0 ? 0 : st[static_cast<std::size_t>(count0 + i - 1)];
                if (below) return kSet;
                return i == 5 ? kRead : kReset;  // Count-5 saturates
            }
            if (max_event(cur, st)) return i == 1 ? kSet : kReset;
            if (min_event(cur, st)) return i == 2 ? kSet : kReset;
            return kRead;
        });

    b.output_alphabet = {"0", "1"};
    const auto components = b.spec.components;  // copy for the closure
    const int count5 = count0 + 5;
    b.output_table = [components, count5](const std::vector<std::string>& names,
                                          const std::string& letter) {
        std::vector<int> st(names.size());
        for (std::size_t i = 0; i < names.size(); ++i) st[i] = names[i] == "high" ? 1 : 0;
        step_components(components, st, std::stoi(letter));
        return st[static_cast<std::size_t>(count5)] == 1 ? std::string("1") : std::string("0");
    };
    return b;
}

// Flattened automaton; outputs read the post-transition Count-5 bit straight
// off the product index (all components are binary, component 0 is the least
// significant digit).
inline automaton ttop_automaton(int bits) {
    pattern_bundle b = ttop_cascade(bits);
    automaton a;
    a.sa = compose_cascade(b.spec);
    a.initial = static_cast<int>(
        product_index(b.spec.components, component_initials(b.spec.components)));
    a.output_alphabet = b.output_alphabet;
    const int count5 = 3 * bits + 8;
    a.outputs.resize(a.sa.delta.size());
    for (std::size_t qs = 0; qs < a.sa.delta.size(); ++qs)
        a.outputs[qs] = (a.sa.delta[qs] >> count5) & 1;
    validate(a);
    return a;
}

// ---------------------------------------------------------------------------
// Cookie domain: three rooms and a hallway, a button in the orange room that
// spawns a cookie uniformly in the green or blue room, reward for eating it.

struct cookie_observation {
    bool cookie = false;
    bool cookie_eaten = false;
    bool button_pushed = false;
    bool green_room = false;
    bool orange_room = false;
    bool blue_room = false;
    bool hallway = false;
};

inline std::vector<std::string> cookie_alphabet() {
    return {"hallway",     "orange", "orange-pushed", "green", "green-cookie",
            "green-eaten", "blue",   "blue-cookie",   "blue-eaten"};
}

inline std::string cookie_letter(const cookie_observation& o) {
    if (o.hallway) return "hallway";
    if (o.orange_room) return o.button_pushed ? "orange-pushed" : "orange";
    if (o.green_room) {
        if (o.cookie_eaten) return "green-eaten";
        return o.cookie ? "green-cookie" : "green";
    }
    if (o.cookie_eaten) return "blue-eaten";
    return o.cookie ? "blue-cookie" : "blue";
}

inline cookie_observation cookie_observation_of(const std::string& letter) {
    cookie_observation o;
    if (letter == "hallway") o.hallway = true;
    else if (letter == "orange") o.orange_room = true;
    else if (letter == "orange-pushed") o.orange_room = o.button_pushed = true;
    else if (letter == "green") o.green_room = true;
    else if (letter == "green-cookie") o.green_room = o.cookie = true;
    else if (letter == "green-eaten") o.green_room = o.cookie_eaten = true;
    else if (letter == "blue") o.blue_room = true;
    else if (letter == "blue-cookie") o.blue_room = o.cookie = true;
    else if (letter == "blue-eaten") o.blue_room = o.cookie_eaten = true;
    else throw invalid_input_error("unknown cookie observation: " + letter);
    return o;
}

struct cookie_episode {
    std::vector<cookie_observation> observations;
    std::vector<double> probabilities;  // ground truth, values in {0, 0.5, 1}
};

// Seeded random-walk agent. The emitted probability at each step is the true
// chance of finding a cookie in the location being entered, given everything
// observable so far: 0 outside the cookie rooms or with no cookie around, 0.5
// after a spawn before either cookie room was visited, else determined.
inline cookie_episode cookie_reference(std::uint64_t seed, int steps) {
    if (steps < 1) throw invalid_input_error("cookie_reference: steps must be positive");
    enum room { hall = 0, orange = 1, green = 2, blue = 3 };
    rng gen(derive_seed(seed, 0xc00c1eULL));
    cookie_episode ep;
    int loc = hall;
    int cookie_loc = 0;  // 0 none, else green/blue
    bool visited = false;

    for (int t = 0; t < steps; ++t) {
        int dest = hall;
        bool press = false, eat = false;
        switch (loc) {
            case hall: {
                const int pick = static_cast<int>(gen.below(3));
                dest = pick == 0 ? orange : pick == 1 ? green : blue;
                break;
            }
            case orange:
                if (gen.chance(0.5)) {
                    press = true;
                    dest = orange;
                } else {
                    dest = hall;
                }
                break;
            default:
                if (cookie_loc == loc && gen.chance(0.5)) {
                    eat = true;
                    dest = loc;
                } else {
                    dest = hall;
                }
        }

        double y = 0.0;
        if ((dest == green || dest == blue) && cookie_loc != 0)
            y = visited ? (cookie_loc == dest ? 1.0 : 0.0) : 0.5;
        ep.probabilities.push_back(y);

        cookie_observation o;
        o.hallway = dest == hall;
        o.orange_room = dest == orange;
        o.green_room = dest == green;
        o.blue_room = dest == blue;
        o.button_pushed = press;
        o.cookie_eaten = eat;
        o.cookie = !eat && cookie_loc != 0 && cookie_loc == dest;
        ep.observations.push_back(o);

        if (press) {
            cookie_loc = gen.chance(0.5) ? green : blue;
            visited = false;
        }
        if (eat) cookie_loc = 0;
        if (dest == green || dest == blue) visited = true;
        loc = dest;
    }
    return ep;
}

// Three independent flip-flops:
//   F1 cookie around: set on button push, reset on eating
//   F2 cookie room visited since spawn: reset on push, set on green/blue
//   F3 cookie in green: decided by (room, cookie) sightings
inline pattern_bundle cookie_cascade() {
    constexpr int kSet = 0, kReset = 1, kRead = 2;
    pattern_bundle b;
    b.spec.alphabet = cookie_alphabet();
    // letter indices: 0 hallway, 1 orange, 2 orange-pushed, 3 green,
    // 4 green-cookie, 5 green-eaten, 6 blue, 7 blue-cookie, 8 blue-eaten
    auto add = [&b](std::function<int(int, const std::vector<int>&)> fn) {
        cascade_component c;
        c.kind = prime_kind::flipflop;
        c.initial = 0;
        c.input_fn = std::move(fn);
        b.spec.components.push_back(std::move(c));
    };
    add([](int letter, const std::vector<int>&) {
        if (letter == 2) return kSet;
        if (letter == 5 || letter == 8) return kReset;
        return kRead;
    });
    add([](int letter, const std::vector<int>&) {
        if (letter == 2) return kReset;
        if (letter >= 3) return kSet;
        return kRead;
    });
    add([](int letter, const std::vector<int>&) {
        if (letter == 4 || letter == 6 || letter == 8) return kSet;   // cookie seen in green,
        if (letter == 3 || letter == 5 || letter == 7) return kReset; // or ruled out of blue
        return kRead;
    });

    b.output_alphabet = {"0", "0.5", "1"};
    b.output_table = [](const std::vector<std::string>& names, const std::string& letter) {
        const bool f1 = names[0] == "high", f2 = names[1] == "high", f3 = names[2] == "high";
        const bool in_green = letter.rfind("green", 0) == 0;
        const bool in_blue = letter.rfind("blue", 0) == 0;
        if (!in_green && !in_blue) return std::string("0");
        if (!f1) return std::string("0");
        if (!f2) return std::string("0.5");
        return (in_green == f3) ? std::string("1") : std::string("0");
    };
    return b;
}

inline automaton cookie_automaton() {
    pattern_bundle b = cookie_cascade();
    automaton a;
    a.sa = compose_cascade(b.spec);
    a.initial = static_cast<int>(
        product_index(b.spec.components, component_initials(b.spec.components)));
    a.output_alphabet = b.output_alphabet;
    for (int q = 0; q < a.sa.n_states(); ++q) {
        std::vector<std::string> names;
        {
            std::string rest = a.sa.states[static_cast<std::size_t>(q)];
            std::size_t pos = 0, bar = 0;
            while ((bar = rest.find('|', pos)) != std::string::npos) {
                names.push_back(rest.substr(pos, bar - pos));
                pos = bar + 1;
            }
            names.push_back(rest.substr(pos));
        }
        for (const auto& letter : b.spec.alphabet) {
            const std::string y = b.output_table(names, letter);
            int idx = -1;
            for (std::size_t k = 0; k < a.output_alphabet.size(); ++k)
                if (a.output_alphabet[k] == y) idx = static_cast<int>(k);
            a.outputs.push_back(idx);
        }
    }
    validate(a);
    return a;
}

// ---------------------------------------------------------------------------
// Parity of the string length over a one-letter alphabet: the canonical
// automaton a single toggle realizes and no flip-flop cascade can.

struct parity_pair {
    automaton acceptor;
    cascade_spec spec;
};

inline parity_pair parity_spec() {
    parity_pair p;
    p.acceptor.sa = toggle_semiautomaton({{"a", "toggle"}});
    p.acceptor.initial = p.acceptor.sa.state_index("low");
    p.acceptor.output_alphabet = {"0", "1"};
    p.acceptor.outputs = {1, 0};  // theta(low, a) = 1: odd length accepted
    validate(p.acceptor);

    p.spec.alphabet = {"a"};
    cascade_component c;
    c.kind = prime_kind::toggle;
    c.initial = 0;
    c.input_fn = [](int, const std::vector<int>&) { return 2; };  // always toggle
    p.spec.components = {c};
    return p;
}

}  // namespace rnc
