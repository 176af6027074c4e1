#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rnc/automata.hpp"
#include "rnc/errors.hpp"
#include "rnc/interval.hpp"

namespace rnc {

enum class activation_kind { sign, tanh, synthetic };
enum class neuron_order { first, second };
enum class neuron_family { flipflop, toggle, group };

inline const char* to_string(activation_kind a) {
    switch (a) {
        case activation_kind::sign: return "sign";
        case activation_kind::tanh: return "tanh";
        case activation_kind::synthetic: return "synthetic";
    }
    return "sign";
}

inline const char* to_string(neuron_order o) {
    return o == neuron_order::first ? "first" : "second";
}

struct named_interval {
    std::string name;
    interval iv;
};

// A concrete neuron: activation and order fix the raw dynamics; the named
// interval partitions carry the symbolic meaning (state interpretation and
// input letters). Constructor parameters are kept so conformance of the
// stored bounds to the defining inequalities stays checkable.
struct neuron_spec {
    activation_kind activation = activation_kind::sign;
    neuron_order order = neuron_order::first;
    neuron_family family = neuron_family::flipflop;
    double w = 0.0;
    double a = std::numeric_limits<double>::quiet_NaN();
    double b = std::numeric_limits<double>::quiet_NaN();
    double margin = std::numeric_limits<double>::quiet_NaN();  // synthetic only
    std::vector<std::vector<int>> cayley;                      // group family only
    std::vector<named_interval> state_partition;
    std::vector<named_interval> input_partition;

    int state_index(const std::string& name) const {
        for (std::size_t i = 0; i < state_partition.size(); ++i)
            if (state_partition[i].name == name) return static_cast<int>(i);
        return -1;
    }
    int input_index(const std::string& name) const {
        for (std::size_t i = 0; i < input_partition.size(); ++i)
            if (input_partition[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

inline double sign_activation(double x) { return x >= 0.0 ? 1.0 : -1.0; }  // sign(0) = +1

namespace detail {

// Bound formulas, shared verbatim between constructors and the conformance
// checks so both sides round identically.

struct flipflop_bounds {
    double x_low_lo, x_low_hi, x_high_lo, x_high_hi;
    double reset_hi, mid_lo, mid_hi, set_lo;  // mid = V_read or V_toggle
};

inline flipflop_bounds sign_flipflop_bounds(double w, double a) {
    return {-1.0, -1.0, 1.0, 1.0, w * (-a - 1.0), w * (a - 1.0), w * (1.0 - a), w * (a + 1.0)};
}

inline flipflop_bounds tanh_flipflop_bounds(double w, double a, double b) {
    const double fa = std::tanh(w * a), fb = std::tanh(w * b);
    return {-1.0, fa, fb, 1.0, w * (a - 1.0), w * (b - fb), w * (a - fa), w * (b + 1.0)};
}

inline flipflop_bounds sign_toggle_bounds(double w, double a) {
    // w < 0 flips orientation; stored with lower <= upper.
    return {-1.0, -1.0, 1.0, 1.0, w * (a + 1.0), w * (1.0 - a), w * (a - 1.0), w * (-a - 1.0)};
}

inline flipflop_bounds tanh_toggle_bounds(double w, double a, double b) {
    const double fa = std::tanh(w * a), fb = std::tanh(w * b);
    return {-1.0, fb, fa, 1.0, w * (b + 1.0), w * (a - fb), w * (b - fa), w * (a - 1.0)};
}

struct c2_bounds {
    double x0_lo, x0_hi, x1_lo, x1_hi;
    double v0_lo, v0_hi, v1_lo, v1_hi;  // one end infinite on each
};

inline c2_bounds c2_sign_bounds(double w, double a) {
    (void)w;
    if (a > 0.0) return {-1.0, -1.0, 1.0, 1.0, a, inf, -inf, -a};
    return {-1.0, -1.0, 1.0, 1.0, -inf, a, -a, inf};
}

inline c2_bounds c2_tanh_bounds(double w, double a) {
    const double fa = std::tanh(w * a);  // positive in both regimes
    if (a > 0.0) return {-1.0, -fa, fa, 1.0, a / fa, inf, -inf, -a / fa};
    return {-1.0, -fa, fa, 1.0, -inf, a / fa, -a / fa, inf};
}

inline interval synthetic_slot(int i, int n, double margin) {
    const double center = static_cast<double>(i) / static_cast<double>(n);
    return {center - margin, center + margin};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructors.

inline neuron_spec make_sign_flipflop(double w, double a) {
    if (!(w > 0.0)) throw invalid_input_error("sign flip-flop requires w > 0");
    if (!(a > 0.0 && a < 1.0)) throw invalid_input_error("sign flip-flop requires 0 < a < 1");
    const auto b = detail::sign_flipflop_bounds(w, a);
    neuron_spec s;
    s.activation = activation_kind::sign;
    s.order = neuron_order::first;
    s.family = neuron_family::flipflop;
    s.w = w;
    s.a = a;
    s.state_partition = {{"low", {b.x_low_lo, b.x_low_hi}}, {"high", {b.x_high_lo, b.x_high_hi}}};
    s.input_partition = {{"set", {b.set_lo, inf}},
                         {"reset", {-inf, b.reset_hi}},
                         {"read", {b.mid_lo, b.mid_hi}}};
    return s;
}

inline neuron_spec make_tanh_flipflop(double w, double a, double b) {
    if (!(w > 1.0)) throw invalid_input_error("tanh flip-flop requires w > 1");
    if (!(a < b)) throw invalid_input_error("tanh flip-flop requires a < b");
    if (!(a - std::tanh(w * a) > b - std::tanh(w * b)))
        throw invalid_input_error("tanh flip-flop requires a - tanh(w*a) > b - tanh(w*b)");
    const auto bd = detail::tanh_flipflop_bounds(w, a, b);
    neuron_spec s;
    s.activation = activation_kind::tanh;
    s.order = neuron_order::first;
    s.family = neuron_family::flipflop;
    s.w = w;
    s.a = a;
    s.b = b;
    s.state_partition = {{"low", {bd.x_low_lo, bd.x_low_hi}}, {"high", {bd.x_high_lo, bd.x_high_hi}}};
    s.input_partition = {{"set", {bd.set_lo, inf}},
                         {"reset", {-inf, bd.reset_hi}},
                         {"read", {bd.mid_lo, bd.mid_hi}}};
    return s;
}

// The read interval is longest when a and b sit where f'(x) = 1, i.e.
// tanh(w x) = +/- sqrt(1 - 1/w).
inline std::pair<double, double> optimal_tanh_ab(double w) {
    if (!(w > 1.0)) throw invalid_input_error("optimal_tanh_ab requires w > 1");
    const double b = std::atanh(std::sqrt(1.0 - 1.0 / w)) / w;
    return {-b, b};
}

inline neuron_spec make_sign_toggle(double w, double a) {
    if (!(w < 0.0)) throw invalid_input_error("sign toggle requires w < 0");
    if (!(a > 0.0 && a < 1.0)) throw invalid_input_error("sign toggle requires 0 < a < 1");
    const auto b = detail::sign_toggle_bounds(w, a);
    neuron_spec s;
    s.activation = activation_kind::sign;
    s.order = neuron_order::first;
    s.family = neuron_family::toggle;
    s.w = w;
    s.a = a;
    s.state_partition = {{"low", {b.x_low_lo, b.x_low_hi}}, {"high", {b.x_high_lo, b.x_high_hi}}};
    s.input_partition = {{"set", {b.set_lo, inf}},
                         {"reset", {-inf, b.reset_hi}},
                         {"toggle", {b.mid_lo, b.mid_hi}}};
    return s;
}

inline neuron_spec make_tanh_toggle(double w, double a, double b) {
    if (!(w < -1.0)) throw invalid_input_error("tanh toggle requires w < -1");
    if (!(a < b)) throw invalid_input_error("tanh toggle requires a < b");
    if (!(a + std::tanh(w * a) > b + std::tanh(w * b)))
        throw invalid_input_error("tanh toggle requires a + tanh(w*a) > b + tanh(w*b)");
    const auto bd = detail::tanh_toggle_bounds(w, a, b);
    neuron_spec s;
    s.activation = activation_kind::tanh;
    s.order = neuron_order::first;
    s.family = neuron_family::toggle;
    s.w = w;
    s.a = a;
    s.b = b;
    s.state_partition = {{"low", {bd.x_low_lo, bd.x_low_hi}}, {"high", {bd.x_high_lo, bd.x_high_hi}}};
    s.input_partition = {{"set", {bd.set_lo, inf}},
                         {"reset", {-inf, bd.reset_hi}},
                         {"toggle", {bd.mid_lo, bd.mid_hi}}};
    return s;
}

inline neuron_spec make_c2_sign(double w, double a) {
    if (!(w != 0.0) || !((a > 0.0 && w > 0.0) || (a < 0.0 && w < 0.0)))
        throw invalid_input_error("second-order sign C2 neuron requires a and w of the same nonzero sign");
    const auto bd = detail::c2_sign_bounds(w, a);
    neuron_spec s;
    s.activation = activation_kind::sign;
    s.order = neuron_order::second;
    s.family = neuron_family::group;
    s.cayley = cyclic_group_table(2);
    s.w = w;
    s.a = a;
    s.state_partition = {{"0", {bd.x0_lo, bd.x0_hi}}, {"1", {bd.x1_lo, bd.x1_hi}}};
    s.input_partition = {{"0", {bd.v0_lo, bd.v0_hi}}, {"1", {bd.v1_lo, bd.v1_hi}}};
    return s;
}

inline neuron_spec make_c2_tanh(double w, double a) {
    if (!(w != 0.0) || !((a > 0.0 && w > 0.0) || (a < 0.0 && w < 0.0)))
        throw invalid_input_error("second-order tanh C2 neuron requires a and w of the same nonzero sign");
    const auto bd = detail::c2_tanh_bounds(w, a);
    neuron_spec s;
    s.activation = activation_kind::tanh;
    s.order = neuron_order::second;
    s.family = neuron_family::group;
    s.cayley = cyclic_group_table(2);
    s.w = w;
    s.a = a;
    s.state_partition = {{"0", {bd.x0_lo, bd.x0_hi}}, {"1", {bd.x1_lo, bd.x1_hi}}};
    s.input_partition = {{"0", {bd.v0_lo, bd.v0_hi}}, {"1", {bd.v1_lo, bd.v1_hi}}};
    return s;
}

// Synthetic grouplike neuron: disjoint interval slots laid out on [0, 1],
// dynamics is the exact piecewise map sending (X_i, V_j) to the center of
// X_{i*j}. Satisfies the abstract inclusion conditions by construction.
inline neuron_spec make_synthetic_group_neuron(const std::vector<std::vector<int>>& cayley,
                                               double margin) {
    validate_group_table(cayley);
    const int n = static_cast<int>(cayley.size());
    if (!(margin > 0.0 && margin < 0.5 / static_cast<double>(n)))
        throw invalid_input_error("synthetic group neuron requires 0 < margin < 1/(2n)");
    neuron_spec s;
    s.activation = activation_kind::synthetic;
    s.order = neuron_order::first;
    s.family = neuron_family::group;
    s.cayley = cayley;
    s.margin = margin;
    for (int i = 0; i < n; ++i) {
        s.state_partition.push_back({std::to_string(i), detail::synthetic_slot(i, n, margin)});
        s.input_partition.push_back({std::to_string(i), detail::synthetic_slot(i, n, margin)});
    }
    return s;
}

// ---------------------------------------------------------------------------
// Dynamics and interpretation.

inline std::optional<std::string> state_interpretation(const neuron_spec& s, double x) {
    for (const auto& ni : s.state_partition)
        if (ni.iv.contains(x)) return ni.name;
    return std::nullopt;
}

inline std::optional<std::string> input_interpretation(const neuron_spec& s, double v) {
    for (const auto& ni : s.input_partition)
        if (ni.iv.contains(v)) return ni.name;
    return std::nullopt;
}

inline double neuron_step(const neuron_spec& s, double x, double v) {
    if (s.activation == activation_kind::synthetic) {
        int i = -1, j = -1;
        for (std::size_t k = 0; k < s.state_partition.size(); ++k)
            if (s.state_partition[k].iv.contains(x)) i = static_cast<int>(k);
        for (std::size_t k = 0; k < s.input_partition.size(); ++k)
            if (s.input_partition[k].iv.contains(v)) j = static_cast<int>(k);
        if (i < 0) throw integrity_error("synthetic neuron: state outside every state interval");
        if (j < 0) throw integrity_error("synthetic neuron: input outside every input interval");
        const int target = s.cayley[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        return s.state_partition[static_cast<std::size_t>(target)].iv.representative();
    }
    const double pre = s.order == neuron_order::first ? s.w * x + v : s.w * x * v;
    return s.activation == activation_kind::sign ? sign_activation(pre) : std::tanh(pre);
}

// ---------------------------------------------------------------------------
// Condition verification.

struct condition_result {
    std::string name;
    std::string method = "corner-exact";
    bool corner_pass = true;
    bool grid_pass = true;
    bool has_witness = false;
    double witness_x = 0.0, witness_v = 0.0, witness_result = 0.0;
};

struct core_condition_report {
    std::vector<condition_result> conditions;
    std::vector<std::string> bound_violations;  // conformance of stored bounds to the formulas
    int grid = 0;
    bool all_pass = true;    // semantic inclusions, corners + grids
    bool bounds_pass = true;
    bool pass() const { return all_pass && bounds_pass; }
};

namespace detail {

struct inclusion {
    int from, via, to;  // indices into state/input/state partitions
};

inline std::vector<inclusion> core_inclusions(const neuron_spec& s) {
    std::vector<inclusion> out;
    if (s.family == neuron_family::group) {
        const int n = static_cast<int>(s.state_partition.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.push_back({i, j, s.cayley[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]});
        return out;
    }
    const int low = s.state_index("low"), high = s.state_index("high");
    const int set = s.input_index("set"), reset = s.input_index("reset");
    out.push_back({low, set, high});
    out.push_back({high, set, high});
    out.push_back({low, reset, low});
    out.push_back({high, reset, low});
    if (s.family == neuron_family::flipflop) {
        const int read = s.input_index("read");
        out.push_back({low, read, low});
        out.push_back({high, read, high});
    } else {
        const int toggle = s.input_index("toggle");
        out.push_back({low, toggle, high});
        out.push_back({high, toggle, low});
    }
    return out;
}

}  // namespace detail

inline core_condition_report verify_core_conditions(const neuron_spec& s, int grid) {
    if (grid < 1) throw invalid_input_error("verify_core_conditions: grid must be positive");
    core_condition_report report;
    report.grid = grid;
    const double corner_tol = s.activation == activation_kind::tanh ? 1e-12 : 0.0;
    const double grid_tol = 1e-12;

    for (const auto& inc : detail::core_inclusions(s)) {
        const auto& from = s.state_partition[static_cast<std::size_t>(inc.from)];
        const auto& via = s.input_partition[static_cast<std::size_t>(inc.via)];
        const auto& to = s.state_partition[static_cast<std::size_t>(inc.to)];
        condition_result res;
        res.name = "step(X_" + from.name + ", V_" + via.name + ") in X_" + to.name;

        auto record = [&](double x, double v, double y, bool corner) {
            bool ok = to.iv.contains(y, corner ? corner_tol : grid_tol);
            if (!ok && !res.has_witness) {
                res.has_witness = true;
                res.witness_x = x;
                res.witness_v = v;
                res.witness_result = y;
            }
            (corner ? res.corner_pass : res.grid_pass) &= ok;
        };

        // The pre-activation is affine (first order) or bilinear (second
        // order) in (x, v), so its extremes over the box sit at corners, and
        // the activation is monotone: corner containment bounds the whole box
        // image. Infinite corners evaluate through the activation's limits.
        for (double x : {from.iv.lo, from.iv.hi})
            for (double v : {via.iv.lo, via.iv.hi}) record(x, v, neuron_step(s, x, v), true);

        for (double x : grid_points(from.iv, grid))
            for (double v : grid_points(via.iv, grid)) record(x, v, neuron_step(s, x, v), false);

        report.all_pass &= res.corner_pass && res.grid_pass;
        report.conditions.push_back(std::move(res));
    }

    // Conformance of the stored bounds to the defining inequalities, computed
    // through the same formula helpers the constructors use. One-sided for
    // input intervals (narrower is still conformant), exact for the state
    // partition, which the propositions fix outright.
    auto flag = [&](bool bad, const std::string& what) {
        if (bad) {
            report.bound_violations.push_back(what);
            report.bounds_pass = false;
        }
    };
    auto check_two_state = [&](const detail::flipflop_bounds& bd, const std::string& mid_name) {
        const auto& xl = s.state_partition[static_cast<std::size_t>(s.state_index("low"))].iv;
        const auto& xh = s.state_partition[static_cast<std::size_t>(s.state_index("high"))].iv;
        const auto& vset = s.input_partition[static_cast<std::size_t>(s.input_index("set"))].iv;
        const auto& vreset = s.input_partition[static_cast<std::size_t>(s.input_index("reset"))].iv;
        const auto& vmid = s.input_partition[static_cast<std::size_t>(s.input_index(mid_name))].iv;
        flag(xl.lo != bd.x_low_lo || xl.hi != bd.x_low_hi, "X_low differs from the defining bounds");
        flag(xh.lo != bd.x_high_lo || xh.hi != bd.x_high_hi, "X_high differs from the defining bounds");
        flag(!(vset.lo >= bd.set_lo), "V_set lower bound below the defining bound");
        flag(!(vreset.hi <= bd.reset_hi), "V_reset upper bound above the defining bound");
        flag(!(vmid.lo >= bd.mid_lo), "V_" + mid_name + " lower bound below the defining bound");
        flag(!(vmid.hi <= bd.mid_hi), "V_" + mid_name + " upper bound above the defining bound");
    };
    auto check_c2 = [&](const detail::c2_bounds& bd) {
        const auto& x0 = s.state_partition[static_cast<std::size_t>(s.state_index("0"))].iv;
        const auto& x1 = s.state_partition[static_cast<std::size_t>(s.state_index("1"))].iv;
        const auto& v0 = s.input_partition[static_cast<std::size_t>(s.input_index("0"))].iv;
        const auto& v1 = s.input_partition[static_cast<std::size_t>(s.input_index("1"))].iv;
        flag(x0.lo != bd.x0_lo || x0.hi != bd.x0_hi, "X_0 differs from the defining bounds");
        flag(x1.lo != bd.x1_lo || x1.hi != bd.x1_hi, "X_1 differs from the defining bounds");
        flag(!(v0.lo >= bd.v0_lo) || !(v0.hi <= bd.v0_hi), "V_0 extends past the defining bound");
        flag(!(v1.lo >= bd.v1_lo) || !(v1.hi <= bd.v1_hi), "V_1 extends past the defining bound");
    };
    switch (s.family) {
        case neuron_family::flipflop:
            check_two_state(s.activation == activation_kind::sign
                                ? detail::sign_flipflop_bounds(s.w, s.a)
                                : detail::tanh_flipflop_bounds(s.w, s.a, s.b),
                            "read");
            break;
        case neuron_family::toggle:
            check_two_state(s.activation == activation_kind::sign
                                ? detail::sign_toggle_bounds(s.w, s.a)
                                : detail::tanh_toggle_bounds(s.w, s.a, s.b),
                            "toggle");
            break;
        case neuron_family::group:
            if (s.activation == activation_kind::synthetic) {
                const int n = static_cast<int>(s.cayley.size());
                for (int i = 0; i < n; ++i) {
                    const interval slot = detail::synthetic_slot(i, n, s.margin);
                    const auto& xi = s.state_partition[static_cast<std::size_t>(i)].iv;
                    const auto& vi = s.input_partition[static_cast<std::size_t>(i)].iv;
                    flag(xi.lo != slot.lo || xi.hi != slot.hi,
                         "X_" + std::to_string(i) + " differs from the layout formula");
                    flag(vi.lo != slot.lo || vi.hi != slot.hi,
                         "V_" + std::to_string(i) + " differs from the layout formula");
                }
            } else {
                check_c2(s.activation == activation_kind::sign ? detail::c2_sign_bounds(s.w, s.a)
                                                               : detail::c2_tanh_bounds(s.w, s.a));
            }
            break;
    }
    return report;
}

// Partition sanity shared by the property tests: state intervals pairwise
// disjoint, input intervals pairwise disjoint and of nonzero length.
inline bool partitions_well_formed(const neuron_spec& s) {
    for (std::size_t i = 0; i < s.state_partition.size(); ++i)
        for (std::size_t j = i + 1; j < s.state_partition.size(); ++j)
            if (!disjoint(s.state_partition[i].iv, s.state_partition[j].iv)) return false;
    for (std::size_t i = 0; i < s.input_partition.size(); ++i) {
        if (!(s.input_partition[i].iv.length() > 0.0)) return false;
        for (std::size_t j = i + 1; j < s.input_partition.size(); ++j)
            if (!disjoint(s.input_partition[i].iv, s.input_partition[j].iv)) return false;
    }
    for (const auto& ni : s.state_partition)
        if (!(ni.iv.lo <= ni.iv.hi)) return false;
    return true;
}

}  // namespace rnc
