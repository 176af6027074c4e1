#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rnc/neurons.hpp"
#include "rnc/rng.hpp"

using namespace rnc;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

// Values frozen from an independent evaluation of the closed-form bounds.
constexpr double kOptB2 = 0.4406867935097716;       // optimal b at w=2
constexpr double kRead2 = 0.5328399753535522;       // read half-width at w=2
constexpr double kOptB4 = 0.32923947423120414;      // optimal b at w=4
constexpr double kRead4 = 2.147143718212938;        // read half-width at w=4
constexpr double kTanh2 = 0.9640275800758169;       // tanh(2)
constexpr double kInvTanh2 = 1.0373147207275482;    // 1/tanh(2)
constexpr double kTanh3 = 0.9950547536867305;       // tanh(3)
constexpr double kTanh08814 = 0.7071199874301226;   // tanh(0.8814)

neuron_spec optimal_flipflop(double w) {
    auto [a, b] = optimal_tanh_ab(w);
    return make_tanh_flipflop(w, a, b);
}

neuron_spec optimal_toggle(double w) {
    auto [a, b] = optimal_tanh_ab(-w);
    return make_tanh_toggle(w, a, b);
}

double read_length(const neuron_spec& s) {
    return s.input_partition[static_cast<std::size_t>(s.input_index("read"))].iv.length();
}

bool report_clean(const core_condition_report& r) {
    if (!r.all_pass || !r.bounds_pass) return false;
    for (const auto& c : r.conditions)
        if (!c.corner_pass || !c.grid_pass || c.has_witness) return false;
    return true;
}

}  // namespace

TEST_CASE("sign flip-flop intervals match the defining formulas") {
    const neuron_spec s = make_sign_flipflop(1.0, 0.5);
    CHECK(s.state_partition[0].name == "low");
    CHECK(s.state_partition[0].iv.lo == -1.0);
    CHECK(s.state_partition[0].iv.hi == -1.0);
    CHECK(s.state_partition[1].iv.lo == 1.0);
    CHECK(s.state_partition[1].iv.hi == 1.0);
    const auto& set = s.input_partition[static_cast<std::size_t>(s.input_index("set"))].iv;
    const auto& reset = s.input_partition[static_cast<std::size_t>(s.input_index("reset"))].iv;
    const auto& read = s.input_partition[static_cast<std::size_t>(s.input_index("read"))].iv;
    CHECK(set.lo == 1.5);
    CHECK(set.hi == inf);
    CHECK(reset.lo == -inf);
    CHECK(reset.hi == -1.5);
    CHECK(read.lo == -0.5);
    CHECK(read.hi == 0.5);

    CHECK_THROWS_WITH(make_sign_flipflop(-1.0, 0.5), ContainsSubstring("w > 0"));
    CHECK_THROWS_WITH(make_sign_flipflop(1.0, 1.5), ContainsSubstring("0 < a < 1"));
}

TEST_CASE("optimal tanh flip-flop window at w=2 matches frozen values") {
    const auto [a, b] = optimal_tanh_ab(2.0);
    CHECK_THAT(b, WithinAbs(kOptB2, 1e-12));
    CHECK_THAT(a, WithinAbs(-kOptB2, 1e-12));

    const neuron_spec s = make_tanh_flipflop(2.0, a, b);
    const auto& read = s.input_partition[static_cast<std::size_t>(s.input_index("read"))].iv;
    CHECK_THAT(read.lo, WithinAbs(-kRead2, 1e-12));
    CHECK_THAT(read.hi, WithinAbs(kRead2, 1e-12));
    const auto& low = s.state_partition[static_cast<std::size_t>(s.state_index("low"))].iv;
    const auto& high = s.state_partition[static_cast<std::size_t>(s.state_index("high"))].iv;
    CHECK(low.lo == -1.0);
    CHECK_THAT(low.hi, WithinAbs(-0.7071067811865476, 1e-12));  // f(a) = -sqrt(1/2)
    CHECK_THAT(high.lo, WithinAbs(0.7071067811865476, 1e-12));
    CHECK(high.hi == 1.0);

    // The optimal window is a strict maximum among valid same-shape choices.
    const double best = read_length(s);
    CHECK(best > read_length(make_tanh_flipflop(2.0, 0.9 * a, 0.9 * b)));
    CHECK(best > read_length(make_tanh_flipflop(2.0, 1.1 * a, 1.1 * b)));
}

TEST_CASE("optimal tanh flip-flop window at w=4 matches frozen values") {
    const auto [a, b] = optimal_tanh_ab(4.0);
    CHECK_THAT(b, WithinAbs(kOptB4, 1e-12));
    const neuron_spec s = make_tanh_flipflop(4.0, a, b);
    const auto& read = s.input_partition[static_cast<std::size_t>(s.input_index("read"))].iv;
    CHECK_THAT(read.lo, WithinAbs(-kRead4, 1e-12));
    CHECK_THAT(read.hi, WithinAbs(kRead4, 1e-12));
}

TEST_CASE("tanh flip-flop rejects parameters violating its inequalities") {
    CHECK_THROWS_WITH(make_tanh_flipflop(0.5, -0.3, 0.3), ContainsSubstring("w > 1"));
    CHECK_THROWS_WITH(make_tanh_flipflop(2.0, 0.3, 0.3), ContainsSubstring("a < b"));
    CHECK_THROWS_WITH(make_tanh_flipflop(2.0, -2.0, 2.0),
                      ContainsSubstring("a - tanh(w*a) > b - tanh(w*b)"));
    CHECK_THROWS_WITH(optimal_tanh_ab(1.0), ContainsSubstring("w > 1"));
}

TEST_CASE("sign toggle intervals and rejections") {
    const neuron_spec s = make_sign_toggle(-1.0, 0.5);
    const auto& set = s.input_partition[static_cast<std::size_t>(s.input_index("set"))].iv;
    const auto& reset = s.input_partition[static_cast<std::size_t>(s.input_index("reset"))].iv;
    const auto& tog = s.input_partition[static_cast<std::size_t>(s.input_index("toggle"))].iv;
    CHECK(set.lo == 1.5);
    CHECK(set.hi == inf);
    CHECK(reset.hi == -1.5);
    CHECK(tog.lo == -0.5);
    CHECK(tog.hi == 0.5);

    CHECK_THROWS_WITH(make_sign_toggle(1.0, 0.5), ContainsSubstring("w < 0"));
    CHECK_THROWS_WITH(make_sign_toggle(-1.0, 0.0), ContainsSubstring("0 < a < 1"));
}

TEST_CASE("tanh toggle matches the symmetric construction") {
    const neuron_spec s = make_tanh_toggle(-2.0, -0.4407, 0.4407);
    const auto& high = s.state_partition[static_cast<std::size_t>(s.state_index("high"))].iv;
    const auto& low = s.state_partition[static_cast<std::size_t>(s.state_index("low"))].iv;
    CHECK_THAT(high.lo, WithinAbs(kTanh08814, 1e-12));  // f(a) = tanh(-w a)
    CHECK(high.hi == 1.0);
    CHECK_THAT(low.hi, WithinAbs(-kTanh08814, 1e-12));

    const auto& tog = s.input_partition[static_cast<std::size_t>(s.input_index("toggle"))].iv;
    const double x = high.representative();
    const double y = neuron_step(s, x, tog.representative());
    CHECK(low.contains(y, 1e-12));

    CHECK_THROWS_WITH(make_tanh_toggle(-2.0, 0.4, 0.4), ContainsSubstring("a < b"));
    CHECK_THROWS_WITH(make_tanh_toggle(-0.5, -0.3, 0.3), ContainsSubstring("w < -1"));

    const neuron_spec opt = optimal_toggle(-2.0);
    const auto& vt = opt.input_partition[static_cast<std::size_t>(opt.input_index("toggle"))].iv;
    CHECK_THAT(vt.lo, WithinAbs(-kRead2, 1e-12));  // same window as the flip-flop at |w|
    CHECK_THAT(vt.hi, WithinAbs(kRead2, 1e-12));
}

TEST_CASE("C2 sign neuron realizes the group action") {
    const neuron_spec s = make_c2_sign(1.0, 0.5);
    CHECK(neuron_step(s, 1.0, -1.0) == -1.0);  // 1*1 = 0
    CHECK(neuron_step(s, -1.0, -1.0) == 1.0);  // 0*1 = 1
    CHECK(neuron_step(s, -1.0, 1.0) == -1.0);  // 0*0 = 0, identity letter
    CHECK(neuron_step(s, 1.0, 1.0) == 1.0);

    const neuron_spec m = make_c2_sign(-1.0, -0.5);
    const auto& v1 = m.input_partition[static_cast<std::size_t>(m.input_index("1"))].iv;
    CHECK(v1.lo == 0.5);
    CHECK(v1.hi == inf);
    CHECK(neuron_step(m, 1.0, 1.0) == -1.0);  // letter 1 flips

    CHECK_THROWS_WITH(make_c2_sign(1.0, -0.5), ContainsSubstring("same nonzero sign"));
    CHECK_THROWS_WITH(make_c2_sign(0.0, 0.5), ContainsSubstring("same nonzero sign"));
}

TEST_CASE("C2 tanh neuron frozen bounds and boundary identities") {
    const neuron_spec s = make_c2_tanh(2.0, 1.0);
    const auto& x1 = s.state_partition[static_cast<std::size_t>(s.state_index("1"))].iv;
    const auto& v0 = s.input_partition[static_cast<std::size_t>(s.input_index("0"))].iv;
    CHECK_THAT(x1.lo, WithinAbs(kTanh2, 1e-12));
    CHECK_THAT(v0.lo, WithinAbs(kInvTanh2, 1e-12));
    CHECK(v0.hi == inf);

    const double fa = x1.lo;
    CHECK_THAT(neuron_step(s, fa, v0.lo), WithinAbs(fa, 1e-12));    // boundary fixed
    CHECK_THAT(neuron_step(s, -fa, -v0.lo), WithinAbs(fa, 1e-12));  // product of signs
    CHECK(x1.contains(neuron_step(s, fa, v0.lo), 1e-12));

    const neuron_spec m = make_c2_tanh(-2.0, -1.0);
    const auto& mv0 = m.input_partition[static_cast<std::size_t>(m.input_index("0"))].iv;
    CHECK(mv0.lo == -inf);
    CHECK_THAT(mv0.hi, WithinAbs(-kInvTanh2, 1e-12));
}

TEST_CASE("C2 interpretation matches the cayley table on corner points") {
    for (const neuron_spec& s :
         {make_c2_sign(1.0, 0.5), make_c2_sign(-2.0, -0.25), make_c2_tanh(2.0, 1.0),
          make_c2_tanh(-3.0, -0.7)}) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const interval xs = s.state_partition[static_cast<std::size_t>(i)].iv;
                const interval vs = truncated(s.input_partition[static_cast<std::size_t>(j)].iv);
                for (double x : {xs.lo, xs.hi, xs.representative()})
                    for (double v : {vs.lo, vs.hi, vs.representative()}) {
                        const auto got = state_interpretation(s, neuron_step(s, x, v));
                        REQUIRE(got.has_value());
                        CHECK(*got == std::to_string(s.cayley[static_cast<std::size_t>(i)]
                                                             [static_cast<std::size_t>(j)]));
                    }
            }
    }
}

TEST_CASE("synthetic group neuron layout and action") {
    const neuron_spec c2 = make_synthetic_group_neuron(cyclic_group_table(2), 0.1);
    CHECK(c2.state_partition[0].iv.lo == -0.1);
    CHECK(c2.state_partition[0].iv.hi == 0.1);
    CHECK(c2.state_partition[1].iv.lo == 0.4);
    CHECK(c2.state_partition[1].iv.hi == 0.6);

    const neuron_spec c3 = make_synthetic_group_neuron(cyclic_group_table(3), 0.15);
    const double x = c3.state_partition[2].iv.representative();
    const double v = c3.input_partition[2].iv.representative();
    CHECK(state_interpretation(c3, neuron_step(c3, x, v)) == "1");  // 2*2 = 1 mod 3

    const neuron_spec trivial = make_synthetic_group_neuron(cyclic_group_table(1), 0.2);
    CHECK(trivial.state_partition.size() == 1);
    CHECK(neuron_step(trivial, 0.1, -0.05) == 0.0);

    CHECK_THROWS_WITH(make_synthetic_group_neuron(cyclic_group_table(3), 0.2),
                      ContainsSubstring("margin"));
    CHECK_THROWS_WITH(make_synthetic_group_neuron(cyclic_group_table(3), 0.0),
                      ContainsSubstring("margin"));
}

TEST_CASE("neuron_step conventions") {
    const neuron_spec ff = make_sign_flipflop(1.0, 0.5);
    CHECK(neuron_step(ff, 0.0, 0.0) == 1.0);  // sign(0) = +1

    const neuron_spec tf = optimal_flipflop(2.0);
    CHECK(neuron_step(tf, 0.0, 0.0) == 0.0);
    CHECK_THAT(neuron_step(tf, 1.0, 1.0), WithinAbs(kTanh3, 1e-12));
}

TEST_CASE("state interpretation names the unique containing interval") {
    const neuron_spec ff = make_sign_flipflop(1.0, 0.5);
    CHECK(state_interpretation(ff, 1.0) == "high");
    CHECK(state_interpretation(ff, -1.0) == "low");
    CHECK_FALSE(state_interpretation(ff, 0.0).has_value());

    const neuron_spec tf = optimal_flipflop(2.0);
    CHECK_FALSE(state_interpretation(tf, 0.0).has_value());  // gap between f(a) and f(b)
    CHECK(state_interpretation(tf, -1.0) == "low");
    const double fb = tf.state_partition[static_cast<std::size_t>(tf.state_index("high"))].iv.lo;
    CHECK(state_interpretation(tf, fb) == "high");

    CHECK(input_interpretation(tf, 0.0) == "read");
    CHECK_FALSE(input_interpretation(tf, 100.0) == "read");
}

TEST_CASE("verify_core_conditions passes for every constructor family") {
    const std::vector<neuron_spec> specs = {
        make_sign_flipflop(1.0, 0.5),
        optimal_flipflop(2.0),
        make_sign_toggle(-1.0, 0.5),
        optimal_toggle(-2.0),
        make_c2_sign(1.0, 0.5),
        make_c2_sign(-1.0, -0.5),
        make_c2_tanh(2.0, 1.0),
        make_c2_tanh(-2.0, -1.0),
        make_synthetic_group_neuron(cyclic_group_table(3), 0.15),
    };
    for (const auto& s : specs) {
        const core_condition_report r = verify_core_conditions(s, 25);
        INFO(to_string(s.activation) << " order " << to_string(s.order));
        CHECK(report_clean(r));
        const std::size_t expected =
            s.family == neuron_family::group ? s.state_partition.size() * s.state_partition.size()
                                             : 6u;
        CHECK(r.conditions.size() == expected);
        for (const auto& c : r.conditions) CHECK(c.method == "corner-exact");
    }
}

TEST_CASE("widened read window is caught") {
    // Tanh: the semantics genuinely break, corner check finds a witness.
    neuron_spec tf = optimal_flipflop(2.0);
    auto& read = tf.input_partition[static_cast<std::size_t>(tf.input_index("read"))].iv;
    read.hi *= 1.1;
    const core_condition_report r = verify_core_conditions(tf, 50);
    CHECK_FALSE(r.all_pass);
    CHECK_FALSE(r.bounds_pass);
    bool found = false;
    for (const auto& c : r.conditions)
        if (c.name == "step(X_low, V_read) in X_low") {
            CHECK_FALSE(c.corner_pass);
            CHECK(c.has_witness);
            CHECK(c.witness_v > kRead2);
            found = true;
        }
    CHECK(found);

    // Sign: the proposition has slack, so a small widening keeps the
    // semantics intact and only the bound conformance flags it.
    neuron_spec sf = make_sign_flipflop(1.0, 0.5);
    sf.input_partition[static_cast<std::size_t>(sf.input_index("read"))].iv.hi = 0.55;
    const core_condition_report rs = verify_core_conditions(sf, 50);
    CHECK(rs.all_pass);
    CHECK_FALSE(rs.bounds_pass);
    REQUIRE_FALSE(rs.bound_violations.empty());
    CHECK_THAT(rs.bound_violations.front(), ContainsSubstring("V_read"));
}

TEST_CASE("corner and grid verification agree over random parameterizations") {
    rng gen(0x6e75726f6eULL);
    int built = 0;
    for (int trial = 0; trial < 100; ++trial) {
        neuron_spec s;
        switch (trial % 7) {
            case 0: s = make_sign_flipflop(gen.uniform(0.1, 10.0), gen.uniform(0.05, 0.95)); break;
            case 1: {
                const double w = gen.uniform(1.01, 10.0);
                const auto [a0, b0] = optimal_tanh_ab(w);
                s = make_tanh_flipflop(w, gen.uniform(a0, 0.1 * a0), gen.uniform(0.1 * b0, b0));
                break;
            }
            case 2: s = make_sign_toggle(-gen.uniform(0.1, 10.0), gen.uniform(0.05, 0.95)); break;
            case 3: {
                const double w = -gen.uniform(1.01, 10.0);
                const auto [a0, b0] = optimal_tanh_ab(-w);
                s = make_tanh_toggle(w, gen.uniform(a0, 0.1 * a0), gen.uniform(0.1 * b0, b0));
                break;
            }
            case 4: {
                const double sgn = gen.chance(0.5) ? 1.0 : -1.0;
                s = make_c2_sign(sgn * gen.uniform(0.1, 5.0), sgn * gen.uniform(0.05, 3.0));
                break;
            }
            case 5: {
                const double sgn = gen.chance(0.5) ? 1.0 : -1.0;
                s = make_c2_tanh(sgn * gen.uniform(0.1, 5.0), sgn * gen.uniform(0.05, 3.0));
                break;
            }
            default: {
                const int n = 1 + static_cast<int>(gen.below(4));
                s = make_synthetic_group_neuron(cyclic_group_table(n),
                                                gen.uniform(0.1, 0.45) / n);
                break;
            }
        }
        ++built;
        CHECK(partitions_well_formed(s));
        const core_condition_report r = verify_core_conditions(s, 1000);
        INFO("trial " << trial << " " << to_string(s.activation) << " w=" << s.w << " a=" << s.a
                      << " b=" << s.b);
        CHECK(r.all_pass);
        CHECK(r.bounds_pass);
        for (const auto& c : r.conditions) CHECK(c.corner_pass == c.grid_pass);
    }
    CHECK(built == 100);
}

TEST_CASE("sign flip-flop pointwise read and set behavior") {
    const neuron_spec s = make_sign_flipflop(2.0, 0.3);
    const auto& read = s.input_partition[static_cast<std::size_t>(s.input_index("read"))].iv;
    const auto& set = s.input_partition[static_cast<std::size_t>(s.input_index("set"))].iv;
    for (double v : grid_points(read, 97)) {
        CHECK(neuron_step(s, -1.0, v) == -1.0);
        CHECK(neuron_step(s, 1.0, v) == 1.0);
    }
    for (double v : grid_points(set, 97)) {
        CHECK(neuron_step(s, -1.0, v) == 1.0);
        CHECK(neuron_step(s, 1.0, v) == 1.0);
    }
}

TEST_CASE("tanh flip-flop read keeps each state interval") {
    const neuron_spec s = optimal_flipflop(3.0);
    const auto& read = s.input_partition[static_cast<std::size_t>(s.input_index("read"))].iv;
    const auto& low = s.state_partition[static_cast<std::size_t>(s.state_index("low"))].iv;
    const auto& high = s.state_partition[static_cast<std::size_t>(s.state_index("high"))].iv;
    for (double v : grid_points(read, 37)) {
        for (double x : grid_points(low, 37)) CHECK(low.contains(neuron_step(s, x, v), 1e-12));
        for (double x : grid_points(high, 37)) CHECK(high.contains(neuron_step(s, x, v), 1e-12));
    }
}

TEST_CASE("toggle alternates its interpreted state for 1000 steps") {
    for (const neuron_spec& s : {optimal_toggle(-2.0), make_sign_toggle(-1.0, 0.5)}) {
        const auto& tog = s.input_partition[static_cast<std::size_t>(s.input_index("toggle"))].iv;
        const double v = tog.representative();
        double x = -1.0;
        std::string prev = *state_interpretation(s, x);
        for (int i = 0; i < 1000; ++i) {
            x = neuron_step(s, x, v);
            const auto cur = state_interpretation(s, x);
            REQUIRE(cur.has_value());
            REQUIRE(*cur != prev);
            prev = *cur;
        }
    }
}

TEST_CASE("first-order states converge under convergent inputs") {
    for (int trial = 0; trial < 100; ++trial) {
        rng gen = rng_at(0x636f6e76ULL, static_cast<std::uint64_t>(trial));
        neuron_spec s;
        s.activation = trial % 2 == 0 ? activation_kind::sign : activation_kind::tanh;
        s.order = neuron_order::first;
        s.w = gen.uniform(1e-3, 5.0);
        const double vstar = gen.uniform(-3.0, 3.0);
        double x = gen.uniform(-1.0, 1.0);
        double prev = x;
        for (int n = 0; n < 600; ++n) {
            x = neuron_step(s, x, vstar + std::pow(2.0, -n));
            if (n >= 200) {
                REQUIRE(std::abs(x - prev) < 1e-9);
            }
            prev = x;
        }
    }
}
