#include "doctest.h"

#include <cstdint>
#include <limits>
#include <set>
#include <stdexcept>

#include "logicforge/topology.hpp"

using namespace logicforge;

TEST_CASE("lut_cost matches hand-computed values") {
    CHECK(lut_cost(12, 2).luts == 170);
    CHECK(lut_cost(14, 2).luts == 682);
    CHECK(lut_cost(7, 1).luts == 3);
    CHECK(lut_cost(6, 1).luts == 1);
    CHECK(lut_cost(5, 1).luts == 1);
    CHECK(lut_cost(15, 7).luts == 4781);
    CHECK(lut_cost(15, 3).luts == 2049);
    CHECK(lut_cost(16, 4).luts == 5460);
    CHECK(lut_cost(12, 3).luts == 255);

    // At or below a single LUT's input count the tables are free-standing:
    // one LUT per output bit.
    CHECK(lut_cost(4, 3).luts == 3);
    CHECK(lut_cost(1, 1).luts == 1);
    CHECK(lut_cost(2, 5).luts == 5);
    CHECK(lut_cost(3, 2).luts == 2);

    for (int x = 1; x <= 16; ++x) CHECK_FALSE(lut_cost(x, 4).exceeds_device_scale);
}

TEST_CASE("lut_cost is exactly integral, linear in Y, and monotone in X") {
    for (int x = 5; x <= 40; ++x) {
        uint64_t m = (uint64_t(1) << (x - 4)) + ((x % 2 == 0) ? -1 : 1);
        CHECK(m % 3 == 0);
        CHECK(lut_cost(x, 1).luts * 3 == m);
        for (int y = 2; y <= 8; ++y) CHECK(lut_cost(x, y).luts == uint64_t(y) * lut_cost(x, 1).luts);
    }
    for (int x = 6; x < 40; ++x) CHECK(lut_cost(x + 1, 1).luts > lut_cost(x, 1).luts);
    CHECK(lut_cost(6, 1).luts == lut_cost(5, 1).luts);  // both fit one level
}

TEST_CASE("lut_cost saturates instead of overflowing") {
    CHECK(lut_cost(68, 1).exceeds_device_scale);
    CHECK(lut_cost(100, 2).exceeds_device_scale);
    // Largest X that still fits: 2^63 + 1 over 3.
    LutCount edge = lut_cost(67, 1);
    CHECK_FALSE(edge.exceeds_device_scale);
    CHECK(edge.luts == 3074457345618258603ULL);
    // Y pushes the multiply past 64 bits.
    CHECK(lut_cost(67, 7).exceeds_device_scale);
}

TEST_CASE("lut_cost rejects non-positive shapes") {
    CHECK_THROWS_AS(lut_cost(0, 1), std::invalid_argument);
    CHECK_THROWS_AS(lut_cost(-3, 2), std::invalid_argument);
    CHECK_THROWS_AS(lut_cost(5, 0), std::invalid_argument);
}

TEST_CASE("lut_levels counts the select-mux depth") {
    for (int x = 1; x <= 6; ++x) CHECK(lut_levels(x) == 1);
    CHECK(lut_levels(7) == 2);
    CHECK(lut_levels(12) == 7);
    CHECK(lut_levels(24) == 19);
    CHECK_THROWS_AS(lut_levels(0), std::invalid_argument);
}

namespace {

NetworkBuild jsc_s_build() {
    NetworkBuild b;
    b.input_features = 16;
    b.input_bits = 2;
    b.hidden = {64, 32, 32, 32};
    b.num_classes = 5;
    b.bits = 2;
    b.fanin = 3;
    return b;
}

}  // namespace

TEST_CASE("model_lut_cost on reference shapes") {
    // 32 wires of 2 bits through four 32-wide layers of 12:2 tables.
    NetworkBuild ex;
    ex.input_features = 32;
    ex.input_bits = 2;
    ex.hidden = {32, 32, 32};
    ex.num_classes = 32;
    ex.bits = 2;
    ex.fanin = 6;
    CHECK(model_lut_cost(build_network_spec(ex)).luts == 21760);

    CHECK(model_lut_cost(build_network_spec(jsc_s_build())).luts == 330);

    NetworkBuild m = jsc_s_build();
    m.input_bits = 3;
    m.bits = 3;
    m.fanin = 4;
    CHECK(model_lut_cost(build_network_spec(m)).luts == 42075);
}

TEST_CASE("model_lut_cost equals the per-neuron sum") {
    NetworkBuild b;
    b.input_features = 10;
    b.input_bits = 3;
    b.hidden = {7, 5};
    b.num_classes = 4;
    b.bits = 2;
    b.fanin = 4;
    b.input_fanin = 3;
    b.output_fanin = 5;
    b.output_bits = 4;
    NetworkSpec spec = build_network_spec(b);

    uint64_t total = 0;
    for (const LayerSpec& l : spec.layers)
        total += uint64_t(l.out_width) * lut_cost(l.fanin_bits(), l.out_bits).luts;
    CHECK(model_lut_cost(spec).luts == total);
    CHECK_FALSE(model_lut_cost(spec).exceeds_device_scale);
}

TEST_CASE("model_lut_cost saturates when any layer does") {
    NetworkSpec spec = build_network_spec(jsc_s_build());
    spec.layers[1].fanin = 32;  // 64 address bits
    CHECK(model_lut_cost(spec).exceeds_device_scale);
}

TEST_CASE("generate_mask is a deterministic function of its key") {
    SparsityMask a = generate_mask(7, 0, 16, 4, 3);
    SparsityMask b = generate_mask(7, 0, 16, 4, 3);
    CHECK(a.indices == b.indices);

    // Frozen reference draw; a change here means every stored mask in the
    // wild would silently reshuffle.
    std::vector<std::vector<uint32_t>> golden = {
        {5, 13, 14},
        {1, 5, 9},
        {1, 6, 9},
        {5, 9, 10},
    };
    CHECK(a.indices == golden);

    CHECK(generate_mask(8, 0, 16, 4, 3).indices != golden);
    CHECK(generate_mask(7, 1, 16, 4, 3).indices != golden);
}

TEST_CASE("masks are sorted fanin-subsets of the previous layer") {
    for (uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        for (uint32_t in_w : {3u, 8u, 33u}) {
            for (uint32_t fanin = 1; fanin <= std::min(in_w, 6u); ++fanin) {
                SparsityMask m = generate_mask(seed, 2, in_w, 5, fanin);
                REQUIRE(m.indices.size() == 5);
                for (const auto& row : m.indices) {
                    REQUIRE(row.size() == fanin);
                    std::set<uint32_t> uniq(row.begin(), row.end());
                    CHECK(uniq.size() == fanin);  // no repeats
                    for (uint32_t v : row) CHECK(v < in_w);
                    for (size_t k = 1; k < row.size(); ++k) CHECK(row[k - 1] < row[k]);
                }
            }
        }
    }
}

TEST_CASE("a full-width mask is the identity wiring") {
    SparsityMask m = generate_mask(123, 0, 5, 3, 5);
    for (const auto& row : m.indices) CHECK(row == std::vector<uint32_t>{0, 1, 2, 3, 4});
}

TEST_CASE("generate_mask rejects impossible fanin") {
    CHECK_THROWS_AS(generate_mask(1, 0, 4, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(generate_mask(1, 0, 4, 2, 0), std::invalid_argument);
}

TEST_CASE("validate_spec accepts reference shapes") {
    CHECK(validate_spec(build_network_spec(jsc_s_build())).empty());
}

TEST_CASE("validate_spec reports each violation with its layer") {
    NetworkSpec spec = build_network_spec(jsc_s_build());

    SUBCASE("fan-in bits over the cap") {
        spec.layers[2].fanin = 8;  // 16 address bits > 15
        auto v = validate_spec(spec);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("layer 2") != std::string::npos);
        CHECK(v[0].find("cap") != std::string::npos);

        CHECK(validate_spec(spec, 16).empty());  // a roomier cap admits it
    }

    SUBCASE("width chain must agree") {
        spec.layers[1].in_width = 63;
        auto v = validate_spec(spec);
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("layer 1") != std::string::npos);
    }

    SUBCASE("bit chain must agree") {
        spec.layers[3].in_bits = 3;
        auto v = validate_spec(spec);
        REQUIRE(!v.empty());
        CHECK(v[0].find("layer 3") != std::string::npos);
    }

    SUBCASE("last layer must be as wide as the class count") {
        spec.num_classes = 6;
        auto v = validate_spec(spec);
        REQUIRE(!v.empty());
        CHECK(v.back().find("num_classes") != std::string::npos);
    }

    SUBCASE("fanin must fit the previous width") {
        spec.layers[1].fanin = 65;
        CHECK(!validate_spec(spec).empty());
        spec.layers[1].fanin = 0;
        CHECK(!validate_spec(spec).empty());
    }

    SUBCASE("no layers at all") {
        spec.layers.clear();
        CHECK(!validate_spec(spec).empty());
    }

    SUBCASE("multiple problems all reported") {
        spec.layers[0].fanin = 0;
        spec.layers[2].in_bits = 9;
        CHECK(validate_spec(spec).size() >= 2);
    }
}

TEST_CASE("build_network_spec wires widths, bits, and overrides") {
    NetworkBuild b;
    b.input_features = 16;
    b.input_bits = 4;
    b.hidden = {32, 64, 192, 192, 16};
    b.num_classes = 5;
    b.bits = 3;
    b.fanin = 4;
    b.output_bits = 7;
    b.output_fanin = 5;
    NetworkSpec spec = build_network_spec(b);

    REQUIRE(spec.layers.size() == 6);
    CHECK(spec.layers[0].in_width == 16);
    CHECK(spec.layers[0].in_bits == 4);
    CHECK(spec.layers[0].out_bits == 3);
    CHECK(spec.layers[0].fanin_bits() == 16);
    CHECK(spec.layers[1].in_bits == 3);
    CHECK(spec.layers[5].out_width == 5);
    CHECK(spec.layers[5].out_bits == 7);
    CHECK(spec.layers[5].fanin == 5);
    CHECK(spec.layers[5].fanin_bits() == 15);

    CHECK(!validate_spec(spec).empty());       // 16 address bits on layer 0
    CHECK(validate_spec(spec, 16).empty());    // fits the larger cap

    SUBCASE("input_fanin overrides the first layer") {
        b.input_fanin = 2;
        NetworkSpec s2 = build_network_spec(b);
        CHECK(s2.layers[0].fanin == 2);
        CHECK(s2.layers[1].fanin == 4);
        CHECK(validate_spec(s2, 16).empty());
    }

    SUBCASE("single-layer networks prefer the input-side override") {
        NetworkBuild one;
        one.input_features = 8;
        one.input_bits = 1;
        one.num_classes = 3;
        one.bits = 2;
        one.fanin = 4;
        one.input_fanin = 2;
        one.output_fanin = 6;
        NetworkSpec s = build_network_spec(one);
        REQUIRE(s.layers.size() == 1);
        CHECK(s.layers[0].fanin == 2);
    }
}
