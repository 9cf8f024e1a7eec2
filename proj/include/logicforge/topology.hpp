#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace logicforge {

// One sparse layer. Widths count neurons, bits count wires per value:
// every neuron sees `fanin` inputs of `in_bits` bits each, so its hardware
// block has X = fanin * in_bits address bits and Y = out_bits data bits.
struct LayerSpec {
    uint32_t in_width = 0;
    uint32_t out_width = 0;
    uint32_t fanin = 0;
    int in_bits = 1;
    int out_bits = 1;

    int fanin_bits() const { return int(fanin) * in_bits; }
};

struct NetworkSpec {
    uint32_t input_features = 0;
    int input_bits = 1;
    std::vector<LayerSpec> layers;
    uint32_t num_classes = 0;
    uint64_t seed = 0;
};

// indices[j] lists, sorted ascending, which previous-layer outputs feed
// neuron j.
struct SparsityMask {
    std::vector<std::vector<uint32_t>> indices;
};

// Each neuron's connections are a uniform fanin-subset of [0, in_width),
// drawn by partial Fisher-Yates from a stream keyed on
// (seed, layer_index, neuron_index). Same arguments, same mask, on any
// platform.
SparsityMask generate_mask(uint64_t seed, uint32_t layer_index, uint32_t in_width,
                           uint32_t out_width, uint32_t fanin);

struct LutCount {
    uint64_t luts = 0;
    // The X:Y table is too large to cost exactly in 64 bits; luts is
    // saturated and meaningless beyond "more than any device has".
    bool exceeds_device_scale = false;
};

// 6-input LUTs needed for one X-input, Y-output truth table:
// Y * (2^(X-4) - (-1)^X) / 3 for X >= 5 (always integral), Y for X <= 4.
LutCount lut_cost(int x_bits, int y_bits);

// Depth of the same decomposition in LUT levels: one level up to six
// inputs, one more per extra address bit (the select mux chain).
int lut_levels(int x_bits);

LutCount model_lut_cost(const NetworkSpec& spec);

constexpr int kDefaultFaninCap = 15;

// Empty result means the spec is well formed and every layer fits the
// fan-in cap. Violations are messages naming the offending layer.
std::vector<std::string> validate_spec(const NetworkSpec& spec, int fanin_cap = kDefaultFaninCap);

// Convenience builder: hidden layers share (bits, fanin); the first and
// last layers may override their fan-in and the last its output bitwidth.
// Zero means "no override".
struct NetworkBuild {
    uint32_t input_features = 0;
    int input_bits = 1;
    std::vector<uint32_t> hidden;
    uint32_t num_classes = 0;
    int bits = 2;
    uint32_t fanin = 3;
    int output_bits = 0;
    uint32_t input_fanin = 0;
    uint32_t output_fanin = 0;
    uint64_t seed = 0;
};

NetworkSpec build_network_spec(const NetworkBuild& b);

}  // namespace logicforge
