#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logicforge/topology.hpp"
#include "logicforge/trainer.hpp"

namespace logicforge {

// Address convention: a table input is the concatenation of the neuron's
// fan-in codes in mask order, first masked input in the most significant
// position. entries[a] holds the neuron's out_bits output code for
// address a.
struct TruthTable {
    int in_bits = 0;
    int out_bits = 0;
    std::vector<uint32_t> entries;
};

struct HBBInstance {
    uint32_t layer = 0;
    // Original neuron index within the layer; pruning never renumbers,
    // so wires stay valid and Verilog names stay stable.
    uint32_t neuron = 0;
    TruthTable table;
    // Previous-layer neuron indices (or input feature indices for layer
    // 0), in mask order.
    std::vector<uint32_t> inputs;
};

struct Netlist {
    uint32_t input_features = 0;
    int input_bits = 1;
    uint32_t num_classes = 0;
    int output_bits = 1;
    // Original layer widths, pre-prune; indexes HBB neuron ids.
    std::vector<uint32_t> layer_widths;
    std::vector<std::vector<HBBInstance>> layers;
    // Boundary b registers the signals feeding layer b (b = 0 is the
    // network input); boundary layer count registers the output. Size
    // layers.size() + 1.
    std::vector<bool> registered;

    size_t hbb_count() const {
        size_t n = 0;
        for (const auto& l : layers) n += l.size();
        return n;
    }
};

// Exhaustively tabulates one frozen neuron: for each of the 2^X
// addresses, decode the fan-in codes, dequantize them as the layer's
// forward pass would, run the shared neuron body, and record the output
// code. Lossless with respect to eval-mode forward by construction.
TruthTable enumerate_neuron(const TrainedModel& model, size_t layer, size_t neuron);

Netlist build_netlist(const TrainedModel& model);

// Drops every HBB with no directed path to an output port. Output-layer
// HBBs always survive. Idempotent; never renumbers survivors.
Netlist prune_dead(const Netlist& net);

enum class RegisterPolicy { Default, None };

Netlist insert_registers(const Netlist& net, RegisterPolicy policy);
Netlist insert_registers(const Netlist& net, const std::vector<bool>& boundaries);

LutCount netlist_lut_cost(const Netlist& net);

// Versioned little-endian dump of tables and wiring, CRC-terminated like
// the checkpoint format; layout in docs/FORMATS.md.
std::vector<uint8_t> serialize_netlist(const Netlist& net);
Netlist deserialize_netlist(const std::vector<uint8_t>& bytes);
void save_netlist(const Netlist& net, const std::string& path);
Netlist load_netlist(const std::string& path);

}  // namespace logicforge
