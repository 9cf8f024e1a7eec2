#include "logicforge/netlist.hpp"

#include <cstring>
#include <limits>
#include <stdexcept>

#include "logicforge/bytestream.hpp"
#include "logicforge/quantizer.hpp"

namespace logicforge {

namespace {
constexpr int kMaxTableBits = 24;
}

TruthTable enumerate_neuron(const TrainedModel& model, size_t layer, size_t neuron) {
    if (!model.frozen) throw std::logic_error("enumerate_neuron: model must be frozen");
    const LayerSpec& ls = model.spec.layers.at(layer);
    if (neuron >= ls.out_width) throw std::out_of_range("enumerate_neuron: neuron index");
    int x_bits = ls.fanin_bits();
    if (x_bits > kMaxTableBits)
        throw std::invalid_argument("enumerate_neuron: fan-in " + std::to_string(x_bits) +
                                    " bits exceeds the " + std::to_string(kMaxTableBits) +
                                    "-bit table limit");

    double in_sc = layer == 0 ? input_scale(model.spec.input_bits) : 0.0;
    const Quantizer* prev_act = layer == 0 ? nullptr : &model.layers[layer - 1].act;
    const Quantizer& act = model.layers[layer].act;
    uint32_t code_mask = uint32_t((uint64_t(1) << ls.in_bits) - 1);

    TruthTable t;
    t.in_bits = x_bits;
    t.out_bits = ls.out_bits;
    t.entries.resize(size_t(1) << x_bits);

    std::vector<double> gathered(ls.fanin);
    for (uint64_t a = 0; a < t.entries.size(); ++a) {
        for (uint32_t k = 0; k < ls.fanin; ++k) {
            uint32_t code = uint32_t(a >> ((ls.fanin - 1 - k) * uint32_t(ls.in_bits))) & code_mask;
            gathered[k] = layer == 0 ? double(code) * in_sc : dequantize(*prev_act, code);
        }
        double y = eval_neuron_preact(model, layer, neuron, gathered.data());
        t.entries[a] = quantize(act, y);
    }
    return t;
}

Netlist build_netlist(const TrainedModel& model) {
    if (!model.frozen) throw std::logic_error("build_netlist: model must be frozen");
    Netlist net;
    net.input_features = model.spec.input_features;
    net.input_bits = model.spec.input_bits;
    net.num_classes = model.spec.num_classes;
    net.output_bits = model.spec.layers.back().out_bits;

    size_t num_layers = model.spec.layers.size();
    net.layers.resize(num_layers);
    for (size_t l = 0; l < num_layers; ++l) {
        const LayerSpec& ls = model.spec.layers[l];
        net.layer_widths.push_back(ls.out_width);
        net.layers[l].reserve(ls.out_width);
        for (uint32_t j = 0; j < ls.out_width; ++j) {
            HBBInstance hbb;
            hbb.layer = uint32_t(l);
            hbb.neuron = j;
            hbb.table = enumerate_neuron(model, l, j);
            hbb.inputs = model.masks[l].indices[j];
            net.layers[l].push_back(std::move(hbb));
        }
    }
    net.registered.assign(num_layers + 1, true);
    return net;
}

Netlist prune_dead(const Netlist& net) {
    Netlist out = net;
    if (out.layers.empty()) return out;

    size_t num_layers = out.layers.size();
    // Output-layer HBBs drive ports, so they are live by definition;
    // walk backwards marking everything some live consumer reads.
    std::vector<std::vector<bool>> live(num_layers);
    for (size_t l = 0; l < num_layers; ++l) live[l].assign(net.layer_widths[l], false);
    for (const HBBInstance& hbb : out.layers.back()) live.back()[hbb.neuron] = true;

    for (size_t l = num_layers; l-- > 1;) {
        for (const HBBInstance& hbb : out.layers[l])
            if (live[l][hbb.neuron])
                for (uint32_t src : hbb.inputs) live[l - 1][src] = true;
    }

    for (size_t l = 0; l + 1 < num_layers; ++l) {
        std::vector<HBBInstance> kept;
        for (HBBInstance& hbb : out.layers[l])
            if (live[l][hbb.neuron]) kept.push_back(std::move(hbb));
        out.layers[l] = std::move(kept);
    }
    return out;
}

Netlist insert_registers(const Netlist& net, RegisterPolicy policy) {
    Netlist out = net;
    out.registered.assign(net.layers.size() + 1, policy == RegisterPolicy::Default);
    return out;
}

Netlist insert_registers(const Netlist& net, const std::vector<bool>& boundaries) {
    if (boundaries.size() != net.layers.size() + 1)
        throw std::invalid_argument("insert_registers: need one flag per boundary (layers + 1)");
    Netlist out = net;
    out.registered = boundaries;
    return out;
}

LutCount netlist_lut_cost(const Netlist& net) {
    LutCount total;
    for (const auto& layer : net.layers)
        for (const HBBInstance& hbb : layer) {
            LutCount c = lut_cost(hbb.table.in_bits, hbb.table.out_bits);
            if (c.exceeds_device_scale ||
                total.luts > std::numeric_limits<uint64_t>::max() - c.luts)
                return {std::numeric_limits<uint64_t>::max(), true};
            total.luts += c.luts;
        }
    return total;
}

namespace {
constexpr char kMagic[8] = {'L', 'F', 'N', 'E', 'T', 'L', '\0', '\0'};
constexpr uint32_t kVersion = 1;
}  // namespace

std::vector<uint8_t> serialize_netlist(const Netlist& net) {
    ByteWriter w;
    w.raw(reinterpret_cast<const uint8_t*>(kMagic), 8);
    w.u32(kVersion);
    w.u32(net.input_features);
    w.u32(uint32_t(net.input_bits));
    w.u32(net.num_classes);
    w.u32(uint32_t(net.output_bits));
    w.u32(uint32_t(net.layers.size()));
    for (uint32_t width : net.layer_widths) w.u32(width);
    for (bool b : net.registered) w.u8(b ? 1 : 0);
    for (const auto& layer : net.layers) {
        w.u32(uint32_t(layer.size()));
        for (const HBBInstance& hbb : layer) {
            w.u32(hbb.layer);
            w.u32(hbb.neuron);
            w.u32(uint32_t(hbb.table.in_bits));
            w.u32(uint32_t(hbb.table.out_bits));
            w.u32(uint32_t(hbb.inputs.size()));
            for (uint32_t src : hbb.inputs) w.u32(src);
            for (uint32_t e : hbb.table.entries) w.u32(e);
        }
    }
    ByteWriter out;
    out.raw(w.bytes().data(), w.bytes().size());
    out.u32(crc32(w.bytes().data(), w.bytes().size()));
    return out.bytes();
}

Netlist deserialize_netlist(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 16) throw std::runtime_error("netlist dump corrupt: too short");
    uint32_t stored = uint32_t(bytes[bytes.size() - 4]) | uint32_t(bytes[bytes.size() - 3]) << 8 |
                      uint32_t(bytes[bytes.size() - 2]) << 16 |
                      uint32_t(bytes[bytes.size() - 1]) << 24;
    if (crc32(bytes.data(), bytes.size() - 4) != stored)
        throw std::runtime_error("netlist dump corrupt: checksum mismatch");

    ByteReader r(bytes.data(), bytes.size() - 4);
    char magic[8];
    for (char& ch : magic) ch = char(r.u8());
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a netlist dump (bad magic)");
    uint32_t version = r.u32();
    if (version != kVersion)
        throw std::runtime_error("unsupported netlist dump version " + std::to_string(version));

    Netlist net;
    net.input_features = r.u32();
    net.input_bits = int(r.u32());
    net.num_classes = r.u32();
    net.output_bits = int(r.u32());
    uint32_t num_layers = r.u32();
    for (uint32_t l = 0; l < num_layers; ++l) net.layer_widths.push_back(r.u32());
    for (uint32_t b = 0; b < num_layers + 1; ++b) net.registered.push_back(r.u8() != 0);
    net.layers.resize(num_layers);
    for (uint32_t l = 0; l < num_layers; ++l) {
        uint32_t count = r.u32();
        for (uint32_t i = 0; i < count; ++i) {
            HBBInstance hbb;
            hbb.layer = r.u32();
            hbb.neuron = r.u32();
            hbb.table.in_bits = int(r.u32());
            hbb.table.out_bits = int(r.u32());
            if (hbb.table.in_bits < 1 || hbb.table.in_bits > kMaxTableBits ||
                hbb.table.out_bits < 1 || hbb.table.out_bits > 32)
                throw std::runtime_error("netlist dump corrupt: implausible table shape");
            uint32_t fanin = r.u32();
            hbb.inputs.resize(fanin);
            for (uint32_t& src : hbb.inputs) src = r.u32();
            hbb.table.entries.resize(size_t(1) << hbb.table.in_bits);
            for (uint32_t& e : hbb.table.entries) e = r.u32();
            net.layers[l].push_back(std::move(hbb));
        }
    }
    if (r.remaining() != 0) throw std::runtime_error("netlist dump corrupt: trailing bytes");
    return net;
}

void save_netlist(const Netlist& net, const std::string& path) {
    write_file_bytes(path, serialize_netlist(net));
}

Netlist load_netlist(const std::string& path) {
    return deserialize_netlist(read_file_bytes(path));
}

}  // namespace logicforge
