#include "logicforge/checkpoint.hpp"

#include <cstring>
#include <stdexcept>

#include "logicforge/bytestream.hpp"

namespace logicforge {

namespace {
constexpr char kMagic[8] = {'L', 'F', 'C', 'K', 'P', 'T', '\0', '\0'};
constexpr uint32_t kVersion = 1;

void write_doubles(ByteWriter& w, const std::vector<double>& v) {
    w.u64(v.size());
    for (double d : v) w.f64(d);
}

std::vector<double> read_doubles(ByteReader& r, size_t expected) {
    uint64_t n = r.u64();
    if (n != expected)
        throw std::runtime_error("checkpoint corrupt: array length " + std::to_string(n) +
                                 ", expected " + std::to_string(expected));
    std::vector<double> v(n);
    for (double& d : v) d = r.f64();
    return v;
}
}  // namespace

std::vector<uint8_t> serialize_model(const TrainedModel& model) {
    ByteWriter w;
    w.raw(reinterpret_cast<const uint8_t*>(kMagic), 8);
    w.u32(kVersion);

    const NetworkSpec& s = model.spec;
    w.u32(s.input_features);
    w.u32(uint32_t(s.input_bits));
    w.u32(s.num_classes);
    w.u64(s.seed);
    w.u32(uint32_t(s.layers.size()));
    for (const LayerSpec& l : s.layers) {
        w.u32(l.in_width);
        w.u32(l.out_width);
        w.u32(l.fanin);
        w.u32(uint32_t(l.in_bits));
        w.u32(uint32_t(l.out_bits));
    }

    for (size_t l = 0; l < s.layers.size(); ++l)
        for (const std::vector<uint32_t>& neuron : model.masks[l].indices)
            for (uint32_t idx : neuron) w.u32(idx);

    for (const FeatureRange& r : model.input_ranges) {
        w.f64(r.min);
        w.f64(r.max);
    }

    for (const DenseLayerParams& p : model.layers) {
        write_doubles(w, p.weights);
        w.f64(p.bn.eps);
        w.f64(p.bn.momentum);
        write_doubles(w, p.bn.gain);
        write_doubles(w, p.bn.bias);
        write_doubles(w, p.bn.running_mean);
        write_doubles(w, p.bn.running_var);
        w.u32(uint32_t(p.act.spec.bits));
        w.u8(p.act.spec.is_signed ? 1 : 0);
        w.f64(p.act.scale);
        w.u8(p.scale_initialized ? 1 : 0);
    }
    w.u8(model.frozen ? 1 : 0);

    ByteWriter out;
    out.raw(w.bytes().data(), w.bytes().size());
    out.u32(crc32(w.bytes().data(), w.bytes().size()));
    return out.bytes();
}

TrainedModel deserialize_model(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < 16) throw std::runtime_error("checkpoint corrupt: too short");
    uint32_t stored = uint32_t(bytes[bytes.size() - 4]) | uint32_t(bytes[bytes.size() - 3]) << 8 |
                      uint32_t(bytes[bytes.size() - 2]) << 16 |
                      uint32_t(bytes[bytes.size() - 1]) << 24;
    if (crc32(bytes.data(), bytes.size() - 4) != stored)
        throw std::runtime_error("checkpoint corrupt: checksum mismatch");

    ByteReader r(bytes.data(), bytes.size() - 4);
    char magic[8];
    for (char& ch : magic) ch = char(r.u8());
    if (std::memcmp(magic, kMagic, 8) != 0)
        throw std::runtime_error("not a checkpoint file (bad magic)");
    uint32_t version = r.u32();
    if (version != kVersion)
        throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));

    TrainedModel m;
    NetworkSpec& s = m.spec;
    s.input_features = r.u32();
    s.input_bits = int(r.u32());
    s.num_classes = r.u32();
    s.seed = r.u64();
    uint32_t num_layers = r.u32();
    for (uint32_t l = 0; l < num_layers; ++l) {
        LayerSpec ls;
        ls.in_width = r.u32();
        ls.out_width = r.u32();
        ls.fanin = r.u32();
        ls.in_bits = int(r.u32());
        ls.out_bits = int(r.u32());
        constexpr uint32_t kMaxWidth = 1u << 24;
        if (ls.in_width > kMaxWidth || ls.out_width > kMaxWidth || ls.fanin > ls.in_width ||
            ls.in_bits < 1 || ls.in_bits > 32 || ls.out_bits < 1 || ls.out_bits > 32)
            throw std::runtime_error("checkpoint corrupt: implausible layer shape");
        s.layers.push_back(ls);
    }

    for (uint32_t l = 0; l < num_layers; ++l) {
        SparsityMask mask;
        mask.indices.resize(s.layers[l].out_width);
        for (std::vector<uint32_t>& neuron : mask.indices) {
            neuron.resize(s.layers[l].fanin);
            for (uint32_t& idx : neuron) {
                idx = r.u32();
                if (idx >= s.layers[l].in_width)
                    throw std::runtime_error("checkpoint corrupt: mask index out of range");
            }
        }
        m.masks.push_back(std::move(mask));
    }

    m.input_ranges.resize(s.input_features);
    for (FeatureRange& fr : m.input_ranges) {
        fr.min = r.f64();
        fr.max = r.f64();
    }

    for (uint32_t l = 0; l < num_layers; ++l) {
        const LayerSpec& ls = s.layers[l];
        DenseLayerParams p;
        p.weights = read_doubles(r, size_t(ls.out_width) * ls.fanin);
        p.bn.eps = r.f64();
        p.bn.momentum = r.f64();
        p.bn.gain = read_doubles(r, ls.out_width);
        p.bn.bias = read_doubles(r, ls.out_width);
        p.bn.running_mean = read_doubles(r, ls.out_width);
        p.bn.running_var = read_doubles(r, ls.out_width);
        p.act.spec.bits = int(r.u32());
        p.act.spec.is_signed = r.u8() != 0;
        p.act.scale = r.f64();
        p.scale_initialized = r.u8() != 0;
        m.layers.push_back(std::move(p));
    }
    m.frozen = r.u8() != 0;
    if (r.remaining() != 0) throw std::runtime_error("checkpoint corrupt: trailing bytes");

    std::vector<std::string> violations = validate_spec(m.spec, 1 << 30);
    if (!violations.empty())
        throw std::runtime_error("checkpoint corrupt: " + violations.front());
    return m;
}

void save_model(const TrainedModel& model, const std::string& path) {
    write_file_bytes(path, serialize_model(model));
}

TrainedModel load_model(const std::string& path) {
    return deserialize_model(read_file_bytes(path));
}

}  // namespace logicforge
