#include "logicforge/topology.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "logicforge/rng.hpp"

namespace logicforge {

SparsityMask generate_mask(uint64_t seed, uint32_t layer_index, uint32_t in_width,
                           uint32_t out_width, uint32_t fanin) {
    if (fanin < 1 || fanin > in_width)
        throw std::invalid_argument("generate_mask: fanin " + std::to_string(fanin) +
                                    " not in [1, " + std::to_string(in_width) + "]");
    SparsityMask mask;
    mask.indices.resize(out_width);
    std::vector<uint32_t> pool(in_width);
    for (uint32_t j = 0; j < out_width; ++j) {
        SplitMix64 g(mix_seed(seed, rng_domain::kMask, layer_index, j));
        std::iota(pool.begin(), pool.end(), 0u);
        for (uint32_t i = 0; i < fanin; ++i) {
            uint32_t k = i + uint32_t(g.bounded(in_width - i));
            std::swap(pool[i], pool[k]);
        }
        mask.indices[j].assign(pool.begin(), pool.begin() + fanin);
        std::sort(mask.indices[j].begin(), mask.indices[j].end());
    }
    return mask;
}

LutCount lut_cost(int x_bits, int y_bits) {
    if (x_bits < 1 || y_bits < 1)
        throw std::invalid_argument("lut_cost: X and Y must be >= 1");
    if (x_bits <= 4) return {uint64_t(y_bits), false};
    if (x_bits - 4 >= 64) return {std::numeric_limits<uint64_t>::max(), true};
    uint64_t pow2 = uint64_t(1) << (x_bits - 4);
    uint64_t m = (x_bits % 2 == 0) ? pow2 - 1 : pow2 + 1;
    uint64_t per_output = m / 3;
    if (per_output != 0 && uint64_t(y_bits) > std::numeric_limits<uint64_t>::max() / per_output)
        return {std::numeric_limits<uint64_t>::max(), true};
    return {uint64_t(y_bits) * per_output, false};
}

int lut_levels(int x_bits) {
    if (x_bits < 1) throw std::invalid_argument("lut_levels: X must be >= 1");
    return x_bits <= 6 ? 1 : x_bits - 5;
}

LutCount model_lut_cost(const NetworkSpec& spec) {
    LutCount total;
    for (const LayerSpec& layer : spec.layers) {
        LutCount per = lut_cost(layer.fanin_bits(), layer.out_bits);
        if (per.exceeds_device_scale) return {std::numeric_limits<uint64_t>::max(), true};
        if (per.luts != 0 && uint64_t(layer.out_width) > std::numeric_limits<uint64_t>::max() / per.luts)
            return {std::numeric_limits<uint64_t>::max(), true};
        uint64_t layer_total = per.luts * layer.out_width;
        if (total.luts > std::numeric_limits<uint64_t>::max() - layer_total)
            return {std::numeric_limits<uint64_t>::max(), true};
        total.luts += layer_total;
    }
    return total;
}

std::vector<std::string> validate_spec(const NetworkSpec& spec, int fanin_cap) {
    std::vector<std::string> v;
    auto layer_name = [](size_t k) { return "layer " + std::to_string(k); };
    if (spec.layers.empty()) {
        v.push_back("network has no layers");
        return v;
    }
    if (spec.input_features < 1) v.push_back("input_features must be >= 1");
    if (spec.input_bits < 1) v.push_back("input_bits must be >= 1");
    if (spec.num_classes < 1) v.push_back("num_classes must be >= 1");

    for (size_t k = 0; k < spec.layers.size(); ++k) {
        const LayerSpec& l = spec.layers[k];
        if (l.out_width < 1) v.push_back(layer_name(k) + ": out_width must be >= 1");
        if (l.in_bits < 1) v.push_back(layer_name(k) + ": in_bits must be >= 1");
        if (l.out_bits < 1) v.push_back(layer_name(k) + ": out_bits must be >= 1");
        if (l.fanin < 1 || l.fanin > l.in_width)
            v.push_back(layer_name(k) + ": fanin " + std::to_string(l.fanin) +
                        " not in [1, " + std::to_string(l.in_width) + "]");
        else if (l.fanin_bits() > fanin_cap)
            v.push_back(layer_name(k) + ": fan-in bits " + std::to_string(l.fanin_bits()) +
                        " exceed cap " + std::to_string(fanin_cap));
        if (k == 0) {
            if (l.in_width != spec.input_features)
                v.push_back(layer_name(k) + ": in_width " + std::to_string(l.in_width) +
                            " != input_features " + std::to_string(spec.input_features));
            if (l.in_bits != spec.input_bits)
                v.push_back(layer_name(k) + ": in_bits " + std::to_string(l.in_bits) +
                            " != input_bits " + std::to_string(spec.input_bits));
        } else {
            const LayerSpec& p = spec.layers[k - 1];
            if (l.in_width != p.out_width)
                v.push_back(layer_name(k) + ": in_width " + std::to_string(l.in_width) +
                            " != previous out_width " + std::to_string(p.out_width));
            if (l.in_bits != p.out_bits)
                v.push_back(layer_name(k) + ": in_bits " + std::to_string(l.in_bits) +
                            " != previous out_bits " + std::to_string(p.out_bits));
        }
    }
    if (spec.layers.back().out_width != spec.num_classes)
        v.push_back("last layer out_width " + std::to_string(spec.layers.back().out_width) +
                    " != num_classes " + std::to_string(spec.num_classes));
    return v;
}

NetworkSpec build_network_spec(const NetworkBuild& b) {
    NetworkSpec spec;
    spec.input_features = b.input_features;
    spec.input_bits = b.input_bits;
    spec.num_classes = b.num_classes;
    spec.seed = b.seed;

    std::vector<uint32_t> widths;
    widths.push_back(b.input_features);
    widths.insert(widths.end(), b.hidden.begin(), b.hidden.end());
    widths.push_back(b.num_classes);

    size_t num_layers = widths.size() - 1;
    for (size_t l = 0; l < num_layers; ++l) {
        LayerSpec layer;
        layer.in_width = widths[l];
        layer.out_width = widths[l + 1];
        layer.in_bits = (l == 0) ? b.input_bits : b.bits;
        bool last = (l + 1 == num_layers);
        layer.out_bits = last && b.output_bits ? b.output_bits : b.bits;
        if (l == 0 && b.input_fanin)
            layer.fanin = b.input_fanin;
        else if (last && b.output_fanin)
            layer.fanin = b.output_fanin;
        else
            layer.fanin = b.fanin;
        spec.layers.push_back(layer);
    }
    return spec;
}

}  // namespace logicforge
