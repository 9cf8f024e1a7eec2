#include "logicforge/simulator.hpp"

#include <algorithm>
#include <stdexcept>

#include "logicforge/rng.hpp"

namespace logicforge {

std::vector<uint32_t> eval_netlist(const Netlist& net, const std::vector<uint32_t>& input_codes) {
    if (input_codes.size() != net.input_features)
        throw std::invalid_argument("eval_netlist: expected " + std::to_string(net.input_features) +
                                    " input codes, got " + std::to_string(input_codes.size()));
    uint32_t in_limit = uint32_t((uint64_t(1) << net.input_bits) - 1);
    for (uint32_t c : input_codes)
        if (c > in_limit)
            throw std::invalid_argument("eval_netlist: input code " + std::to_string(c) +
                                        " out of range for " + std::to_string(net.input_bits) +
                                        " bits");

    std::vector<uint32_t> prev(input_codes);
    std::vector<uint32_t> cur;
    for (size_t l = 0; l < net.layers.size(); ++l) {
        cur.assign(net.layer_widths[l], 0);
        for (const HBBInstance& hbb : net.layers[l]) {
            uint64_t addr = 0;
            int src_bits = hbb.table.in_bits / int(hbb.inputs.size());
            for (uint32_t src : hbb.inputs) addr = (addr << src_bits) | prev[src];
            cur[hbb.neuron] = hbb.table.entries[addr];
        }
        prev.swap(cur);
    }

    std::vector<uint32_t> out(net.num_classes);
    for (uint32_t c = 0; c < net.num_classes; ++c) out[c] = prev[c];
    return out;
}

std::string EquivalenceReport::summary_line() const {
    return "samples=" + std::to_string(samples_checked) +
           " mismatches=" + std::to_string(mismatches) +
           " exhaustive=" + (exhaustive ? std::string("true") : std::string("false"));
}

namespace {

// Model-side output codes for a batch of input vectors.
std::vector<uint32_t> model_codes(TrainedModel& model, const std::vector<uint32_t>& codes,
                                  size_t batch) {
    ForwardResult r = forward(model, codes.data(), batch, ForwardMode::Eval);
    return r.output_codes();
}

EquivalenceReport compare_vectors(TrainedModel& model, const Netlist& net,
                                  const std::vector<uint32_t>& all_codes, uint64_t count,
                                  bool exhaustive) {
    EquivalenceReport rep;
    rep.exhaustive = exhaustive;
    size_t f_count = net.input_features;
    uint32_t classes = net.num_classes;
    const size_t chunk = 4096;
    std::vector<uint32_t> one(f_count);

    for (uint64_t start = 0; start < count; start += chunk) {
        size_t b = size_t(std::min<uint64_t>(chunk, count - start));
        std::vector<uint32_t> batch(all_codes.begin() + long(start * f_count),
                                    all_codes.begin() + long((start + b) * f_count));
        std::vector<uint32_t> mc = model_codes(model, batch, b);
        for (size_t i = 0; i < b; ++i) {
            std::copy_n(batch.begin() + long(i * f_count), f_count, one.begin());
            std::vector<uint32_t> nc = eval_netlist(net, one);
            bool equal = std::equal(nc.begin(), nc.end(), mc.begin() + long(i * classes));
            ++rep.samples_checked;
            if (!equal) {
                ++rep.mismatches;
                if (!rep.first_mismatch) {
                    Mismatch m;
                    m.input = one;
                    m.model_output.assign(mc.begin() + long(i * classes),
                                          mc.begin() + long((i + 1) * classes));
                    m.netlist_output = nc;
                    m.sample_index = start + i;
                    rep.first_mismatch = m;
                }
            }
        }
    }
    return rep;
}

void require_compatible(const TrainedModel& model, const Netlist& net) {
    if (!model.frozen) throw std::logic_error("check_equivalence: model must be frozen");
    if (model.spec.input_features != net.input_features ||
        model.spec.input_bits != net.input_bits || model.spec.num_classes != net.num_classes)
        throw std::invalid_argument("check_equivalence: model and netlist shapes differ");
}

}  // namespace

EquivalenceReport check_equivalence_exhaustive(TrainedModel& model, const Netlist& net,
                                               int bit_limit) {
    require_compatible(model, net);
    int total_bits = int(net.input_features) * net.input_bits;
    if (total_bits > bit_limit)
        throw std::invalid_argument(
            "exhaustive check needs " + std::to_string(total_bits) + " input bits, above the " +
            std::to_string(bit_limit) + "-bit limit; use random mode instead");

    uint64_t count = uint64_t(1) << total_bits;
    size_t f_count = net.input_features;
    uint32_t mask = uint32_t((uint64_t(1) << net.input_bits) - 1);

    // Enumeration packs feature f at bit offset f * input_bits.
    std::vector<uint32_t> all_codes(count * f_count);
    for (uint64_t a = 0; a < count; ++a)
        for (size_t f = 0; f < f_count; ++f)
            all_codes[a * f_count + f] = uint32_t(a >> (f * size_t(net.input_bits))) & mask;
    return compare_vectors(model, net, all_codes, count, true);
}

EquivalenceReport check_equivalence_random(TrainedModel& model, const Netlist& net,
                                           uint64_t samples, uint64_t seed) {
    require_compatible(model, net);
    size_t f_count = net.input_features;
    uint64_t levels = uint64_t(1) << net.input_bits;
    SplitMix64 g(mix_seed(seed, rng_domain::kSamples));
    std::vector<uint32_t> all_codes(samples * f_count);
    for (uint64_t i = 0; i < samples * f_count; ++i) all_codes[i] = uint32_t(g.bounded(levels));
    return compare_vectors(model, net, all_codes, samples, false);
}

PipelineReport pipeline_report(const Netlist& net, double clock_period_ns) {
    if (!(clock_period_ns > 0.0))
        throw std::invalid_argument("pipeline_report: clock period must be positive");
    PipelineReport rep;
    for (bool b : net.registered) rep.depth += b ? 1 : 0;
    rep.latency_ns = double(rep.depth) * clock_period_ns;
    rep.throughput_per_s = 1e9 / clock_period_ns;

    // Sum LUT levels across layer runs that share a combinational
    // segment, i.e. between consecutive registered boundaries.
    int segment = 0;
    for (size_t l = 0; l < net.layers.size(); ++l) {
        if (net.registered[l]) segment = 0;
        int layer_levels = 0;
        for (const HBBInstance& hbb : net.layers[l])
            layer_levels = std::max(layer_levels, lut_levels(hbb.table.in_bits));
        segment += layer_levels;
        rep.max_lut_levels = std::max(rep.max_lut_levels, segment);
    }
    return rep;
}

}  // namespace logicforge
