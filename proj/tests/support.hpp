#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "logicforge/netlist.hpp"
#include "logicforge/synthetic.hpp"
#include "logicforge/trainer.hpp"

namespace lftest {

// Fresh empty scratch directory under the system temp root.
inline std::filesystem::path tmp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("logicforge_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Small model trained briefly on synthetic blobs. Shapes are kept tiny so
// tests that enumerate truth tables or sweep inputs stay fast.
struct TinyNetOptions {
    size_t features = 6;
    uint32_t classes = 3;
    std::vector<uint32_t> hidden = {8, 6};
    int bits = 2;
    int input_bits = 2;
    uint32_t fanin = 2;
    uint32_t epochs = 12;
    uint64_t seed = 5;
    size_t samples = 512;
    double spread = 0.25;
};

struct TinyNet {
    logicforge::Dataset data;
    logicforge::TrainedModel model;
};

// Re-derives one truth table from the stored parameters by a different
// route than the library's enumeration: addresses are decoded from the
// low end through a shift register, and the activation clamps before
// rounding instead of after.
inline logicforge::TruthTable oracle_table(const logicforge::TrainedModel& m, size_t l, size_t j) {
    using namespace logicforge;
    const LayerSpec& ls = m.spec.layers[l];
    const DenseLayerParams& p = m.layers[l];
    const double* w = p.weights.data() + j * ls.fanin;

    TruthTable t;
    t.in_bits = ls.fanin_bits();
    t.out_bits = ls.out_bits;
    t.entries.resize(size_t(1) << t.in_bits);

    double in_lv = 1.0 / double((uint64_t(1) << m.spec.input_bits) - 1);
    int64_t lo = p.act.spec.int_min();
    int64_t hi = p.act.spec.int_max();
    std::vector<double> vals(ls.fanin);
    for (uint64_t a = 0; a < t.entries.size(); ++a) {
        uint64_t rest = a;
        for (uint32_t k = ls.fanin; k-- > 0;) {
            uint32_t code = uint32_t(rest) & uint32_t((1u << ls.in_bits) - 1);
            rest >>= ls.in_bits;
            if (l == 0) {
                vals[k] = double(code) * in_lv;
            } else {
                const Quantizer& pq = m.layers[l - 1].act;
                vals[k] = (double(code) - double(uint64_t(1) << (pq.spec.bits - 1))) * pq.scale;
            }
        }
        double z = 0.0;
        for (uint32_t k = 0; k < ls.fanin; ++k) z += w[k] * vals[k];
        double y = p.bn.gain[j] * ((z - p.bn.running_mean[j]) /
                                   std::sqrt(p.bn.running_var[j] + p.bn.eps)) +
                   p.bn.bias[j];
        double r = y / p.act.scale;
        r = std::min(std::max(r, double(lo)), double(hi));
        double level = r >= 0.0 ? std::floor(r + 0.5) : std::ceil(r - 0.5);
        t.entries[a] = uint32_t(int64_t(level) - lo);
    }
    return t;
}

// Dataset as CSV text in the loader's format: feature columns then an
// integer label column.
inline std::string blobs_csv(const logicforge::Dataset& ds) {
    std::string s;
    for (size_t f = 0; f < ds.num_features; ++f) s += "f" + std::to_string(f) + ",";
    s += "label\n";
    char buf[64];
    for (size_t i = 0; i < ds.size(); ++i) {
        for (size_t f = 0; f < ds.num_features; ++f) {
            std::snprintf(buf, sizeof(buf), "%.9g,", ds.row(i)[f]);
            s += buf;
        }
        s += std::to_string(ds.labels[i]) + "\n";
    }
    return s;
}

inline TinyNet train_tiny(const TinyNetOptions& o = {}) {
    using namespace logicforge;
    BlobsSpec bs;
    bs.samples = o.samples;
    bs.features = o.features;
    bs.classes = o.classes;
    bs.spread = o.spread;
    bs.seed = o.seed;
    Dataset ds = make_blobs(bs);

    NetworkBuild nb;
    nb.input_features = uint32_t(o.features);
    nb.input_bits = o.input_bits;
    nb.hidden = o.hidden;
    nb.num_classes = o.classes;
    nb.bits = o.bits;
    nb.fanin = o.fanin;
    nb.seed = o.seed;

    TrainConfig tc;
    tc.epochs = o.epochs;
    tc.batch_size = 128;
    tc.seed = o.seed;
    TrainedModel model = train(build_network_spec(nb), ds, tc);
    return TinyNet{std::move(ds), std::move(model)};
}

}  // namespace lftest
