#include "logicforge/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "logicforge/rng.hpp"

namespace logicforge {

namespace {
constexpr uint64_t kBlobsDomain = 0xB10B5ULL;

double gaussian(SplitMix64& g) {
    double u1 = 1.0 - g.uniform();
    double u2 = g.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}
}  // namespace

Dataset make_blobs(const BlobsSpec& spec) {
    if (spec.classes < 1 || spec.features < 1) throw std::invalid_argument("make_blobs: bad shape");
    SplitMix64 g(mix_seed(spec.seed, kBlobsDomain));

    std::vector<double> centers(size_t(spec.classes) * spec.features);
    for (double& c : centers) c = g.uniform();

    Dataset ds;
    ds.num_features = spec.features;
    ds.features.reserve(spec.samples * spec.features);
    ds.labels.reserve(spec.samples);
    for (size_t i = 0; i < spec.samples; ++i) {
        uint32_t label = uint32_t(i % spec.classes);
        ds.labels.push_back(label);
        const double* center = centers.data() + size_t(label) * spec.features;
        for (size_t f = 0; f < spec.features; ++f)
            ds.features.push_back(center[f] + spec.spread * gaussian(g));
    }
    return ds;
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write dataset: " + path);
    for (size_t f = 0; f < ds.num_features; ++f) out << "f" << f << ",";
    out << "label\n";
    char buf[40];
    for (size_t i = 0; i < ds.size(); ++i) {
        const double* row = ds.row(i);
        for (size_t f = 0; f < ds.num_features; ++f) {
            std::snprintf(buf, sizeof(buf), "%.9g", row[f]);
            out << buf << ",";
        }
        out << ds.labels[i] << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace logicforge
