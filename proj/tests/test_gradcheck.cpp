#include <vector>

#include "doctest.h"
#include "gradcheck.hpp"
#include "logicforge/dataset.hpp"
#include "logicforge/rng.hpp"
#include "logicforge/synthetic.hpp"
#include "logicforge/trainer.hpp"
#include "support.hpp"

using namespace logicforge;

namespace {

struct MicroNet {
    TrainedModel model;
    std::vector<uint32_t> codes;
    std::vector<uint32_t> labels;
    size_t batch = 0;
};

// A briefly trained model small enough that a few thousand finite-
// difference forwards stay cheap, plus a fixed batch to probe on.
MicroNet micro_net(std::vector<uint32_t> hidden, uint32_t classes, size_t features,
                   uint32_t fanin, int bits, uint32_t epochs, uint64_t seed) {
    lftest::TinyNetOptions o;
    o.features = features;
    o.classes = classes;
    o.hidden = std::move(hidden);
    o.bits = bits;
    o.input_bits = 2;
    o.fanin = fanin;
    o.epochs = epochs;
    o.seed = seed;
    o.samples = 256;
    lftest::TinyNet tn = lftest::train_tiny(o);

    MicroNet mn{std::move(tn.model), {}, {}, 16};
    std::vector<uint32_t> all =
        quantize_inputs(tn.data, mn.model.input_ranges, mn.model.spec.input_bits);
    mn.codes.assign(all.begin(), all.begin() + mn.batch * features);
    mn.labels.assign(tn.data.labels.begin(), tn.data.labels.begin() + mn.batch);
    return mn;
}

void expect_clean(const lftest::GradCheckResult& res, int min_probes) {
    INFO("checked=", res.checked, " failed=", res.failed, " skipped=", res.skipped,
         " worst_margin=", res.worst);
    CHECK(res.checked >= min_probes);
    CHECK(res.failed == 0);
    CHECK(res.worst <= 0.0);
}

}  // namespace

TEST_CASE("flattened gradients line up with the flattened parameters") {
    MicroNet mn = micro_net({3, 3}, 2, 4, 2, 2, 3, 11);
    ForwardResult r = forward(mn.model, mn.codes.data(), mn.batch, ForwardMode::Surrogate);
    Gradients g = backward(mn.model, r, mn.labels.data());
    std::vector<double*> refs = lftest::param_refs(mn.model);
    std::vector<double> flat = lftest::grad_flat(g);
    size_t expected = 0;
    for (size_t l = 0; l < mn.model.num_layers(); ++l) {
        const auto& p = mn.model.layers[l];
        expected += p.weights.size() + p.bn.gain.size() + p.bn.bias.size() + 1;
    }
    CHECK(refs.size() == expected);
    CHECK(flat.size() == expected);
}

TEST_CASE("finite differences match analytic gradients on a trained micro-net") {
    MicroNet mn = micro_net({3, 3}, 2, 4, 2, 2, 3, 11);
    auto res = lftest::run_gradcheck(mn.model, mn.codes, mn.labels, mn.batch, 120, 0xFD01);
    expect_clean(res, 120);
}

TEST_CASE("finite differences match on a freshly initialized model") {
    NetworkBuild nb;
    nb.input_features = 4;
    nb.input_bits = 2;
    nb.hidden = {3, 3};
    nb.num_classes = 2;
    nb.bits = 2;
    nb.fanin = 2;
    nb.seed = 21;
    NetworkSpec spec = build_network_spec(nb);
    std::vector<FeatureRange> ranges(4, FeatureRange{0.0, 1.0});
    TrainedModel model = init_model(spec, ranges, 21);

    size_t batch = 12;
    std::vector<uint32_t> codes(batch * 4);
    std::vector<uint32_t> labels(batch);
    SplitMix64 rng(99);
    for (auto& c : codes) c = uint32_t(rng.bounded(4));
    for (auto& y : labels) y = uint32_t(rng.bounded(2));

    auto res = lftest::run_gradcheck(model, codes, labels, batch, 100, 0xFD02);
    expect_clean(res, 100);
}

TEST_CASE("finite differences match on a wider single-hidden-layer net") {
    MicroNet mn = micro_net({4}, 3, 5, 3, 3, 2, 7);
    auto res = lftest::run_gradcheck(mn.model, mn.codes, mn.labels, mn.batch, 100, 0xFD03);
    expect_clean(res, 100);
}
