#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "logicforge/dataset.hpp"
#include "logicforge/quantizer.hpp"
#include "logicforge/topology.hpp"

namespace logicforge {

struct BatchNormParams {
    std::vector<double> gain;
    std::vector<double> bias;
    std::vector<double> running_mean;
    std::vector<double> running_var;
    double eps = 1e-5;
    double momentum = 0.1;
};

// Weights are stored compactly: weights[j * fanin + k] pairs with
// mask.indices[j][k]. There is no dense matrix anywhere, so a gradient
// for an unmasked connection cannot even be expressed.
struct DenseLayerParams {
    std::vector<double> weights;
    BatchNormParams bn;
    Quantizer act;
    bool scale_initialized = false;
};

struct TrainedModel {
    NetworkSpec spec;
    std::vector<SparsityMask> masks;
    std::vector<DenseLayerParams> layers;
    std::vector<FeatureRange> input_ranges;
    bool frozen = false;

    size_t num_layers() const { return spec.layers.size(); }
};

enum class ForwardMode {
    // Batch-statistics BN, fake-quantized activations, running stats
    // updated, scales lazily initialized. Requires an unfrozen model.
    Train,
    // Running-statistics BN, fake-quantized activations. Pure.
    Eval,
    // Batch-statistics BN but activations pass through the quantizer's
    // clamp surrogate instead of rounding. Pure; exists so analytic
    // gradients can be checked against finite differences of a
    // piecewise-smooth loss.
    Surrogate,
};

struct LayerCache {
    std::vector<double> z;           // batch x out_width, pre-BN
    std::vector<double> mean;        // per neuron, stats used by this pass
    std::vector<double> var;
    std::vector<double> y;           // batch x out_width, post-BN
    std::vector<double> out_values;  // batch x out_width, post-activation
    std::vector<uint32_t> out_codes; // batch x out_width, empty in Surrogate mode
};

struct ForwardResult {
    size_t batch = 0;
    std::vector<double> input_values;  // batch x input_features, dequantized
    std::vector<LayerCache> layers;

    const std::vector<double>& scores() const { return layers.back().out_values; }
    const std::vector<uint32_t>& output_codes() const { return layers.back().out_codes; }
};

// input_codes is row-major batch x input_features.
ForwardResult forward(TrainedModel& model, const uint32_t* input_codes, size_t batch,
                      ForwardMode mode);

struct LayerGrads {
    std::vector<double> weights;
    std::vector<double> gain;
    std::vector<double> bias;
    double act_scale = 0.0;
};

struct Gradients {
    std::vector<LayerGrads> layers;
};

double cross_entropy_loss(const std::vector<double>& scores, const uint32_t* labels, size_t batch,
                          uint32_t num_classes);

// Cross-entropy at the scores, then back through activation STE, batch
// BN, and masked weights. Valid for caches from Train or Surrogate
// forwards (both use batch statistics).
Gradients backward(const TrainedModel& model, const ForwardResult& cache, const uint32_t* labels);

struct TrainConfig {
    uint32_t epochs = 1000;
    uint32_t batch_size = 1024;
    double lr = 0.1;
    double decay_factor = 0.1;
    uint32_t decay_step = 300;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    uint64_t seed = 0;
};

// Optional per-epoch metrics sink; header + one CSV line per epoch.
// val_acc is "nan" when no validation split was given.
struct TrainOptions {
    std::ostream* metrics = nullptr;
    const Dataset* val = nullptr;
};

// Epoch loop with seeded shuffling, Adam, and step-decay learning rate.
// Weights, BN affine parameters, and hidden activation scales are
// trained; the output layer's scale is set once from the first batch's
// statistics and then held (it is a softmax temperature — see the note
// in the update loop). Freezes the model on completion.
TrainedModel train(const NetworkSpec& spec, const Dataset& train_ds, const TrainConfig& cfg,
                   const TrainOptions& opts = {});

double evaluate(TrainedModel& model, const Dataset& ds);

// Argmax with ties to the lowest class index.
uint32_t predict_class(const double* scores, uint32_t num_classes);

// Fresh unfrozen model: masks generated from spec.seed, weights uniform
// in +-sqrt(1/fanin) from the weight stream, BN at identity, activation
// scale 1 pending lazy initialization.
TrainedModel init_model(const NetworkSpec& spec, const std::vector<FeatureRange>& input_ranges,
                        uint64_t weight_seed);

void freeze(TrainedModel& model);

// The frozen neuron body shared with truth-table enumeration: weighted
// sum over the gathered inputs, then the running-statistics BN affine.
// Both callers must see bit-identical arithmetic, so this is the only
// implementation.
double eval_neuron_preact(const TrainedModel& model, size_t layer, size_t neuron,
                          const double* gathered);

double input_scale(int input_bits);

}  // namespace logicforge
