#include "logicforge/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "logicforge/optimizer.hpp"
#include "logicforge/rng.hpp"

namespace logicforge {

double input_scale(int input_bits) {
    return 1.0 / double((uint64_t(1) << input_bits) - 1);
}

TrainedModel init_model(const NetworkSpec& spec, const std::vector<FeatureRange>& input_ranges,
                        uint64_t weight_seed) {
    std::vector<std::string> violations = validate_spec(spec);
    if (!violations.empty()) throw std::invalid_argument("invalid network spec: " + violations.front());
    if (input_ranges.size() != spec.input_features)
        throw std::invalid_argument("init_model: need one feature range per input feature");

    TrainedModel m;
    m.spec = spec;
    m.input_ranges = input_ranges;
    for (size_t l = 0; l < spec.layers.size(); ++l) {
        const LayerSpec& ls = spec.layers[l];
        m.masks.push_back(generate_mask(spec.seed, uint32_t(l), ls.in_width, ls.out_width, ls.fanin));

        DenseLayerParams p;
        p.weights.resize(size_t(ls.out_width) * ls.fanin);
        SplitMix64 g(mix_seed(weight_seed, rng_domain::kWeights, l));
        double bound = std::sqrt(1.0 / double(ls.fanin));
        for (double& w : p.weights) w = (2.0 * g.uniform() - 1.0) * bound;

        p.bn.gain.assign(ls.out_width, 1.0);
        p.bn.bias.assign(ls.out_width, 0.0);
        p.bn.running_mean.assign(ls.out_width, 0.0);
        p.bn.running_var.assign(ls.out_width, 1.0);
        p.act = Quantizer{{ls.out_bits, true}, 1.0};
        m.layers.push_back(std::move(p));
    }
    return m;
}

void freeze(TrainedModel& model) { model.frozen = true; }

namespace {

double neuron_dot(const TrainedModel& model, size_t layer, size_t neuron, const double* gathered) {
    const LayerSpec& ls = model.spec.layers[layer];
    const double* w = model.layers[layer].weights.data() + neuron * ls.fanin;
    double z = 0.0;
    for (uint32_t k = 0; k < ls.fanin; ++k) z += w[k] * gathered[k];
    return z;
}

double bn_affine(const BatchNormParams& bn, size_t j, double z, double mean, double var) {
    return bn.gain[j] * ((z - mean) / std::sqrt(var + bn.eps)) + bn.bias[j];
}

}  // namespace

double eval_neuron_preact(const TrainedModel& model, size_t layer, size_t neuron,
                          const double* gathered) {
    const BatchNormParams& bn = model.layers[layer].bn;
    double z = neuron_dot(model, layer, neuron, gathered);
    return bn_affine(bn, neuron, z, bn.running_mean[neuron], bn.running_var[neuron]);
}

ForwardResult forward(TrainedModel& model, const uint32_t* input_codes, size_t batch,
                      ForwardMode mode) {
    if (mode == ForwardMode::Train && model.frozen)
        throw std::logic_error("train-mode forward on a frozen model");
    if (batch == 0) throw std::invalid_argument("forward: empty batch");

    ForwardResult r;
    r.batch = batch;
    const NetworkSpec& spec = model.spec;
    size_t f_count = spec.input_features;
    double in_scale = input_scale(spec.input_bits);
    uint64_t in_levels = uint64_t(1) << spec.input_bits;

    r.input_values.resize(batch * f_count);
    for (size_t i = 0; i < batch * f_count; ++i) {
        if (input_codes[i] >= in_levels)
            throw std::invalid_argument("forward: input code " + std::to_string(input_codes[i]) +
                                        " out of range for " + std::to_string(spec.input_bits) +
                                        " bits");
        r.input_values[i] = double(input_codes[i]) * in_scale;
    }

    r.layers.resize(spec.layers.size());
    uint32_t max_fanin = 0;
    for (const LayerSpec& ls : spec.layers) max_fanin = std::max(max_fanin, ls.fanin);
    std::vector<double> gather_buf(max_fanin);
    double* gathered = gather_buf.data();

    for (size_t l = 0; l < spec.layers.size(); ++l) {
        const LayerSpec& ls = spec.layers[l];
        DenseLayerParams& p = model.layers[l];
        const SparsityMask& mask = model.masks[l];
        LayerCache& c = r.layers[l];
        const double* x = l == 0 ? r.input_values.data() : r.layers[l - 1].out_values.data();
        size_t in_w = ls.in_width;
        size_t out_w = ls.out_width;

        c.z.resize(batch * out_w);
        for (size_t b = 0; b < batch; ++b) {
            const double* xb = x + b * in_w;
            for (size_t j = 0; j < out_w; ++j) {
                const std::vector<uint32_t>& idx = mask.indices[j];
                for (uint32_t k = 0; k < ls.fanin; ++k) gathered[k] = xb[idx[k]];
                c.z[b * out_w + j] = neuron_dot(model, l, j, gathered);
            }
        }

        bool batch_stats = mode != ForwardMode::Eval;
        c.mean.resize(out_w);
        c.var.resize(out_w);
        if (batch_stats) {
            for (size_t j = 0; j < out_w; ++j) {
                double s = 0.0;
                for (size_t b = 0; b < batch; ++b) s += c.z[b * out_w + j];
                double mean = s / double(batch);
                double sq = 0.0;
                for (size_t b = 0; b < batch; ++b) {
                    double d = c.z[b * out_w + j] - mean;
                    sq += d * d;
                }
                c.mean[j] = mean;
                c.var[j] = sq / double(batch);
            }
            if (mode == ForwardMode::Train) {
                double mom = p.bn.momentum;
                for (size_t j = 0; j < out_w; ++j) {
                    double unbiased =
                        batch > 1 ? c.var[j] * double(batch) / double(batch - 1) : c.var[j];
                    p.bn.running_mean[j] = (1.0 - mom) * p.bn.running_mean[j] + mom * c.mean[j];
                    p.bn.running_var[j] = (1.0 - mom) * p.bn.running_var[j] + mom * unbiased;
                }
            }
        } else {
            c.mean = p.bn.running_mean;
            c.var = p.bn.running_var;
        }

        c.y.resize(batch * out_w);
        if (mode == ForwardMode::Eval) {
            for (size_t b = 0; b < batch; ++b) {
                const double* xb = x + b * in_w;
                for (size_t j = 0; j < out_w; ++j) {
                    const std::vector<uint32_t>& idx = mask.indices[j];
                    for (uint32_t k = 0; k < ls.fanin; ++k) gathered[k] = xb[idx[k]];
                    c.y[b * out_w + j] = eval_neuron_preact(model, l, j, gathered);
                }
            }
        } else {
            for (size_t b = 0; b < batch; ++b)
                for (size_t j = 0; j < out_w; ++j)
                    c.y[b * out_w + j] = bn_affine(p.bn, j, c.z[b * out_w + j], c.mean[j], c.var[j]);
        }

        if (mode == ForwardMode::Train && !p.scale_initialized) {
            double s = 0.0;
            for (double v : c.y) s += v;
            double mean = s / double(c.y.size());
            double sq = 0.0;
            for (double v : c.y) sq += (v - mean) * (v - mean);
            double stddev = std::sqrt(sq / double(c.y.size()));
            p.act.scale = std::max(2.0 * stddev / double(uint64_t(1) << ls.out_bits), 1e-3);
            p.scale_initialized = true;
        }

        c.out_values.resize(batch * out_w);
        if (mode == ForwardMode::Surrogate) {
            for (size_t i = 0; i < c.y.size(); ++i) c.out_values[i] = surrogate(p.act, c.y[i]);
        } else {
            c.out_codes.resize(batch * out_w);
            for (size_t i = 0; i < c.y.size(); ++i) {
                c.out_codes[i] = quantize(p.act, c.y[i]);
                c.out_values[i] = dequantize(p.act, c.out_codes[i]);
            }
        }
    }
    return r;
}

uint32_t predict_class(const double* scores, uint32_t num_classes) {
    uint32_t best = 0;
    for (uint32_t c = 1; c < num_classes; ++c)
        if (scores[c] > scores[best]) best = c;
    return best;
}

double cross_entropy_loss(const std::vector<double>& scores, const uint32_t* labels, size_t batch,
                          uint32_t num_classes) {
    double total = 0.0;
    for (size_t b = 0; b < batch; ++b) {
        const double* s = scores.data() + b * num_classes;
        double mx = *std::max_element(s, s + num_classes);
        double sum = 0.0;
        for (uint32_t c = 0; c < num_classes; ++c) sum += std::exp(s[c] - mx);
        total += std::log(sum) + mx - s[labels[b]];
    }
    return total / double(batch);
}

Gradients backward(const TrainedModel& model, const ForwardResult& cache, const uint32_t* labels) {
    const NetworkSpec& spec = model.spec;
    size_t batch = cache.batch;
    uint32_t num_classes = spec.num_classes;
    size_t num_layers = spec.layers.size();

    Gradients g;
    g.layers.resize(num_layers);

    // d(loss)/d(scores) for mean cross-entropy over the batch.
    std::vector<double> upstream(batch * num_classes);
    const std::vector<double>& scores = cache.scores();
    for (size_t b = 0; b < batch; ++b) {
        const double* s = scores.data() + b * num_classes;
        double mx = *std::max_element(s, s + num_classes);
        double sum = 0.0;
        for (uint32_t c = 0; c < num_classes; ++c) sum += std::exp(s[c] - mx);
        for (uint32_t c = 0; c < num_classes; ++c) {
            double p = std::exp(s[c] - mx) / sum;
            upstream[b * num_classes + c] = (p - (c == labels[b] ? 1.0 : 0.0)) / double(batch);
        }
    }

    std::vector<double> g_y, dz, next_upstream;
    for (size_t li = num_layers; li-- > 0;) {
        const LayerSpec& ls = spec.layers[li];
        const DenseLayerParams& p = model.layers[li];
        const SparsityMask& mask = model.masks[li];
        const LayerCache& c = cache.layers[li];
        size_t out_w = ls.out_width;
        size_t in_w = ls.in_width;
        const double* x = li == 0 ? cache.input_values.data() : cache.layers[li - 1].out_values.data();

        LayerGrads& lg = g.layers[li];
        lg.weights.assign(p.weights.size(), 0.0);
        lg.gain.assign(out_w, 0.0);
        lg.bias.assign(out_w, 0.0);

        // Straight-through estimator through the activation quantizer.
        g_y.assign(batch * out_w, 0.0);
        for (size_t i = 0; i < batch * out_w; ++i) {
            SteGrad sg = ste_backward(p.act, c.y[i], upstream[i]);
            g_y[i] = sg.dx;
            lg.act_scale += sg.dscale;
        }

        // Batch-norm backward using the pass's batch statistics.
        dz.assign(batch * out_w, 0.0);
        for (size_t j = 0; j < out_w; ++j) {
            double inv_std = 1.0 / std::sqrt(c.var[j] + p.bn.eps);
            double dvar = 0.0, dmean = 0.0, sum_zc = 0.0;
            for (size_t b = 0; b < batch; ++b) {
                double zc = c.z[b * out_w + j] - c.mean[j];
                double gy = g_y[b * out_w + j];
                lg.gain[j] += gy * zc * inv_std;
                lg.bias[j] += gy;
                double dzn = gy * p.bn.gain[j];
                dvar += dzn * zc * (-0.5) * inv_std * inv_std * inv_std;
                dmean += -dzn * inv_std;
                sum_zc += zc;
            }
            dmean += dvar * (-2.0 / double(batch)) * sum_zc;
            for (size_t b = 0; b < batch; ++b) {
                double zc = c.z[b * out_w + j] - c.mean[j];
                double dzn = g_y[b * out_w + j] * p.bn.gain[j];
                dz[b * out_w + j] =
                    dzn * inv_std + dvar * 2.0 * zc / double(batch) + dmean / double(batch);
            }
        }

        if (li > 0) next_upstream.assign(batch * in_w, 0.0);
        for (size_t b = 0; b < batch; ++b) {
            const double* xb = x + b * in_w;
            for (size_t j = 0; j < out_w; ++j) {
                double d = dz[b * out_w + j];
                const std::vector<uint32_t>& idx = mask.indices[j];
                const double* w = p.weights.data() + j * ls.fanin;
                double* wg = lg.weights.data() + j * ls.fanin;
                for (uint32_t k = 0; k < ls.fanin; ++k) {
                    wg[k] += d * xb[idx[k]];
                    if (li > 0) next_upstream[b * in_w + idx[k]] += d * w[k];
                }
            }
        }
        if (li > 0) upstream = next_upstream;
    }
    return g;
}

namespace {

double accuracy_on_codes(TrainedModel& model, const std::vector<uint32_t>& codes,
                         const std::vector<uint32_t>& labels, size_t num_features,
                         uint32_t num_classes) {
    size_t n = labels.size();
    if (n == 0) return 0.0;
    size_t correct = 0;
    const size_t chunk = 4096;
    for (size_t start = 0; start < n; start += chunk) {
        size_t b = std::min(chunk, n - start);
        ForwardResult r = forward(model, codes.data() + start * num_features, b, ForwardMode::Eval);
        for (size_t i = 0; i < b; ++i)
            if (predict_class(r.scores().data() + i * num_classes, num_classes) == labels[i])
                ++correct;
    }
    return double(correct) / double(n);
}

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

TrainedModel train(const NetworkSpec& spec, const Dataset& train_ds, const TrainConfig& cfg,
                   const TrainOptions& opts) {
    std::vector<std::string> violations = validate_spec(spec);
    if (!violations.empty())
        throw std::invalid_argument("invalid network spec: " + violations.front());
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (!(cfg.lr > 0.0)) throw std::invalid_argument("learning rate must be > 0");
    if (train_ds.size() == 0) throw std::invalid_argument("training set is empty");
    if (train_ds.num_features != spec.input_features)
        throw std::invalid_argument("dataset has " + std::to_string(train_ds.num_features) +
                                    " features, spec wants " +
                                    std::to_string(spec.input_features));
    for (size_t i = 0; i < train_ds.size(); ++i)
        if (train_ds.labels[i] >= spec.num_classes)
            throw std::invalid_argument("label " + std::to_string(train_ds.labels[i]) +
                                        " out of range at row " + std::to_string(i));

    std::vector<FeatureRange> ranges = feature_ranges(train_ds);
    std::vector<uint32_t> codes = quantize_inputs(train_ds, ranges, spec.input_bits);

    std::vector<uint32_t> val_codes;
    std::vector<uint32_t> val_labels;
    if (opts.val && opts.val->size() > 0) {
        if (opts.val->num_features != spec.input_features)
            throw std::invalid_argument("validation set feature count mismatch");
        val_codes = quantize_inputs(*opts.val, ranges, spec.input_bits);
        val_labels = opts.val->labels;
    }

    TrainedModel model = init_model(spec, ranges, cfg.seed);

    size_t num_layers = spec.layers.size();
    std::vector<Adam> st_w, st_gain, st_bias, st_scale;
    for (size_t l = 0; l < num_layers; ++l) {
        st_w.emplace_back(model.layers[l].weights.size(), cfg.beta1, cfg.beta2, cfg.adam_eps);
        st_gain.emplace_back(spec.layers[l].out_width, cfg.beta1, cfg.beta2, cfg.adam_eps);
        st_bias.emplace_back(spec.layers[l].out_width, cfg.beta1, cfg.beta2, cfg.adam_eps);
        st_scale.emplace_back(1, cfg.beta1, cfg.beta2, cfg.adam_eps);
    }

    size_t n = train_ds.size();
    uint32_t num_classes = spec.num_classes;
    std::vector<size_t> order(n);
    std::vector<uint32_t> batch_codes(size_t(cfg.batch_size) * spec.input_features);
    std::vector<uint32_t> batch_labels(cfg.batch_size);

    if (opts.metrics) *opts.metrics << "epoch,lr,train_loss,train_acc,val_acc\n";

    for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double lr = cfg.lr * std::pow(cfg.decay_factor, double(epoch / cfg.decay_step));

        std::iota(order.begin(), order.end(), size_t(0));
        SplitMix64 g(mix_seed(cfg.seed, rng_domain::kShuffle, epoch));
        for (size_t i = n; i > 1; --i) std::swap(order[i - 1], order[g.bounded(i)]);

        double loss_sum = 0.0;
        size_t correct = 0;
        size_t batch_index = 0;
        for (size_t start = 0; start < n; start += cfg.batch_size, ++batch_index) {
            size_t b = std::min(size_t(cfg.batch_size), n - start);
            for (size_t i = 0; i < b; ++i) {
                size_t src = order[start + i];
                std::copy_n(codes.data() + src * spec.input_features, spec.input_features,
                            batch_codes.data() + i * spec.input_features);
                batch_labels[i] = train_ds.labels[src];
            }

            ForwardResult fwd;
            try {
                fwd = forward(model, batch_codes.data(), b, ForwardMode::Train);
            } catch (const std::domain_error&) {
                // quantize rejects non-finite activations; during training that
                // means the parameters blew up.
                throw std::runtime_error("training diverged: non-finite activation at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(batch_index));
            }
            double loss = cross_entropy_loss(fwd.scores(), batch_labels.data(), b, num_classes);
            if (!std::isfinite(loss))
                throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch " +
                                         std::to_string(batch_index));
            loss_sum += loss * double(b);
            for (size_t i = 0; i < b; ++i)
                if (predict_class(fwd.scores().data() + i * num_classes, num_classes) ==
                    batch_labels[i])
                    ++correct;

            Gradients grads = backward(model, fwd, batch_labels.data());
            for (size_t l = 0; l < num_layers; ++l) {
                DenseLayerParams& p = model.layers[l];
                LayerGrads& lg = grads.layers[l];
                st_w[l].step(p.weights.data(), lg.weights.data(), lr);
                st_gain[l].step(p.bn.gain.data(), lg.gain.data(), lr);
                st_bias[l].step(p.bn.bias.data(), lg.bias.data(), lr);
                // The last layer's scale multiplies every class score
                // equally — a softmax temperature that cannot change the
                // argmax. Left free it can chase a zero-scale attractor
                // that flattens the softmax for good, so it keeps its
                // statistics-derived initialization instead.
                if (l + 1 < num_layers) {
                    st_scale[l].step(&p.act.scale, &lg.act_scale, lr);
                    p.act.scale = std::max(p.act.scale, 1e-6);
                }
            }
        }

        if (opts.metrics) {
            double val_acc = std::numeric_limits<double>::quiet_NaN();
            if (!val_labels.empty())
                val_acc = accuracy_on_codes(model, val_codes, val_labels, spec.input_features,
                                            num_classes);
            *opts.metrics << epoch << ',' << fmt_g(lr) << ',' << fmt_g(loss_sum / double(n)) << ','
                          << fmt_g(double(correct) / double(n)) << ',' << fmt_g(val_acc) << '\n';
        }
    }

    freeze(model);
    return model;
}

double evaluate(TrainedModel& model, const Dataset& ds) {
    if (ds.num_features != model.spec.input_features)
        throw std::invalid_argument("evaluate: dataset feature count mismatch");
    if (ds.size() == 0) return 0.0;
    std::vector<uint32_t> codes = quantize_inputs(ds, model.input_ranges, model.spec.input_bits);
    std::vector<uint32_t> labels = ds.labels;
    return accuracy_on_codes(model, codes, labels, model.spec.input_features,
                             model.spec.num_classes);
}

}  // namespace logicforge
