#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "logicforge/rng.hpp"
#include "logicforge/trainer.hpp"

namespace lftest {

// Flat pointers to every trainable parameter, layer by layer in the
// order weights, gain, bias, scale — matching grad_flat below.
inline std::vector<double*> param_refs(logicforge::TrainedModel& m) {
    std::vector<double*> refs;
    for (size_t l = 0; l < m.num_layers(); ++l) {
        auto& p = m.layers[l];
        for (auto& w : p.weights) refs.push_back(&w);
        for (auto& g : p.bn.gain) refs.push_back(&g);
        for (auto& b : p.bn.bias) refs.push_back(&b);
        refs.push_back(&p.act.scale);
    }
    return refs;
}

inline std::vector<double> grad_flat(const logicforge::Gradients& g) {
    std::vector<double> out;
    for (const auto& lg : g.layers) {
        out.insert(out.end(), lg.weights.begin(), lg.weights.end());
        out.insert(out.end(), lg.gain.begin(), lg.gain.end());
        out.insert(out.end(), lg.bias.begin(), lg.bias.end());
        out.push_back(lg.act_scale);
    }
    return out;
}

// Which side of its clamp every activation sits on (0 below, 1 inside,
// 2 above). A central-difference probe is only trustworthy when this
// pattern matches at theta-h and theta+h; a flip means the loss has a
// kink between the two evaluation points.
inline std::vector<uint8_t> clamp_pattern(const logicforge::TrainedModel& m,
                                          const logicforge::ForwardResult& r) {
    std::vector<uint8_t> pat;
    for (size_t l = 0; l < m.num_layers(); ++l) {
        const auto& q = m.layers[l].act;
        double lo = double(q.spec.int_min()) * q.scale;
        double hi = double(q.spec.int_max()) * q.scale;
        for (double y : r.layers[l].y) pat.push_back(y < lo ? 0 : y > hi ? 2 : 1);
    }
    return pat;
}

struct GradCheckResult {
    int checked = 0;
    int failed = 0;
    int skipped = 0;     // probes discarded for straddling a kink
    double worst = 0.0;  // largest |analytic - fd| - tolerance margin seen
};

// Central finite differences of the surrogate cross-entropy against the
// analytic gradients, probing min_probes randomly chosen parameters.
inline GradCheckResult run_gradcheck(logicforge::TrainedModel& model,
                                     const std::vector<uint32_t>& codes,
                                     const std::vector<uint32_t>& labels, size_t batch,
                                     int min_probes, uint64_t seed) {
    using namespace logicforge;

    auto loss_of = [&](ForwardResult& r) {
        r = forward(model, codes.data(), batch, ForwardMode::Surrogate);
        return cross_entropy_loss(r.scores(), labels.data(), batch, model.spec.num_classes);
    };

    ForwardResult base;
    loss_of(base);
    Gradients grads = backward(model, base, labels.data());
    std::vector<double> analytic = grad_flat(grads);
    std::vector<double*> refs = param_refs(model);

    GradCheckResult res;
    SplitMix64 rng(seed);
    int attempts = 0;
    while (res.checked < min_probes && attempts < min_probes * 50) {
        ++attempts;
        size_t p = rng.bounded(refs.size());
        double theta = *refs[p];
        double h = 1e-5 * std::max(1.0, std::fabs(theta));

        ForwardResult rp, rm;
        *refs[p] = theta + h;
        double lp = loss_of(rp);
        std::vector<uint8_t> pat_p = clamp_pattern(model, rp);
        *refs[p] = theta - h;
        double lm = loss_of(rm);
        std::vector<uint8_t> pat_m = clamp_pattern(model, rm);
        *refs[p] = theta;

        if (pat_p != pat_m) {
            ++res.skipped;
            continue;
        }
        double fd = (lp - lm) / (2.0 * h);
        double err = std::fabs(analytic[p] - fd);
        double tol = std::max(1e-4 * std::max(std::fabs(analytic[p]), std::fabs(fd)), 1e-7);
        res.worst = std::max(res.worst, err - tol);
        if (err > tol) ++res.failed;
        ++res.checked;
    }
    return res;
}

}  // namespace lftest
