#include "logicforge/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace logicforge {

namespace {
int64_t clip_level(const Quantizer& q, double x) {
    if (!std::isfinite(x))
        throw std::domain_error("quantize: non-finite input " + std::to_string(x));
    double t = std::round(x / q.scale);
    double lo = double(q.spec.int_min());
    double hi = double(q.spec.int_max());
    return int64_t(std::min(std::max(t, lo), hi));
}
}  // namespace

uint32_t quantize(const Quantizer& q, double x) {
    return uint32_t(clip_level(q, x) - q.spec.int_min());
}

double dequantize(const Quantizer& q, uint32_t code) {
    if (code >= q.spec.num_levels())
        throw std::domain_error("dequantize: code " + std::to_string(code) + " out of range for " +
                                std::to_string(q.spec.bits) + " bits");
    return double(int64_t(code) + q.spec.int_min()) * q.scale;
}

double fake_quantize(const Quantizer& q, double x) {
    return double(clip_level(q, x)) * q.scale;
}

double surrogate(const Quantizer& q, double x) {
    double lo = double(q.spec.int_min()) * q.scale;
    double hi = double(q.spec.int_max()) * q.scale;
    return std::min(std::max(x, lo), hi);
}

SteGrad ste_backward(const Quantizer& q, double x, double upstream) {
    if (!std::isfinite(x))
        throw std::domain_error("ste_backward: non-finite input " + std::to_string(x));
    double t = x / q.scale;
    SteGrad g;
    if (t < double(q.spec.int_min())) {
        g.dscale = upstream * double(q.spec.int_min());
    } else if (t > double(q.spec.int_max())) {
        g.dscale = upstream * double(q.spec.int_max());
    } else {
        g.dx = upstream;
    }
    return g;
}

void validate_quantizer(const Quantizer& q) {
    if (q.spec.bits < 1 || q.spec.bits > 32)
        throw std::invalid_argument("quantizer bits must be in [1, 32], got " +
                                    std::to_string(q.spec.bits));
    if (!(q.scale > 0.0) || !std::isfinite(q.scale))
        throw std::invalid_argument("quantizer scale must be finite and positive");
}

}  // namespace logicforge
