#pragma once

#include <cstdint>

namespace logicforge {

// Uniform symmetric quantizer with a learned per-tensor scale.
//
// Codes are stored offset-binary: code = level - int_min, so a code is
// always in [0, 2^bits - 1] and concatenating codes gives ROM addresses
// directly. Signed quantizers span levels [-2^(bits-1), 2^(bits-1)-1],
// unsigned ones [0, 2^bits - 1]. bits = 1 signed gives levels {-1, 0}.
struct QuantizerSpec {
    int bits = 1;
    bool is_signed = true;

    int64_t int_min() const { return is_signed ? -(int64_t(1) << (bits - 1)) : 0; }
    int64_t int_max() const {
        return is_signed ? (int64_t(1) << (bits - 1)) - 1 : (int64_t(1) << bits) - 1;
    }
    uint64_t num_levels() const { return uint64_t(1) << bits; }
};

struct Quantizer {
    QuantizerSpec spec;
    double scale = 1.0;
};

struct SteGrad {
    double dx = 0.0;
    double dscale = 0.0;
};

// Rounds half away from zero. Throws std::domain_error on non-finite input.
uint32_t quantize(const Quantizer& q, double x);

double dequantize(const Quantizer& q, uint32_t code);

// x quantized then immediately dequantized, as the forward pass uses it.
double fake_quantize(const Quantizer& q, double x);

// The straight-through estimator's smooth stand-in: clamp to the
// representable range, no rounding. Matches fake_quantize's clipping
// behaviour, so gradients checked against this function transfer.
double surrogate(const Quantizer& q, double x);

// Backward of fake_quantize under the clipped STE. Inside the clip range
// the rounding is treated as identity (dx = upstream, dscale = 0); outside
// it the output is pinned to a boundary level times scale, so all the
// gradient flows into the scale.
SteGrad ste_backward(const Quantizer& q, double x, double upstream);

void validate_quantizer(const Quantizer& q);

}  // namespace logicforge
