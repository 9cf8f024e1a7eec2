#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "logicforge/netlist.hpp"
#include "logicforge/trainer.hpp"

namespace logicforge {

// One evaluation: a lookup per HBB in layer order, addresses formed by
// concatenating source codes in mask order (first source most
// significant). Registers are latency bookkeeping only and never touch
// values. Pure function.
std::vector<uint32_t> eval_netlist(const Netlist& net, const std::vector<uint32_t>& input_codes);

struct Mismatch {
    std::vector<uint32_t> input;
    std::vector<uint32_t> model_output;
    std::vector<uint32_t> netlist_output;
    uint64_t sample_index = 0;
};

struct EquivalenceReport {
    uint64_t samples_checked = 0;
    uint64_t mismatches = 0;
    std::optional<Mismatch> first_mismatch;
    bool exhaustive = false;

    std::string summary_line() const;
};

// Default ceiling on total input bits for exhaustive mode.
constexpr int kExhaustiveBitLimit = 24;

EquivalenceReport check_equivalence_exhaustive(TrainedModel& model, const Netlist& net,
                                               int bit_limit = kExhaustiveBitLimit);

EquivalenceReport check_equivalence_random(TrainedModel& model, const Netlist& net, uint64_t samples,
                                           uint64_t seed);

struct PipelineReport {
    uint32_t depth = 0;
    double latency_ns = 0.0;
    double throughput_per_s = 0.0;
    // Worst-case combinational LUT levels between adjacent registered
    // boundaries (or end to end when nothing is registered).
    int max_lut_levels = 0;
};

PipelineReport pipeline_report(const Netlist& net, double clock_period_ns);

}  // namespace logicforge
