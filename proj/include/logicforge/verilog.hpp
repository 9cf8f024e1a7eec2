#pragma once

#include <string>
#include <utility>
#include <vector>

#include "logicforge/netlist.hpp"

namespace logicforge {

// One self-contained Verilog source: a ROM module per HBB followed by
// the `logicnet` top. Byte-identical output for identical netlists.
std::string emit_verilog(const Netlist& net);

// Same modules, one file per module plus the top; for --split-files.
std::vector<std::pair<std::string, std::string>> emit_verilog_files(const Netlist& net);

// Self-checking testbench: drives each sample, waits for the pipeline to
// flush, compares against the expected output codes. samples and
// expected are row-major (one row per vector; features resp. classes).
std::string emit_testbench(const Netlist& net, const std::vector<std::vector<uint32_t>>& samples,
                           const std::vector<std::vector<uint32_t>>& expected);

}  // namespace logicforge
