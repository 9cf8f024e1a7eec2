#include "logicforge/verilog.hpp"

#include <stdexcept>

namespace logicforge {

namespace {

std::string hbb_name(const HBBInstance& hbb) {
    return "layer" + std::to_string(hbb.layer) + "_n" + std::to_string(hbb.neuron);
}

std::string slice(const std::string& sig, int hi, int lo) {
    return sig + "[" + std::to_string(hi) + ":" + std::to_string(lo) + "]";
}

std::string emit_hbb_module(const HBBInstance& hbb) {
    std::string v;
    const TruthTable& t = hbb.table;
    std::string xw = std::to_string(t.in_bits);
    std::string yw = std::to_string(t.out_bits);
    v += "module " + hbb_name(hbb) + " (\n";
    v += "    input wire [" + std::to_string(t.in_bits - 1) + ":0] addr,\n";
    v += "    output reg [" + std::to_string(t.out_bits - 1) + ":0] data\n";
    v += ");\n";
    v += "    always @(*) begin\n";
    v += "        case (addr)\n";
    for (size_t a = 0; a < t.entries.size(); ++a)
        v += "            " + xw + "'d" + std::to_string(a) + ": data = " + yw + "'d" +
             std::to_string(t.entries[a]) + ";\n";
    v += "            default: data = " + yw + "'d0;\n";
    v += "        endcase\n";
    v += "    end\n";
    v += "endmodule\n";
    return v;
}

// The stage signal a layer consumes: `_q` names carry the value after
// the boundary, whether or not that boundary is actually registered.
std::string emit_top_module(const Netlist& net) {
    size_t num_layers = net.layers.size();
    int in_w = int(net.input_features) * net.input_bits;
    int out_w = int(net.num_classes) * net.output_bits;

    std::string v;
    v += "module logicnet (\n";
    v += "    input wire clk,\n";
    v += "    input wire [" + std::to_string(in_w - 1) + ":0] in_data,\n";
    v += "    output wire [" + std::to_string(out_w - 1) + ":0] out_data\n";
    v += ");\n";

    std::string in_range = "[" + std::to_string(in_w - 1) + ":0]";
    if (net.registered.at(0)) {
        v += "    reg " + in_range + " in_q;\n";
        v += "    always @(posedge clk) begin\n";
        v += "        in_q <= in_data;\n";
        v += "    end\n";
    } else {
        v += "    wire " + in_range + " in_q;\n";
        v += "    assign in_q = in_data;\n";
    }
    v += "\n";

    for (size_t l = 0; l < num_layers; ++l) {
        for (const HBBInstance& hbb : net.layers[l]) {
            std::string name = hbb_name(hbb);
            std::string y_range = "[" + std::to_string(hbb.table.out_bits - 1) + ":0]";
            std::string addr;
            for (size_t k = 0; k < hbb.inputs.size(); ++k) {
                if (k) addr += ", ";
                uint32_t src = hbb.inputs[k];
                if (l == 0)
                    addr += slice("in_q", int(src + 1) * net.input_bits - 1,
                                  int(src) * net.input_bits);
                else
                    addr += "layer" + std::to_string(l - 1) + "_n" + std::to_string(src) + "_q";
            }
            v += "    wire " + y_range + " " + name + "_y;\n";
            v += "    " + name + " u_" + name + " (\n";
            v += "        .addr({" + addr + "}),\n";
            v += "        .data(" + name + "_y)\n";
            v += "    );\n";
        }
        bool reg_boundary = net.registered.at(l + 1);
        for (const HBBInstance& hbb : net.layers[l]) {
            std::string y_range = "[" + std::to_string(hbb.table.out_bits - 1) + ":0]";
            v += std::string("    ") + (reg_boundary ? "reg " : "wire ") + y_range + " " +
                 hbb_name(hbb) + "_q;\n";
        }
        if (reg_boundary) {
            v += "    always @(posedge clk) begin\n";
            for (const HBBInstance& hbb : net.layers[l])
                v += "        " + hbb_name(hbb) + "_q <= " + hbb_name(hbb) + "_y;\n";
            v += "    end\n";
        } else {
            for (const HBBInstance& hbb : net.layers[l])
                v += "    assign " + hbb_name(hbb) + "_q = " + hbb_name(hbb) + "_y;\n";
        }
        v += "\n";
    }

    for (uint32_t c = 0; c < net.num_classes; ++c)
        v += "    assign " +
             slice("out_data", int(c + 1) * net.output_bits - 1, int(c) * net.output_bits) +
             " = layer" + std::to_string(num_layers - 1) + "_n" + std::to_string(c) + "_q;\n";
    v += "endmodule\n";
    return v;
}

std::string header_comment(const Netlist& net) {
    return "// logicnet: " + std::to_string(net.input_features) + " features x " +
           std::to_string(net.input_bits) + "b in, " + std::to_string(net.num_classes) +
           " classes x " + std::to_string(net.output_bits) + "b out, " +
           std::to_string(net.layers.size()) + " layers, " + std::to_string(net.hbb_count()) +
           " HBBs\n";
}

std::string pack_hex(const std::vector<uint32_t>& codes, int bits_each, int total_bits) {
    std::vector<uint8_t> bytes((size_t(total_bits) + 7) / 8, 0);
    for (size_t i = 0; i < codes.size(); ++i)
        for (int b = 0; b < bits_each; ++b)
            if (codes[i] >> b & 1u) {
                size_t bit = i * size_t(bits_each) + size_t(b);
                bytes[bit / 8] |= uint8_t(1u << (bit % 8));
            }
    static const char* digits = "0123456789abcdef";
    std::string hex;
    int nibbles = (total_bits + 3) / 4;
    for (int n = nibbles - 1; n >= 0; --n) {
        size_t bit = size_t(n) * 4;
        int val = (bytes[bit / 8] >> (bit % 8)) & 0xF;
        hex += digits[val];
    }
    return hex;
}

}  // namespace

std::string emit_verilog(const Netlist& net) {
    if (net.layers.empty()) throw std::invalid_argument("emit_verilog: empty netlist");
    std::string v = header_comment(net);
    v += "\n";
    for (const auto& layer : net.layers)
        for (const HBBInstance& hbb : layer) v += emit_hbb_module(hbb) + "\n";
    v += emit_top_module(net);
    return v;
}

std::vector<std::pair<std::string, std::string>> emit_verilog_files(const Netlist& net) {
    if (net.layers.empty()) throw std::invalid_argument("emit_verilog: empty netlist");
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& layer : net.layers)
        for (const HBBInstance& hbb : layer)
            files.emplace_back(hbb_name(hbb) + ".v", emit_hbb_module(hbb));
    files.emplace_back("logicnet.v", header_comment(net) + "\n" + emit_top_module(net));
    return files;
}

std::string emit_testbench(const Netlist& net, const std::vector<std::vector<uint32_t>>& samples,
                           const std::vector<std::vector<uint32_t>>& expected) {
    if (samples.size() != expected.size())
        throw std::invalid_argument("emit_testbench: sample/expected count mismatch");
    int in_w = int(net.input_features) * net.input_bits;
    int out_w = int(net.num_classes) * net.output_bits;
    size_t depth = 0;
    for (bool b : net.registered) depth += b ? 1 : 0;

    std::string v;
    v += "`timescale 1ns / 1ps\n";
    v += "module logicnet_tb;\n";
    v += "    reg clk;\n";
    v += "    reg [" + std::to_string(in_w - 1) + ":0] in_data;\n";
    v += "    wire [" + std::to_string(out_w - 1) + ":0] out_data;\n";
    v += "    integer errors;\n\n";
    v += "    logicnet dut (.clk(clk), .in_data(in_data), .out_data(out_data));\n\n";
    v += "    always #5 clk = ~clk;\n\n";
    v += "    task check;\n";
    v += "        input [" + std::to_string(in_w - 1) + ":0] vec;\n";
    v += "        input [" + std::to_string(out_w - 1) + ":0] want;\n";
    v += "        begin\n";
    v += "            in_data = vec;\n";
    v += "            repeat (" + std::to_string(depth + 1) + ") @(posedge clk);\n";
    v += "            #1;\n";
    v += "            if (out_data !== want) begin\n";
    v += "                errors = errors + 1;\n";
    v += "                $display(\"MISMATCH in=%h got=%h want=%h\", vec, out_data, want);\n";
    v += "            end\n";
    v += "        end\n";
    v += "    endtask\n\n";
    v += "    initial begin\n";
    v += "        clk = 0;\n";
    v += "        errors = 0;\n";
    v += "        in_data = 0;\n";
    for (size_t i = 0; i < samples.size(); ++i) {
        v += "        check(" + std::to_string(in_w) + "'h" +
             pack_hex(samples[i], net.input_bits, in_w) + ", " + std::to_string(out_w) + "'h" +
             pack_hex(expected[i], net.output_bits, out_w) + ");\n";
    }
    v += "        if (errors == 0) $display(\"PASS: " + std::to_string(samples.size()) +
         " vectors\");\n";
    v += "        else $display(\"FAIL: %0d mismatches\", errors);\n";
    v += "        $finish;\n";
    v += "    end\n";
    v += "endmodule\n";
    return v;
}

}  // namespace logicforge
