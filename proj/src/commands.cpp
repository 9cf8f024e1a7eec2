#include "logicforge/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "logicforge/bytestream.hpp"
#include "logicforge/checkpoint.hpp"
#include "logicforge/config.hpp"
#include "logicforge/simulator.hpp"
#include "logicforge/verilog.hpp"

namespace logicforge {

namespace {

namespace fs = std::filesystem;

ProjectConfig load_with_overrides(const CommandOptions& opts) {
    ProjectConfig cfg = load_config(opts.config_path);
    if (opts.seed) {
        cfg.network.seed = *opts.seed;
        cfg.train.seed = *opts.seed;
        cfg.dataset.split_seed = *opts.seed;
    }
    if (opts.epochs) cfg.train.epochs = *opts.epochs;
    return cfg;
}

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string join_u32(const std::vector<uint32_t>& v, char sep) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(v[i]);
    }
    return s;
}

std::string ckpt_path(const ProjectConfig& cfg) {
    return (fs::path(cfg.export_opts.output_dir) / "model.ckpt").string();
}

std::string netl_path(const ProjectConfig& cfg) {
    return (fs::path(cfg.export_opts.output_dir) / "model.netl").string();
}

uint64_t spec_param_count(const NetworkSpec& spec) {
    uint64_t n = 0;
    for (const LayerSpec& l : spec.layers)
        n += uint64_t(l.out_width) * l.fanin + 4ull * l.out_width + 1;
    return n;
}

DatasetSplits load_splits(const ProjectConfig& cfg) {
    if (!cfg.has_dataset) throw ConfigError("dataset: block required for this command");
    CsvFile file = load_csv(cfg.dataset.path);
    return split_dataset(file, cfg.dataset.split, cfg.dataset.split_seed);
}

// Shared wrapper so every command maps exceptions to exit codes the
// same way.
template <typename Fn>
int run_command(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::runtime_error& e) {
        std::string what = e.what();
        err << "error: " << what << "\n";
        return what.rfind("training diverged", 0) == 0 ? kExitFailure : kExitConfig;
    }
}

}  // namespace

int cmd_cost(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        ProjectConfig cfg = load_with_overrides(opts);
        NetworkSpec spec = to_network_spec(cfg.network);
        std::vector<std::string> violations = validate_spec(spec, cfg.network.fanin_cap);
        if (!violations.empty()) {
            for (const std::string& v : violations) err << "invalid spec: " << v << "\n";
            return kExitFailure;
        }

        out << "layer  X  Y  width  per-neuron  subtotal\n";
        for (size_t l = 0; l < spec.layers.size(); ++l) {
            const LayerSpec& ls = spec.layers[l];
            LutCount per = lut_cost(ls.fanin_bits(), ls.out_bits);
            out << l << "  " << ls.fanin_bits() << "  " << ls.out_bits << "  " << ls.out_width
                << "  " << per.luts << "  " << per.luts * ls.out_width << "\n";
        }
        LutCount total = model_lut_cost(spec);
        if (total.exceeds_device_scale) {
            err << "total model LUTs exceed device scale\n";
            return kExitFailure;
        }
        out << "total model LUTs: " << total.luts << "\n";
        out << "parameters: " << spec_param_count(spec) << "\n";
        if (opts.budget && total.luts > *opts.budget) {
            err << "budget exceeded: " << total.luts << " > " << *opts.budget << "\n";
            return kExitFailure;
        }
        return kExitOk;
    });
}

int cmd_train(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        ProjectConfig cfg = load_with_overrides(opts);
        NetworkSpec spec = to_network_spec(cfg.network);
        std::vector<std::string> violations = validate_spec(spec, cfg.network.fanin_cap);
        if (!violations.empty()) {
            for (const std::string& v : violations) err << "invalid spec: " << v << "\n";
            return kExitFailure;
        }

        DatasetSplits splits = load_splits(cfg);
        fs::create_directories(cfg.export_opts.output_dir);
        std::string metrics_path =
            (fs::path(cfg.export_opts.output_dir) / "metrics.csv").string();
        std::ofstream metrics(metrics_path, std::ios::binary | std::ios::trunc);
        if (!metrics) throw std::runtime_error("cannot write metrics file: " + metrics_path);

        TrainOptions topts;
        topts.metrics = &metrics;
        if (splits.val.size() > 0) topts.val = &splits.val;

        TrainedModel model = train(spec, splits.train, cfg.train, topts);
        save_model(model, ckpt_path(cfg));

        out << "trained " << cfg.train.epochs << " epochs on " << splits.train.size()
            << " samples\n";
        if (splits.val.size() > 0)
            out << "val accuracy: " << fmt4(evaluate(model, splits.val)) << "\n";
        if (splits.test.size() > 0)
            out << "test accuracy: " << fmt4(evaluate(model, splits.test)) << "\n";
        out << "checkpoint: " << ckpt_path(cfg) << "\n";
        out << "metrics: " << metrics_path << "\n";
        return kExitOk;
    });
}

int cmd_export(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        ProjectConfig cfg = load_with_overrides(opts);
        TrainedModel model = load_model(ckpt_path(cfg));
        if (!model.frozen) {
            err << "checkpoint is not frozen; train before exporting\n";
            return kExitFailure;
        }

        Netlist net = build_netlist(model);
        size_t pre_count = net.hbb_count();
        LutCount pre_cost = netlist_lut_cost(net);

        bool prune = cfg.export_opts.prune && !opts.no_prune;
        if (prune) net = prune_dead(net);
        size_t post_count = net.hbb_count();
        LutCount post_cost = netlist_lut_cost(net);

        std::string reg = opts.registers ? *opts.registers : cfg.export_opts.registers;
        if (reg != "default" && reg != "none")
            throw std::invalid_argument("registers must be 'default' or 'none', got '" + reg + "'");
        net = insert_registers(net,
                               reg == "default" ? RegisterPolicy::Default : RegisterPolicy::None);

        fs::create_directories(cfg.export_opts.output_dir);
        save_netlist(net, netl_path(cfg));

        std::vector<std::string> written;
        if (cfg.export_opts.split_files) {
            fs::path vdir = fs::path(cfg.export_opts.output_dir) / "verilog";
            fs::create_directories(vdir);
            for (const auto& [name, text] : emit_verilog_files(net)) {
                std::string p = (vdir / name).string();
                write_file_text(p, text);
            }
            written.push_back((vdir / "logicnet.v").string());
        } else {
            std::string p = (fs::path(cfg.export_opts.output_dir) / "logicnet.v").string();
            write_file_text(p, emit_verilog(net));
            written.push_back(p);
        }

        out << "HBBs: " << pre_count << " before prune, " << post_count << " after\n";
        out << "model LUTs: " << pre_cost.luts << " before prune, " << post_cost.luts
            << " after\n";
        out << "netlist dump: " << netl_path(cfg) << "\n";
        out << "verilog: " << written.front() << "\n";
        return kExitOk;
    });
}

int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        ProjectConfig cfg = load_with_overrides(opts);
        TrainedModel model = load_model(ckpt_path(cfg));
        Netlist net = load_netlist(netl_path(cfg));

        uint64_t seed = opts.seed ? *opts.seed : cfg.network.seed;
        EquivalenceReport rep =
            opts.exhaustive ? check_equivalence_exhaustive(model, net)
                            : check_equivalence_random(model, net, opts.samples, seed);

        out << rep.summary_line() << "\n";
        if (rep.first_mismatch) {
            const Mismatch& m = *rep.first_mismatch;
            out << "first mismatch at sample " << m.sample_index << "\n";
            out << "  input codes:   " << join_u32(m.input, ' ') << "\n";
            out << "  model output:  " << join_u32(m.model_output, ' ') << "\n";
            out << "  netlist output: " << join_u32(m.netlist_output, ' ') << "\n";
        }
        return rep.mismatches == 0 ? kExitOk : kExitFailure;
    });
}

int cmd_explore(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
    return run_command(err, [&]() -> int {
        ProjectConfig cfg = load_with_overrides(opts);
        ExploreConfig grid = cfg.explore;
        if (!cfg.has_explore) {
            grid.hidden = {cfg.network.hidden};
            grid.bits = {cfg.network.bits};
            grid.fanin = {cfg.network.fanin};
        }
        uint64_t budget = opts.budget ? *opts.budget : grid.budget;
        uint32_t train_epochs = opts.epochs ? *opts.epochs : grid.train_epochs;

        DatasetSplits splits;
        if (train_epochs > 0) splits = load_splits(cfg);

        fs::create_directories(cfg.export_opts.output_dir);
        std::string csv_path = (fs::path(cfg.export_opts.output_dir) / "explore.csv").string();
        std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
        if (!csv) throw std::runtime_error("cannot write exploration table: " + csv_path);
        csv << "hidden,bits,fanin,x_bits,model_luts,params,accuracy\n";

        size_t candidates = 0, rows = 0;
        for (const std::vector<uint32_t>& hidden : grid.hidden) {
            for (int bits : grid.bits) {
                for (uint32_t fanin : grid.fanin) {
                    ++candidates;
                    NetworkBuild b;
                    b.input_features = cfg.network.inputs;
                    b.input_bits = bits;
                    b.hidden = hidden;
                    b.num_classes = cfg.network.classes;
                    b.bits = bits;
                    b.fanin = fanin;
                    b.seed = cfg.network.seed;
                    NetworkSpec spec = build_network_spec(b);
                    if (!validate_spec(spec, cfg.network.fanin_cap).empty()) continue;
                    LutCount cost = model_lut_cost(spec);
                    if (cost.exceeds_device_scale) continue;
                    if (budget > 0 && cost.luts > budget) continue;

                    std::string accuracy;
                    if (train_epochs > 0) {
                        TrainConfig tc = cfg.train;
                        tc.epochs = train_epochs;
                        TrainOptions topts;
                        if (splits.val.size() > 0) topts.val = &splits.val;
                        TrainedModel model = train(spec, splits.train, tc, topts);
                        double acc = splits.val.size() > 0 ? evaluate(model, splits.val)
                                                           : evaluate(model, splits.train);
                        accuracy = fmt4(acc);
                    }

                    std::vector<uint32_t> x_bits;
                    for (const LayerSpec& ls : spec.layers)
                        x_bits.push_back(uint32_t(ls.fanin_bits()));
                    csv << join_u32(hidden, '|') << ',' << bits << ',' << fanin << ','
                        << join_u32(x_bits, '|') << ',' << cost.luts << ','
                        << spec_param_count(spec) << ',' << accuracy << '\n';
                    ++rows;
                }
            }
        }
        out << rows << " of " << candidates << " candidates pass; table: " << csv_path << "\n";
        if (rows == 0) err << "warning: no candidate passes the fan-in cap and budget\n";
        return kExitOk;
    });
}

}  // namespace logicforge
