#include "logicforge/config.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace logicforge {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const json* find(const json& obj, const std::string& key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok) bad(path + "." + item.key(), "unknown field");
    }
}

uint64_t as_uint(const json& v, const std::string& path, uint64_t max = UINT64_MAX) {
    if (!v.is_number_unsigned()) bad(path, "expected a non-negative integer");
    uint64_t u = v.get<uint64_t>();
    if (u > max) bad(path, "value " + std::to_string(u) + " too large");
    return u;
}

double as_real(const json& v, const std::string& path) {
    if (!v.is_number()) bad(path, "expected a number");
    return v.get<double>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) bad(path, "expected true or false");
    return v.get<bool>();
}

std::string as_str(const json& v, const std::string& path) {
    if (!v.is_string()) bad(path, "expected a string");
    return v.get<std::string>();
}

NetworkConfig parse_network(const json& obj, const std::string& path) {
    if (!obj.is_object()) bad(path, "expected an object");
    check_keys(obj, path,
               {"inputs", "hidden", "classes", "bits", "fanin", "input_bits", "output_bits",
                "input_fanin", "output_fanin", "seed", "fanin_cap"});
    NetworkConfig n;

    const json* v = find(obj, "inputs");
    if (!v) bad(path + ".inputs", "required field missing");
    n.inputs = uint32_t(as_uint(*v, path + ".inputs", 1u << 24));

    v = find(obj, "hidden");
    if (!v) bad(path + ".hidden", "required field missing");
    if (!v->is_array()) bad(path + ".hidden", "expected an array of layer widths");
    for (size_t i = 0; i < v->size(); ++i)
        n.hidden.push_back(
            uint32_t(as_uint((*v)[i], path + ".hidden[" + std::to_string(i) + "]", 1u << 24)));

    v = find(obj, "classes");
    if (!v) bad(path + ".classes", "required field missing");
    n.classes = uint32_t(as_uint(*v, path + ".classes", 1u << 24));

    v = find(obj, "bits");
    if (!v) bad(path + ".bits", "required field missing");
    n.bits = int(as_uint(*v, path + ".bits", 32));

    v = find(obj, "fanin");
    if (!v) bad(path + ".fanin", "required field missing");
    n.fanin = uint32_t(as_uint(*v, path + ".fanin", 1u << 24));

    if ((v = find(obj, "input_bits"))) n.input_bits = int(as_uint(*v, path + ".input_bits", 32));
    if ((v = find(obj, "output_bits"))) n.output_bits = int(as_uint(*v, path + ".output_bits", 32));
    if ((v = find(obj, "input_fanin")))
        n.input_fanin = uint32_t(as_uint(*v, path + ".input_fanin", 1u << 24));
    if ((v = find(obj, "output_fanin")))
        n.output_fanin = uint32_t(as_uint(*v, path + ".output_fanin", 1u << 24));
    if ((v = find(obj, "seed"))) n.seed = as_uint(*v, path + ".seed");
    if ((v = find(obj, "fanin_cap"))) n.fanin_cap = int(as_uint(*v, path + ".fanin_cap", 64));
    return n;
}

TrainConfig parse_train(const json* obj, const std::string& path, uint64_t default_seed) {
    TrainConfig t;
    t.seed = default_seed;
    if (!obj) return t;
    if (!obj->is_object()) bad(path, "expected an object");
    check_keys(*obj, path, {"epochs", "batch_size", "lr", "decay_factor", "decay_step", "seed"});
    const json* v;
    if ((v = find(*obj, "epochs"))) t.epochs = uint32_t(as_uint(*v, path + ".epochs", 1u << 30));
    if ((v = find(*obj, "batch_size")))
        t.batch_size = uint32_t(as_uint(*v, path + ".batch_size", 1u << 30));
    if ((v = find(*obj, "lr"))) t.lr = as_real(*v, path + ".lr");
    if ((v = find(*obj, "decay_factor"))) t.decay_factor = as_real(*v, path + ".decay_factor");
    if ((v = find(*obj, "decay_step")))
        t.decay_step = uint32_t(as_uint(*v, path + ".decay_step", 1u << 30));
    if ((v = find(*obj, "seed"))) t.seed = as_uint(*v, path + ".seed");
    if (t.epochs < 1) bad(path + ".epochs", "must be >= 1");
    if (t.batch_size < 1) bad(path + ".batch_size", "must be >= 1");
    if (!(t.lr > 0.0)) bad(path + ".lr", "must be > 0");
    if (!(t.decay_factor > 0.0) || t.decay_factor > 1.0)
        bad(path + ".decay_factor", "must be in (0, 1]");
    if (t.decay_step < 1) bad(path + ".decay_step", "must be >= 1");
    return t;
}

DatasetConfig parse_dataset(const json& obj, const std::string& path, uint64_t default_seed) {
    if (!obj.is_object()) bad(path, "expected an object");
    check_keys(obj, path, {"path", "split"});
    DatasetConfig d;
    d.split_seed = default_seed;
    const json* v = find(obj, "path");
    if (!v) bad(path + ".path", "required field missing");
    d.path = as_str(*v, path + ".path");
    if ((v = find(obj, "split"))) {
        if (!v->is_object()) bad(path + ".split", "expected an object");
        check_keys(*v, path + ".split", {"train", "val", "test", "seed"});
        const json* f;
        if ((f = find(*v, "train"))) d.split.train = as_real(*f, path + ".split.train");
        if ((f = find(*v, "val"))) d.split.val = as_real(*f, path + ".split.val");
        if ((f = find(*v, "test"))) d.split.test = as_real(*f, path + ".split.test");
        if ((f = find(*v, "seed"))) d.split_seed = as_uint(*f, path + ".split.seed");
        for (double frac : {d.split.train, d.split.val, d.split.test})
            if (frac < 0.0 || frac > 1.0) bad(path + ".split", "fractions must be in [0, 1]");
        if (d.split.train + d.split.val + d.split.test > 1.0 + 1e-9)
            bad(path + ".split", "fractions sum to more than 1");
    }
    return d;
}

ExportConfig parse_export(const json* obj, const std::string& path) {
    ExportConfig e;
    if (!obj) return e;
    if (!obj->is_object()) bad(path, "expected an object");
    check_keys(*obj, path, {"prune", "registers", "split_files", "output_dir"});
    const json* v;
    if ((v = find(*obj, "prune"))) e.prune = as_bool(*v, path + ".prune");
    if ((v = find(*obj, "registers"))) {
        e.registers = as_str(*v, path + ".registers");
        if (e.registers != "default" && e.registers != "none")
            bad(path + ".registers", "expected \"default\" or \"none\"");
    }
    if ((v = find(*obj, "split_files"))) e.split_files = as_bool(*v, path + ".split_files");
    if ((v = find(*obj, "output_dir"))) e.output_dir = as_str(*v, path + ".output_dir");
    return e;
}

ExploreConfig parse_explore(const json& obj, const std::string& path, const NetworkConfig& net) {
    if (!obj.is_object()) bad(path, "expected an object");
    check_keys(obj, path, {"hidden", "bits", "fanin", "budget", "train_epochs"});
    ExploreConfig e;
    const json* v;
    if ((v = find(obj, "hidden"))) {
        if (!v->is_array() || v->empty()) bad(path + ".hidden", "expected a non-empty array");
        for (size_t i = 0; i < v->size(); ++i) {
            const json& inner = (*v)[i];
            std::string ipath = path + ".hidden[" + std::to_string(i) + "]";
            if (!inner.is_array()) bad(ipath, "expected an array of layer widths");
            std::vector<uint32_t> widths;
            for (size_t k = 0; k < inner.size(); ++k)
                widths.push_back(
                    uint32_t(as_uint(inner[k], ipath + "[" + std::to_string(k) + "]", 1u << 24)));
            e.hidden.push_back(std::move(widths));
        }
    } else {
        e.hidden.push_back(net.hidden);
    }
    if ((v = find(obj, "bits"))) {
        if (!v->is_array() || v->empty()) bad(path + ".bits", "expected a non-empty array");
        for (size_t i = 0; i < v->size(); ++i)
            e.bits.push_back(int(as_uint((*v)[i], path + ".bits[" + std::to_string(i) + "]", 32)));
    } else {
        e.bits.push_back(net.bits);
    }
    if ((v = find(obj, "fanin"))) {
        if (!v->is_array() || v->empty()) bad(path + ".fanin", "expected a non-empty array");
        for (size_t i = 0; i < v->size(); ++i)
            e.fanin.push_back(
                uint32_t(as_uint((*v)[i], path + ".fanin[" + std::to_string(i) + "]", 1u << 24)));
    } else {
        e.fanin.push_back(net.fanin);
    }
    if ((v = find(obj, "budget"))) e.budget = as_uint(*v, path + ".budget");
    if ((v = find(obj, "train_epochs")))
        e.train_epochs = uint32_t(as_uint(*v, path + ".train_epochs", 1u << 30));
    return e;
}

}  // namespace

ProjectConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    check_keys(root, "config", {"version", "dataset", "network", "train", "export", "explore"});

    ProjectConfig cfg;
    if (const json* v = find(root, "version")) {
        cfg.version = int(as_uint(*v, "version", 1u << 16));
        if (cfg.version != 1) bad("version", "unsupported config version");
    }

    const json* net = find(root, "network");
    if (!net) throw ConfigError("network: required block missing");
    cfg.network = parse_network(*net, "network");

    cfg.train = parse_train(find(root, "train"), "train", cfg.network.seed);
    cfg.export_opts = parse_export(find(root, "export"), "export");

    if (const json* ds = find(root, "dataset")) {
        cfg.has_dataset = true;
        cfg.dataset = parse_dataset(*ds, "dataset", cfg.network.seed);
    }
    if (const json* ex = find(root, "explore")) {
        cfg.has_explore = true;
        cfg.explore = parse_explore(*ex, "explore", cfg.network);
    }
    return cfg;
}

ProjectConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ProjectConfig& cfg) {
    json root = json::object();
    root["version"] = cfg.version;
    if (cfg.has_dataset) {
        json ds = json::object();
        ds["path"] = cfg.dataset.path;
        json split = json::object();
        split["train"] = cfg.dataset.split.train;
        split["val"] = cfg.dataset.split.val;
        split["test"] = cfg.dataset.split.test;
        split["seed"] = cfg.dataset.split_seed;
        ds["split"] = split;
        root["dataset"] = ds;
    }
    json net = json::object();
    const NetworkConfig& n = cfg.network;
    net["inputs"] = n.inputs;
    net["hidden"] = n.hidden;
    net["classes"] = n.classes;
    net["bits"] = n.bits;
    net["fanin"] = n.fanin;
    if (n.input_bits) net["input_bits"] = n.input_bits;
    if (n.output_bits) net["output_bits"] = n.output_bits;
    if (n.input_fanin) net["input_fanin"] = n.input_fanin;
    if (n.output_fanin) net["output_fanin"] = n.output_fanin;
    net["seed"] = n.seed;
    net["fanin_cap"] = n.fanin_cap;
    root["network"] = net;

    json tr = json::object();
    tr["epochs"] = cfg.train.epochs;
    tr["batch_size"] = cfg.train.batch_size;
    tr["lr"] = cfg.train.lr;
    tr["decay_factor"] = cfg.train.decay_factor;
    tr["decay_step"] = cfg.train.decay_step;
    tr["seed"] = cfg.train.seed;
    root["train"] = tr;

    json ex = json::object();
    ex["prune"] = cfg.export_opts.prune;
    ex["registers"] = cfg.export_opts.registers;
    ex["split_files"] = cfg.export_opts.split_files;
    ex["output_dir"] = cfg.export_opts.output_dir;
    root["export"] = ex;

    if (cfg.has_explore) {
        json e = json::object();
        e["hidden"] = cfg.explore.hidden;
        e["bits"] = cfg.explore.bits;
        e["fanin"] = cfg.explore.fanin;
        e["budget"] = cfg.explore.budget;
        e["train_epochs"] = cfg.explore.train_epochs;
        root["explore"] = e;
    }
    return root.dump(2) + "\n";
}

NetworkSpec to_network_spec(const NetworkConfig& net) {
    NetworkBuild b;
    b.input_features = net.inputs;
    b.input_bits = net.input_bits ? net.input_bits : net.bits;
    b.hidden = net.hidden;
    b.num_classes = net.classes;
    b.bits = net.bits;
    b.fanin = net.fanin;
    b.output_bits = net.output_bits;
    b.input_fanin = net.input_fanin;
    b.output_fanin = net.output_fanin;
    b.seed = net.seed;
    return build_network_spec(b);
}

}  // namespace logicforge
