#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "logicforge/dataset.hpp"
#include "logicforge/topology.hpp"
#include "logicforge/trainer.hpp"

namespace logicforge {

// Thrown with a field path, e.g. "network.hidden[2]: expected a
// positive integer".
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DatasetConfig {
    std::string path;
    SplitFractions split;
    uint64_t split_seed = 0;
};

struct NetworkConfig {
    uint32_t inputs = 0;
    std::vector<uint32_t> hidden;
    uint32_t classes = 0;
    int bits = 2;
    uint32_t fanin = 3;
    // Zero means "same as bits"/"same as fanin".
    int input_bits = 0;
    int output_bits = 0;
    uint32_t input_fanin = 0;
    uint32_t output_fanin = 0;
    uint64_t seed = 0;
    int fanin_cap = kDefaultFaninCap;
};

struct ExportConfig {
    bool prune = true;
    std::string registers = "default";
    bool split_files = false;
    std::string output_dir = "out";
};

struct ExploreConfig {
    std::vector<std::vector<uint32_t>> hidden;
    std::vector<int> bits;
    std::vector<uint32_t> fanin;
    uint64_t budget = 0;
    uint32_t train_epochs = 0;
};

struct ProjectConfig {
    int version = 1;
    bool has_dataset = false;
    DatasetConfig dataset;
    NetworkConfig network;
    TrainConfig train;
    ExportConfig export_opts;
    bool has_explore = false;
    ExploreConfig explore;
};

ProjectConfig parse_config(const std::string& text);
ProjectConfig load_config(const std::string& path);
std::string serialize_config(const ProjectConfig& cfg);

NetworkSpec to_network_spec(const NetworkConfig& net);

}  // namespace logicforge
