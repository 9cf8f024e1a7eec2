#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace logicforge {

// Exit codes shared by every command: 0 success, 1 validation or
// verification failure, 2 IO/config trouble.
constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CommandOptions {
    std::string config_path;
    std::optional<uint64_t> budget;
    bool no_prune = false;
    std::optional<std::string> registers;
    uint64_t samples = 10000;
    bool exhaustive = false;
    std::optional<uint64_t> seed;
    std::optional<uint32_t> epochs;
};

int cmd_cost(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_train(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_export(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_explore(const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace logicforge
