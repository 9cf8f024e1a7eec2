#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "logicforge/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"logicforge: train sparse quantized nets and compile them to LUT netlists"};
    app.require_subcommand(1);

    logicforge::CommandOptions opts;
    uint64_t budget = 0;
    std::string registers;
    uint64_t seed = 0;
    uint32_t epochs = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON project config")->required();
        sub->add_option("--seed", seed, "override the config seeds");
    };

    CLI::App* cost = app.add_subcommand("cost", "analytical LUT cost of the configured network");
    add_common(cost);
    cost->add_option("--budget", budget, "fail when total LUTs exceed this");

    CLI::App* train = app.add_subcommand("train", "train and write a checkpoint");
    add_common(train);
    train->add_option("--epochs", epochs, "override the config epoch count");

    CLI::App* exp = app.add_subcommand("export", "compile a checkpoint to Verilog");
    add_common(exp);
    exp->add_flag("--no-prune", opts.no_prune, "keep dead neurons");
    exp->add_option("--registers", registers, "register policy: default or none")
        ->check(CLI::IsMember({"default", "none"}));

    CLI::App* verify = app.add_subcommand("verify", "check model vs netlist equivalence");
    add_common(verify);
    verify->add_option("--samples", opts.samples, "random sample count");
    verify->add_flag("--exhaustive", opts.exhaustive, "check every possible input");

    CLI::App* explore = app.add_subcommand("explore", "sweep the configured design grid");
    add_common(explore);
    explore->add_option("--budget", budget, "drop candidates above this LUT total");
    explore->add_option("--epochs", epochs, "train each candidate this many epochs");

    CLI11_PARSE(app, argc, argv);

    CLI::App* sub = app.get_subcommands().front();
    auto given = [&](const std::string& name) {
        const CLI::Option* o = sub->get_option_no_throw(name);
        return o != nullptr && o->count() > 0;
    };
    if (given("--budget")) opts.budget = budget;
    if (given("--registers")) opts.registers = registers;
    if (given("--seed")) opts.seed = seed;
    if (given("--epochs")) opts.epochs = epochs;

    if (sub == cost) return logicforge::cmd_cost(opts, std::cout, std::cerr);
    if (sub == train) return logicforge::cmd_train(opts, std::cout, std::cerr);
    if (sub == exp) return logicforge::cmd_export(opts, std::cout, std::cerr);
    if (sub == verify) return logicforge::cmd_verify(opts, std::cout, std::cerr);
    return logicforge::cmd_explore(opts, std::cout, std::cerr);
}
