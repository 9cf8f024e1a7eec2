#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "logicforge/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"gen_dataset: write a synthetic Gaussian-blobs CSV"};
    std::string out_path;
    logicforge::BlobsSpec spec;
    app.add_option("--out", out_path, "output CSV path")->required();
    app.add_option("--samples", spec.samples, "sample count");
    app.add_option("--features", spec.features, "feature count");
    app.add_option("--classes", spec.classes, "class count");
    app.add_option("--spread", spec.spread, "cluster standard deviation");
    app.add_option("--seed", spec.seed, "generator seed");
    CLI11_PARSE(app, argc, argv);

    try {
        logicforge::write_csv(logicforge::make_blobs(spec), out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << out_path << ": " << spec.samples << " samples, " << spec.features
              << " features, " << spec.classes << " classes\n";
    return 0;
}
