#pragma once

#include <string>

#include "logicforge/dataset.hpp"

namespace logicforge {

// Gaussian blob classification task: one cluster center per class drawn
// uniformly in [0,1]^features, samples spread around their center with
// the given standard deviation, labels balanced round-robin. Fully
// deterministic in the seed.
struct BlobsSpec {
    size_t samples = 4096;
    size_t features = 16;
    uint32_t classes = 5;
    double spread = 0.35;
    uint64_t seed = 1;
};

Dataset make_blobs(const BlobsSpec& spec);

void write_csv(const Dataset& ds, const std::string& path);

}  // namespace logicforge
