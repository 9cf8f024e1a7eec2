#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace logicforge {

// Row-major sample matrix plus integer labels.
struct Dataset {
    size_t num_features = 0;
    std::vector<double> features;
    std::vector<uint32_t> labels;

    size_t size() const { return labels.size(); }
    const double* row(size_t i) const { return features.data() + i * num_features; }
};

struct FeatureRange {
    double min = 0.0;
    double max = 0.0;
};

struct DatasetSplits {
    Dataset train;
    Dataset val;
    Dataset test;
};

// CSV with a header row. Every column is a real feature except the last
// non-"split" column (the integer label) and an optional "split" column
// holding train/val/test tags. Malformed cells report their line number.
struct CsvFile {
    Dataset data;
    // Empty when the file has no split column; otherwise one tag per row,
    // 0 = train, 1 = val, 2 = test.
    std::vector<uint8_t> split_tags;
};

CsvFile load_csv(const std::string& path);

struct SplitFractions {
    double train = 0.6;
    double val = 0.2;
    double test = 0.2;
};

// Honors the file's split column when present; otherwise shuffles with a
// stream keyed on seed and cuts by the fractions.
DatasetSplits split_dataset(const CsvFile& file, const SplitFractions& f, uint64_t seed);

// Per-feature min/max. Call on the training split only so the eval-time
// normalization never peeks at held-out data.
std::vector<FeatureRange> feature_ranges(const Dataset& ds);

// Min-max normalizes each feature to [0, 1], then quantizes to an
// unsigned input_bits code with scale 1/(2^input_bits - 1), so min maps
// to code 0 and max to the top code. Constant features map to code 0.
// Returns a row-major N x num_features code matrix.
std::vector<uint32_t> quantize_inputs(const Dataset& ds, const std::vector<FeatureRange>& ranges,
                                      int input_bits);

uint32_t quantize_input_value(double x, const FeatureRange& r, int input_bits);

// Code -> the real value the model trains on.
double dequantize_input_code(uint32_t code, int input_bits);

}  // namespace logicforge
