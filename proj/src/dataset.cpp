#include "logicforge/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "logicforge/quantizer.hpp"
#include "logicforge/rng.hpp"

namespace logicforge {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        size_t start = cell.find_first_not_of(' ');
        cells.push_back(start == std::string::npos ? "" : cell.substr(start));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

[[noreturn]] void fail(const std::string& path, size_t line_no, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

}  // namespace

CsvFile load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    std::vector<std::string> header = split_line(line);
    if (header.size() < 2) fail(path, 1, "need at least one feature column and a label column");

    size_t split_col = header.size();
    for (size_t c = 0; c < header.size(); ++c)
        if (header[c] == "split") {
            if (split_col != header.size()) fail(path, 1, "duplicate split column");
            split_col = c;
        }
    bool has_split = split_col != header.size();
    if (has_split && header.size() < 3) fail(path, 1, "need a feature column besides split and label");

    // The label is the last column that is not the split tag.
    size_t label_col = header.size() - 1;
    if (has_split && split_col == label_col) label_col -= 1;

    CsvFile file;
    file.data.num_features = header.size() - 1 - (has_split ? 1 : 0);

    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            fail(path, line_no, "expected " + std::to_string(header.size()) + " cells, got " +
                                    std::to_string(cells.size()));
        for (size_t c = 0; c < cells.size(); ++c) {
            if (c == split_col) {
                const std::string& tag = cells[c];
                if (tag == "train")
                    file.split_tags.push_back(0);
                else if (tag == "val")
                    file.split_tags.push_back(1);
                else if (tag == "test")
                    file.split_tags.push_back(2);
                else
                    fail(path, line_no, "split tag must be train/val/test, got '" + tag + "'");
            } else if (c == label_col) {
                try {
                    size_t used = 0;
                    long v = std::stol(cells[c], &used);
                    if (used != cells[c].size() || v < 0) throw std::invalid_argument("");
                    file.data.labels.push_back(uint32_t(v));
                } catch (const std::exception&) {
                    fail(path, line_no, "label must be a non-negative integer, got '" + cells[c] + "'");
                }
            } else {
                double v = 0.0;
                try {
                    size_t used = 0;
                    v = std::stod(cells[c], &used);
                    if (used != cells[c].size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    fail(path, line_no, "feature must be a real number, got '" + cells[c] + "'");
                }
                if (!std::isfinite(v)) fail(path, line_no, "feature is not finite");
                file.data.features.push_back(v);
            }
        }
    }
    return file;
}

namespace {
void append_row(Dataset& dst, const Dataset& src, size_t i) {
    const double* r = src.row(i);
    dst.features.insert(dst.features.end(), r, r + src.num_features);
    dst.labels.push_back(src.labels[i]);
}
}  // namespace

DatasetSplits split_dataset(const CsvFile& file, const SplitFractions& f, uint64_t seed) {
    DatasetSplits out;
    const Dataset& ds = file.data;
    out.train.num_features = out.val.num_features = out.test.num_features = ds.num_features;

    if (!file.split_tags.empty()) {
        for (size_t i = 0; i < ds.size(); ++i) {
            Dataset& dst = file.split_tags[i] == 0 ? out.train
                         : file.split_tags[i] == 1 ? out.val
                                                   : out.test;
            append_row(dst, ds, i);
        }
        return out;
    }

    if (!(f.train >= 0 && f.val >= 0 && f.test >= 0) || f.train + f.val + f.test > 1.0 + 1e-9)
        throw std::invalid_argument("split fractions must be non-negative and sum to at most 1");

    std::vector<size_t> order(ds.size());
    std::iota(order.begin(), order.end(), size_t(0));
    SplitMix64 g(mix_seed(seed, rng_domain::kSplit));
    for (size_t i = ds.size(); i > 1; --i)
        std::swap(order[i - 1], order[g.bounded(i)]);

    size_t n_train = size_t(std::floor(f.train * double(ds.size())));
    size_t n_val = size_t(std::floor(f.val * double(ds.size())));
    for (size_t k = 0; k < order.size(); ++k) {
        Dataset& dst = k < n_train ? out.train : k < n_train + n_val ? out.val : out.test;
        append_row(dst, ds, order[k]);
    }
    return out;
}

std::vector<FeatureRange> feature_ranges(const Dataset& ds) {
    std::vector<FeatureRange> ranges(ds.num_features);
    for (size_t c = 0; c < ds.num_features; ++c) {
        FeatureRange r;
        r.min = std::numeric_limits<double>::infinity();
        r.max = -std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < ds.size(); ++i) {
            double v = ds.row(i)[c];
            r.min = std::min(r.min, v);
            r.max = std::max(r.max, v);
        }
        if (ds.size() == 0) r = FeatureRange{};
        ranges[c] = r;
    }
    return ranges;
}

uint32_t quantize_input_value(double x, const FeatureRange& r, int input_bits) {
    if (r.max <= r.min) return 0;
    double t = (x - r.min) / (r.max - r.min);
    t = std::min(std::max(t, 0.0), 1.0);
    Quantizer q{{input_bits, false}, 1.0 / double((uint64_t(1) << input_bits) - 1)};
    return quantize(q, t);
}

double dequantize_input_code(uint32_t code, int input_bits) {
    Quantizer q{{input_bits, false}, 1.0 / double((uint64_t(1) << input_bits) - 1)};
    return dequantize(q, code);
}

std::vector<uint32_t> quantize_inputs(const Dataset& ds, const std::vector<FeatureRange>& ranges,
                                      int input_bits) {
    if (ranges.size() != ds.num_features)
        throw std::invalid_argument("quantize_inputs: range count does not match feature count");
    std::vector<uint32_t> codes(ds.size() * ds.num_features);
    for (size_t i = 0; i < ds.size(); ++i)
        for (size_t c = 0; c < ds.num_features; ++c)
            codes[i * ds.num_features + c] = quantize_input_value(ds.row(i)[c], ranges[c], input_bits);
    return codes;
}

}  // namespace logicforge
