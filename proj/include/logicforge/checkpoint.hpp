#pragma once

#include <string>
#include <vector>

#include "logicforge/trainer.hpp"

namespace logicforge {

// Single-file model checkpoint: magic, format version, payload,
// trailing CRC-32 over everything before it. All integers little-endian,
// all reals IEEE-754 bit patterns, so round-trips are bit-exact.
// Field order is documented in docs/FORMATS.md.
std::vector<uint8_t> serialize_model(const TrainedModel& model);
TrainedModel deserialize_model(const std::vector<uint8_t>& bytes);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace logicforge
