#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lf/neural.hpp"

namespace lf {

// Flat binary container for trained parameters: magic "LFCK", a format
// version, a model id, and named blocks of little-endian 64-bit floats with
// explicit dimensions. The layout is byte-stable across platforms, so saved
// checkpoints reload to bit-identical parameters.

struct CheckpointBlock {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<double> data;  // prod(dims) values, row-major
};

struct Checkpoint {
    std::string model_id;
    std::vector<CheckpointBlock> blocks;
};

// Serialization to/from the byte format; file helpers raise io errors for
// unreadable paths and schema errors for malformed content.
std::string encode_checkpoint(const Checkpoint& cp);
Checkpoint decode_checkpoint(const std::string& bytes);
void save_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::string& path);

// Typed conversions. Checkpoints carry inference parameters only: training
// records (epoch losses) and optimizer hyperparameters are not stored.
Checkpoint to_checkpoint(const MlpParams& params);
MlpParams mlp_from_checkpoint(const Checkpoint& cp);
Checkpoint to_checkpoint(const LstmParams& params);
LstmParams lstm_from_checkpoint(const Checkpoint& cp);

}  // namespace lf
