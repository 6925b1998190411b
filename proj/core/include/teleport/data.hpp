#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "teleport/linalg.hpp"
#include "teleport/mlp.hpp"

namespace teleport {

// Column-per-sample dataset: inputs are features x samples, targets are
// one-hot classes or regression targets x samples.
struct Dataset {
  Mat inputs;
  Mat targets;
  std::string split;

  int sample_count() const { return inputs.cols(); }
};

// Reads IDX image/label files (big-endian headers, magics 0x803/0x801).
// Pixels are scaled to [0,1]; labels become one-hot columns over 10
// classes. At most `limit` samples are kept (limit 0 gives a valid empty
// dataset).
Dataset load_idx(const std::string& images_path, const std::string& labels_path, int limit);

// Writes IDX files in the same layout; images hold rows*cols bytes each.
void save_idx(const std::string& images_path, const std::string& labels_path,
              const std::vector<std::vector<uint8_t>>& images, int rows, int cols,
              const std::vector<uint8_t>& labels);

struct SynthRegression {
  Dataset data;
  MlpParams params;
};

// Regression instance with data and weights uniform on [0,1): dims is the
// full layer chain {d0, d1, ..., dp}, n the sample count.
SynthRegression synth_regression(uint64_t seed, const std::vector<int>& dims, int n);

// Class-structured synthetic images in MNIST shape: per-class prototype
// patterns plus pixel noise, quantized to bytes. Stand-in for the real digit
// files when those are not on disk.
struct SynthImages {
  std::vector<std::vector<uint8_t>> images;
  std::vector<uint8_t> labels;
  int side = 28;
};

SynthImages synth_classification_images(uint64_t seed, int count, int classes = 10, int side = 28);

// One-hot/scaling identical to load_idx but straight from memory.
Dataset dataset_from_images(const SynthImages& imgs);

// First `train_count` columns become the train split, the rest validation.
std::pair<Dataset, Dataset> split_holdout(const Dataset& d, int train_count);

}  // namespace teleport
