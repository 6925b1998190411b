#include "teleport/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "teleport/rng.hpp"

namespace teleport {

namespace {

uint32_t read_be32(std::istream& in, const char* what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error(std::string("idx: truncated header reading ") + what);
  return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

void write_be32(std::ostream& out, uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

constexpr uint32_t kImageMagic = 0x00000803;
constexpr uint32_t kLabelMagic = 0x00000801;
constexpr int kClasses = 10;

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path, int limit) {
  if (limit < 0) throw std::invalid_argument("load_idx: negative limit");

  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("load_idx: cannot open " + images_path);
  if (read_be32(img, "image magic") != kImageMagic)
    throw std::runtime_error("load_idx: bad image magic in " + images_path);
  const uint32_t image_count = read_be32(img, "image count");
  const uint32_t rows = read_be32(img, "rows");
  const uint32_t cols = read_be32(img, "cols");

  std::ifstream lbl(labels_path, std::ios::binary);
  if (!lbl) throw std::runtime_error("load_idx: cannot open " + labels_path);
  if (read_be32(lbl, "label magic") != kLabelMagic)
    throw std::runtime_error("load_idx: bad label magic in " + labels_path);
  const uint32_t label_count = read_be32(lbl, "label count");

  if (image_count != label_count)
    throw std::runtime_error("load_idx: image/label count mismatch");

  const int n = std::min<int>(limit, static_cast<int>(image_count));
  const int pixels = static_cast<int>(rows * cols);

  Dataset out;
  out.inputs = Mat(pixels, n);
  out.targets = Mat(kClasses, n);
  std::vector<unsigned char> buf(pixels);
  for (int j = 0; j < n; ++j) {
    if (!img.read(reinterpret_cast<char*>(buf.data()), pixels))
      throw std::runtime_error("load_idx: truncated image data");
    for (int i = 0; i < pixels; ++i) out.inputs(i, j) = buf[i] / 255.0;
    char label = 0;
    if (!lbl.read(&label, 1)) throw std::runtime_error("load_idx: truncated label data");
    const int cls = static_cast<unsigned char>(label);
    if (cls >= kClasses) throw std::runtime_error("load_idx: label out of range");
    out.targets(cls, j) = 1.0;
  }
  return out;
}

void save_idx(const std::string& images_path, const std::string& labels_path,
              const std::vector<std::vector<uint8_t>>& images, int rows, int cols,
              const std::vector<uint8_t>& labels) {
  if (images.size() != labels.size())
    throw std::invalid_argument("save_idx: image/label count mismatch");
  std::ofstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("save_idx: cannot open " + images_path);
  write_be32(img, kImageMagic);
  write_be32(img, static_cast<uint32_t>(images.size()));
  write_be32(img, static_cast<uint32_t>(rows));
  write_be32(img, static_cast<uint32_t>(cols));
  for (const auto& image : images) {
    if (static_cast<int>(image.size()) != rows * cols)
      throw std::invalid_argument("save_idx: image has wrong pixel count");
    img.write(reinterpret_cast<const char*>(image.data()), image.size());
  }

  std::ofstream lbl(labels_path, std::ios::binary);
  if (!lbl) throw std::runtime_error("save_idx: cannot open " + labels_path);
  write_be32(lbl, kLabelMagic);
  write_be32(lbl, static_cast<uint32_t>(labels.size()));
  lbl.write(reinterpret_cast<const char*>(labels.data()), labels.size());
}

SynthRegression synth_regression(uint64_t seed, const std::vector<int>& dims, int n) {
  if (dims.size() < 2) throw std::invalid_argument("synth_regression: need at least one layer");
  if (n < 1) throw std::invalid_argument("synth_regression: need at least one sample");
  Rng rng(seed);
  SynthRegression out;
  out.data.inputs = Mat(dims.front(), n);
  for (int i = 0; i < out.data.inputs.rows(); ++i)
    for (int j = 0; j < n; ++j) out.data.inputs(i, j) = rng.uniform();
  out.data.targets = Mat(dims.back(), n);
  for (int i = 0; i < out.data.targets.rows(); ++i)
    for (int j = 0; j < n; ++j) out.data.targets(i, j) = rng.uniform();
  for (size_t m = 1; m < dims.size(); ++m) {
    Mat w(dims[m], dims[m - 1]);
    for (int i = 0; i < w.rows(); ++i)
      for (int j = 0; j < w.cols(); ++j) w(i, j) = rng.uniform();
    out.params.weights.push_back(std::move(w));
  }
  out.params.slope = 0.1;
  out.params.linear_top = true;
  return out;
}

SynthImages synth_classification_images(uint64_t seed, int count, int classes, int side) {
  Rng rng(seed);
  const int pixels = side * side;
  std::vector<std::vector<double>> prototypes(classes, std::vector<double>(pixels));
  for (auto& proto : prototypes)
    for (double& p : proto) p = rng.uniform();

  SynthImages out;
  out.side = side;
  out.images.reserve(count);
  out.labels.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int cls = static_cast<int>(rng.below(classes));
    std::vector<uint8_t> img(pixels);
    for (int p = 0; p < pixels; ++p) {
      const double v = prototypes[cls][p] + rng.uniform(-0.25, 0.25);
      const double clamped = std::min(1.0, std::max(0.0, v));
      img[p] = static_cast<uint8_t>(std::lround(clamped * 255.0));
    }
    out.images.push_back(std::move(img));
    out.labels.push_back(static_cast<uint8_t>(cls));
  }
  return out;
}

Dataset dataset_from_images(const SynthImages& imgs) {
  const int pixels = imgs.side * imgs.side;
  const int n = static_cast<int>(imgs.images.size());
  Dataset out;
  out.inputs = Mat(pixels, n);
  out.targets = Mat(kClasses, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < pixels; ++i) out.inputs(i, j) = imgs.images[j][i] / 255.0;
    out.targets(imgs.labels[j], j) = 1.0;
  }
  return out;
}

std::pair<Dataset, Dataset> split_holdout(const Dataset& d, int train_count) {
  const int n = d.sample_count();
  train_count = std::min(train_count, n);
  std::vector<int> train_idx(train_count), val_idx(n - train_count);
  for (int i = 0; i < train_count; ++i) train_idx[i] = i;
  for (int i = train_count; i < n; ++i) val_idx[i - train_count] = i;
  Dataset train{gather_cols(d.inputs, train_idx), gather_cols(d.targets, train_idx), "train"};
  Dataset val{gather_cols(d.inputs, val_idx), gather_cols(d.targets, val_idx), "val"};
  return {std::move(train), std::move(val)};
}

}  // namespace teleport
