#include <cstdint>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "sharpstep/problems.hpp"

namespace sharpstep {
namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t big_endian(const std::vector<std::uint8_t>& bytes, std::size_t offset,
                         const std::string& path) {
  if (bytes.size() < offset + 4) throw FormatError(fmt::format("{}: truncated header", path));
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

}  // namespace

Matrix read_idx_images(const std::string& path) {
  const auto bytes = read_file(path);
  const std::uint32_t magic = big_endian(bytes, 0, path);
  if (magic != kImageMagic)
    throw FormatError(fmt::format("{}: bad image magic 0x{:08x}", path, magic));
  const std::size_t count = big_endian(bytes, 4, path);
  const std::size_t rows = big_endian(bytes, 8, path);
  const std::size_t cols = big_endian(bytes, 12, path);
  const std::size_t pixels = rows * cols;
  if (bytes.size() < 16 + count * pixels)
    throw FormatError(fmt::format("{}: truncated payload ({} images of {} pixels expected)", path,
                                  count, pixels));
  Matrix images(count, pixels);
  for (std::size_t k = 0; k < count * pixels; ++k) images.data[k] = bytes[16 + k] / 255.0;
  return images;
}

std::vector<std::uint8_t> read_idx_labels(const std::string& path) {
  const auto bytes = read_file(path);
  const std::uint32_t magic = big_endian(bytes, 0, path);
  if (magic != kLabelMagic)
    throw FormatError(fmt::format("{}: bad label magic 0x{:08x}", path, magic));
  const std::size_t count = big_endian(bytes, 4, path);
  if (bytes.size() < 8 + count)
    throw FormatError(fmt::format("{}: truncated payload ({} labels expected)", path, count));
  return {bytes.begin() + 8, bytes.begin() + 8 + static_cast<std::ptrdiff_t>(count)};
}

LogisticData load_idx(const std::string& images_path, const std::string& labels_path,
                      int positive_digit, int negative_digit) {
  const Matrix images = read_idx_images(images_path);
  const auto labels = read_idx_labels(labels_path);
  if (labels.size() != images.rows)
    throw FormatError(fmt::format("{} images but {} labels", images.rows, labels.size()));

  std::size_t kept = 0;
  for (auto label : labels) kept += (label == positive_digit || label == negative_digit);
  LogisticData data;
  data.features = Matrix(kept, images.cols);
  data.labels.reserve(kept);
  std::size_t r = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != positive_digit && labels[i] != negative_digit) continue;
    std::copy(images.row(i).begin(), images.row(i).end(), data.features.row(r++).begin());
    data.labels.push_back(labels[i] == positive_digit ? 1.0 : -1.0);
  }
  return data;
}

}  // namespace sharpstep
