// Copyright 2026 The ppalab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppa/datagen/idx.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "ppa/common/error.h"

namespace ppa::datagen {
namespace {

constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t ReadBe32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

std::uint64_t ReadBe64(const std::vector<std::uint8_t>& b, std::size_t at) {
  return (std::uint64_t{ReadBe32(b, at)} << 32) | ReadBe32(b, at + 4);
}

void PutBe32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void PutBe64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  PutBe32(out, static_cast<std::uint32_t>(v >> 32));
  PutBe32(out, static_cast<std::uint32_t>(v));
}

std::size_t ElementSize(std::uint8_t type) {
  switch (type) {
    case 0x08:
      return 1;
    case 0x0D:
      return 4;
    case 0x0E:
      return 8;
    default:
      return 0;
  }
}

std::vector<std::uint8_t> ReadFile(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void WriteFile(const std::filesystem::path& path,
               const std::vector<std::uint8_t>& bytes) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

}  // namespace

LabeledDataset DecodeIdx(const std::vector<std::uint8_t>& image_bytes,
                         const std::vector<std::uint8_t>& label_bytes,
                         std::size_t n_label) {
  if (label_bytes.size() < 8) throw FormatError("labels: truncated header");
  if (ReadBe32(label_bytes, 0) != kLabelMagic) {
    throw FormatError("labels: bad magic");
  }
  const std::size_t n_labels = ReadBe32(label_bytes, 4);
  if (label_bytes.size() != 8 + n_labels) {
    throw FormatError("labels: truncated or oversized body (" +
                      std::to_string(label_bytes.size() - 8) + " bytes for " +
                      std::to_string(n_labels) + " labels)");
  }

  if (image_bytes.size() < 4) throw FormatError("images: truncated header");
  const std::uint8_t type = image_bytes[2];
  const std::uint8_t ndims = image_bytes[3];
  if (image_bytes[0] != 0 || image_bytes[1] != 0 || ElementSize(type) == 0 ||
      ndims < 2) {
    throw FormatError("images: bad magic");
  }
  const std::size_t header = 4 + 4 * std::size_t{ndims};
  if (image_bytes.size() < header) {
    throw FormatError("images: truncated header");
  }
  const std::size_t n_images = ReadBe32(image_bytes, 4);
  nn::Shape shape;
  for (std::size_t d = 1; d < ndims; ++d) {
    shape.push_back(ReadBe32(image_bytes, 4 + 4 * d));
  }
  if (shape.size() == 2) shape.insert(shape.begin(), 1);
  const std::size_t dim = nn::ShapeSize(shape);
  const std::size_t elem = ElementSize(type);
  if (image_bytes.size() != header + n_images * dim * elem) {
    throw FormatError("images: truncated or oversized body for " +
                      std::to_string(n_images) + " items of " +
                      nn::ShapeToString(shape));
  }
  if (n_images != n_labels) {
    throw FormatError("count mismatch: " + std::to_string(n_images) +
                      " images vs " + std::to_string(n_labels) + " labels");
  }

  if (n_label == 0) {
    std::uint8_t mx = 0;
    for (std::size_t i = 0; i < n_labels; ++i) {
      mx = std::max(mx, label_bytes[8 + i]);
    }
    n_label = std::size_t{mx} + 1;
  }
  LabeledDataset out(shape, n_label);
  std::vector<double> x(dim);
  for (std::size_t i = 0; i < n_images; ++i) {
    const std::size_t base = header + i * dim * elem;
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t at = base + k * elem;
      switch (type) {
        case 0x08:
          x[k] = image_bytes[at] / 255.0;
          break;
        case 0x0D:
          x[k] = std::bit_cast<float>(ReadBe32(image_bytes, at));
          break;
        default:
          x[k] = std::bit_cast<double>(ReadBe64(image_bytes, at));
          break;
      }
    }
    const int label = label_bytes[8 + i];
    if (static_cast<std::size_t>(label) >= n_label) {
      throw FormatError("labels: label " + std::to_string(label) +
                        " at item " + std::to_string(i) + " exceeds n_label");
    }
    out.Add(x, label, i);
  }
  return out;
}

LabeledDataset LoadIdx(const std::filesystem::path& images_path,
                       const std::filesystem::path& labels_path,
                       std::size_t n_label) {
  return DecodeIdx(ReadFile(images_path), ReadFile(labels_path), n_label);
}

std::vector<std::uint8_t> EncodeIdxImages(const LabeledDataset& data,
                                          IdxValueType type) {
  nn::Shape shape = data.feature_shape();
  if (shape.size() == 3 && shape[0] == 1) shape.erase(shape.begin());
  std::vector<std::uint8_t> out = {0, 0, static_cast<std::uint8_t>(type),
                                   static_cast<std::uint8_t>(shape.size() + 1)};
  PutBe32(out, static_cast<std::uint32_t>(data.size()));
  for (std::size_t d : shape) PutBe32(out, static_cast<std::uint32_t>(d));
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (double v : data.features(r)) {
      switch (type) {
        case IdxValueType::kUByte:
          out.push_back(static_cast<std::uint8_t>(
              std::clamp(std::lround(v * 255.0), 0L, 255L)));
          break;
        case IdxValueType::kFloat32:
          PutBe32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
          break;
        case IdxValueType::kFloat64:
          PutBe64(out, std::bit_cast<std::uint64_t>(v));
          break;
      }
    }
  }
  return out;
}

std::vector<std::uint8_t> EncodeIdxLabels(const LabeledDataset& data) {
  if (data.n_label() > 256) {
    throw InputError("IDX labels are single bytes; n_label exceeds 256");
  }
  std::vector<std::uint8_t> out;
  PutBe32(out, kLabelMagic);
  PutBe32(out, static_cast<std::uint32_t>(data.size()));
  for (int l : data.labels()) out.push_back(static_cast<std::uint8_t>(l));
  return out;
}

void WriteIdx(const LabeledDataset& data,
              const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path, IdxValueType type) {
  WriteFile(images_path, EncodeIdxImages(data, type));
  WriteFile(labels_path, EncodeIdxLabels(data));
}

}  // namespace ppa::datagen
