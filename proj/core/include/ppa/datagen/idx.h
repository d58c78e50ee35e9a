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

#ifndef PPA_DATAGEN_IDX_H_
#define PPA_DATAGEN_IDX_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ppa/datagen/dataset.h"

namespace ppa::datagen {

// IDX container (the MNIST distribution format). Header is big-endian:
//
//   [0..1]  zero
//   [2]     element type: 0x08 ubyte, 0x0D float32, 0x0E float64
//   [3]     number of dimensions
//   [4..]   one u32 per dimension, first dimension = item count
//
// Image files hold ubyte pixels (scaled to [0, 1] on load) or raw floating
// values; label files must be ubyte with a single dimension (magic
// 0x00000801). Images with two trailing dimensions load as {1, rows, cols}.
enum class IdxValueType : std::uint8_t {
  kUByte = 0x08,
  kFloat32 = 0x0D,
  kFloat64 = 0x0E,
};

// Throws FormatError naming the offending field ("bad magic", truncation,
// count mismatch). n_label = 0 infers max label + 1.
LabeledDataset DecodeIdx(const std::vector<std::uint8_t>& image_bytes,
                         const std::vector<std::uint8_t>& label_bytes,
                         std::size_t n_label = 0);
LabeledDataset LoadIdx(const std::filesystem::path& images_path,
                       const std::filesystem::path& labels_path,
                       std::size_t n_label = 0);

// kUByte stores round(255 * v) clamped to [0, 255]; kFloat64 is lossless.
std::vector<std::uint8_t> EncodeIdxImages(const LabeledDataset& data,
                                          IdxValueType type);
std::vector<std::uint8_t> EncodeIdxLabels(const LabeledDataset& data);
void WriteIdx(const LabeledDataset& data,
              const std::filesystem::path& images_path,
              const std::filesystem::path& labels_path,
              IdxValueType type = IdxValueType::kFloat64);

}  // namespace ppa::datagen

#endif  // PPA_DATAGEN_IDX_H_
