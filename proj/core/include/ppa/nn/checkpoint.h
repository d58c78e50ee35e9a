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

#ifndef PPA_NN_CHECKPOINT_H_
#define PPA_NN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ppa/nn/architecture.h"
#include "ppa/nn/param_vector.h"

namespace ppa::nn {

// PPAM checkpoint layout (all integers little-endian):
//
//   offset  size  field
//   0       4     magic "PPAM"
//   4       2     version (u16, currently 1)
//   6       4     descriptor length N (u32)
//   10      N     architecture descriptor, UTF-8 JSON
//   10+N    4*P   parameters as IEEE-754 float32 in layout order
//
// Parameters are narrowed from double to float on write, so a round trip is
// exact only to float precision.
inline constexpr std::uint16_t kCheckpointVersion = 1;

struct Checkpoint {
  Architecture arch;
  ParamVector params;
};

std::vector<std::uint8_t> EncodeCheckpoint(const Architecture& arch,
                                           const ParamVector& params);
// Throws FormatError naming the offending field.
Checkpoint DecodeCheckpoint(const std::vector<std::uint8_t>& bytes);

void SaveCheckpoint(const std::filesystem::path& path,
                    const Architecture& arch, const ParamVector& params);
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

}  // namespace ppa::nn

#endif  // PPA_NN_CHECKPOINT_H_
