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

#include "ppa/nn/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "ppa/common/error.h"

namespace ppa::nn {
namespace {

constexpr char kMagic[4] = {'P', 'P', 'A', 'M'};
constexpr std::size_t kHeaderSize = 10;

void PutLe(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

std::uint64_t GetLe(const std::uint8_t* p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> EncodeCheckpoint(const Architecture& arch,
                                           const ParamVector& params) {
  RequireSameLayout(ParamLayout(arch), params.layout(), "EncodeCheckpoint");
  const std::string descriptor = arch.ToJson().dump();
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + descriptor.size() + 4 * params.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  PutLe(out, kCheckpointVersion, 2);
  PutLe(out, descriptor.size(), 4);
  out.insert(out.end(), descriptor.begin(), descriptor.end());
  for (double v : params.values()) {
    PutLe(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
  }
  return out;
}

Checkpoint DecodeCheckpoint(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderSize) throw FormatError("checkpoint: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError("checkpoint: bad magic");
  }
  const auto version = GetLe(bytes.data() + 4, 2);
  if (version != kCheckpointVersion) {
    throw FormatError("checkpoint: unsupported version " +
                      std::to_string(version));
  }
  const std::size_t len = GetLe(bytes.data() + 6, 4);
  if (bytes.size() < kHeaderSize + len) {
    throw FormatError("checkpoint: truncated architecture descriptor");
  }
  nlohmann::json descriptor = nlohmann::json::parse(
      bytes.begin() + kHeaderSize, bytes.begin() + kHeaderSize + len,
      nullptr, /*allow_exceptions=*/false);
  if (descriptor.is_discarded()) {
    throw FormatError("checkpoint: architecture descriptor is not JSON");
  }
  Architecture arch = [&] {
    try {
      return Architecture::FromJson(descriptor);
    } catch (const InputError& e) {
      throw FormatError(std::string("checkpoint: architecture descriptor: ") +
                        e.what());
    }
  }();
  ParamLayout layout(arch);
  const std::size_t body = bytes.size() - kHeaderSize - len;
  if (body != 4 * layout.total()) {
    throw FormatError("checkpoint: parameter block holds " +
                      std::to_string(body) + " bytes, expected " +
                      std::to_string(4 * layout.total()));
  }
  std::vector<double> values(layout.total());
  const std::uint8_t* p = bytes.data() + kHeaderSize + len;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<float>(
        static_cast<std::uint32_t>(GetLe(p + 4 * i, 4)));
  }
  return {std::move(arch), ParamVector(std::move(layout), std::move(values))};
}

void SaveCheckpoint(const std::filesystem::path& path,
                    const Architecture& arch, const ParamVector& params) {
  const auto bytes = EncodeCheckpoint(arch, params);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("failed writing " + path.string());
}

Checkpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(is)),
                                  std::istreambuf_iterator<char>());
  return DecodeCheckpoint(bytes);
}

}  // namespace ppa::nn
