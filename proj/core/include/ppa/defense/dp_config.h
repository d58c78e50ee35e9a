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

#ifndef PPA_DEFENSE_DP_CONFIG_H_
#define PPA_DEFENSE_DP_CONFIG_H_

namespace ppa::defense {

// DP-SGD parameters: per-example L2 clipping bound and the Gaussian noise
// multiplier (noise std = noise_multiplier * clip_norm / batch size).
struct DpConfig {
  double clip_norm = 1.0;
  double noise_multiplier = 0.0;

  // Throws ConfigError unless clip_norm > 0 and noise_multiplier >= 0.
  void Validate() const;

  friend bool operator==(const DpConfig&, const DpConfig&) = default;
};

}  // namespace ppa::defense

#endif  // PPA_DEFENSE_DP_CONFIG_H_
