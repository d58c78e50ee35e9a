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

#include "ppa/attack/profiler.h"

#include <algorithm>
#include <string>

#include "ppa/common/error.h"

namespace ppa::attack {

ProfilerState::ProfilerState(std::size_t n_user, int th_round)
    : th_round_(th_round),
      last_(n_user),
      streaks_(n_user, 0),
      lock_round_(n_user) {
  if (th_round < 1) throw ConfigError("attack.th_round must be >= 1");
}

Verdict ProfilerState::Observe(std::size_t user, int prediction, int round) {
  if (user >= n_user()) throw InputError("user id out of range");
  if (locked(user)) {
    throw StateError("user " + std::to_string(user) +
                     " is locked and no longer profiled");
  }
  if (last_[user] == prediction) {
    ++streaks_[user];
  } else {
    streaks_[user] = 1;
  }
  last_[user] = prediction;
  if (streaks_[user] >= th_round_) lock_round_[user] = round;
  return {prediction, locked(user)};
}

bool ProfilerState::AllLocked() const {
  return std::all_of(lock_round_.begin(), lock_round_.end(),
                     [](const std::optional<int>& r) { return r.has_value(); });
}

Verdict ProfileRound(ProfilerState& state, std::size_t user,
                     std::span<const double> features,
                     const MetaClassifier& meta, int round) {
  if (state.locked(user)) {
    throw StateError("user " + std::to_string(user) +
                     " is locked and no longer profiled");
  }
  return state.Observe(user, meta.Predict(features), round);
}

}  // namespace ppa::attack
