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

#ifndef PPA_ATTACK_PROFILER_H_
#define PPA_ATTACK_PROFILER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ppa/attack/meta.h"

namespace ppa::attack {

struct Verdict {
  int prediction = 0;
  bool locked = false;
};

// Per-user streaks of identical meta-classifier verdicts. A user locks once
// the same class has been predicted th_round times in a row and is not
// profiled again.
class ProfilerState {
 public:
  ProfilerState(std::size_t n_user, int th_round);

  int th_round() const { return th_round_; }
  std::size_t n_user() const { return streaks_.size(); }

  // Records a prediction made in `round`. Throws StateError if the user is
  // already locked.
  Verdict Observe(std::size_t user, int prediction, int round);

  bool locked(std::size_t user) const { return lock_round_[user].has_value(); }
  bool AllLocked() const;
  // Locked class, or the last prediction for unlocked users.
  std::optional<int> last_prediction(std::size_t user) const {
    return last_[user];
  }
  std::optional<int> lock_round(std::size_t user) const {
    return lock_round_[user];
  }
  int streak(std::size_t user) const { return streaks_[user]; }

 private:
  int th_round_;
  std::vector<std::optional<int>> last_;
  std::vector<int> streaks_;
  std::vector<std::optional<int>> lock_round_;
};

// Feeds the meta-classifier's verdict on `features` into the state.
Verdict ProfileRound(ProfilerState& state, std::size_t user,
                     std::span<const double> features,
                     const MetaClassifier& meta, int round);

}  // namespace ppa::attack

#endif  // PPA_ATTACK_PROFILER_H_
