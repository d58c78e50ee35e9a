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

#ifndef PPA_ATTACK_SELECTIVE_H_
#define PPA_ATTACK_SELECTIVE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "ppa/attack/sensitivity.h"
#include "ppa/datagen/partition.h"

namespace ppa::attack {

// The class the server guesses is a user's preference: argmin of its
// sensitivity in majority mode, argmax in minority mode (lower index wins
// ties).
int CandidateClass(std::span<const double> s, datagen::PreferenceMode mode);

// The x users among `candidates` (target excluded) with the largest
// sensitivity at the target's candidate class (smallest in minority mode),
// ties to the lower user id. `sensitivities` is indexed by user id. x is
// clamped to the number of available partners.
std::vector<std::size_t> SelectPartners(
    std::size_t target, std::span<const SensitivityVector> sensitivities,
    std::span<const std::size_t> candidates, std::size_t x,
    datagen::PreferenceMode mode);

// Convenience overload: every user is a candidate.
std::vector<std::size_t> SelectPartners(
    std::size_t target, std::span<const SensitivityVector> sensitivities,
    std::size_t x, datagen::PreferenceMode mode);

}  // namespace ppa::attack

#endif  // PPA_ATTACK_SELECTIVE_H_
