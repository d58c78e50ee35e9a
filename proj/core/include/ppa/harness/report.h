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

#ifndef PPA_HARNESS_REPORT_H_
#define PPA_HARNESS_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace ppa::harness {

// What the report command reads back from a run directory.
struct RunSummary {
  std::filesystem::path dir;
  std::string run_id;
  nlohmann::json config;
  nlohmann::json report;
  // Top-k accuracy recomputed from the per-user records.
  double TopK(std::size_t k) const;
};

// Throws IoError when report.json or config.json is missing or unreadable.
RunSummary LoadRun(const std::filesystem::path& dir);

// Writes into out_dir:
//   summary.csv    one row per run: id, key settings, measured
//                  heterogeneity, top-k accuracy per requested k, utilities
//   ds_series.csv  run_id,policy,round,mean_ds (paired attack/FedAvg curves)
// Returns the summary as text for printing.
std::string WriteReport(std::span<const RunSummary> runs,
                        std::span<const std::size_t> ks,
                        const std::filesystem::path& out_dir);

}  // namespace ppa::harness

#endif  // PPA_HARNESS_REPORT_H_
