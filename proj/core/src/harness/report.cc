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

#include "ppa/harness/report.h"

#include <fstream>
#include <numeric>
#include <sstream>

#include "ppa/common/error.h"

namespace ppa::harness {
namespace {

nlohmann::json ReadJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("missing run artifact " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("unreadable run artifact " + path.string() + ": " + e.what());
  }
}

double Mean(const nlohmann::json& arr) {
  if (!arr.is_array() || arr.empty()) return 0.0;
  double s = 0.0;
  for (const auto& v : arr) s += v.get<double>();
  return s / static_cast<double>(arr.size());
}

}  // namespace

double RunSummary::TopK(std::size_t k) const {
  const auto& users = report.at("users");
  if (users.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& u : users) {
    const auto counts = u.at("class_counts").get<std::vector<std::size_t>>();
    const auto ranking = u.at("ranking").get<std::vector<int>>();
    if (ranking.size() < k || counts.size() < k) continue;
    const bool minority = config.at("attack").at("mode") == "minority";
    std::vector<bool> chosen(counts.size(), false);
    bool ok = true;
    for (std::size_t i = 0; i < k; ++i) {
      const auto c = static_cast<std::size_t>(ranking[i]);
      if (chosen[c]) ok = false;
      chosen[c] = true;
    }
    for (std::size_t in = 0; ok && in < counts.size(); ++in) {
      if (!chosen[in]) continue;
      for (std::size_t out = 0; out < counts.size(); ++out) {
        if (chosen[out]) continue;
        if (minority ? counts[in] > counts[out] : counts[in] < counts[out]) {
          ok = false;
        }
      }
    }
    if (ok) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(users.size());
}

RunSummary LoadRun(const std::filesystem::path& dir) {
  RunSummary s;
  s.dir = dir;
  s.config = ReadJson(dir / "config.json");
  s.report = ReadJson(dir / "report.json");
  s.run_id = s.report.value("run_id", std::string());
  return s;
}

std::string WriteReport(std::span<const RunSummary> runs,
                        std::span<const std::size_t> ks,
                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ostringstream summary;
  summary << "run_id,dir,aggregation,x,aux_per_class,n_user,algorithm,"
             "noise_multiplier,dropout,mean_cp,mean_cd,ud,id,rounds";
  for (std::size_t k : ks) summary << ",top" << k;
  summary << ",utility_with_attack,utility_without_attack\n";
  for (const RunSummary& r : runs) {
    const auto& c = r.config;
    const auto& m = r.report.at("federation_metrics");
    const auto& dp = c.at("fl").at("dp");
    summary << r.run_id << ',' << r.dir.string() << ','
            << c.at("fl").at("aggregation").get<std::string>() << ','
            << c.at("attack").at("x") << ',' << c.at("attack").at("aux_per_class")
            << ',' << c.at("federation").at("n_user") << ','
            << c.at("attack").at("algorithm").get<std::string>() << ','
            << (dp.is_null() ? 0.0 : dp.at("noise_multiplier").get<double>())
            << ',' << c.at("fl").at("dropout") << ',' << Mean(m.at("cp")) << ','
            << Mean(m.at("cd")) << ',' << m.at("ud") << ',' << m.at("id") << ','
            << r.report.at("rounds_run");
    for (std::size_t k : ks) summary << ',' << r.TopK(k);
    summary << ',' << r.report.at("utility_with_attack") << ','
            << r.report.at("utility_without_attack") << '\n';
  }
  {
    std::ofstream out(out_dir / "summary.csv");
    out << summary.str();
    if (!out) throw IoError("cannot write summary.csv");
  }
  std::ofstream ds(out_dir / "ds_series.csv");
  ds << "run_id,policy,round,mean_ds\n";
  for (const RunSummary& r : runs) {
    for (const char* key : {"ds_attack", "ds_fedavg"}) {
      const std::string policy =
          std::string(key) == "ds_fedavg"
              ? "fedavg"
              : r.config.at("fl").at("aggregation").get<std::string>();
      for (const auto& p : r.report.at(key)) {
        ds << r.run_id << ',' << policy << ',' << p[0] << ',' << p[1] << '\n';
      }
    }
  }
  if (!ds) throw IoError("cannot write ds_series.csv");
  return summary.str();
}

}  // namespace ppa::harness
