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

#include "ppa/harness/config.h"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "ppa/common/error.h"

namespace ppa::harness {
namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown.
class Reader {
 public:
  Reader(const json* j, std::string path, std::vector<std::string>* errors)
      : j_(j), path_(std::move(path)), errors_(errors) {
    if (j_ != nullptr && !j_->is_object()) {
      errors_->push_back((path_.empty() ? "<root>" : path_) +
                         ": expected an object");
      j_ = nullptr;
    }
  }

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  void Error(const std::string& key, const std::string& msg) {
    errors_->push_back(Path(key) + ": " + msg);
  }

  const json* Find(const std::string& key) {
    seen_.insert(key);
    if (j_ == nullptr) return nullptr;
    auto it = j_->find(key);
    if (it == j_->end() || it->is_null()) return nullptr;
    return &*it;
  }

  Reader Object(const std::string& key) {
    return Reader(Find(key), Path(key), errors_);
  }

  template <typename T>
  T Get(const std::string& key, T def) {
    const json* v = Find(key);
    if (v == nullptr) return def;
    if constexpr (std::is_same_v<T, bool>) {
      if (v->is_boolean()) return v->get<bool>();
      Error(key, "expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (v->is_string()) return v->get<std::string>();
      Error(key, "expected a string");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (v->is_number()) return v->get<T>();
      Error(key, "expected a number");
    } else if constexpr (std::is_unsigned_v<T>) {
      if (v->is_number_unsigned()) return v->get<T>();
      if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
        return static_cast<T>(v->get<std::int64_t>());
      }
      Error(key, "expected a non-negative integer");
    } else {
      if (v->is_number_integer()) return v->get<T>();
      Error(key, "expected an integer");
    }
    return def;
  }

  std::optional<double> OptionalNumber(const std::string& key) {
    const json* v = Find(key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number()) {
      Error(key, "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  // [lo, hi] or a single number meaning [v, v].
  std::pair<double, double> Range(const std::string& key,
                                  std::pair<double, double> def) {
    const json* v = Find(key);
    if (v == nullptr) return def;
    if (v->is_number()) return {v->get<double>(), v->get<double>()};
    if (v->is_array() && v->size() == 2 && (*v)[0].is_number() &&
        (*v)[1].is_number()) {
      return {(*v)[0].get<double>(), (*v)[1].get<double>()};
    }
    Error(key, "expected a number or a [min, max] pair");
    return def;
  }

  std::vector<std::size_t> Sizes(const std::string& key,
                                 std::vector<std::size_t> def) {
    const json* v = Find(key);
    if (v == nullptr) return def;
    std::vector<std::size_t> out;
    if (v->is_array()) {
      for (const json& e : *v) {
        if (!e.is_number_unsigned()) {
          Error(key, "expected an array of non-negative integers");
          return def;
        }
        out.push_back(e.get<std::size_t>());
      }
      return out;
    }
    Error(key, "expected an array of non-negative integers");
    return def;
  }

  void Finish() {
    if (j_ == nullptr) return;
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      if (!seen_.contains(it.key())) {
        errors_->push_back("unknown key '" + Path(it.key()) + "'");
      }
    }
  }

 private:
  const json* j_;
  std::string path_;
  std::vector<std::string>* errors_;
  std::set<std::string> seen_;
};

json RangeJson(std::pair<double, double> r) { return {r.first, r.second}; }

template <typename T>
json OptionalJson(const std::optional<T>& v) {
  return v ? json(*v) : json();
}

}  // namespace

nn::Architecture ExperimentConfig::BuildArchitecture() const {
  if (model.architecture) return nn::Architecture::FromJson(*model.architecture);
  if (dataset.kind == DatasetKind::kSynthetic) {
    return nn::Architecture::Mlp(dataset.dim, model.hidden, dataset.n_label,
                                 model.dropout_rate);
  }
  throw ConfigError(
      "model.architecture is required for idx datasets (input shape)");
}

attack::AttackerConfig ExperimentConfig::Attacker() const {
  attack::AttackerConfig a;
  a.alpha = attack.alpha;
  a.th_round = attack.th_round;
  a.release_locked = attack.release_locked;
  a.x = attack.x;
  a.mode = attack.mode;
  a.aggregation = fl.aggregation;
  a.weighting = fl.weighting;
  a.features = attack.online_features;
  return a;
}

json ExperimentConfig::ToJson() const {
  json ds = {{"kind", dataset.kind == DatasetKind::kSynthetic ? "synthetic"
                                                               : "idx"},
             {"n_label", dataset.n_label}};
  if (dataset.kind == DatasetKind::kSynthetic) {
    ds["dim"] = dataset.dim;
    ds["sigma"] = dataset.sigma;
    ds["separation"] = dataset.separation;
  } else {
    ds["images"] = dataset.images.string();
    ds["labels"] = dataset.labels.string();
  }
  json mdl = {{"hidden", model.hidden}, {"dropout_rate", model.dropout_rate}};
  if (model.architecture) mdl["architecture"] = *model.architecture;
  json fed = {{"n_user", federation.n_user},
              {"samples_per_user", federation.samples_per_user},
              {"cp", RangeJson({federation.cp_min, federation.cp_max})},
              {"cd", RangeJson({federation.cd_min, federation.cd_max})},
              {"ud_target", OptionalJson(federation.ud_target)},
              {"id_target", OptionalJson(federation.id_target)}};
  json dp;
  if (fl.train.dp) {
    dp = {{"clip_norm", fl.train.dp->clip_norm},
          {"noise_multiplier", fl.train.dp->noise_multiplier}};
  }
  json flj = {{"rounds", fl.n_rounds},
              {"client_fraction", fl.client_fraction},
              {"local_epochs", fl.local_epochs},
              {"learning_rate", fl.train.learning_rate},
              {"batch_size", fl.train.batch_size},
              {"aggregation", fedsim::AggregationKindName(fl.aggregation)},
              {"selective_weighting", fedsim::SelectiveWeightingName(fl.weighting)},
              {"dropout", fl.train.dropout_enabled},
              {"dp", dp},
              {"early_stop", early_stop}};
  json meta = {{"hidden", attack.meta.hidden},
               {"learning_rate", attack.meta.learning_rate},
               {"epochs", attack.meta.epochs},
               {"batch_size", attack.meta.batch_size},
               {"target_resolution", attack.meta.target_resolution}};
  json atk = {
      {"alpha", attack.alpha},
      {"th_round", attack.th_round},
      {"release_locked", attack.release_locked},
      {"x", attack.x},
      {"mode", datagen::PreferenceModeName(attack.mode)},
      {"n_shadows", n_shadows()},
      {"aux_per_class", attack.aux_per_class},
      {"algorithm", attack.algorithm == MetaAlgorithm::kFederated
                        ? "federated"
                        : "centralized"},
      {"online_features",
       attack.online_features == attack::MetaFeatures::kDifferential
           ? "differential"
           : "sensitivity"},
      {"shadow_epochs", attack.shadow_epochs},
      {"shadow_size", attack.shadow_size},
      {"shadow_learning_rate", attack.shadow_learning_rate},
      {"shadow_cp", RangeJson(attack.shadow_cp.value_or(
                        std::pair{federation.cp_min, federation.cp_max}))},
      {"shadow_cd", RangeJson(attack.shadow_cd.value_or(
                        std::pair{federation.cd_min, federation.cd_max}))},
      {"meta", meta}};
  json out = {{"seed", seed},
              {"output_dir", output_dir.string()},
              {"dataset", ds},
              {"model", mdl},
              {"federation", fed},
              {"fl", flj},
              {"attack", atk},
              {"eval", {{"test_per_class", test_per_class}}}};
  if (defense) {
    json variants = json::array();
    for (const defense::DefenseVariant& v : defense->variants) {
      json jv = {{"label", v.label}, {"dropout", v.dropout}};
      if (v.dp) {
        jv["noise_multiplier"] = v.dp->noise_multiplier;
        jv["clip_norm"] = v.dp->clip_norm;
      }
      variants.push_back(jv);
    }
    out["defense"] = {{"variants", variants}};
  }
  return out;
}

ExperimentConfig ConfigFromJson(const json& j) {
  std::vector<std::string> errors;
  ExperimentConfig c;
  Reader root(&j, "", &errors);
  c.seed = root.Get<std::uint64_t>("seed", 0);
  c.output_dir = root.Get<std::string>("output_dir", "");

  Reader ds = root.Object("dataset");
  const std::string kind = ds.Get<std::string>("kind", "synthetic");
  if (kind == "synthetic") {
    c.dataset.kind = DatasetKind::kSynthetic;
  } else if (kind == "idx") {
    c.dataset.kind = DatasetKind::kIdx;
  } else {
    ds.Error("kind", "expected synthetic or idx, got '" + kind + "'");
  }
  c.dataset.n_label = ds.Get<std::size_t>("n_label", c.dataset.n_label);
  c.dataset.dim = ds.Get<std::size_t>("dim", c.dataset.dim);
  c.dataset.sigma = ds.Get<double>("sigma", c.dataset.sigma);
  c.dataset.separation = ds.Get<double>("separation", c.dataset.separation);
  c.dataset.images = ds.Get<std::string>("images", "");
  c.dataset.labels = ds.Get<std::string>("labels", "");
  ds.Finish();
  if (c.dataset.n_label < 2) ds.Error("n_label", "must be >= 2");
  if (c.dataset.kind == DatasetKind::kSynthetic) {
    if (c.dataset.dim < 2) ds.Error("dim", "must be >= 2");
    if (!(c.dataset.sigma >= 0.0)) ds.Error("sigma", "must be >= 0");
    if (!(c.dataset.separation > 0.0)) ds.Error("separation", "must be > 0");
  } else {
    for (const auto& [key, p] : {std::pair{"images", c.dataset.images},
                                 std::pair{"labels", c.dataset.labels}}) {
      if (p.empty()) {
        ds.Error(key, "required for idx datasets");
      } else if (!std::filesystem::exists(p)) {
        ds.Error(key, "file not found: " + p.string());
      }
    }
  }

  Reader mdl = root.Object("model");
  c.model.hidden = mdl.Sizes("hidden", c.model.hidden);
  c.model.dropout_rate = mdl.Get<double>("dropout_rate", c.model.dropout_rate);
  if (const json* a = mdl.Find("architecture")) c.model.architecture = *a;
  mdl.Finish();
  if (!(c.model.dropout_rate >= 0.0 && c.model.dropout_rate < 1.0)) {
    mdl.Error("dropout_rate", "must lie in [0, 1)");
  }
  for (std::size_t h : c.model.hidden) {
    if (h == 0) mdl.Error("hidden", "layer widths must be positive");
  }

  Reader fed = root.Object("federation");
  c.federation.n_label = c.dataset.n_label;
  c.federation.n_user = fed.Get<std::size_t>("n_user", c.federation.n_user);
  c.federation.samples_per_user =
      fed.Get<std::size_t>("samples_per_user", c.federation.samples_per_user);
  std::tie(c.federation.cp_min, c.federation.cp_max) =
      fed.Range("cp", {c.federation.cp_min, c.federation.cp_max});
  std::tie(c.federation.cd_min, c.federation.cd_max) =
      fed.Range("cd", {c.federation.cd_min, c.federation.cd_max});
  c.federation.ud_target = fed.OptionalNumber("ud_target");
  c.federation.id_target = fed.OptionalNumber("id_target");
  fed.Finish();
  if (c.federation.n_user < 1) fed.Error("n_user", "must be >= 1");
  if (c.federation.samples_per_user < 1) {
    fed.Error("samples_per_user", "must be >= 1");
  }
  if (!(c.federation.cp_min > 0.0 && c.federation.cp_max <= 1.0 &&
        c.federation.cp_min <= c.federation.cp_max)) {
    fed.Error("cp", "must satisfy 0 < min <= max <= 1");
  }
  if (!(c.federation.cd_min >= 0.0 && c.federation.cd_max <= 1.0 &&
        c.federation.cd_min <= c.federation.cd_max)) {
    fed.Error("cd", "must satisfy 0 <= min <= max <= 1");
  }
  if (c.federation.ud_target &&
      !(*c.federation.ud_target >= 0.0 && *c.federation.ud_target <= 1.0)) {
    fed.Error("ud_target", "must lie in [0, 1]");
  }
  if (c.federation.id_target && *c.federation.id_target < 0.0) {
    fed.Error("id_target", "must be >= 0");
  }

  Reader fl = root.Object("fl");
  c.fl.n_rounds = fl.Get<int>("rounds", c.fl.n_rounds);
  c.fl.client_fraction = fl.Get<double>("client_fraction", c.fl.client_fraction);
  c.fl.local_epochs = fl.Get<int>("local_epochs", c.fl.local_epochs);
  c.fl.train.learning_rate =
      fl.Get<double>("learning_rate", c.fl.train.learning_rate);
  c.fl.train.batch_size = fl.Get<std::size_t>("batch_size", c.fl.train.batch_size);
  try {
    c.fl.aggregation = fedsim::ParseAggregationKind(
        fl.Get<std::string>("aggregation", "selective"));
  } catch (const ConfigError& e) {
    fl.Error("aggregation", e.what());
  }
  try {
    c.fl.weighting = fedsim::ParseSelectiveWeighting(
        fl.Get<std::string>("selective_weighting", "equal"));
  } catch (const ConfigError& e) {
    fl.Error("selective_weighting", e.what());
  }
  c.fl.train.dropout_enabled = fl.Get<bool>("dropout", false);
  {
    Reader dp(fl.Find("dp"), fl.Path("dp"), &errors);
    if (fl.Find("dp") != nullptr) {
      defense::DpConfig d;
      d.clip_norm = dp.Get<double>("clip_norm", d.clip_norm);
      d.noise_multiplier = dp.Get<double>("noise_multiplier", d.noise_multiplier);
      if (!(d.clip_norm > 0.0)) dp.Error("clip_norm", "must be > 0");
      if (!(d.noise_multiplier >= 0.0)) {
        dp.Error("noise_multiplier", "must be >= 0");
      }
      c.fl.train.dp = d;
    }
    dp.Finish();
  }
  c.early_stop = fl.Get<bool>("early_stop", c.early_stop);
  fl.Finish();
  if (c.fl.n_rounds < 1) fl.Error("rounds", "must be >= 1");
  if (!(c.fl.client_fraction > 0.0 && c.fl.client_fraction <= 1.0)) {
    fl.Error("client_fraction", "must lie in (0, 1]");
  }
  if (c.fl.local_epochs < 1) fl.Error("local_epochs", "must be >= 1");
  if (!(c.fl.train.learning_rate > 0.0)) fl.Error("learning_rate", "must be > 0");
  if (c.fl.train.batch_size < 1) fl.Error("batch_size", "must be >= 1");

  Reader atk = root.Object("attack");
  AttackSettings& a = c.attack;
  a.alpha = atk.Get<double>("alpha", a.alpha);
  a.th_round = atk.Get<int>("th_round", a.th_round);
  a.release_locked = atk.Get<bool>("release_locked", a.release_locked);
  a.x = atk.Get<std::size_t>("x", a.x);
  try {
    a.mode = datagen::ParsePreferenceMode(atk.Get<std::string>("mode", "majority"));
  } catch (const ConfigError& e) {
    atk.Error("mode", e.what());
  }
  a.n_shadows = atk.Get<std::size_t>("n_shadows", a.n_shadows);
  a.aux_per_class = atk.Get<std::size_t>("aux_per_class", a.aux_per_class);
  const std::string algo = atk.Get<std::string>("algorithm", "federated");
  if (algo == "federated") {
    a.algorithm = MetaAlgorithm::kFederated;
  } else if (algo == "centralized") {
    a.algorithm = MetaAlgorithm::kCentralized;
  } else {
    atk.Error("algorithm", "expected federated or centralized, got '" + algo + "'");
  }
  const std::string online = atk.Get<std::string>("online_features", "differential");
  if (online == "differential") {
    a.online_features = attack::MetaFeatures::kDifferential;
  } else if (online == "sensitivity") {
    a.online_features = attack::MetaFeatures::kSensitivity;
  } else {
    atk.Error("online_features",
              "expected differential or sensitivity, got '" + online + "'");
  }
  a.shadow_epochs = atk.Get<int>("shadow_epochs", a.shadow_epochs);
  a.shadow_size = atk.Get<std::size_t>("shadow_size", a.shadow_size);
  a.shadow_learning_rate =
      atk.Get<double>("shadow_learning_rate", a.shadow_learning_rate);
  if (atk.Find("shadow_cp") != nullptr) {
    a.shadow_cp = atk.Range("shadow_cp", {0.0, 0.0});
  }
  if (atk.Find("shadow_cd") != nullptr) {
    a.shadow_cd = atk.Range("shadow_cd", {0.0, 0.0});
  }
  {
    Reader meta = atk.Object("meta");
    a.meta.hidden = meta.Get<std::size_t>("hidden", a.meta.hidden);
    a.meta.learning_rate = meta.Get<double>("learning_rate", a.meta.learning_rate);
    a.meta.epochs = meta.Get<int>("epochs", a.meta.epochs);
    a.meta.batch_size = meta.Get<std::size_t>("batch_size", a.meta.batch_size);
    a.meta.target_resolution =
        meta.Get<std::size_t>("target_resolution", a.meta.target_resolution);
    meta.Finish();
    if (a.meta.hidden < 1) meta.Error("hidden", "must be >= 1");
    if (!(a.meta.learning_rate > 0.0)) meta.Error("learning_rate", "must be > 0");
    if (a.meta.epochs < 0) meta.Error("epochs", "must be >= 0");
    if (a.meta.batch_size < 1) meta.Error("batch_size", "must be >= 1");
  }
  atk.Finish();
  if (!(a.alpha > 0.0)) atk.Error("alpha", "must be > 0");
  if (a.th_round < 1) atk.Error("th_round", "must be >= 1");
  if (a.x < 1) atk.Error("x", "must be >= 1");
  if (a.x >= c.federation.n_user) {
    atk.Error("x", "must be < federation.n_user (" +
                       std::to_string(c.federation.n_user) + ")");
  }
  if (a.n_shadows != 0 && a.n_shadows < c.dataset.n_label) {
    atk.Error("n_shadows", "must be 0 or >= dataset.n_label");
  }
  if (a.aux_per_class < 1) atk.Error("aux_per_class", "must be >= 1");
  if (a.shadow_epochs < 1) atk.Error("shadow_epochs", "must be >= 1");
  if (!(a.shadow_learning_rate > 0.0)) {
    atk.Error("shadow_learning_rate", "must be > 0");
  }
  for (const auto& [key, r] : {std::pair{"shadow_cp", a.shadow_cp},
                               std::pair{"shadow_cd", a.shadow_cd}}) {
    if (r && !(r->first >= 0.0 && r->first <= r->second && r->second <= 1.0)) {
      atk.Error(key, "must satisfy 0 <= min <= max <= 1");
    }
  }

  if (const json* dj = root.Find("defense")) {
    Reader dr(dj, "defense", &errors);
    defense::DefenseSweep sweep;
    if (const json* vs = dr.Find("variants")) {
      if (!vs->is_array()) {
        dr.Error("variants", "expected an array");
      } else {
        for (std::size_t i = 0; i < vs->size(); ++i) {
          Reader vr(&(*vs)[i], "defense.variants[" + std::to_string(i) + "]",
                    &errors);
          defense::DefenseVariant v;
          v.label = vr.Get<std::string>("label", "");
          v.dropout = vr.Get<bool>("dropout", false);
          const auto nm = vr.OptionalNumber("noise_multiplier");
          const auto cn = vr.OptionalNumber("clip_norm");
          if (nm || cn) {
            defense::DpConfig d;
            d.noise_multiplier = nm.value_or(0.0);
            d.clip_norm = cn.value_or(1.0);
            v.dp = d;
          }
          vr.Finish();
          sweep.variants.push_back(v);
        }
      }
    } else {
      sweep = defense::StandardSweep();
    }
    dr.Finish();
    try {
      sweep.Validate();
    } catch (const ConfigError& e) {
      errors.push_back(std::string("defense: ") + e.what());
    }
    c.defense = sweep;
  }

  {
    Reader ev = root.Object("eval");
    c.test_per_class = ev.Get<std::size_t>("test_per_class", c.test_per_class);
    ev.Finish();
    if (c.test_per_class < 1) ev.Error("test_per_class", "must be >= 1");
  }
  root.Finish();

  if (errors.empty()) {
    try {
      const nn::Architecture arch = c.BuildArchitecture();
      if (arch.n_classes() != c.dataset.n_label) {
        errors.push_back("model.architecture: output width differs from "
                         "dataset.n_label");
      }
      if (c.dataset.kind == DatasetKind::kSynthetic &&
          arch.input_shape() != nn::Shape{c.dataset.dim}) {
        errors.push_back("model.architecture: input shape differs from "
                         "dataset.dim");
      }
    } catch (const Error& e) {
      errors.push_back(std::string("model: ") + e.what());
    }
  }

  if (!errors.empty()) {
    std::string msg = "invalid config:";
    for (const std::string& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return c;
}

ExperimentConfig ValidateConfig(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c = ConfigFromJson(j);
  if (!c.output_dir.empty()) WriteResolvedConfig(c);
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ValidateConfig(ss.str());
}

void WriteResolvedConfig(const ExperimentConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw IoError("cannot create " + cfg.output_dir.string() + ": " +
                  ec.message());
  }
  std::ofstream out(cfg.output_dir / "config.json");
  if (!out) throw IoError("cannot write config echo in " + cfg.output_dir.string());
  out << cfg.ToJson().dump(2) << '\n';
}

}  // namespace ppa::harness
