// Copyright 2026 The gmafed Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gmafed/cli/config_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace gmafed::cli {
namespace {

using experiments::ExperimentConfig;
using experiments::StudySpec;

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = issues.size() == 1 ? "invalid config: " : "invalid config:";
  if (issues.size() == 1) return out + issues.front();
  for (const auto& i : issues) out += "\n  " + i;
  return out;
}

// Walks a JSON document, recording problems instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

  void issue(const std::string& path, const std::string& what) { issues_.push_back(path + ": " + what); }

  static std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
  }

  // Checks that `j` is an object whose keys are all in `allowed`.
  bool object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      issue(path.empty() ? "<root>" : path, "expected an object");
      return false;
    }
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) issue(join(path, key), "unknown key");
    }
    return true;
  }

  const Json* find(const Json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  void real(const Json& obj, const std::string& path, const char* key, double& out) {
    const Json* v = find(obj, key);
    if (!v) return;
    if (!v->is_number()) return issue(join(path, key), "expected a number");
    out = v->get<double>();
  }

  template <typename Int>
  void integer(const Json& obj, const std::string& path, const char* key, Int& out) {
    const Json* v = find(obj, key);
    if (!v) return;
    if (v->is_number_unsigned()) {
      const auto u = v->get<std::uint64_t>();
      if (u > std::numeric_limits<Int>::max()) return issue(join(path, key), "value too large");
      out = static_cast<Int>(u);
    } else if (v->is_number_integer()) {
      issue(join(path, key), "must be non-negative");
    } else {
      issue(join(path, key), "expected a non-negative integer");
    }
  }

  void text(const Json& obj, const std::string& path, const char* key, std::string& out) {
    const Json* v = find(obj, key);
    if (!v) return;
    if (!v->is_string()) return issue(join(path, key), "expected a string");
    out = v->get<std::string>();
  }

  void flag(const Json& obj, const std::string& path, const char* key, bool& out) {
    const Json* v = find(obj, key);
    if (!v) return;
    if (!v->is_boolean()) return issue(join(path, key), "expected true or false");
    out = v->get<bool>();
  }

  template <typename E, typename Parse>
  void enumeration(const Json& obj, const std::string& path, const char* key, E& out, Parse parse) {
    std::string name;
    const std::size_t before = issues_.size();
    text(obj, path, key, name);
    if (issues_.size() != before || !find(obj, key)) return;
    try {
      out = parse(name);
    } catch (const ParameterError& e) {
      issue(join(path, key), e.what());
    }
  }

  void reals(const Json& obj, const std::string& path, const char* key, std::vector<double>& out) {
    const Json* v = find(obj, key);
    if (!v) return;
    if (!v->is_array()) return issue(join(path, key), "expected an array of numbers");
    std::vector<double> values;
    for (std::size_t i = 0; i < v->size(); ++i) {
      if (!(*v)[i].is_number())
        return issue(join(path, key) + "[" + std::to_string(i) + "]", "expected a number");
      values.push_back((*v)[i].get<double>());
    }
    out = std::move(values);
  }

  // Runs a module validator, recording its message (already path-qualified).
  template <typename F>
  void check(const std::string& prefix, F&& validate) {
    try {
      validate();
    } catch (const ParameterError& e) {
      issues_.push_back(prefix + e.what());
    }
  }

  bool clean() const { return issues_.empty(); }

  void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) issue(path, what);
  }

 private:
  std::vector<std::string>& issues_;
};

void read_experiment(Reader& r, const Json& j, const std::string& root, ExperimentConfig& cfg) {
  auto p = [&](const char* key) { return Reader::join(root, key); };
  if (!r.object(j, root,
                {"seed", "rounds", "output_dir", "trailing_window", "model", "dataset", "partition",
                 "round", "client", "server"}))
    return;
  r.integer(j, root, "seed", cfg.seed);
  r.integer(j, root, "rounds", cfg.rounds);
  r.text(j, root, "output_dir", cfg.output_dir);
  r.integer(j, root, "trailing_window", cfg.trailing_window);

  if (const Json* m = r.find(j, "model"); m && r.object(*m, p("model"), {"kind", "hidden_dim"})) {
    r.enumeration(*m, p("model"), "kind", cfg.model.kind, models::model_kind_from_string);
    r.integer(*m, p("model"), "hidden_dim", cfg.model.hidden_dim);
  }

  if (const Json* d = r.find(j, "dataset");
      d && r.object(*d, p("dataset"), {"source", "synthetic", "idx", "max_train", "max_test"})) {
    const std::string dp = p("dataset");
    r.enumeration(*d, dp, "source", cfg.dataset.kind, [](const std::string& s) {
      if (s == "synthetic") return experiments::DataSourceKind::synthetic;
      if (s == "idx") return experiments::DataSourceKind::idx;
      throw ParameterError("unknown dataset source '" + s + "' (valid: synthetic, idx)");
    });
    r.integer(*d, dp, "max_train", cfg.dataset.max_train);
    r.integer(*d, dp, "max_test", cfg.dataset.max_test);
    auto& s = cfg.dataset.synthetic;
    const std::string sp = dp + ".synthetic";
    if (const Json* sj = r.find(*d, "synthetic");
        sj && r.object(*sj, sp,
                       {"num_classes", "per_class", "test_per_class", "input_dim", "separation"})) {
      r.integer(*sj, sp, "num_classes", s.num_classes);
      r.integer(*sj, sp, "per_class", s.per_class);
      r.integer(*sj, sp, "test_per_class", s.test_per_class);
      r.integer(*sj, sp, "input_dim", s.input_dim);
      r.real(*sj, sp, "separation", s.separation);
    }
    auto& x = cfg.dataset.idx;
    const std::string xp = dp + ".idx";
    if (const Json* xj = r.find(*d, "idx");
        xj && r.object(*xj, xp, {"train_images", "train_labels", "test_images", "test_labels"})) {
      r.text(*xj, xp, "train_images", x.train_images);
      r.text(*xj, xp, "train_labels", x.train_labels);
      r.text(*xj, xp, "test_images", x.test_images);
      r.text(*xj, xp, "test_labels", x.test_labels);
    }
  }

  if (const Json* pj = r.find(j, "partition");
      pj && r.object(*pj, p("partition"),
                     {"kind", "classes_per_client", "concentration", "feature_skew"})) {
    const std::string pp = p("partition");
    r.enumeration(*pj, pp, "kind", cfg.partition.kind, data::skew_kind_from_string);
    r.integer(*pj, pp, "classes_per_client", cfg.partition.classes_per_client);
    r.real(*pj, pp, "concentration", cfg.partition.concentration);
    const std::string fp = pp + ".feature_skew";
    if (const Json* fj = r.find(*pj, "feature_skew");
        fj && r.object(*fj, fp, {"enabled", "rho", "max_tint"})) {
      r.flag(*fj, fp, "enabled", cfg.partition.feature_skew.enabled);
      r.real(*fj, fp, "rho", cfg.partition.feature_skew.rho);
      r.real(*fj, fp, "max_tint", cfg.partition.feature_skew.max_tint);
    }
  }

  if (const Json* rj = r.find(j, "round");
      rj && r.object(*rj, p("round"), {"n_clients", "sample_size", "aggregator", "tau"})) {
    r.integer(*rj, p("round"), "n_clients", cfg.round.n_clients);
    r.integer(*rj, p("round"), "sample_size", cfg.round.sample_size);
    r.enumeration(*rj, p("round"), "aggregator", cfg.round.aggregator,
                  fedcore::aggregator_from_string);
    r.real(*rj, p("round"), "tau", cfg.round.tau);
  }

  if (const Json* cj = r.find(j, "client");
      cj && r.object(*cj, p("client"), {"lr", "momentum", "epochs", "batch_size", "prox_mu"})) {
    r.real(*cj, p("client"), "lr", cfg.client.lr);
    r.real(*cj, p("client"), "momentum", cfg.client.momentum);
    r.integer(*cj, p("client"), "epochs", cfg.client.epochs);
    r.integer(*cj, p("client"), "batch_size", cfg.client.batch_size);
    r.real(*cj, p("client"), "prox_mu", cfg.client.prox_mu);
  }

  if (const Json* sj = r.find(j, "server");
      sj && r.object(*sj, p("server"), {"optimizer", "lr", "beta1", "beta2", "epsilon"})) {
    r.enumeration(*sj, p("server"), "optimizer", cfg.server.kind,
                  fedcore::server_optimizer_from_string);
    r.real(*sj, p("server"), "lr", cfg.server.lr);
    r.real(*sj, p("server"), "beta1", cfg.server.beta1);
    r.real(*sj, p("server"), "beta2", cfg.server.beta2);
    r.real(*sj, p("server"), "epsilon", cfg.server.epsilon);
  }
}

void check_experiment(Reader& r, const std::string& root, const ExperimentConfig& cfg) {
  auto p = [&](const std::string& key) { return Reader::join(root, key); };
  const std::string prefix = root.empty() ? "" : root + ".";
  r.require(cfg.rounds >= 1, p("rounds"), "must be >= 1");
  r.require(cfg.trailing_window >= 1, p("trailing_window"), "must be >= 1");
  r.require(!cfg.output_dir.empty(), p("output_dir"), "must not be empty");

  if (cfg.model.kind == models::ModelKind::mlp)
    r.require(cfg.model.hidden_dim >= 1, p("model.hidden_dim"), "must be >= 1 for an mlp");
  else
    r.require(cfg.model.hidden_dim == 0, p("model.hidden_dim"),
              "must be 0 for logistic regression");

  if (cfg.dataset.kind == experiments::DataSourceKind::synthetic) {
    const auto& s = cfg.dataset.synthetic;
    r.require(s.num_classes >= 2, p("dataset.synthetic.num_classes"), "must be >= 2");
    r.require(s.per_class >= 1, p("dataset.synthetic.per_class"), "must be >= 1");
    r.require(s.test_per_class >= 1, p("dataset.synthetic.test_per_class"), "must be >= 1");
    r.require(s.input_dim >= 1, p("dataset.synthetic.input_dim"), "must be >= 1");
    r.require(s.separation >= 0.0 && std::isfinite(s.separation),
              p("dataset.synthetic.separation"), "must be a finite value >= 0");
    if (cfg.partition.kind == data::SkewKind::label_shard)
      r.require(cfg.partition.classes_per_client <= s.num_classes,
                p("partition.classes_per_client"), "must not exceed the number of classes");
  }
  r.require(cfg.partition.classes_per_client >= 1, p("partition.classes_per_client"),
            "must be >= 1");
  r.require(cfg.partition.concentration > 0.0 && std::isfinite(cfg.partition.concentration),
            p("partition.concentration"), "must be positive");
  const auto& f = cfg.partition.feature_skew;
  r.require(f.rho >= 0.0 && f.rho <= 1.0, p("partition.feature_skew.rho"), "must lie in [0, 1]");
  r.require(f.max_tint > 0.0 && f.max_tint <= 1.0, p("partition.feature_skew.max_tint"),
            "must lie in (0, 1]");

  const auto& rc = cfg.round;
  r.require(rc.n_clients >= 1, p("round.n_clients"), "must be >= 1");
  r.require(rc.sample_size >= 1 && rc.sample_size <= rc.n_clients, p("round.sample_size"),
            "must lie in [1, round.n_clients]");
  r.require(rc.tau >= 0.0 && rc.tau <= 1.0, p("round.tau"), "must lie in [0, 1]");

  const auto& cc = cfg.client;
  r.require(cc.lr >= 0.0 && std::isfinite(cc.lr), p("client.lr"), "must be a finite value >= 0");
  r.require(cc.momentum >= 0.0 && cc.momentum < 1.0, p("client.momentum"), "must lie in [0, 1)");
  r.require(cc.epochs >= 1, p("client.epochs"), "must be >= 1");
  r.require(cc.batch_size >= 1, p("client.batch_size"), "must be >= 1");
  r.require(cc.prox_mu >= 0.0 && std::isfinite(cc.prox_mu), p("client.prox_mu"), "must be >= 0");

  const auto& sc = cfg.server;
  r.require(sc.lr > 0.0 && std::isfinite(sc.lr), p("server.lr"), "must be positive");
  r.require(sc.beta1 >= 0.0 && sc.beta1 < 1.0, p("server.beta1"), "must lie in [0, 1)");
  r.require(sc.beta2 >= 0.0 && sc.beta2 < 1.0, p("server.beta2"), "must lie in [0, 1)");
  r.require(sc.epsilon > 0.0 && std::isfinite(sc.epsilon), p("server.epsilon"), "must be positive");

  // Backstop for module invariants not mirrored above.
  if (r.clean()) {
    r.check(prefix, [&] { cfg.round.validate(); });
    r.check(prefix, [&] { cfg.client.validate(); });
    r.check(prefix, [&] { cfg.server.validate(); });
  }
}

std::string study_kinds() {
  std::string v;
  for (const auto& n : experiments::study_kind_names()) v += (v.empty() ? "" : ", ") + n;
  return v;
}

Json mask_stability_json(const experiments::MaskStabilityConfig& m) {
  return Json{{"means", m.means},
              {"std", m.std},
              {"n_clients", m.n_clients},
              {"trials", m.trials},
              {"tau", m.tau}};
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : ParameterError(join_issues(issues)), issues_(std::move(issues)) {}

ExperimentConfig experiment_from_json(const Json& j) {
  std::vector<std::string> issues;
  Reader r(issues);
  ExperimentConfig cfg;
  read_experiment(r, j, "", cfg);
  if (j.is_object()) check_experiment(r, "", cfg);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

Json to_json(const ExperimentConfig& cfg) {
  const auto& s = cfg.dataset.synthetic;
  const auto& x = cfg.dataset.idx;
  const auto& f = cfg.partition.feature_skew;
  return Json{
      {"seed", cfg.seed},
      {"rounds", cfg.rounds},
      {"output_dir", cfg.output_dir},
      {"trailing_window", cfg.trailing_window},
      {"model", {{"kind", models::to_string(cfg.model.kind)}, {"hidden_dim", cfg.model.hidden_dim}}},
      {"dataset",
       {{"source", cfg.dataset.kind == experiments::DataSourceKind::idx ? "idx" : "synthetic"},
        {"synthetic",
         {{"num_classes", s.num_classes},
          {"per_class", s.per_class},
          {"test_per_class", s.test_per_class},
          {"input_dim", s.input_dim},
          {"separation", s.separation}}},
        {"idx",
         {{"train_images", x.train_images},
          {"train_labels", x.train_labels},
          {"test_images", x.test_images},
          {"test_labels", x.test_labels}}},
        {"max_train", cfg.dataset.max_train},
        {"max_test", cfg.dataset.max_test}}},
      {"partition",
       {{"kind", data::to_string(cfg.partition.kind)},
        {"classes_per_client", cfg.partition.classes_per_client},
        {"concentration", cfg.partition.concentration},
        {"feature_skew", {{"enabled", f.enabled}, {"rho", f.rho}, {"max_tint", f.max_tint}}}}},
      {"round",
       {{"n_clients", cfg.round.n_clients},
        {"sample_size", cfg.round.sample_size},
        {"aggregator", fedcore::to_string(cfg.round.aggregator)},
        {"tau", cfg.round.tau}}},
      {"client",
       {{"lr", cfg.client.lr},
        {"momentum", cfg.client.momentum},
        {"epochs", cfg.client.epochs},
        {"batch_size", cfg.client.batch_size},
        {"prox_mu", cfg.client.prox_mu}}},
      {"server",
       {{"optimizer", fedcore::to_string(cfg.server.kind)},
        {"lr", cfg.server.lr},
        {"beta1", cfg.server.beta1},
        {"beta2", cfg.server.beta2},
        {"epsilon", cfg.server.epsilon}}},
  };
}

StudySpec study_from_json(const Json& j) {
  std::vector<std::string> issues;
  Reader r(issues);
  StudySpec spec;
  if (r.object(j, "", {"study", "experiment"})) {
    if (!r.find(j, "study")) r.issue("study", "missing section");
    if (const Json* s = r.find(j, "study");
        s && r.object(*s, "study",
                      {"kind", "sweep", "repetitions", "target_fraction", "scale_axis",
                       "mask_stability", "attacker_steps"})) {
      if (!r.find(*s, "kind")) r.issue("study.kind", "missing (valid: " + study_kinds() + ")");
      r.enumeration(*s, "study", "kind", spec.kind, experiments::study_kind_from_string);
      r.reals(*s, "study", "sweep", spec.sweep);
      r.integer(*s, "study", "repetitions", spec.repetitions);
      r.real(*s, "study", "target_fraction", spec.target_fraction);
      r.enumeration(*s, "study", "scale_axis", spec.scale_axis, experiments::scale_axis_from_string);
      r.integer(*s, "study", "attacker_steps", spec.attacker_steps);
      const std::string mp = "study.mask_stability";
      if (const Json* m = r.find(*s, "mask_stability");
          m && r.object(*m, mp, {"means", "std", "n_clients", "trials", "tau"})) {
        r.reals(*m, mp, "means", spec.mask_stability.means);
        r.real(*m, mp, "std", spec.mask_stability.std);
        r.integer(*m, mp, "n_clients", spec.mask_stability.n_clients);
        r.integer(*m, mp, "trials", spec.mask_stability.trials);
        r.real(*m, mp, "tau", spec.mask_stability.tau);
      }
    }
    if (const Json* e = r.find(j, "experiment")) read_experiment(r, *e, "experiment", spec.base);
  }
  if (j.is_object()) check_experiment(r, "experiment", spec.base);
  if (issues.empty()) r.check("", [&] { spec.validate(); });
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return spec;
}

Json to_json(const StudySpec& spec) {
  return Json{{"study",
               {{"kind", experiments::to_string(spec.kind)},
                {"sweep", spec.sweep},
                {"repetitions", spec.repetitions},
                {"target_fraction", spec.target_fraction},
                {"scale_axis", experiments::to_string(spec.scale_axis)},
                {"mask_stability", mask_stability_json(spec.mask_stability)},
                {"attacker_steps", spec.attacker_steps}}},
              {"experiment", to_json(spec.base)}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path.string() + ": cannot open config file"});
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError({path.string() + ": syntax error: " + e.what()});
  }
}

bool is_study_document(const Json& j) { return j.is_object() && j.contains("study"); }

ExperimentConfig parse_config(const std::filesystem::path& path) {
  return experiment_from_json(read_json_file(path));
}

StudySpec parse_study(const std::filesystem::path& path) {
  return study_from_json(read_json_file(path));
}

}  // namespace gmafed::cli
