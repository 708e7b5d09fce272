// Copyright 2026 The triplescore Authors.
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

#ifndef TRIPLESCORE_SERIALIZATION_HPP_
#define TRIPLESCORE_SERIALIZATION_HPP_

#include <chrono>
#include <cstddef>
#include <ctime>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "triplescore/baselines.hpp"
#include "triplescore/error.hpp"
#include "triplescore/evaluation.hpp"
#include "triplescore/ordinal_model.hpp"

namespace triplescore {

inline constexpr int kArtifactVersion = 1;
inline constexpr const char *kTimestampField = "created_at";

using json = nlohmann::ordered_json;

inline json to_json(const Standardizer &s) {
  return {{"means", s.means()}, {"stddevs", s.stddevs()}};
}

inline json to_json(const FitConfig &c) {
  return {{"lambda", c.lambda},
          {"max_iters", c.max_iters},
          {"tolerance", c.tolerance},
          {"prediction_rule", prediction_rule_name(c.prediction_rule)}};
}

inline std::string utc_timestamp() {
  std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json to_json(const OrdinalModel &m) {
  json j;
  j["version"] = kArtifactVersion;
  j["model_type"] = "ordinal";
  j["relation"] = relation_name(m.relation);
  j["feature_names"] = m.feature_names;
  j["w"] = m.w;
  j["theta"] = m.theta;
  j["standardizer"] = to_json(m.standardizer);
  j["fit_config"] = to_json(m.fit_config);
  return j;
}

inline json to_json(const MultinomialModel &m) {
  json j;
  j["version"] = kArtifactVersion;
  j["model_type"] = "multinomial";
  j["relation"] = relation_name(m.relation);
  j["feature_names"] = m.feature_names;
  json rows = json::array();
  for (std::size_t k = 0; k < m.weights.rows(); ++k) {
    auto r = m.weights.row(k);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  j["weights"] = rows;
  j["bias"] = m.bias;
  j["standardizer"] = to_json(m.standardizer);
  j["fit_config"] = to_json(m.fit_config);
  return j;
}

using AnyModel = std::variant<OrdinalModel, MultinomialModel>;

namespace detail {

template <typename T>
T get_field(const json &j, const char *name, const std::string &source) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw InputError(source + ": model artifact lacks field '" + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw InputError(source + ": bad field '" + name + "': " + e.what());
  }
}

inline Standardizer standardizer_from_json(const json &j,
                                           const std::string &source) {
  return Standardizer(get_field<std::vector<double>>(j, "means", source),
                      get_field<std::vector<double>>(j, "stddevs", source));
}

inline FitConfig fit_config_from_json(const json &j,
                                      const std::string &source) {
  FitConfig c;
  c.lambda = get_field<double>(j, "lambda", source);
  c.max_iters = get_field<int>(j, "max_iters", source);
  c.tolerance = get_field<double>(j, "tolerance", source);
  c.prediction_rule = parse_prediction_rule(
      get_field<std::string>(j, "prediction_rule", source));
  return c;
}

}  // namespace detail

inline AnyModel model_from_json(const json &j,
                                const std::string &source = "<model>") {
  using detail::get_field;
  if (!j.is_object()) throw InputError(source + ": model is not an object");
  int version = get_field<int>(j, "version", source);
  if (version != kArtifactVersion) {
    throw InputError(source + ": unsupported artifact version " +
                     std::to_string(version));
  }
  std::string type = get_field<std::string>(j, "model_type", source);
  Relation relation =
      parse_relation(get_field<std::string>(j, "relation", source));
  auto names = get_field<std::vector<std::string>>(j, "feature_names", source);
  Standardizer standardizer =
      detail::standardizer_from_json(
          get_field<json>(j, "standardizer", source), source);
  FitConfig config = detail::fit_config_from_json(
      get_field<json>(j, "fit_config", source), source);

  if (type == "ordinal") {
    OrdinalModel m;
    m.w = get_field<std::vector<double>>(j, "w", source);
    auto theta = get_field<std::vector<double>>(j, "theta", source);
    if (theta.size() != kNumThresholds) {
      throw InputError(source + ": theta must have 7 entries");
    }
    for (int k = 0; k < kNumThresholds; ++k) {
      m.theta[k] = theta[k];
      if (k > 0 && theta[k] < theta[k - 1]) {
        throw InputError(source + ": theta is not nondecreasing");
      }
    }
    if (names.size() != m.w.size() || standardizer.means().size() != m.w.size()) {
      throw InputError(source + ": feature count mismatch");
    }
    m.standardizer = std::move(standardizer);
    m.relation = relation;
    m.feature_names = std::move(names);
    m.fit_config = config;
    return m;
  }
  if (type == "multinomial") {
    MultinomialModel m;
    auto rows = get_field<std::vector<std::vector<double>>>(j, "weights", source);
    auto bias = get_field<std::vector<double>>(j, "bias", source);
    if (rows.size() != kNumClasses || bias.size() != kNumClasses) {
      throw InputError(source + ": multinomial model needs 8 classes");
    }
    m.weights = Matrix(kNumClasses, names.size());
    for (int k = 0; k < kNumClasses; ++k) {
      if (rows[k].size() != names.size()) {
        throw InputError(source + ": feature count mismatch");
      }
      for (std::size_t c = 0; c < names.size(); ++c) m.weights(k, c) = rows[k][c];
      m.bias[k] = bias[k];
    }
    if (standardizer.means().size() != names.size()) {
      throw InputError(source + ": feature count mismatch");
    }
    m.standardizer = std::move(standardizer);
    m.relation = relation;
    m.feature_names = std::move(names);
    m.fit_config = config;
    return m;
  }
  throw InputError(source + ": unknown model_type '" + type + "'");
}

inline const Standardizer &model_standardizer(const AnyModel &m) {
  return std::visit([](const auto &x) -> const Standardizer & {
    return x.standardizer;
  }, m);
}

inline Relation model_relation(const AnyModel &m) {
  return std::visit([](const auto &x) { return x.relation; }, m);
}

inline std::vector<int> model_predict_all(const AnyModel &m, const Matrix &x) {
  return std::visit([&](const auto &model) { return model.predict_all(x); }, m);
}

// Artifact text. The timestamp is the only field that differs between
// otherwise identical runs.
inline std::string artifact_text(const json &j, bool with_timestamp = true) {
  if (!with_timestamp || !j.is_object()) return j.dump(2) + "\n";
  // Written second so that dropping its line leaves valid JSON.
  json out;
  for (const auto &[key, value] : j.items()) {
    out[key] = value;
    if (out.size() == 1) out[kTimestampField] = utc_timestamp();
  }
  return out.dump(2) + "\n";
}

inline void save_model(const std::string &path, const AnyModel &m,
                       bool with_timestamp = true) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot write model artifact");
  out << artifact_text(std::visit([](const auto &x) { return to_json(x); }, m),
                       with_timestamp);
  if (!out) throw IoError(path, "write failed");
}

inline AnyModel load_model(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open model artifact");
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw InputError(path + ": model is not valid JSON");
  return model_from_json(j, path);
}

inline json to_json(const EvalReport &r) {
  return {{"accuracy", r.accuracy},     {"asd", r.asd},
          {"kendall_tau", r.kendall_tau}, {"n_triples", r.n_triples},
          {"n_entities", r.n_entities},   {"delta", r.delta}};
}

inline json to_json(const CvResult &cv) {
  json folds = json::array();
  for (std::size_t f = 0; f < cv.folds.size(); ++f) {
    json fj = to_json(cv.fold_reports[f]);
    fj["fold"] = cv.folds[f].index;
    folds.push_back(fj);
  }
  return {{"folds", folds}, {"mean", to_json(cv.mean)}};
}

}  // namespace triplescore

#endif  // TRIPLESCORE_SERIALIZATION_HPP_
