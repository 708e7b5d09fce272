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

#ifndef TRIPLESCORE_CONFIG_HPP_
#define TRIPLESCORE_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "triplescore/embedding_store.hpp"
#include "triplescore/error.hpp"
#include "triplescore/evaluation.hpp"
#include "triplescore/features.hpp"
#include "triplescore/ordinal_model.hpp"
#include "triplescore/triple.hpp"

namespace triplescore {

enum class ModelType { kOrdinal, kMultinomial };

inline ModelType parse_model_type(std::string_view s) {
  if (s == "ordinal") return ModelType::kOrdinal;
  if (s == "multinomial") return ModelType::kMultinomial;
  throw InputError("model must be 'ordinal' or 'multinomial'");
}

// Everything a run needs. Filled from defaults, then a config file, then
// command-line flags.
struct RunConfig {
  // Paths.
  std::string embeddings;
  std::string corpus;
  std::string universe;
  std::string train;
  std::string test;
  std::string artifact;
  std::string output;
  std::string predictions;
  std::string truth;

  Relation relation = Relation::kProfession;
  ModelType model = ModelType::kOrdinal;
  FitConfig fit;
  bool standardize = true;
  bool timestamp = true;
  FeatureOptions features;
  MetricOptions metrics;
  int folds = 5;
  std::uint64_t seed = 17;

  // Sets one key from its textual value. Relative paths are resolved
  // against base_dir when it is non-empty.
  void set(std::string_view key, const std::string &value,
           const std::filesystem::path &base_dir = {}) {
    auto path = [&](std::string &field) {
      std::filesystem::path p(value);
      field = (base_dir.empty() || p.is_absolute() || value.empty())
                  ? value
                  : (base_dir / p).lexically_normal().string();
    };
    auto number = [&](auto &field) {
      if (!detail::parse_number(value, field)) {
        throw InputError("bad value '" + value + "' for " + std::string(key));
      }
    };
    auto boolean = [&](bool &field) {
      if (value == "true" || value == "1" || value == "yes") {
        field = true;
      } else if (value == "false" || value == "0" || value == "no") {
        field = false;
      } else {
        throw InputError("bad boolean '" + value + "' for " + std::string(key));
      }
    };

    if (key == "embeddings") path(embeddings);
    else if (key == "corpus") path(corpus);
    else if (key == "universe") path(universe);
    else if (key == "train") path(train);
    else if (key == "test") path(test);
    else if (key == "artifact") path(artifact);
    else if (key == "output") path(output);
    else if (key == "predictions") path(predictions);
    else if (key == "truth") path(truth);
    else if (key == "relation") relation = parse_relation(value);
    else if (key == "model") model = parse_model_type(value);
    else if (key == "lambda") number(fit.lambda);
    else if (key == "max_iters") number(fit.max_iters);
    else if (key == "tolerance") number(fit.tolerance);
    else if (key == "prediction_rule")
      fit.prediction_rule = parse_prediction_rule(value);
    else if (key == "standardize") boolean(standardize);
    else if (key == "timestamp") boolean(timestamp);
    else if (key == "ops_denominator")
      features.ops_denominator = parse_ops_denominator(value);
    else if (key == "workers") number(features.workers);
    else if (key == "delta") number(metrics.delta);
    else if (key == "tau") metrics.tau = parse_tau_variant(value);
    else if (key == "singletons")
      metrics.singletons = parse_singleton_policy(value);
    else if (key == "folds") number(folds);
    else if (key == "seed") number(seed);
    else throw InputError("unknown config key '" + std::string(key) + "'");

    if (fit.lambda < 0.0) throw InputError("lambda must be >= 0");
    if (fit.max_iters < 0) throw InputError("max_iters must be >= 0");
    if (metrics.delta < 0) throw InputError("delta must be >= 0");
    if (features.workers == 0) throw InputError("workers must be >= 1");
  }
};

// Reads `key = value` lines. '#' starts a comment, values may be quoted,
// and [section] headers are accepted and ignored.
inline void read_config(std::istream &in, const std::string &source,
                        RunConfig &config,
                        const std::filesystem::path &base_dir = {}) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    std::string_view v(line);
    auto trim = [](std::string_view s) {
      while (!s.empty() && is_ascii_space(s.front())) s.remove_prefix(1);
      while (!s.empty() && is_ascii_space(s.back())) s.remove_suffix(1);
      return s;
    };
    v = trim(v);
    if (v.empty() || v.front() == '#') continue;
    if (v.front() == '[' && v.back() == ']') continue;
    auto eq = v.find('=');
    if (eq == std::string_view::npos) {
      throw MalformedLine(source, line_no, "expected key = value");
    }
    std::string_view key = trim(v.substr(0, eq));
    std::string_view value = trim(v.substr(eq + 1));
    std::string parsed;
    if (!value.empty() && value.front() == '"') {
      auto close = value.find('"', 1);
      if (close == std::string_view::npos) {
        throw MalformedLine(source, line_no, "unterminated string");
      }
      parsed = std::string(value.substr(1, close - 1));
      std::string_view rest = trim(value.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') {
        throw MalformedLine(source, line_no, "text after quoted value");
      }
    } else {
      auto hash = value.find('#');
      parsed = std::string(trim(value.substr(0, hash)));
    }
    try {
      config.set(key, parsed, base_dir);
    } catch (const MalformedLine &) {
      throw;
    } catch (const InputError &e) {
      throw MalformedLine(source, line_no, e.what());
    }
  }
}

inline void load_config(const std::string &path, RunConfig &config) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  read_config(in, path, config, std::filesystem::path(path).parent_path());
}

}  // namespace triplescore

#endif  // TRIPLESCORE_CONFIG_HPP_
