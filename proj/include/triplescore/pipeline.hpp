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

#ifndef TRIPLESCORE_PIPELINE_HPP_
#define TRIPLESCORE_PIPELINE_HPP_

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "triplescore/baselines.hpp"
#include "triplescore/config.hpp"
#include "triplescore/corpus.hpp"
#include "triplescore/embedding_store.hpp"
#include "triplescore/error.hpp"
#include "triplescore/evaluation.hpp"
#include "triplescore/features.hpp"
#include "triplescore/ordinal_model.hpp"
#include "triplescore/serialization.hpp"
#include "triplescore/triple.hpp"

namespace triplescore {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitNumericError = 3;

// Inputs of the feature extractor.
struct FeatureInputs {
  EmbeddingStore store;
  Corpus corpus;
  ObjectUniverse universe;

  static FeatureInputs load(const RunConfig &cfg) {
    return {load_embeddings(cfg.embeddings), load_corpus(cfg.corpus),
            load_universe(cfg.universe, cfg.relation)};
  }
};

// Scored triples only: unscored rows cannot be used for fitting.
inline std::vector<Triple> scored_only(std::vector<Triple> triples) {
  std::erase_if(triples, [](const Triple &t) { return !t.truth.has_value(); });
  return triples;
}

inline std::vector<int> truths(std::span<const Triple> triples) {
  std::vector<int> y;
  y.reserve(triples.size());
  for (const Triple &t : triples) y.push_back(*t.truth);
  return y;
}

// Fits the standardizer (unless disabled) and the requested model type on
// raw feature rows.
inline AnyModel train_model(const Matrix &raw, std::span<const int> labels,
                            const RunConfig &cfg) {
  Standardizer s = cfg.standardize ? Standardizer::fit(raw)
                                   : Standardizer::identity(raw.cols());
  Matrix x = s.apply(raw);
  if (cfg.model == ModelType::kMultinomial) {
    return fit_multinomial(x, labels, cfg.fit, s, cfg.relation);
  }
  return fit_ordinal(x, labels, cfg.fit, s, cfg.relation);
}

inline std::vector<int> predict_with(const AnyModel &model, const Matrix &raw) {
  return model_predict_all(model, model_standardizer(model).apply(raw));
}

inline Matrix select_rows(const Matrix &m, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = m.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

inline void write_weight_report(std::ostream &out, const AnyModel &model) {
  auto display = [](const std::string &name) {
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      if (kFeatureNames[j] == name) return std::string(kFeatureDisplayNames[j]);
    }
    return name;
  };
  if (const auto *m = std::get_if<OrdinalModel>(&model)) {
    out << "Feature weights (" << relation_name(m->relation)
        << ", descending |w|)\n";
    for (const NamedWeight &nw : feature_weights(*m)) {
      std::string label = display(nw.name);
      label.resize(std::max<std::size_t>(label.size(), 26), ' ');
      out << label << format_fixed(nw.magnitude, 4) << "  (w = "
          << format_fixed(nw.weight, 4) << ")\n";
    }
    out << "Thresholds:";
    for (double t : m->theta) out << ' ' << format_fixed(t, 4);
    out << '\n';
    return;
  }
  const auto &m = std::get<MultinomialModel>(model);
  out << "Multinomial class weights (" << relation_name(m.relation) << ")\n";
  for (std::size_t k = 0; k < m.weights.rows(); ++k) {
    out << "class " << k << ": bias " << format_fixed(m.bias[k], 4);
    for (std::size_t j = 0; j < m.weights.cols(); ++j) {
      out << ' ' << display(m.feature_names[j]) << '='
          << format_fixed(m.weights(k, j), 4);
    }
    out << '\n';
  }
}

namespace detail {

inline void require_path(const std::string &path, const char *what) {
  if (path.empty()) {
    throw InputError(std::string("missing required path: ") + what);
  }
  if (!std::filesystem::exists(path)) {
    throw IoError(path, std::string(what) + " does not exist");
  }
}

inline void require_output(const std::string &path, const char *what,
                           std::initializer_list<const std::string *> inputs) {
  if (path.empty()) {
    throw InputError(std::string("missing required path: ") + what);
  }
  for (const std::string *in : inputs) {
    if (!in->empty() && std::filesystem::exists(*in) &&
        std::filesystem::exists(path) &&
        std::filesystem::equivalent(*in, path)) {
      throw InputError(path + ": output would overwrite an input file");
    }
  }
}

// Writes to the configured output file, or to `fallback` if none is set.
template <typename Fn>
void emit(const std::string &path, std::ostream &fallback, Fn &&write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open output file");
  write(out);
  if (!out) throw IoError(path, "write failed");
}

}  // namespace detail

// Feature matrix TSV for the triples in cfg.test (or cfg.train when no test
// file is given).
inline void cmd_extract(const RunConfig &cfg, std::ostream &out,
                        std::ostream &err) {
  const std::string &triples_path = cfg.test.empty() ? cfg.train : cfg.test;
  detail::require_path(cfg.embeddings, "embeddings");
  detail::require_path(cfg.corpus, "corpus");
  detail::require_path(cfg.universe, "universe");
  detail::require_path(triples_path, "triples");
  if (!cfg.output.empty()) {
    detail::require_output(cfg.output, "output",
                           {&cfg.embeddings, &cfg.corpus, &cfg.universe,
                            &triples_path});
  }
  FeatureInputs in = FeatureInputs::load(cfg);
  auto triples = load_triples(triples_path, cfg.relation);
  auto features = extract(in.store, in.corpus, in.universe, triples,
                          cfg.features);
  detail::emit(cfg.output, out, [&](std::ostream &os) {
    write_feature_tsv(os, triples, features);
  });
  err << summarize_missing(features) << '\n';
}

inline AnyModel cmd_train(const RunConfig &cfg, std::ostream &out,
                          std::ostream &err) {
  detail::require_path(cfg.embeddings, "embeddings");
  detail::require_path(cfg.corpus, "corpus");
  detail::require_path(cfg.universe, "universe");
  detail::require_path(cfg.train, "train");
  detail::require_output(cfg.artifact, "artifact",
                         {&cfg.embeddings, &cfg.corpus, &cfg.universe,
                          &cfg.train});
  FeatureInputs in = FeatureInputs::load(cfg);
  auto triples = scored_only(load_triples(cfg.train, cfg.relation));
  if (triples.empty()) throw EmptyTrainingSet();
  auto features =
      extract(in.store, in.corpus, in.universe, triples, cfg.features);
  err << summarize_missing(features) << '\n';
  AnyModel model = train_model(to_matrix(features), truths(triples), cfg);
  save_model(cfg.artifact, model, cfg.timestamp);
  write_weight_report(out, model);
  return model;
}

inline std::vector<int> cmd_predict(const RunConfig &cfg, std::ostream &out,
                                    std::ostream &err) {
  detail::require_path(cfg.embeddings, "embeddings");
  detail::require_path(cfg.corpus, "corpus");
  detail::require_path(cfg.universe, "universe");
  detail::require_path(cfg.test, "test");
  detail::require_path(cfg.artifact, "artifact");
  if (!cfg.output.empty()) {
    detail::require_output(cfg.output, "output",
                           {&cfg.embeddings, &cfg.corpus, &cfg.universe,
                            &cfg.test, &cfg.artifact});
  }
  AnyModel model = load_model(cfg.artifact);
  if (model_relation(model) != cfg.relation) {
    throw RelationMismatch(cfg.artifact + ": model was trained for " +
                           std::string(relation_name(model_relation(model))) +
                           ", requested " +
                           std::string(relation_name(cfg.relation)));
  }
  auto triples = load_triples(cfg.test, cfg.relation);
  std::vector<int> scores;
  if (!triples.empty()) {
    FeatureInputs in = FeatureInputs::load(cfg);
    auto features =
        extract(in.store, in.corpus, in.universe, triples, cfg.features);
    err << summarize_missing(features) << '\n';
    scores = predict_with(model, to_matrix(features));
  }
  detail::emit(cfg.output, out, [&](std::ostream &os) {
    write_scored_triples(os, triples, scores);
  });
  return scores;
}

// Pairs a prediction file with a truth file. Both must hold exactly the same
// (entity, object) set.
inline std::vector<ScoredPair> match_predictions(
    const std::vector<Triple> &predicted, const std::vector<Triple> &truth,
    const std::string &pred_source, const std::string &truth_source) {
  std::map<std::pair<std::string, std::string>, int> by_key;
  for (const Triple &t : predicted) {
    if (!t.truth) {
      throw InputError(pred_source + ": triple (" + t.entity.raw() + ", " +
                       t.object.raw() + ") has no score");
    }
    auto [it, inserted] = by_key.emplace(
        std::pair{t.entity.normalized(), t.object.normalized()}, *t.truth);
    if (!inserted) {
      throw InputError(pred_source + ": duplicate triple (" + t.entity.raw() +
                       ", " + t.object.raw() + ")");
    }
  }
  std::vector<ScoredPair> pairs;
  for (const Triple &t : truth) {
    if (!t.truth) {
      throw InputError(truth_source + ": triple (" + t.entity.raw() + ", " +
                       t.object.raw() + ") has no score");
    }
    auto it = by_key.find({t.entity.normalized(), t.object.normalized()});
    if (it == by_key.end()) {
      throw InputError("triple (" + t.entity.raw() + ", " + t.object.raw() +
                       ") is in " + truth_source + " but not in " +
                       pred_source);
    }
    pairs.push_back({t, it->second, *t.truth});
  }
  if (pairs.size() != predicted.size()) {
    throw InputError(pred_source + " and " + truth_source +
                     " contain different triple sets");
  }
  return pairs;
}

inline EvalReport cmd_evaluate(const RunConfig &cfg, std::ostream &out,
                               std::ostream & /*err*/) {
  detail::require_path(cfg.predictions, "predictions");
  detail::require_path(cfg.truth, "truth");
  if (!cfg.output.empty()) {
    detail::require_output(cfg.output, "output",
                           {&cfg.predictions, &cfg.truth});
  }
  auto predicted = load_triples(cfg.predictions, cfg.relation);
  auto truth = load_triples(cfg.truth, cfg.relation);
  auto pairs = match_predictions(predicted, truth, cfg.predictions, cfg.truth);
  EvalReport report = evaluate(pairs, cfg.metrics);
  write_report_table(out, {{std::string(relation_name(cfg.relation)), report}});
  json j = to_json(report);
  j["relation"] = relation_name(cfg.relation);
  std::string text = j.dump(2) + "\n";
  detail::emit(cfg.output, out, [&](std::ostream &os) { os << text; });
  return report;
}

struct CvComparison {
  CvResult first;
  CvResult multinomial;
  CvResult ordinal;
};

inline json cv_json(const CvComparison &c, const RunConfig &cfg) {
  json j;
  j["relation"] = relation_name(cfg.relation);
  j["k"] = cfg.folds;
  j["seed"] = cfg.seed;
  j["delta"] = cfg.metrics.delta;
  j["tau"] = tau_variant_name(cfg.metrics.tau);
  j["singletons"] = singleton_policy_name(cfg.metrics.singletons);
  j["methods"] = {{"first", to_json(c.first)},
                  {"multinomial", to_json(c.multinomial)},
                  {"ordinal", to_json(c.ordinal)}};
  return j;
}

// Cross-validated comparison of the First rule, multinomial logistic
// regression and the ordinal model on the scored triples in cfg.train.
inline CvComparison cmd_cv(const RunConfig &cfg, std::ostream &out,
                           std::ostream &err) {
  detail::require_path(cfg.embeddings, "embeddings");
  detail::require_path(cfg.corpus, "corpus");
  detail::require_path(cfg.universe, "universe");
  detail::require_path(cfg.train, "train");
  if (!cfg.output.empty()) {
    detail::require_output(cfg.output, "output",
                           {&cfg.embeddings, &cfg.corpus, &cfg.universe,
                            &cfg.train});
  }
  FeatureInputs in = FeatureInputs::load(cfg);
  auto triples = scored_only(load_triples(cfg.train, cfg.relation));
  auto features =
      extract(in.store, in.corpus, in.universe, triples, cfg.features);
  err << summarize_missing(features) << '\n';
  const Matrix raw = to_matrix(features);
  const std::vector<int> labels = truths(triples);

  CvOptions opt;
  opt.k = cfg.folds;
  opt.seed = cfg.seed;
  opt.workers = cfg.features.workers;
  opt.metrics = cfg.metrics;

  auto model_trainer = [&](ModelType type) -> FoldTrainer {
    return [&, type](const CvFold &fold) {
      RunConfig c = cfg;
      c.model = type;
      std::vector<int> y;
      for (std::size_t i : fold.train) y.push_back(labels[i]);
      AnyModel m = train_model(select_rows(raw, fold.train), y, c);
      return predict_with(m, select_rows(raw, fold.test));
    };
  };
  FoldTrainer first = [&](const CvFold &fold) {
    std::vector<Triple> test;
    for (std::size_t i : fold.test) test.push_back(triples[i]);
    return first_baseline_predict(in.corpus, test);
  };

  CvComparison c{cross_validate(triples, first, opt),
                 cross_validate(triples, model_trainer(ModelType::kMultinomial),
                                opt),
                 cross_validate(triples, model_trainer(ModelType::kOrdinal),
                                opt)};
  write_report_table(out, {{"First", c.first.mean},
                           {"Logistic Regression", c.multinomial.mean},
                           {"Ordinal Regression", c.ordinal.mean}});
  std::string text = cv_json(c, cfg).dump(2) + "\n";
  detail::emit(cfg.output, out, [&](std::ostream &os) { os << text; });
  return c;
}

// Runs a subcommand and maps failures onto the exit-code contract.
inline int run_command(const std::string &name, const RunConfig &cfg,
                       std::ostream &out, std::ostream &err) {
  try {
    if (name == "extract") cmd_extract(cfg, out, err);
    else if (name == "train") cmd_train(cfg, out, err);
    else if (name == "predict") cmd_predict(cfg, out, err);
    else if (name == "evaluate") cmd_evaluate(cfg, out, err);
    else if (name == "cv") cmd_cv(cfg, out, err);
    else throw InputError("unknown command '" + name + "'");
    return kExitOk;
  } catch (const NumericError &e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericError;
  } catch (const InputError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const nlohmann::json::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace triplescore

#endif  // TRIPLESCORE_PIPELINE_HPP_
