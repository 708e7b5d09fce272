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

#ifndef TRIPLESCORE_BASELINES_HPP_
#define TRIPLESCORE_BASELINES_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "triplescore/corpus.hpp"
#include "triplescore/error.hpp"
#include "triplescore/lbfgs.hpp"
#include "triplescore/matrix.hpp"
#include "triplescore/ordinal_model.hpp"

namespace triplescore {

// "First" rule: the candidate mentioned first in the person's abstract gets
// the top score, every other candidate gets zero. Keys are normalized.
inline std::map<std::string, int> first_baseline_score(
    const Corpus &corpus, const EntityKey &entity,
    const std::vector<EntityKey> &candidates) {
  std::map<std::string, int> scores;
  for (const EntityKey &c : candidates) scores[c.normalized()] = kMinScore;
  if (const PageRecord *rec = corpus.find(entity)) {
    if (auto first = first_mentioned(*rec, candidates)) {
      scores[first->normalized()] = kMaxScore;
    }
  }
  return scores;
}

// Applies the First rule to a list of triples, grouping candidates by entity.
inline std::vector<int> first_baseline_predict(const Corpus &corpus,
                                               std::span<const Triple> triples) {
  std::map<std::string, std::vector<EntityKey>> candidates;
  for (const Triple &t : triples) {
    candidates[t.entity.normalized()].push_back(t.object);
  }
  std::map<std::string, std::map<std::string, int>> scored;
  for (const Triple &t : triples) {
    auto &slot = scored[t.entity.normalized()];
    if (slot.empty()) {
      slot = first_baseline_score(corpus, t.entity,
                                  candidates[t.entity.normalized()]);
    }
  }
  std::vector<int> out;
  out.reserve(triples.size());
  for (const Triple &t : triples) {
    out.push_back(scored[t.entity.normalized()][t.object.normalized()]);
  }
  return out;
}

// Softmax regression over the eight score classes.
struct MultinomialModel {
  Matrix weights = Matrix(kNumClasses, 0);  // one row per class
  std::array<double, kNumClasses> bias{};
  Standardizer standardizer;
  Relation relation = Relation::kProfession;
  std::vector<std::string> feature_names;
  FitConfig fit_config;

  ClassDistribution posterior(std::span<const double> x) const {
    if (x.size() != weights.cols()) {
      throw DimensionMismatch("model expects " +
                              std::to_string(weights.cols()) +
                              " features, got " + std::to_string(x.size()));
    }
    ClassDistribution z{};
    for (int k = 0; k < kNumClasses; ++k) z[k] = bias[k] + dot(weights.row(k), x);
    double m = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double &v : z) sum += (v = std::exp(v - m));
    for (double &v : z) v /= sum;
    return z;
  }

  int predict(std::span<const double> x) const {
    return argmax_class(posterior(x));
  }

  std::vector<int> predict_all(const Matrix &x) const {
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
    return out;
  }
};

// Penalized multinomial negative log-likelihood. Parameters are the class
// weight rows (row-major) followed by the class biases.
class MultinomialObjective {
 public:
  MultinomialObjective(const Matrix &x, std::span<const int> labels,
                       double lambda)
      : x_(x), labels_(labels), lambda_(lambda) {}

  std::size_t num_params() const { return kNumClasses * (x_.cols() + 1); }

  double operator()(std::span<const double> params,
                    std::span<double> grad) const {
    const std::size_t p = x_.cols();
    const std::size_t bias_at = kNumClasses * p;
    std::fill(grad.begin(), grad.end(), 0.0);
    double nll = 0.0;
    std::array<double, kNumClasses> z{};
    for (std::size_t i = 0; i < x_.rows(); ++i) {
      auto xi = x_.row(i);
      for (int k = 0; k < kNumClasses; ++k) {
        z[k] = params[bias_at + k] + dot(params.subspan(k * p, p), xi);
      }
      double m = *std::max_element(z.begin(), z.end());
      double sum = 0.0;
      for (int k = 0; k < kNumClasses; ++k) sum += std::exp(z[k] - m);
      double log_norm = m + std::log(sum);
      nll += log_norm - z[labels_[i]];
      for (int k = 0; k < kNumClasses; ++k) {
        double r = std::exp(z[k] - log_norm) - (k == labels_[i] ? 1.0 : 0.0);
        for (std::size_t j = 0; j < p; ++j) grad[k * p + j] += r * xi[j];
        grad[bias_at + k] += r;
      }
    }
    for (std::size_t j = 0; j < bias_at; ++j) {
      nll += 0.5 * lambda_ * params[j] * params[j];
      grad[j] += lambda_ * params[j];
    }
    return nll;
  }

 private:
  const Matrix &x_;
  std::span<const int> labels_;
  double lambda_;
};

inline MultinomialModel fit_multinomial(const Matrix &x,
                                        std::span<const int> labels,
                                        const FitConfig &config = {},
                                        Standardizer standardizer = {},
                                        Relation relation =
                                            Relation::kProfession) {
  detail::check_training_data(x, labels);
  const std::size_t p = x.cols();
  MultinomialObjective objective(x, labels, config.lambda);
  LbfgsOptions opt;
  opt.max_iters = config.max_iters;
  opt.grad_tolerance = config.tolerance;
  LbfgsResult r = minimize_lbfgs(
      [&](std::span<const double> params, std::span<double> grad) {
        return objective(params, grad);
      },
      std::vector<double>(objective.num_params(), 0.0), opt);
  for (double v : r.x) {
    if (!std::isfinite(v)) throw NonFinite("multinomial fit diverged");
  }

  MultinomialModel model;
  model.weights = Matrix(kNumClasses, p);
  for (int k = 0; k < kNumClasses; ++k) {
    for (std::size_t j = 0; j < p; ++j) model.weights(k, j) = r.x[k * p + j];
    model.bias[k] = r.x[kNumClasses * p + k];
  }
  model.standardizer =
      standardizer.means().empty() ? Standardizer::identity(p) : standardizer;
  model.relation = relation;
  model.feature_names = default_feature_names(p);
  model.fit_config = config;
  model.fit_config.prediction_rule = PredictionRule::kArgmax;
  return model;
}

}  // namespace triplescore

#endif  // TRIPLESCORE_BASELINES_HPP_
