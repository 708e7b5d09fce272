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

#ifndef TRIPLESCORE_ORDINAL_MODEL_HPP_
#define TRIPLESCORE_ORDINAL_MODEL_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "triplescore/error.hpp"
#include "triplescore/features.hpp"
#include "triplescore/lbfgs.hpp"
#include "triplescore/matrix.hpp"
#include "triplescore/triple.hpp"

namespace triplescore {

inline constexpr int kNumThresholds = kNumClasses - 1;

// 1 / (1 + exp(-t)), evaluated on the side that cannot overflow.
inline double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  double e = std::exp(t);
  return e / (1.0 + e);
}

// log(logistic(t)).
inline double log_logistic(double t) {
  if (t >= 0.0) return -std::log1p(std::exp(-t));
  return t - std::log1p(std::exp(t));
}

enum class PredictionRule {
  kArgmax,          // most probable class, ties to the lower class
  kExpectedRounded  // expected score rounded to the nearest integer
};

inline PredictionRule parse_prediction_rule(std::string_view s) {
  if (s == "argmax") return PredictionRule::kArgmax;
  if (s == "expected-rounded") return PredictionRule::kExpectedRounded;
  throw InputError("prediction rule must be 'argmax' or 'expected-rounded'");
}

inline std::string_view prediction_rule_name(PredictionRule r) {
  return r == PredictionRule::kArgmax ? "argmax" : "expected-rounded";
}

struct FitConfig {
  double lambda = 1e-3;  // L2 penalty on weights, not on thresholds
  int max_iters = 500;
  double tolerance = 1e-6;
  PredictionRule prediction_rule = PredictionRule::kArgmax;

  friend bool operator==(const FitConfig &, const FitConfig &) = default;
};

using ClassDistribution = std::array<double, kNumClasses>;

// Index of the largest probability; ties go to the lower class.
inline int argmax_class(const ClassDistribution &probs) {
  int best = 0;
  for (int j = 1; j < kNumClasses; ++j) {
    if (probs[j] > probs[best]) best = j;
  }
  return best;
}

inline int expected_rounded_class(const ClassDistribution &probs) {
  double e = 0.0;
  for (int j = 0; j < kNumClasses; ++j) e += j * probs[j];
  return std::clamp(static_cast<int>(std::floor(e + 0.5)), kMinScore,
                    kMaxScore);
}

inline std::vector<std::string> default_feature_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < p; ++j) {
    names.push_back(p == kNumFeatures ? std::string(kFeatureNames[j])
                                      : "x" + std::to_string(j));
  }
  return names;
}

// Proportional-odds model: P(y <= j | x) = logistic(theta_j - w.x).
struct OrdinalModel {
  std::vector<double> w;
  std::array<double, kNumThresholds> theta{};
  Standardizer standardizer;
  Relation relation = Relation::kProfession;
  std::vector<std::string> feature_names;
  FitConfig fit_config;

  std::size_t num_features() const { return w.size(); }

  double linear(std::span<const double> x) const {
    if (x.size() != w.size()) {
      throw DimensionMismatch("model expects " + std::to_string(w.size()) +
                              " features, got " + std::to_string(x.size()));
    }
    return dot(w, x);
  }

  double cumulative_prob(std::span<const double> x, int j) const {
    if (j < 0 || j >= kNumThresholds) {
      throw IndexOutOfRange("cumulative class index " + std::to_string(j) +
                            " outside [0,6]");
    }
    return logistic(theta[j] - linear(x));
  }

  ClassDistribution class_distribution(std::span<const double> x) const {
    double eta = linear(x);
    ClassDistribution probs{};
    double prev = 0.0;
    for (int j = 0; j < kNumThresholds; ++j) {
      double c = logistic(theta[j] - eta);
      probs[j] = std::max(0.0, c - prev);
      prev = c;
    }
    probs[kNumThresholds] = std::max(0.0, 1.0 - prev);
    return probs;
  }

  int predict(std::span<const double> x) const {
    ClassDistribution p = class_distribution(x);
    return fit_config.prediction_rule == PredictionRule::kArgmax
               ? argmax_class(p)
               : expected_rounded_class(p);
  }

  std::vector<int> predict_all(const Matrix &x) const {
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
    return out;
  }
};

// Unconstrained parametrization: [w_0..w_{p-1}, theta_0, s_1..s_6] with
// theta_j = theta_{j-1} + exp(s_j).
inline std::array<double, kNumThresholds> thresholds_from_params(
    std::span<const double> params, std::size_t p) {
  std::array<double, kNumThresholds> theta{};
  theta[0] = params[p];
  for (int j = 1; j < kNumThresholds; ++j) {
    theta[j] = theta[j - 1] + std::exp(params[p + j]);
  }
  return theta;
}

// Inverse of thresholds_from_params; theta must be strictly increasing.
inline std::vector<double> params_from_model(
    std::span<const double> w, const std::array<double, kNumThresholds> &theta) {
  std::vector<double> params(w.begin(), w.end());
  params.push_back(theta[0]);
  for (int j = 1; j < kNumThresholds; ++j) {
    params.push_back(std::log(theta[j] - theta[j - 1]));
  }
  return params;
}

// Penalized negative log-likelihood of the ordinal model and its gradient
// in the unconstrained parametrization.
class OrdinalObjective {
 public:
  OrdinalObjective(const Matrix &x, std::span<const int> labels, double lambda)
      : x_(x), labels_(labels), lambda_(lambda) {}

  std::size_t num_params() const { return x_.cols() + kNumThresholds; }

  double operator()(std::span<const double> params,
                    std::span<double> grad) const {
    const std::size_t p = x_.cols();
    auto theta = thresholds_from_params(params, p);
    std::span<const double> w = params.subspan(0, p);
    std::array<double, kNumThresholds> g_theta{};
    std::fill(grad.begin(), grad.end(), 0.0);

    double nll = 0.0;
    for (std::size_t i = 0; i < x_.rows(); ++i) {
      auto xi = x_.row(i);
      double eta = dot(w, xi);
      int y = labels_[i];
      // ll = log(F(b) - F(a)) with b = theta_y - eta, a = theta_{y-1} - eta.
      double ll = 0.0, d_b = 0.0, d_a = 0.0;
      if (y == 0) {
        double b = theta[0] - eta;
        ll = log_logistic(b);
        d_b = logistic(-b);
      } else if (y == kMaxScore) {
        double a = theta[kNumThresholds - 1] - eta;
        ll = log_logistic(-a);
        d_a = -logistic(a);
      } else {
        double b = theta[y] - eta, a = theta[y - 1] - eta;
        double gap = theta[y] - theta[y - 1];
        // F(b) - F(a) = F(b) F(-a) (1 - exp(a - b))
        ll = log_logistic(b) + log_logistic(-a) + std::log(-std::expm1(-gap));
        double r = 1.0 / std::expm1(gap);
        d_b = logistic(-b) + r;
        d_a = -logistic(a) - r;
      }
      nll -= ll;
      double d_eta = -(d_a + d_b);
      for (std::size_t k = 0; k < p; ++k) grad[k] -= d_eta * xi[k];
      if (y < kMaxScore) g_theta[y] -= d_b;
      if (y > 0) g_theta[y - 1] -= d_a;
    }

    for (std::size_t k = 0; k < p; ++k) {
      nll += 0.5 * lambda_ * w[k] * w[k];
      grad[k] += lambda_ * w[k];
    }
    // Chain rule through theta_j = theta_0 + sum_{m<=j} exp(s_m).
    double tail = 0.0;
    for (int j = kNumThresholds - 1; j >= 1; --j) {
      tail += g_theta[j];
      grad[p + j] = std::exp(params[p + j]) * tail;
    }
    grad[p] = tail + g_theta[0];
    return nll;
  }

 private:
  const Matrix &x_;
  std::span<const int> labels_;
  double lambda_;
};

namespace detail {

inline void check_training_data(const Matrix &x, std::span<const int> labels) {
  if (x.empty()) throw EmptyTrainingSet();
  if (x.rows() != labels.size()) {
    throw DimensionMismatch("feature matrix has " + std::to_string(x.rows()) +
                            " rows but " + std::to_string(labels.size()) +
                            " labels were given");
  }
  std::array<bool, kNumClasses> seen{};
  int distinct = 0;
  for (int y : labels) {
    if (y < kMinScore || y > kMaxScore) {
      throw InputError("label " + std::to_string(y) + " outside [0,7]");
    }
    if (!seen[y]) {
      seen[y] = true;
      ++distinct;
    }
  }
  if (distinct < 2) throw DegenerateLabels();
}

inline std::array<int, kNumClasses> class_counts(std::span<const int> labels) {
  std::array<int, kNumClasses> counts{};
  for (int y : labels) ++counts[y];
  return counts;
}

}  // namespace detail

// Thresholds at the logits of Laplace-smoothed empirical cumulative class
// frequencies, clamped to [-10, 10].
inline std::array<double, kNumThresholds> initial_thresholds(
    std::span<const int> labels) {
  auto counts = detail::class_counts(labels);
  double total = static_cast<double>(labels.size()) + kNumClasses;
  std::array<double, kNumThresholds> theta{};
  double cum = 0.0;
  for (int j = 0; j < kNumThresholds; ++j) {
    cum += counts[j] + 1.0;
    double f = cum / total;
    theta[j] = std::clamp(std::log(f / (1.0 - f)), -10.0, 10.0);
  }
  // Clamping can merge neighbours at the ends; keep the ladder strict.
  for (int j = 1; j < kNumThresholds; ++j) {
    if (theta[j] <= theta[j - 1]) theta[j] = theta[j - 1] + 1e-3;
  }
  return theta;
}

// Maximum penalized likelihood fit on standardized features.
inline OrdinalModel fit_ordinal(const Matrix &x, std::span<const int> labels,
                                const FitConfig &config = {},
                                Standardizer standardizer = {},
                                Relation relation = Relation::kProfession) {
  detail::check_training_data(x, labels);
  const std::size_t p = x.cols();
  std::vector<double> w0(p, 0.0);
  std::vector<double> params0 = params_from_model(w0, initial_thresholds(labels));

  OrdinalObjective objective(x, labels, config.lambda);
  LbfgsOptions opt;
  opt.max_iters = config.max_iters;
  opt.grad_tolerance = config.tolerance;
  LbfgsResult r = minimize_lbfgs(
      [&](std::span<const double> params, std::span<double> grad) {
        return objective(params, grad);
      },
      std::move(params0), opt);
  for (double v : r.x) {
    if (!std::isfinite(v)) throw NonFinite("ordinal fit diverged");
  }

  OrdinalModel model;
  model.w.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(p));
  model.theta = thresholds_from_params(r.x, p);
  for (double t : model.theta) {
    if (!std::isfinite(t)) throw NonFinite("ordinal thresholds diverged");
  }
  model.standardizer =
      standardizer.means().empty() ? Standardizer::identity(p) : standardizer;
  model.relation = relation;
  model.feature_names = default_feature_names(p);
  model.fit_config = config;
  return model;
}

struct NamedWeight {
  std::string name;
  double weight;
  double magnitude;
};

// Weights with their feature names, largest magnitude first.
inline std::vector<NamedWeight> feature_weights(
    std::span<const double> w, const std::vector<std::string> &names) {
  std::vector<NamedWeight> out;
  for (std::size_t j = 0; j < w.size(); ++j) {
    out.push_back({j < names.size() ? names[j] : "x" + std::to_string(j), w[j],
                   std::abs(w[j])});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const NamedWeight &a, const NamedWeight &b) {
                     return a.magnitude > b.magnitude;
                   });
  return out;
}

inline std::vector<NamedWeight> feature_weights(const OrdinalModel &model) {
  return feature_weights(model.w, model.feature_names);
}

}  // namespace triplescore

#endif  // TRIPLESCORE_ORDINAL_MODEL_HPP_
