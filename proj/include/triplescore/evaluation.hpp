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

#ifndef TRIPLESCORE_EVALUATION_HPP_
#define TRIPLESCORE_EVALUATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <future>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "triplescore/error.hpp"
#include "triplescore/triple.hpp"

namespace triplescore {

struct ScoredPair {
  Triple triple;
  int predicted = 0;
  int truth = 0;
};

enum class TauVariant { kTauB, kTauA };
enum class SingletonPolicy { kOne, kSkip };

inline TauVariant parse_tau_variant(std::string_view s) {
  if (s == "tau-b" || s == "b") return TauVariant::kTauB;
  if (s == "tau-a" || s == "a") return TauVariant::kTauA;
  throw InputError("tau variant must be 'tau-b' or 'tau-a'");
}

inline std::string_view tau_variant_name(TauVariant v) {
  return v == TauVariant::kTauB ? "tau-b" : "tau-a";
}

inline SingletonPolicy parse_singleton_policy(std::string_view s) {
  if (s == "one") return SingletonPolicy::kOne;
  if (s == "skip") return SingletonPolicy::kSkip;
  throw InputError("singleton policy must be 'one' or 'skip'");
}

inline std::string_view singleton_policy_name(SingletonPolicy p) {
  return p == SingletonPolicy::kOne ? "one" : "skip";
}

struct MetricOptions {
  int delta = 2;
  TauVariant tau = TauVariant::kTauB;
  SingletonPolicy singletons = SingletonPolicy::kOne;
};

struct EvalReport {
  double accuracy = 0.0;
  double asd = 0.0;
  double kendall_tau = 0.0;
  std::size_t n_triples = 0;
  std::size_t n_entities = 0;
  int delta = 2;

  friend bool operator==(const EvalReport &, const EvalReport &) = default;
};

inline double accuracy_at_delta(std::span<const ScoredPair> pairs,
                                int delta = 2) {
  if (pairs.empty()) throw EmptyInput();
  std::size_t hits = 0;
  for (const ScoredPair &p : pairs) {
    if (std::abs(p.predicted - p.truth) <= delta) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(pairs.size());
}

inline double average_score_difference(std::span<const ScoredPair> pairs) {
  if (pairs.empty()) throw EmptyInput();
  long total = 0;
  for (const ScoredPair &p : pairs) total += std::abs(p.predicted - p.truth);
  return static_cast<double>(total) / static_cast<double>(pairs.size());
}

namespace detail {

// Number of inversions in v (strictly decreasing pairs), sorting v in place.
inline std::int64_t count_inversions(std::vector<int> &v,
                                     std::vector<int> &buf, std::size_t lo,
                                     std::size_t hi) {
  if (hi - lo < 2) return 0;
  std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inv =
      count_inversions(v, buf, lo, mid) + count_inversions(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += static_cast<std::int64_t>(mid - i);
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
  return inv;
}

inline std::int64_t tied_pairs(std::span<const int> sorted) {
  std::int64_t ties = 0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    auto t = static_cast<std::int64_t>(j - i);
    ties += t * (t - 1) / 2;
    i = j;
  }
  return ties;
}

}  // namespace detail

// Kendall rank correlation between two equally long score lists, computed in
// O(n log n) by sorting and counting inversions. With tau-b, a pair of lists
// that are both constant gives 1; exactly one constant list gives 0.
inline double kendall_tau(std::span<const int> a, std::span<const int> b,
                          TauVariant variant = TauVariant::kTauB) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("kendall_tau: lists differ in length");
  }
  const std::size_t n = a.size();
  if (n < 2) return 1.0;
  std::vector<std::pair<int, int>> xy(n);
  for (std::size_t i = 0; i < n; ++i) xy[i] = {a[i], b[i]};
  std::sort(xy.begin(), xy.end());

  std::int64_t n0 = static_cast<std::int64_t>(n) * (n - 1) / 2;
  std::int64_t ties_a = 0, ties_joint = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && xy[j].first == xy[i].first) ++j;
    auto t = static_cast<std::int64_t>(j - i);
    ties_a += t * (t - 1) / 2;
    for (std::size_t u = i; u < j;) {
      std::size_t v = u;
      while (v < j && xy[v].second == xy[u].second) ++v;
      auto s = static_cast<std::int64_t>(v - u);
      ties_joint += s * (s - 1) / 2;
      u = v;
    }
    i = j;
  }
  std::vector<int> ys(n), buf(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = xy[i].second;
  std::int64_t swaps = detail::count_inversions(ys, buf, 0, n);
  std::int64_t ties_b = detail::tied_pairs(ys);

  // Concordant minus discordant pairs.
  std::int64_t s = n0 - ties_a - ties_b + ties_joint - 2 * swaps;
  if (variant == TauVariant::kTauA) {
    return static_cast<double>(s) / static_cast<double>(n0);
  }
  std::int64_t da = n0 - ties_a, db = n0 - ties_b;
  if (da == 0 && db == 0) return 1.0;
  if (da == 0 || db == 0) return 0.0;
  return static_cast<double>(s) /
         std::sqrt(static_cast<double>(da) * static_cast<double>(db));
}

namespace detail {

inline std::string group_key(const Triple &t) {
  return std::string(relation_name(t.relation)) + '\x1f' +
         t.entity.normalized();
}

}  // namespace detail

// Mean over (entity, relation) groups of the rank correlation between
// predicted and true scores. Returns the mean and the number of groups.
inline std::pair<double, std::size_t> kendall_tau_groups(
    std::span<const ScoredPair> pairs, const MetricOptions &opt = {}) {
  if (pairs.empty()) throw EmptyInput();
  std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> groups;
  for (const ScoredPair &p : pairs) {
    auto &g = groups[detail::group_key(p.triple)];
    g.first.push_back(p.predicted);
    g.second.push_back(p.truth);
  }
  double sum = 0.0;
  std::size_t used = 0;
  for (const auto &[key, g] : groups) {
    if (g.first.size() == 1) {
      if (opt.singletons == SingletonPolicy::kSkip) continue;
      sum += 1.0;
    } else {
      sum += kendall_tau(g.first, g.second, opt.tau);
    }
    ++used;
  }
  if (used == 0) throw EmptyInput();
  return {sum / static_cast<double>(used), groups.size()};
}

inline double kendall_tau_per_entity(std::span<const ScoredPair> pairs,
                                     const MetricOptions &opt = {}) {
  return kendall_tau_groups(pairs, opt).first;
}

inline EvalReport evaluate(std::span<const ScoredPair> pairs,
                           const MetricOptions &opt = {}) {
  EvalReport r;
  r.accuracy = accuracy_at_delta(pairs, opt.delta);
  r.asd = average_score_difference(pairs);
  auto [tau, groups] = kendall_tau_groups(pairs, opt);
  r.kendall_tau = tau;
  r.n_triples = pairs.size();
  r.n_entities = groups;
  r.delta = opt.delta;
  return r;
}

// Pairs scored triples with predictions. Every triple must carry a truth.
inline std::vector<ScoredPair> make_pairs(std::span<const Triple> triples,
                                          std::span<const int> predicted) {
  if (triples.size() != predicted.size()) {
    throw DimensionMismatch("prediction count differs from triple count");
  }
  std::vector<ScoredPair> out;
  out.reserve(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (!triples[i].truth) {
      throw InputError("triple (" + triples[i].entity.raw() + ", " +
                       triples[i].object.raw() + ") has no ground-truth score");
    }
    out.push_back({triples[i], predicted[i], *triples[i].truth});
  }
  return out;
}

// Unweighted mean of several reports; counts are summed.
inline EvalReport mean_report(std::span<const EvalReport> reports) {
  if (reports.empty()) throw EmptyInput();
  EvalReport m;
  m.delta = reports.front().delta;
  for (const EvalReport &r : reports) {
    m.accuracy += r.accuracy;
    m.asd += r.asd;
    m.kendall_tau += r.kendall_tau;
    m.n_triples += r.n_triples;
    m.n_entities += r.n_entities;
  }
  double k = static_cast<double>(reports.size());
  m.accuracy /= k;
  m.asd /= k;
  m.kendall_tau /= k;
  return m;
}

struct CvFold {
  int index = 0;
  std::span<const Triple> triples;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Fits on fold.train and returns scores for fold.test, in that order.
using FoldTrainer = std::function<std::vector<int>(const CvFold &)>;

struct CvOptions {
  int k = 5;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  MetricOptions metrics;
};

struct CvResult {
  std::vector<CvFold> folds;
  std::vector<EvalReport> fold_reports;
  EvalReport mean;
};

// Entity-grouped folds: every triple of a person lands in the same fold.
// Entities are shuffled with a seeded Mersenne Twister and dealt round-robin,
// so fold sizes differ by at most one entity.
inline std::vector<CvFold> make_folds(std::span<const Triple> triples, int k,
                                      std::uint64_t seed) {
  if (k < 2) throw InputError("cross-validation needs k >= 2");
  std::vector<std::string> entities;
  for (const Triple &t : triples) entities.push_back(t.entity.normalized());
  std::sort(entities.begin(), entities.end());
  entities.erase(std::unique(entities.begin(), entities.end()), entities.end());
  if (entities.size() < static_cast<std::size_t>(k)) {
    throw TooFewEntities("cross-validation with k=" + std::to_string(k) +
                         " needs at least k distinct entities, found " +
                         std::to_string(entities.size()));
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = entities.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(entities[i - 1], entities[j]);
  }
  std::map<std::string, int> fold_of;
  for (std::size_t i = 0; i < entities.size(); ++i) {
    fold_of[entities[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  }
  std::vector<CvFold> folds(static_cast<std::size_t>(k));
  for (int f = 0; f < k; ++f) {
    folds[f].index = f;
    folds[f].triples = triples;
  }
  for (std::size_t i = 0; i < triples.size(); ++i) {
    int f = fold_of[triples[i].entity.normalized()];
    for (int g = 0; g < k; ++g) {
      (g == f ? folds[g].test : folds[g].train).push_back(i);
    }
  }
  return folds;
}

inline CvResult cross_validate(std::span<const Triple> triples,
                               const FoldTrainer &trainer,
                               const CvOptions &opt = {}) {
  for (const Triple &t : triples) {
    if (!t.truth) {
      throw InputError("cross-validation needs scored triples; (" +
                       t.entity.raw() + ", " + t.object.raw() +
                       ") has no score");
    }
  }
  CvResult result;
  result.folds = make_folds(triples, opt.k, opt.seed);
  result.fold_reports.resize(result.folds.size());

  auto run = [&](std::size_t f) {
    const CvFold &fold = result.folds[f];
    std::vector<int> predicted = trainer(fold);
    if (predicted.size() != fold.test.size()) {
      throw DimensionMismatch("trainer returned wrong number of scores");
    }
    std::vector<ScoredPair> pairs;
    for (std::size_t i = 0; i < fold.test.size(); ++i) {
      const Triple &t = triples[fold.test[i]];
      pairs.push_back({t, predicted[i], *t.truth});
    }
    result.fold_reports[f] = evaluate(pairs, opt.metrics);
  };

  if (opt.workers <= 1) {
    for (std::size_t f = 0; f < result.folds.size(); ++f) run(f);
  } else {
    for (std::size_t start = 0; start < result.folds.size();
         start += opt.workers) {
      std::vector<std::future<void>> batch;
      for (std::size_t f = start;
           f < std::min(result.folds.size(), start + opt.workers); ++f) {
        batch.push_back(std::async(std::launch::async, run, f));
      }
      for (auto &fut : batch) fut.get();
    }
  }
  result.mean = mean_report(result.fold_reports);
  return result;
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

// Aligned text table with one row per labelled report, in the layout of the
// usual results table: Accuracy (delta), ASD, Kendall's Tau.
inline void write_report_table(
    std::ostream &out,
    const std::vector<std::pair<std::string, EvalReport>> &rows) {
  std::size_t label_width = 6;
  for (const auto &[label, r] : rows) {
    label_width = std::max(label_width, label.size());
  }
  int delta = rows.empty() ? 2 : rows.front().second.delta;
  std::string acc = "Accuracy (delta=" + std::to_string(delta) + ")";
  auto pad = [](std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
  };
  out << pad("Method", label_width) << "  " << acc << "  " << "ASD  "
      << "  Kendall's Tau\n";
  for (const auto &[label, r] : rows) {
    out << pad(label, label_width) << "  "
        << pad(format_fixed(r.accuracy, 2), acc.size()) << "  "
        << pad(format_fixed(r.asd, 2), 5) << "  "
        << format_fixed(r.kendall_tau, 2) << '\n';
  }
}

}  // namespace triplescore

#endif  // TRIPLESCORE_EVALUATION_HPP_
