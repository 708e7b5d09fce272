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

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "triplescore/evaluation.hpp"

namespace triplescore {
namespace {

std::vector<ScoredPair> pairs_for(const std::string &entity,
                                  const std::vector<int> &predicted,
                                  const std::vector<int> &truth) {
  std::vector<ScoredPair> out;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    Triple t{entity, Relation::kProfession, "o" + std::to_string(i), truth[i]};
    out.push_back({t, predicted[i], truth[i]});
  }
  return out;
}

TEST(AccuracyTest, Fixtures) {
  auto p = pairs_for("e", {7, 0}, {5, 3});
  EXPECT_DOUBLE_EQ(accuracy_at_delta(p, 2), 0.5);
  EXPECT_DOUBLE_EQ(accuracy_at_delta(p, 7), 1.0);
  EXPECT_DOUBLE_EQ(accuracy_at_delta(pairs_for("e", {1, 2}, {1, 2}), 0), 1.0);
  EXPECT_THROW(accuracy_at_delta(std::vector<ScoredPair>{}, 2), EmptyInput);
}

TEST(AccuracyTest, MonotoneInDelta) {
  std::mt19937 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> a(20), b(20);
    for (auto &v : a) v = rng() % 8;
    for (auto &v : b) v = rng() % 8;
    auto p = pairs_for("e", a, b);
    for (int d = 0; d < 7; ++d) {
      EXPECT_LE(accuracy_at_delta(p, d), accuracy_at_delta(p, d + 1));
    }
    EXPECT_EQ(accuracy_at_delta(p, 7), 1.0);
  }
}

TEST(AsdTest, Fixtures) {
  EXPECT_DOUBLE_EQ(average_score_difference(pairs_for("e", {7, 0}, {5, 3})), 2.5);
  EXPECT_DOUBLE_EQ(average_score_difference(pairs_for("e", {4, 4}, {4, 4})), 0.0);
  EXPECT_DOUBLE_EQ(average_score_difference(pairs_for("e", {0}, {7})), 7.0);
  EXPECT_THROW(average_score_difference(std::vector<ScoredPair>{}), EmptyInput);
  auto p = pairs_for("e", {1, 6, 3}, {5, 2, 3});
  auto q = pairs_for("e", {5, 2, 3}, {1, 6, 3});
  EXPECT_EQ(average_score_difference(p), average_score_difference(q));
}

TEST(KendallTauTest, PerfectAndReversed) {
  std::vector<int> a = {0, 1, 2, 3, 4, 5, 6, 7};
  std::vector<int> r(a.rbegin(), a.rend());
  EXPECT_EQ(kendall_tau(a, a), 1.0);
  EXPECT_EQ(kendall_tau(a, r), -1.0);
  EXPECT_EQ(kendall_tau_per_entity(pairs_for("e", {1, 3, 5}, {2, 4, 7})), 1.0);
  EXPECT_EQ(kendall_tau_per_entity(pairs_for("e", {5, 3, 1}, {2, 4, 7})), -1.0);
}

TEST(KendallTauTest, MatchesBruteForce) {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng() % 30;
    int levels = 1 + static_cast<int>(rng() % 8);
    std::vector<int> a(n), b(n);
    for (auto &v : a) v = static_cast<int>(rng() % levels);
    for (auto &v : b) v = static_cast<int>(rng() % levels);
    EXPECT_NEAR(kendall_tau(a, b), test_support::brute_force_tau_b(a, b), 1e-12);
    EXPECT_NEAR(kendall_tau(a, b, TauVariant::kTauA),
                test_support::brute_force_tau_a(a, b), 1e-12);
  }
}

TEST(KendallTauTest, TieConventions) {
  std::vector<int> c = {3, 3, 3};
  std::vector<int> v = {1, 2, 3};
  EXPECT_EQ(kendall_tau(c, c), 1.0);
  EXPECT_EQ(kendall_tau(c, v), 0.0);
  std::vector<int> tied = {1, 1, 2, 2};
  EXPECT_EQ(kendall_tau(tied, tied), 1.0);  // identical tie pattern
}

TEST(KendallTauTest, GroupsAndSingletons) {
  auto p = pairs_for("a", {1, 2}, {1, 2});   // tau 1
  auto q = pairs_for("b", {2, 1}, {1, 2});   // tau -1
  auto s = pairs_for("c", {4}, {0});         // singleton
  std::vector<ScoredPair> all;
  for (auto *g : {&p, &q, &s}) all.insert(all.end(), g->begin(), g->end());
  EXPECT_NEAR(kendall_tau_per_entity(all), 1.0 / 3, 1e-15);
  MetricOptions skip;
  skip.singletons = SingletonPolicy::kSkip;
  EXPECT_NEAR(kendall_tau_per_entity(all, skip), 0.0, 1e-15);
  EXPECT_THROW(kendall_tau_per_entity(s, skip), EmptyInput);
  EXPECT_THROW(kendall_tau_per_entity(std::vector<ScoredPair>{}), EmptyInput);

  EvalReport r = evaluate(all);
  EXPECT_EQ(r.n_triples, 5u);
  EXPECT_EQ(r.n_entities, 3u);
  EXPECT_GE(r.kendall_tau, -1.0);
  EXPECT_LE(r.kendall_tau, 1.0);
}

TEST(MeanReportTest, UnweightedAverage) {
  EvalReport a, b;
  a.accuracy = 0.71;
  b.accuracy = 0.75;
  a.asd = 1.80;
  b.asd = 1.71;
  EvalReport m = mean_report(std::vector<EvalReport>{a, b});
  EXPECT_EQ(format_fixed(m.accuracy, 2), "0.73");
  EXPECT_EQ(format_fixed(m.asd, 2), "1.75");
}

std::vector<Triple> grouped_triples(int entities, int per_entity) {
  std::vector<Triple> out;
  for (int e = 0; e < entities; ++e) {
    for (int k = 0; k < per_entity; ++k) {
      out.push_back({"person_" + std::to_string(e), Relation::kProfession,
                     "job_" + std::to_string(k), (e + k) % 8});
    }
  }
  return out;
}

TEST(FoldsTest, PartitionBalancedAndEntityGrouped) {
  auto triples = grouped_triples(23, 3);
  auto folds = make_folds(triples, 5, 42);
  ASSERT_EQ(folds.size(), 5u);
  std::multiset<std::size_t> covered;
  std::size_t min_entities = 1000, max_entities = 0;
  for (const CvFold &f : folds) {
    covered.insert(f.test.begin(), f.test.end());
    EXPECT_EQ(f.train.size() + f.test.size(), triples.size());
    std::set<std::string> test_entities, train_entities;
    for (std::size_t i : f.test) test_entities.insert(triples[i].entity.normalized());
    for (std::size_t i : f.train) train_entities.insert(triples[i].entity.normalized());
    for (const auto &e : test_entities) EXPECT_EQ(train_entities.count(e), 0u);
    min_entities = std::min(min_entities, test_entities.size());
    max_entities = std::max(max_entities, test_entities.size());
  }
  EXPECT_LE(max_entities - min_entities, 1u);
  std::multiset<std::size_t> expected;
  for (std::size_t i = 0; i < triples.size(); ++i) expected.insert(i);
  EXPECT_EQ(covered, expected);
}

TEST(FoldsTest, DeterministicAndLeaveOneOut) {
  auto triples = grouped_triples(6, 2);
  auto a = make_folds(triples, 3, 7), b = make_folds(triples, 3, 7);
  for (std::size_t f = 0; f < a.size(); ++f) EXPECT_EQ(a[f].test, b[f].test);
  auto loo = make_folds(triples, 6, 1);
  for (const CvFold &f : loo) EXPECT_EQ(f.test.size(), 2u);
  EXPECT_THROW(make_folds(triples, 7, 1), TooFewEntities);
  EXPECT_THROW(make_folds(triples, 1, 1), InputError);
}

TEST(CrossValidateTest, WorkersDoNotChangeResults) {
  auto triples = grouped_triples(12, 3);
  FoldTrainer trainer = [](const CvFold &fold) {
    // Predicts the mean training label for every test triple.
    double sum = 0.0;
    for (std::size_t i : fold.train) sum += *fold.triples[i].truth;
    int guess = static_cast<int>(sum / fold.train.size() + 0.5);
    return std::vector<int>(fold.test.size(), guess);
  };
  CvOptions seq;
  seq.k = 4;
  seq.seed = 3;
  CvOptions par = seq;
  par.workers = 4;
  CvResult a = cross_validate(triples, trainer, seq);
  CvResult b = cross_validate(triples, trainer, par);
  EXPECT_EQ(a.fold_reports, b.fold_reports);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.mean.n_triples, triples.size());

  auto unscored = triples;
  unscored[0].truth.reset();
  EXPECT_THROW(cross_validate(unscored, trainer, seq), InputError);
}

}  // namespace
}  // namespace triplescore
