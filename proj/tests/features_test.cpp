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

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "microworld.hpp"
#include "triplescore/features.hpp"

namespace triplescore {
namespace {

constexpr double kTol = 1e-12;

class MicroworldFeatures : public ::testing::Test {
 protected:
  EmbeddingStore store_ = microworld::store();
  Corpus corpus_ = microworld::corpus();
  ObjectUniverse universe_ = microworld::universe();
};

TEST_F(MicroworldFeatures, ObjectEntitySimilarity) {
  EXPECT_NEAR(object_entity_similarity(store_, "Albert Einstein", "Physicist")
                  .value, 0.8, kTol);
  EXPECT_NEAR(object_entity_similarity(store_, "Albert Einstein", "Chemist")
                  .value, 0.96, kTol);
  // Identical vectors.
  FeatureValue same = object_entity_similarity(store_, "Emily Dickinson", "Poet");
  EXPECT_NEAR(same.value, 1.0, kTol);
  EXPECT_EQ(same.missing, kMissingNone);
  FeatureValue missing =
      object_entity_similarity(store_, "Albert Einstein", "Carpenter");
  EXPECT_EQ(missing.value, 0.0);
  EXPECT_EQ(missing.missing, kMissingObjectEmbedding);
}

TEST_F(MicroworldFeatures, OpsMatchesHandComputedMeans) {
  // Einstein's page vectors: (1,0), (0.6,0.8), (0,1).
  EXPECT_NEAR(ops(store_, corpus_, "Albert Einstein", "Physicist").value,
              1.6 / 3, kTol);
  EXPECT_NEAR(ops(store_, corpus_, "Albert Einstein", "Chemist").value,
              2.4 / 3, kTol);
  EXPECT_NEAR(ops(store_, corpus_, "Albert Einstein", "Poet").value, 1.8 / 3,
              kTol);
  EXPECT_NEAR(ops(store_, corpus_, "Albert Einstein", "Painter").value,
              -1.6 / 3, kTol);
  // Curie: radioactivity twice, nobel_prize once, one unembeddable entity.
  EXPECT_NEAR(ops(store_, corpus_, "Marie Curie", "Physicist").value, 2.2 / 3,
              kTol);
  EXPECT_NEAR(ops(store_, corpus_, "Marie Curie", "Chemist").value, 2.92 / 3,
              kTol);
  EXPECT_NEAR(ops(store_, corpus_, "Marie Curie", "Chemist",
                  OpsDenominator::kAll).value,
              2.92 / 4, kTol);
}

TEST(OpsTest, TwoEntitiesHalfSimilar) {
  std::istringstream vec("3 2\nobj 1 0\na 1 0\nb 0 1\n");
  EmbeddingStore store = read_embeddings(vec, "v");
  std::istringstream jl(
      R"({"person": "p", "entities": ["a", "b"], "abstract": "", "page": ""})");
  Corpus corpus = read_corpus(jl, "c");
  EXPECT_DOUBLE_EQ(ops(store, corpus, "p", "obj").value, 0.5);
}

TEST(OpsTest, AllIdenticalGivesOne) {
  std::istringstream vec("2 2\nobj 0.3 0.4\na 0.6 0.8\n");
  EmbeddingStore store = read_embeddings(vec, "v");
  std::istringstream jl(
      R"({"person": "p", "entities": ["a", "a", "a"], "abstract": "", "page": ""})");
  Corpus corpus = read_corpus(jl, "c");
  EXPECT_NEAR(ops(store, corpus, "p", "obj").value, 1.0, kTol);
}

TEST_F(MicroworldFeatures, OpsDegenerateCasesAreFlagged) {
  FeatureValue empty = ops(store_, corpus_, "Emily Dickinson", "Poet");
  EXPECT_EQ(empty.value, 0.0);
  EXPECT_TRUE(empty.missing & kMissingPageEntities);
  FeatureValue unknown = ops(store_, corpus_, "Nikola Tesla", "Poet");
  EXPECT_EQ(unknown.value, 0.0);
  EXPECT_TRUE(unknown.missing & kMissingCorpusRecord);
}

TEST_F(MicroworldFeatures, OpsRankOrder) {
  OpsRanking einstein = ops_rank(store_, corpus_, "Albert Einstein", universe_);
  EXPECT_EQ(einstein.rank("chemist"), 1);
  EXPECT_EQ(einstein.rank("poet"), 2);
  EXPECT_EQ(einstein.rank("physicist"), 3);
  EXPECT_EQ(einstein.rank("painter"), 4);
  // No page entities: every score is zero, ties go to the smaller key.
  OpsRanking dickinson = ops_rank(store_, corpus_, "Emily Dickinson", universe_);
  EXPECT_EQ(dickinson.rank("chemist"), 1);
  EXPECT_EQ(dickinson.rank("painter"), 2);
  EXPECT_EQ(dickinson.rank("physicist"), 3);
  EXPECT_EQ(dickinson.rank("poet"), 4);
}

TEST_F(MicroworldFeatures, SingletonUniverseRanksFirst) {
  ObjectUniverse one(Relation::kProfession, {"Painter"});
  EXPECT_EQ(ops_rank(store_, corpus_, "Albert Einstein", one).rank("painter"), 1);
  ObjectUniverse none(Relation::kProfession, {});
  EXPECT_THROW(ops_rank(store_, corpus_, "Albert Einstein", none),
               EmptyUniverse);
}

// Random worlds: ranks must agree with an independent count of objects that
// beat each object, and form a bijection onto 1..|O|.
TEST(OpsRankProperty, MatchesBruteForceCount) {
  std::mt19937 rng(21);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 200; ++trial) {
    int n_objects = 1 + static_cast<int>(rng() % 7);
    int n_page = static_cast<int>(rng() % 5);
    std::ostringstream vec;
    vec << n_objects + n_page << " 3\n";
    std::vector<EntityKey> objects;
    for (int i = 0; i < n_objects; ++i) {
      objects.emplace_back("o" + std::to_string(i));
      // Coarse coordinates produce exact OPS ties now and then.
      vec << "o" << i;
      for (int d = 0; d < 3; ++d) vec << ' ' << static_cast<int>(rng() % 3) - 1 + (d == 0 ? 0.5 : 0.0);
      vec << '\n';
    }
    std::string entities;
    for (int i = 0; i < n_page; ++i) {
      vec << "e" << i;
      for (int d = 0; d < 3; ++d) vec << ' ' << format_double(normal(rng));
      vec << '\n';
      entities += (i ? ", \"e" : "\"e") + std::to_string(i) + "\"";
    }
    std::istringstream vin(vec.str());
    EmbeddingStore store = read_embeddings(vin, "v");
    std::istringstream cin(R"({"person": "p", "entities": [)" + entities +
                           R"(], "abstract": "", "page": ""})");
    Corpus corpus = read_corpus(cin, "c");
    ObjectUniverse universe(Relation::kProfession, objects);
    OpsRanking ranking = ops_rank(store, corpus, "p", universe);

    std::set<int> seen;
    for (const EntityKey &o : objects) {
      double so = ops(store, corpus, "p", o).value;
      int beaten_by = 0;
      for (const EntityKey &q : objects) {
        double sq = ops(store, corpus, "p", q).value;
        if (sq > so || (sq == so && q.normalized() < o.normalized())) {
          ++beaten_by;
        }
      }
      ASSERT_EQ(ranking.rank(o), beaten_by + 1);
      seen.insert(*ranking.rank(o));
      for (const EntityKey &q : objects) {
        if (so > ops(store, corpus, "p", q).value) {
          EXPECT_LT(*ranking.rank(o), *ranking.rank(q));
        }
      }
    }
    EXPECT_EQ(seen.size(), objects.size());
    EXPECT_EQ(*seen.begin(), 1);
    EXPECT_EQ(*seen.rbegin(), n_objects);
  }
}

TEST_F(MicroworldFeatures, ObjectMention) {
  EXPECT_EQ(object_mention_feature(corpus_, "Albert Einstein", "Physicist").value, 1.0);
  EXPECT_EQ(object_mention_feature(corpus_, "Albert Einstein", "Painter").value, 1.0);
  EXPECT_EQ(object_mention_feature(corpus_, "Albert Einstein", "Poet").value, 0.0);
  EXPECT_EQ(object_mention_feature(corpus_, "Albert Einstein", "Basketball Player").value, 0.0);
  FeatureValue absent = object_mention_feature(corpus_, "Nikola Tesla", "Physicist");
  EXPECT_EQ(absent.value, 0.0);
  EXPECT_EQ(absent.missing, kMissingCorpusRecord);
  // Deterministic and idempotent.
  EXPECT_EQ(object_mention_feature(corpus_, "Marie Curie", "Chemist").value,
            object_mention_feature(corpus_, "Marie Curie", "Chemist").value);
}

TEST_F(MicroworldFeatures, ExtractEqualsPerFeatureComposition) {
  auto triples = microworld::train();
  auto test = microworld::test();
  triples.insert(triples.end(), test.begin(), test.end());
  auto features = extract(store_, corpus_, universe_, triples);
  ASSERT_EQ(features.size(), triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple &t = triples[i];
    FeatureValue sim = object_entity_similarity(store_, t.entity, t.object);
    FeatureValue o = ops(store_, corpus_, t.entity, t.object);
    OpsRanking r = ops_rank(store_, corpus_, t.entity, universe_);
    FeatureValue m = object_mention_feature(corpus_, t.entity, t.object);
    EXPECT_EQ(features[i].obj_entity_sim, sim.value);
    EXPECT_EQ(features[i].ops, o.value);
    EXPECT_EQ(features[i].ops_rank, static_cast<double>(*r.rank(t.object)));
    EXPECT_EQ(features[i].object_mention, m.value);
    EXPECT_EQ(features[i].missing, sim.missing | o.missing | m.missing);
    for (double v : features[i].values()) EXPECT_TRUE(std::isfinite(v));
  }
}

TEST_F(MicroworldFeatures, ExtractEdgeCases) {
  EXPECT_TRUE(extract(store_, corpus_, universe_, std::vector<Triple>{}).empty());
  std::vector<Triple> wrong = {
      {"Albert Einstein", Relation::kNationality, "Germany", std::nullopt}};
  EXPECT_THROW(extract(store_, corpus_, universe_, wrong), RelationMismatch);
}

TEST_F(MicroworldFeatures, ObjectOutsideUniverseIsFlagged) {
  std::vector<Triple> t = {
      {"Albert Einstein", Relation::kProfession, "Violin", std::nullopt}};
  auto f = extract(store_, corpus_, universe_, t);
  // OPS(violin) = (0 + 0.8 + 1) / 3 = 0.6 ties poet and sorts after it.
  EXPECT_NEAR(f[0].ops, 0.6, kTol);
  EXPECT_EQ(f[0].ops_rank, 3.0);
  EXPECT_TRUE(f[0].missing & kObjectNotInUniverse);
}

TEST_F(MicroworldFeatures, MemoizationAndWorkersAreTransparent) {
  auto triples = microworld::train();
  auto one = extract(store_, corpus_, universe_, triples, {OpsDenominator::kEmbedded, 1});
  for (unsigned workers : {2u, 3u, 8u}) {
    auto many = extract(store_, corpus_, universe_, triples,
                        {OpsDenominator::kEmbedded, workers});
    EXPECT_EQ(one, many);
  }
  // Extracting one triple at a time gives the same vectors.
  for (std::size_t i = 0; i < triples.size(); ++i) {
    auto single = extract(store_, corpus_, universe_,
                          std::span<const Triple>(&triples[i], 1));
    EXPECT_EQ(single[0], one[i]);
  }
}

TEST(StandardizerTest, ConstantColumnBecomesZero) {
  Matrix m{{3.0, 0.0}, {3.0, 2.0}};
  Standardizer s = Standardizer::fit(m);
  Matrix z = s.apply(m);
  EXPECT_EQ(z(0, 0), 0.0);
  EXPECT_EQ(z(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(s.means()[1], 1.0);
  EXPECT_DOUBLE_EQ(s.stddevs()[1], 1.0);
  EXPECT_DOUBLE_EQ(z(0, 1), -1.0);
  EXPECT_DOUBLE_EQ(z(1, 1), 1.0);
}

TEST(StandardizerTest, TrainingColumnsHaveZeroMean) {
  std::mt19937 rng(9);
  std::normal_distribution<double> normal(5.0, 30.0);
  Matrix m(40, 4);
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = normal(rng);
  }
  Matrix z = Standardizer::fit(m).apply(m);
  for (std::size_t j = 0; j < 4; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 40; ++i) mean += z(i, j);
    EXPECT_NEAR(mean / 40, 0.0, 1e-10);
  }
  EXPECT_THROW(Standardizer::fit(Matrix()), EmptyTrainingSet);
  EXPECT_THROW(fit_standardizer(std::vector<FeatureVector>{}), EmptyTrainingSet);
}

}  // namespace
}  // namespace triplescore
