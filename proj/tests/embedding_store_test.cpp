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
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "microworld.hpp"
#include "triplescore/embedding_store.hpp"

namespace triplescore {
namespace {

EmbeddingStore parse(const std::string &text,
                     std::optional<std::size_t> dim = std::nullopt) {
  std::istringstream in(text);
  return read_embeddings(in, "test.vec", dim);
}

TEST(EntityKeyTest, NormalizationLowercasesAndJoinsWords) {
  EXPECT_EQ(normalize_key("United States of America"),
            "united_states_of_america");
  EXPECT_EQ(normalize_key("  Paris \t"), "paris");
  EXPECT_EQ(normalize_key("a   b"), "a_b");
  EXPECT_EQ(EntityKey("Theoretical_Physicist").surface_form(),
            "Theoretical Physicist");
}

TEST(EntityKeyTest, NormalizationIsIdempotent) {
  std::mt19937 rng(7);
  const std::string alphabet = "aB _\tZ9x";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s;
    int len = static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
    std::string once = normalize_key(s);
    EXPECT_EQ(normalize_key(once), once) << "input '" << s << "'";
  }
}

TEST(LoadEmbeddingsTest, MinimalFile) {
  EmbeddingStore store = parse("2 3\nparis 1 0 0\nfrance 0 1 0\n");
  EXPECT_EQ(store.dim(), 3u);
  EXPECT_EQ(store.size(), 2u);
}

TEST(LoadEmbeddingsTest, ShortLineIsMalformed) {
  try {
    parse("2 3\nparis 1 0 0\nfrance 0 1\n");
    FAIL() << "expected MalformedLine";
  } catch (const MalformedLine &e) {
    EXPECT_EQ(e.line_no(), 3u);
  }
}

TEST(LoadEmbeddingsTest, DuplicateKeyIsAnError) {
  try {
    parse("2 3\nparis 1 0 0\nParis 0 1 0\n");
    FAIL() << "expected DuplicateKey";
  } catch (const DuplicateKey &e) {
    EXPECT_EQ(e.key(), "paris");
  }
}

TEST(LoadEmbeddingsTest, ExpectedDimensionMismatch) {
  EXPECT_THROW(parse("1 3\nparis 1 0 0\n", 100), DimensionMismatch);
  EXPECT_NO_THROW(parse("1 3\nparis 1 0 0\n", 3));
}

TEST(LoadEmbeddingsTest, BadHeaderAndBadNumbers) {
  EXPECT_THROW(parse("paris 1 0 0\n"), MalformedLine);
  EXPECT_THROW(parse("1 2\nparis 1 x\n"), MalformedLine);
  EXPECT_THROW(parse("2 2\nparis 1 0\n"), MalformedLine);  // count mismatch
}

TEST(LoadEmbeddingsTest, MissingFileNamesPath) {
  try {
    load_embeddings("/nonexistent/vectors.txt");
    FAIL();
  } catch (const IoError &e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/vectors.txt"),
              std::string::npos);
  }
}

TEST(LookupTest, NormalizesQueries) {
  EmbeddingStore store =
      parse("2 3\nparis 1 0 0\nunited_states_of_america 0 0 1\n");
  auto v = store.lookup("Paris");
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(std::vector<double>(v->begin(), v->end()),
            (std::vector<double>{1, 0, 0}));
  EXPECT_TRUE(store.lookup("United States of America").has_value());
  EXPECT_FALSE(store.lookup("Atlantis_XYZ").has_value());
}

TEST(LookupTest, RoundTripsEveryLine) {
  std::mt19937 rng(11);
  std::normal_distribution<double> normal;
  std::ostringstream file;
  const int n = 50, dim = 7;
  std::vector<std::vector<double>> expected(n);
  file << n << ' ' << dim << '\n';
  for (int i = 0; i < n; ++i) {
    file << "key_" << i;
    for (int d = 0; d < dim; ++d) {
      expected[i].push_back(normal(rng));
      file << ' ' << format_double(expected[i].back());
    }
    file << '\n';
  }
  EmbeddingStore store = parse(file.str());
  for (int i = 0; i < n; ++i) {
    auto v = store.lookup("key_" + std::to_string(i));
    ASSERT_TRUE(v);
    EXPECT_EQ(std::vector<double>(v->begin(), v->end()), expected[i]);
  }
}

TEST(CosineTest, Examples) {
  using V = std::vector<double>;
  EXPECT_DOUBLE_EQ(cosine(V{1, 0}, V{1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(cosine(V{1, 0}, V{0, 1}), 0.0);
  EXPECT_NEAR(cosine(V{1, 0}, V{1, 1}), 0.70710678, 1e-8);
  // 32 / (sqrt(14) * sqrt(77))
  EXPECT_NEAR(cosine(V{1, 2, 3}, V{4, 5, 6}), 0.97463185, 1e-8);
  EXPECT_THROW(cosine(V{0, 0}, V{1, 0}), ZeroVector);
  EXPECT_THROW(cosine(V{1, 0}, V{1, 0, 0}), DimensionMismatch);
}

TEST(CosineTest, SymmetryScalingAndNegation) {
  std::mt19937 rng(3);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(1 + trial % 9), b(a.size());
    for (auto &x : a) x = normal(rng);
    for (auto &x : b) x = normal(rng);
    EXPECT_NEAR(cosine(a, b), cosine(b, a), 1e-12);
    std::vector<double> sa = a, na = a;
    double s = scale(rng);
    for (auto &x : sa) x *= s;
    for (auto &x : na) x = -x;
    EXPECT_NEAR(cosine(a, sa), 1.0, 1e-9);
    EXPECT_NEAR(cosine(a, na), -1.0, 1e-9);
    double c = cosine(a, b);
    EXPECT_LE(std::abs(c), 1.0);
  }
}

}  // namespace
}  // namespace triplescore
