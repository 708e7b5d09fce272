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

#ifndef TRIPLESCORE_EMBEDDING_STORE_HPP_
#define TRIPLESCORE_EMBEDDING_STORE_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "triplescore/entity_key.hpp"
#include "triplescore/error.hpp"

namespace triplescore {

// Cosine similarity of two equal-length vectors. Throws ZeroVector when
// either vector has zero norm.
inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("cosine: vectors of length " +
                            std::to_string(a.size()) + " and " +
                            std::to_string(b.size()));
  }
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) throw ZeroVector();
  double c = dot / (std::sqrt(aa) * std::sqrt(bb));
  // Rounding can push |c| a hair above one.
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return c;
}

// In-memory entity embeddings keyed by normalized entity name. Immutable
// once loaded.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw DimensionMismatch("embedding dimension must be > 0");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return index_.size(); }

  // Adds a vector. Keys are normalized; a repeated key is an error.
  void add(const EntityKey &key, std::vector<double> vec) {
    if (vec.size() != dim_) {
      throw DimensionMismatch("vector for '" + key.raw() + "' has length " +
                              std::to_string(vec.size()) + ", expected " +
                              std::to_string(dim_));
    }
    auto [it, inserted] = index_.emplace(key.normalized(), data_.size() / dim_);
    if (!inserted) throw DuplicateKey(key.normalized());
    data_.insert(data_.end(), vec.begin(), vec.end());
  }

  // Returns the stored vector or nothing. Never fabricates a vector.
  std::optional<std::span<const double>> lookup(const EntityKey &key) const {
    auto it = index_.find(key.normalized());
    if (it == index_.end()) return std::nullopt;
    return std::span<const double>(data_.data() + it->second * dim_, dim_);
  }

  bool contains(const EntityKey &key) const {
    return index_.count(key.normalized()) != 0;
  }

 private:
  std::size_t dim_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;  // row-major, size() x dim_
};

namespace detail {

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T &out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

inline void strip_cr(std::string &line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

// Reads the textual word-vector format: a "<count> <dim>" header followed by
// one "<key> <v1> ... <v_dim>" line per entry.
inline EmbeddingStore read_embeddings(
    std::istream &in, const std::string &source,
    std::optional<std::size_t> expected_dim = std::nullopt) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t count = 0, dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (!line.empty()) break;
  }
  auto header = detail::split_spaces(line);
  if (header.size() != 2 || !detail::parse_number(header[0], count) ||
      !detail::parse_number(header[1], dim) || dim == 0) {
    throw MalformedLine(source, line_no, "expected '<count> <dim>' header");
  }
  if (expected_dim && *expected_dim != dim) {
    throw DimensionMismatch(source + ": file dimension " + std::to_string(dim) +
                            ", expected " + std::to_string(*expected_dim));
  }

  EmbeddingStore store(dim);
  std::vector<double> vec(dim);
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    auto tokens = detail::split_spaces(line);
    if (tokens.size() != dim + 1) {
      throw MalformedLine(source, line_no,
                          "expected key and " + std::to_string(dim) +
                              " values, got " +
                              std::to_string(tokens.size()) + " tokens");
    }
    for (std::size_t i = 0; i < dim; ++i) {
      if (!detail::parse_number(tokens[i + 1], vec[i]) ||
          !std::isfinite(vec[i])) {
        throw MalformedLine(source, line_no,
                            "bad number '" + std::string(tokens[i + 1]) + "'");
      }
    }
    store.add(EntityKey(tokens[0]), vec);
  }
  if (store.size() != count) {
    throw MalformedLine(source, line_no,
                        "header declares " + std::to_string(count) +
                            " entries, found " + std::to_string(store.size()));
  }
  return store;
}

inline EmbeddingStore load_embeddings(
    const std::string &path,
    std::optional<std::size_t> expected_dim = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open embeddings file");
  return read_embeddings(in, path, expected_dim);
}

}  // namespace triplescore

#endif  // TRIPLESCORE_EMBEDDING_STORE_HPP_
