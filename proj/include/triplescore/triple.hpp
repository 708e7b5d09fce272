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

#ifndef TRIPLESCORE_TRIPLE_HPP_
#define TRIPLESCORE_TRIPLE_HPP_

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "triplescore/embedding_store.hpp"
#include "triplescore/entity_key.hpp"
#include "triplescore/error.hpp"

namespace triplescore {

inline constexpr int kMinScore = 0;
inline constexpr int kMaxScore = 7;
inline constexpr int kNumClasses = kMaxScore - kMinScore + 1;

enum class Relation { kProfession, kNationality };

inline std::string_view relation_name(Relation r) {
  return r == Relation::kProfession ? "profession" : "nationality";
}

inline Relation parse_relation(std::string_view name) {
  std::string n = normalize_key(name);
  if (n == "profession") return Relation::kProfession;
  if (n == "nationality") return Relation::kNationality;
  throw InputError("unknown relation '" + std::string(name) +
                   "' (expected profession or nationality)");
}

struct Triple {
  EntityKey entity;
  Relation relation = Relation::kProfession;
  EntityKey object;
  std::optional<int> truth;
};

// All objects of one relation, sorted by normalized key, without duplicates.
class ObjectUniverse {
 public:
  ObjectUniverse(Relation relation, std::vector<EntityKey> objects)
      : relation_(relation), objects_(std::move(objects)) {
    std::sort(objects_.begin(), objects_.end());
    objects_.erase(std::unique(objects_.begin(), objects_.end()),
                   objects_.end());
  }

  Relation relation() const { return relation_; }
  const std::vector<EntityKey> &objects() const { return objects_; }
  std::size_t size() const { return objects_.size(); }
  bool empty() const { return objects_.empty(); }

  bool contains(const EntityKey &o) const {
    return std::binary_search(objects_.begin(), objects_.end(), o);
  }

 private:
  Relation relation_;
  std::vector<EntityKey> objects_;
};

// Parses `entity<TAB>object[<TAB>score]` lines. An absent or empty score
// column means the triple is unscored.
inline std::vector<Triple> read_triples(std::istream &in,
                                        const std::string &source,
                                        Relation relation) {
  std::vector<Triple> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string_view> cols;
    std::string_view rest(line);
    for (;;) {
      auto tab = rest.find('\t');
      cols.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (cols.size() < 2 || cols.size() > 3) {
      throw MalformedLine(source, line_no,
                          "expected entity<TAB>object[<TAB>score]");
    }
    if (normalize_key(cols[0]).empty() || normalize_key(cols[1]).empty()) {
      throw MalformedLine(source, line_no, "empty entity or object");
    }
    Triple t{EntityKey(cols[0]), relation, EntityKey(cols[1]), std::nullopt};
    if (cols.size() == 3 && !cols[2].empty()) {
      int score = -1;
      if (!detail::parse_number(cols[2], score) || score < kMinScore ||
          score > kMaxScore) {
        throw MalformedLine(source, line_no,
                            "score must be an integer in [0,7], got '" +
                                std::string(cols[2]) + "'");
      }
      t.truth = score;
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<Triple> load_triples(const std::string &path,
                                        Relation relation) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open triple file");
  return read_triples(in, path, relation);
}

// Writes `entity<TAB>object<TAB>score` using the raw names.
inline void write_scored_triples(std::ostream &out,
                                 const std::vector<Triple> &triples,
                                 const std::vector<int> &scores) {
  for (std::size_t i = 0; i < triples.size(); ++i) {
    out << triples[i].entity.raw() << '\t' << triples[i].object.raw() << '\t'
        << scores[i] << '\n';
  }
}

// One object name per line. A leading "# relation: <name>" line declares the
// relation; any other line starting with '#' is a comment.
inline ObjectUniverse read_universe(std::istream &in, const std::string &source,
                                    Relation relation) {
  std::vector<EntityKey> objects;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    std::string_view v(line);
    if (!v.empty() && v.front() == '#') {
      v.remove_prefix(1);
      std::string body = normalize_key(v);
      constexpr std::string_view kTag = "relation:";
      if (body.rfind(kTag, 0) == 0) {
        std::string declared = body.substr(kTag.size());
        if (!declared.empty() && declared.front() == '_') declared.erase(0, 1);
        if (parse_relation(declared) != relation) {
          throw RelationMismatch(source + ": universe declares relation '" +
                                 declared + "' but '" +
                                 std::string(relation_name(relation)) +
                                 "' was requested");
        }
      }
      continue;
    }
    if (normalize_key(v).empty()) continue;
    objects.emplace_back(v);
  }
  ObjectUniverse universe(relation, std::move(objects));
  if (universe.empty()) throw EmptyUniverse();
  return universe;
}

inline ObjectUniverse load_universe(const std::string &path,
                                    Relation relation) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open universe file");
  return read_universe(in, path, relation);
}

}  // namespace triplescore

#endif  // TRIPLESCORE_TRIPLE_HPP_
