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

#ifndef TRIPLESCORE_CORPUS_HPP_
#define TRIPLESCORE_CORPUS_HPP_

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "triplescore/embedding_store.hpp"
#include "triplescore/entity_key.hpp"
#include "triplescore/error.hpp"

namespace triplescore {

enum class MentionScope { kAbstract, kFullPage };

// Corpus entry for one person: linked entities in document order plus the
// abstract and full page text.
struct PageRecord {
  EntityKey person;
  std::vector<EntityKey> linked_entities;
  std::string abstract_text;
  std::string page_text;

  const std::string &text(MentionScope scope) const {
    return scope == MentionScope::kAbstract ? abstract_text : page_text;
  }
};

namespace detail {

// Letters and digits are word characters. Bytes above 0x7f belong to UTF-8
// sequences and are treated as letters.
inline bool is_word_byte(char c) {
  auto u = static_cast<unsigned char>(c);
  return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
         (u >= 'A' && u <= 'Z') || u >= 0x80;
}

struct Token {
  std::string text;  // lowercased
  std::size_t begin;
  std::size_t end;
};

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && !is_word_byte(s[i])) ++i;
    if (i == s.size()) break;
    std::size_t j = i;
    std::string t;
    while (j < s.size() && is_word_byte(s[j])) t.push_back(ascii_lower(s[j++]));
    out.push_back({std::move(t), i, j});
    i = j;
  }
  return out;
}

struct PhraseMatch {
  std::size_t begin;
  std::size_t length;
};

// First occurrence of the token sequence of `phrase` in `text`.
inline std::optional<PhraseMatch> find_phrase(
    const std::vector<Token> &text, const std::vector<Token> &phrase) {
  if (phrase.empty() || phrase.size() > text.size()) return std::nullopt;
  for (std::size_t i = 0; i + phrase.size() <= text.size(); ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < phrase.size(); ++k) {
      if (text[i + k].text != phrase[k].text) {
        hit = false;
        break;
      }
    }
    if (hit) {
      std::size_t end = text[i + phrase.size() - 1].end;
      return PhraseMatch{text[i].begin, end - text[i].begin};
    }
  }
  return std::nullopt;
}

}  // namespace detail

// True iff the object's surface form occurs in the chosen text as a
// case-insensitive whole-phrase match.
inline bool mentions(const PageRecord &record, const EntityKey &object,
                     MentionScope scope) {
  auto phrase = detail::tokenize(object.surface_form());
  auto text = detail::tokenize(record.text(scope));
  return detail::find_phrase(text, phrase).has_value();
}

// Candidate with the earliest whole-phrase occurrence in the abstract. Ties
// on start offset go to the longer match, then the smaller key.
inline std::optional<EntityKey> first_mentioned(
    const PageRecord &record, const std::vector<EntityKey> &candidates) {
  auto text = detail::tokenize(record.abstract_text);
  std::optional<EntityKey> best;
  detail::PhraseMatch best_match{};
  for (const EntityKey &c : candidates) {
    auto m = detail::find_phrase(text, detail::tokenize(c.surface_form()));
    if (!m) continue;
    bool better = !best || m->begin < best_match.begin ||
                  (m->begin == best_match.begin &&
                   (m->length > best_match.length ||
                    (m->length == best_match.length && c < *best)));
    if (better) {
      best = c;
      best_match = *m;
    }
  }
  return best;
}

class Corpus {
 public:
  // Throws DuplicatePerson if the person already has a record.
  void add(PageRecord record) {
    std::string key = record.person.normalized();
    auto [it, inserted] = records_.emplace(std::move(key), std::move(record));
    if (!inserted) throw DuplicatePerson(it->first);
  }

  const PageRecord *find(const EntityKey &person) const {
    auto it = records_.find(person.normalized());
    return it == records_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return records_.size(); }

 private:
  std::map<std::string, PageRecord> records_;
};

// Reads line-delimited JSON records with fields person, entities, abstract
// and page.
inline Corpus read_corpus(std::istream &in, const std::string &source) {
  using nlohmann::json;
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    detail::strip_cr(line);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw MalformedRecord(source, line_no, "not a JSON object");
    }
    auto field = [&](const char *name, json::value_t type) -> const json & {
      auto it = obj.find(name);
      if (it == obj.end() || it->type() != type) {
        throw MalformedRecord(source, line_no,
                              std::string("missing or mistyped field '") +
                                  name + "'");
      }
      return *it;
    };
    PageRecord rec;
    rec.person = EntityKey(field("person", json::value_t::string)
                               .get<std::string>());
    for (const json &e : field("entities", json::value_t::array)) {
      if (!e.is_string()) {
        throw MalformedRecord(source, line_no, "entities must be strings");
      }
      rec.linked_entities.emplace_back(e.get<std::string>());
    }
    rec.abstract_text =
        field("abstract", json::value_t::string).get<std::string>();
    rec.page_text = field("page", json::value_t::string).get<std::string>();
    corpus.add(std::move(rec));
  }
  return corpus;
}

inline Corpus load_corpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open corpus file");
  return read_corpus(in, path);
}

}  // namespace triplescore

#endif  // TRIPLESCORE_CORPUS_HPP_
