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

#ifndef TRIPLESCORE_ENTITY_KEY_HPP_
#define TRIPLESCORE_ENTITY_KEY_HPP_

#include <compare>
#include <string>
#include <string_view>

namespace triplescore {

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Lowercases and collapses every run of whitespace into one underscore.
// Leading and trailing whitespace is dropped. Idempotent.
inline std::string normalize_key(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_gap = false;
  for (char c : raw) {
    if (is_ascii_space(c)) {
      pending_gap = !out.empty();
      continue;
    }
    if (pending_gap) {
      out.push_back('_');
      pending_gap = false;
    }
    out.push_back(ascii_lower(c));
  }
  return out;
}

// Entity or object name as it appears in a data file, together with the
// key used for embedding and corpus lookups.
class EntityKey {
 public:
  EntityKey() = default;
  EntityKey(std::string_view raw)  // NOLINT: implicit by intent
      : raw_(raw), normalized_(normalize_key(raw)) {}
  EntityKey(const char *raw) : EntityKey(std::string_view(raw)) {}
  EntityKey(const std::string &raw) : EntityKey(std::string_view(raw)) {}

  const std::string &raw() const { return raw_; }
  const std::string &normalized() const { return normalized_; }

  // Text used for literal mention matching: the raw name with underscores
  // read as spaces.
  std::string surface_form() const {
    std::string s = raw_;
    for (char &c : s) {
      if (c == '_') c = ' ';
    }
    return s;
  }

  friend bool operator==(const EntityKey &a, const EntityKey &b) {
    return a.normalized_ == b.normalized_;
  }
  friend std::strong_ordering operator<=>(const EntityKey &a,
                                          const EntityKey &b) {
    return a.normalized_ <=> b.normalized_;
  }

 private:
  std::string raw_;
  std::string normalized_;
};

}  // namespace triplescore

#endif  // TRIPLESCORE_ENTITY_KEY_HPP_
