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

#ifndef TRIPLESCORE_FEATURES_HPP_
#define TRIPLESCORE_FEATURES_HPP_

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <vector>

#include "triplescore/corpus.hpp"
#include "triplescore/embedding_store.hpp"
#include "triplescore/error.hpp"
#include "triplescore/matrix.hpp"
#include "triplescore/triple.hpp"

namespace triplescore {

inline constexpr std::size_t kNumFeatures = 4;

inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "obj_entity_sim", "ops", "ops_rank", "object_mention"};

inline constexpr std::array<std::string_view, kNumFeatures>
    kFeatureDisplayNames = {"Object-Entity Similarity", "OPS", "OPS Rank",
                            "Object Mention"};

// Inputs that were unavailable while computing a feature. Any flagged
// feature carries the value 0.0 except OPS Rank, which still ranks the
// object (see ops_rank).
enum MissingFlag : unsigned {
  kMissingNone = 0,
  kMissingEntityEmbedding = 1u << 0,
  kMissingObjectEmbedding = 1u << 1,
  kMissingPageEntities = 1u << 2,
  kMissingCorpusRecord = 1u << 3,
  kObjectNotInUniverse = 1u << 4,
};

inline std::string missing_flags_string(unsigned flags) {
  static constexpr std::array<std::pair<unsigned, std::string_view>, 5>
      kNames = {{{kMissingEntityEmbedding, "entity_embedding"},
                 {kMissingObjectEmbedding, "object_embedding"},
                 {kMissingPageEntities, "page_entities"},
                 {kMissingCorpusRecord, "corpus_record"},
                 {kObjectNotInUniverse, "not_in_universe"}}};
  std::string out;
  for (const auto &[bit, name] : kNames) {
    if (flags & bit) {
      if (!out.empty()) out.push_back(',');
      out += name;
    }
  }
  return out.empty() ? "-" : out;
}

struct FeatureValue {
  double value = 0.0;
  unsigned missing = kMissingNone;
};

enum class OpsDenominator {
  kEmbedded,  // N counts page entities that contribute a cosine term
  kAll,       // N counts every page entity; unembeddable ones add zero
};

inline OpsDenominator parse_ops_denominator(std::string_view s) {
  if (s == "embedded") return OpsDenominator::kEmbedded;
  if (s == "all") return OpsDenominator::kAll;
  throw InputError("ops_denominator must be 'embedded' or 'all', got '" +
                   std::string(s) + "'");
}

inline std::string_view ops_denominator_name(OpsDenominator d) {
  return d == OpsDenominator::kEmbedded ? "embedded" : "all";
}

struct FeatureOptions {
  OpsDenominator ops_denominator = OpsDenominator::kEmbedded;
  unsigned workers = 1;
};

struct FeatureVector {
  double obj_entity_sim = 0.0;
  double ops = 0.0;
  double ops_rank = 0.0;
  double object_mention = 0.0;
  unsigned missing = kMissingNone;

  std::array<double, kNumFeatures> values() const {
    return {obj_entity_sim, ops, ops_rank, object_mention};
  }

  friend bool operator==(const FeatureVector &, const FeatureVector &) =
      default;
};

// Cosine between the embeddings of the person and the object.
inline FeatureValue object_entity_similarity(const EmbeddingStore &store,
                                             const EntityKey &e,
                                             const EntityKey &o) {
  FeatureValue out;
  auto ve = store.lookup(e);
  auto vo = store.lookup(o);
  if (!ve) out.missing |= kMissingEntityEmbedding;
  if (!vo) out.missing |= kMissingObjectEmbedding;
  if (out.missing) return out;
  try {
    out.value = cosine(*ve, *vo);
  } catch (const ZeroVector &) {
    double ne = dot(*ve, *ve), no = dot(*vo, *vo);
    if (ne == 0.0) out.missing |= kMissingEntityEmbedding;
    if (no == 0.0) out.missing |= kMissingObjectEmbedding;
    out.value = 0.0;
  }
  return out;
}

// Embedded vectors of one person's page entities, resolved once and reused
// for every object.
class PageContext {
 public:
  PageContext(const EmbeddingStore &store, const Corpus &corpus,
              const EntityKey &e) {
    const PageRecord *rec = corpus.find(e);
    if (rec == nullptr) {
      has_record_ = false;
      return;
    }
    total_ = rec->linked_entities.size();
    for (const EntityKey &pe : rec->linked_entities) {
      auto v = store.lookup(pe);
      if (v && dot(*v, *v) > 0.0) vectors_.push_back(*v);
    }
  }

  // Mean cosine between the object vector and the page entity vectors.
  FeatureValue ops(std::optional<std::span<const double>> object_vec,
                   OpsDenominator denominator) const {
    FeatureValue out;
    if (!has_record_) out.missing |= kMissingCorpusRecord;
    if (!object_vec || dot(*object_vec, *object_vec) == 0.0) {
      out.missing |= kMissingObjectEmbedding;
    }
    std::size_t n = denominator == OpsDenominator::kEmbedded ? vectors_.size()
                                                             : total_;
    if (vectors_.empty() || n == 0) out.missing |= kMissingPageEntities;
    if (out.missing) return out;
    double sum = 0.0;
    for (const auto &v : vectors_) sum += cosine(*object_vec, v);
    out.value = sum / static_cast<double>(n);
    return out;
  }

 private:
  bool has_record_ = true;
  std::size_t total_ = 0;
  std::vector<std::span<const double>> vectors_;
};

// Average similarity between the object and the entities linked from the
// person's page.
inline FeatureValue ops(const EmbeddingStore &store, const Corpus &corpus,
                        const EntityKey &e, const EntityKey &o,
                        OpsDenominator denominator = OpsDenominator::kEmbedded) {
  return PageContext(store, corpus, e).ops(store.lookup(o), denominator);
}

// Objects of the universe ordered by descending OPS score, ties broken by
// ascending key. Ranks are 1-based positions in that order.
class OpsRanking {
 public:
  struct Entry {
    EntityKey object;
    FeatureValue ops;
    int rank;
  };

  explicit OpsRanking(std::vector<Entry> sorted) : entries_(std::move(sorted)) {
    for (const Entry &e : entries_) {
      by_key_.emplace(e.object.normalized(), &e - entries_.data());
    }
  }

  // Position of the object in the sorted list. Objects outside the universe
  // get the position they would take if inserted, with the not-in-universe
  // flag.
  FeatureValue rank_of(const EntityKey &o, double ops_score) const {
    auto it = by_key_.find(o.normalized());
    if (it != by_key_.end()) {
      return {static_cast<double>(entries_[it->second].rank), kMissingNone};
    }
    int ahead = 0;
    for (const Entry &e : entries_) {
      if (precedes(e.ops.value, e.object, ops_score, o)) ++ahead;
    }
    return {static_cast<double>(ahead + 1), kObjectNotInUniverse};
  }

  std::optional<int> rank(const EntityKey &o) const {
    auto it = by_key_.find(o.normalized());
    if (it == by_key_.end()) return std::nullopt;
    return entries_[it->second].rank;
  }

  const Entry *find(const EntityKey &o) const {
    auto it = by_key_.find(o.normalized());
    return it == by_key_.end() ? nullptr : &entries_[it->second];
  }

  const std::vector<Entry> &entries() const { return entries_; }

  static bool precedes(double sa, const EntityKey &a, double sb,
                       const EntityKey &b) {
    if (sa != sb) return sa > sb;
    return a < b;
  }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> by_key_;
};

inline OpsRanking ops_rank(const EmbeddingStore &store, const Corpus &corpus,
                           const EntityKey &e, const ObjectUniverse &universe,
                           OpsDenominator denominator =
                               OpsDenominator::kEmbedded) {
  if (universe.empty()) throw EmptyUniverse();
  PageContext page(store, corpus, e);
  std::vector<OpsRanking::Entry> entries;
  entries.reserve(universe.size());
  for (const EntityKey &o : universe.objects()) {
    entries.push_back({o, page.ops(store.lookup(o), denominator), 0});
  }
  std::sort(entries.begin(), entries.end(),
            [](const OpsRanking::Entry &a, const OpsRanking::Entry &b) {
              return OpsRanking::precedes(a.ops.value, a.object, b.ops.value,
                                          b.object);
            });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].rank = static_cast<int>(i + 1);
  }
  return OpsRanking(std::move(entries));
}

// 1.0 iff the object is literally mentioned anywhere on the person's page.
inline FeatureValue object_mention_feature(const Corpus &corpus,
                                           const EntityKey &e,
                                           const EntityKey &o) {
  const PageRecord *rec = corpus.find(e);
  if (rec == nullptr) return {0.0, kMissingCorpusRecord};
  return {mentions(*rec, o, MentionScope::kFullPage) ? 1.0 : 0.0,
          kMissingNone};
}

// Counts of triples with each missing input, reported after extraction.
struct MissingSummary {
  std::size_t triples = 0;
  std::size_t entity_embedding = 0;
  std::size_t object_embedding = 0;
  std::size_t page_entities = 0;
  std::size_t corpus_record = 0;
  std::size_t not_in_universe = 0;

  void add(unsigned flags) {
    ++triples;
    if (flags & kMissingEntityEmbedding) ++entity_embedding;
    if (flags & kMissingObjectEmbedding) ++object_embedding;
    if (flags & kMissingPageEntities) ++page_entities;
    if (flags & kMissingCorpusRecord) ++corpus_record;
    if (flags & kObjectNotInUniverse) ++not_in_universe;
  }
};

inline MissingSummary summarize_missing(
    std::span<const FeatureVector> features) {
  MissingSummary s;
  for (const FeatureVector &f : features) s.add(f.missing);
  return s;
}

inline std::ostream &operator<<(std::ostream &os, const MissingSummary &s) {
  return os << "missing inputs over " << s.triples
            << " triples: entity_embedding=" << s.entity_embedding
            << " object_embedding=" << s.object_embedding
            << " page_entities=" << s.page_entities
            << " corpus_record=" << s.corpus_record
            << " not_in_universe=" << s.not_in_universe;
}

// Feature vectors for every triple, in input order. OPS rankings are
// computed once per distinct entity, optionally on several threads; the
// output does not depend on the worker count.
inline std::vector<FeatureVector> extract(const EmbeddingStore &store,
                                          const Corpus &corpus,
                                          const ObjectUniverse &universe,
                                          std::span<const Triple> triples,
                                          const FeatureOptions &options = {}) {
  for (const Triple &t : triples) {
    if (t.relation != universe.relation()) {
      throw RelationMismatch(
          "triple (" + t.entity.raw() + ", " + t.object.raw() +
          ") has relation " + std::string(relation_name(t.relation)) +
          ", universe is " + std::string(relation_name(universe.relation())));
    }
  }
  if (triples.empty()) return {};
  if (universe.empty()) throw EmptyUniverse();

  std::vector<const EntityKey *> entities;
  std::unordered_map<std::string, std::size_t> entity_slot;
  std::vector<std::size_t> slot_of(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    auto [it, inserted] =
        entity_slot.emplace(triples[i].entity.normalized(), entities.size());
    if (inserted) entities.push_back(&triples[i].entity);
    slot_of[i] = it->second;
  }

  std::vector<std::optional<OpsRanking>> rankings(entities.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < entities.size(); k = next++) {
      rankings[k].emplace(ops_rank(store, corpus, *entities[k], universe,
                                   options.ops_denominator));
    }
  };
  unsigned workers = std::max(1u, options.workers);
  if (workers == 1 || entities.size() == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, entities.size());
         ++w) {
      pool.emplace_back(work);
    }
    for (auto &t : pool) t.join();
  }

  std::vector<FeatureVector> out;
  out.reserve(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple &t = triples[i];
    const OpsRanking &ranking = *rankings[slot_of[i]];
    FeatureVector f;
    FeatureValue sim = object_entity_similarity(store, t.entity, t.object);
    FeatureValue o;
    if (const auto *entry = ranking.find(t.object)) {
      o = entry->ops;
    } else {
      o = ops(store, corpus, t.entity, t.object, options.ops_denominator);
    }
    FeatureValue r = ranking.rank_of(t.object, o.value);
    FeatureValue m = object_mention_feature(corpus, t.entity, t.object);
    f.obj_entity_sim = sim.value;
    f.ops = o.value;
    f.ops_rank = r.value;
    f.object_mention = m.value;
    f.missing = sim.missing | o.missing | r.missing | m.missing;
    out.push_back(f);
  }
  return out;
}

inline Matrix to_matrix(std::span<const FeatureVector> features) {
  Matrix m;
  for (const FeatureVector &f : features) {
    auto v = f.values();
    m.append_row(v);
  }
  if (features.empty()) m = Matrix(0, kNumFeatures);
  return m;
}

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline void write_feature_tsv(std::ostream &out,
                              std::span<const Triple> triples,
                              std::span<const FeatureVector> features) {
  out << "entity\tobject";
  for (auto name : kFeatureNames) out << '\t' << name;
  out << "\tmissing\n";
  for (std::size_t i = 0; i < triples.size(); ++i) {
    out << triples[i].entity.raw() << '\t' << triples[i].object.raw();
    for (double v : features[i].values()) out << '\t' << format_double(v);
    out << '\t' << missing_flags_string(features[i].missing) << '\n';
  }
}

// Z-score scaling with training-set statistics. Columns with zero spread are
// centered only.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> means, std::vector<double> stddevs)
      : means_(std::move(means)), stddevs_(std::move(stddevs)) {
    if (means_.size() != stddevs_.size()) {
      throw DimensionMismatch("standardizer means/stddevs length differ");
    }
  }

  // Identity transform over `cols` columns.
  static Standardizer identity(std::size_t cols) {
    return Standardizer(std::vector<double>(cols, 0.0),
                        std::vector<double>(cols, 1.0));
  }

  static Standardizer fit(const Matrix &x) {
    if (x.empty()) throw EmptyTrainingSet();
    std::size_t p = x.cols();
    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    double n = static_cast<double>(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < p; ++j) mean[j] += x(i, j);
    }
    for (double &m : mean) m /= n;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < p; ++j) {
        double d = x(i, j) - mean[j];
        sd[j] += d * d;
      }
    }
    for (double &s : sd) s = std::sqrt(s / n);
    return Standardizer(std::move(mean), std::move(sd));
  }

  Matrix apply(const Matrix &x) const {
    if (x.cols() != means_.size() && !x.empty()) {
      throw DimensionMismatch("standardizer fitted on " +
                              std::to_string(means_.size()) +
                              " columns, input has " +
                              std::to_string(x.cols()));
    }
    Matrix out(x.rows(), means_.size());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < means_.size(); ++j) {
        double centered = x(i, j) - means_[j];
        out(i, j) = stddevs_[j] > 0.0 ? centered / stddevs_[j] : centered;
      }
    }
    return out;
  }

  const std::vector<double> &means() const { return means_; }
  const std::vector<double> &stddevs() const { return stddevs_; }

  friend bool operator==(const Standardizer &, const Standardizer &) = default;

 private:
  std::vector<double> means_;
  std::vector<double> stddevs_;
};

inline Standardizer fit_standardizer(std::span<const FeatureVector> features) {
  if (features.empty()) throw EmptyTrainingSet();
  return Standardizer::fit(to_matrix(features));
}

inline Matrix apply_standardizer(const Standardizer &s,
                                 std::span<const FeatureVector> features) {
  return s.apply(to_matrix(features));
}

}  // namespace triplescore

#endif  // TRIPLESCORE_FEATURES_HPP_
