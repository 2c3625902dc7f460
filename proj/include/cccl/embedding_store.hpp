#pragma once

// Keyed storage of text and image embedding vectors with JSONL persistence.
//
// Store file:
//   {"dim": D, "extractor_id": "..."}
//   {"concept": "...", "language": "...", "variant": "original|corrected|pseudo:K",
//    "modality": "text|image", "index": i, "vec": [...]}
//   ...
//
// Vectors are kept exactly as the extractor produced them (no
// renormalization); cosine similarity normalizes at use.

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cccl/error.hpp"
#include "cccl/text.hpp"
#include "cccl/types.hpp"

namespace cccl {

enum class Modality : std::uint8_t { text, image };

inline std::string_view to_string(Modality m) { return m == Modality::text ? "text" : "image"; }

inline Modality parse_modality(std::string_view s) {
  if (s == "text") return Modality::text;
  if (s == "image") return Modality::image;
  throw InputError("bad modality '" + std::string(s) + "'");
}

struct EmbeddingKey {
  ConceptId concept_id;
  LanguageCode language;
  Variant variant = Variant::original();
  Modality modality = Modality::text;
  std::size_t index = 0;  // image sample index; always 0 for text

  static EmbeddingKey text(ConceptId c, LanguageCode l, Variant v) {
    return {std::move(c), std::move(l), v, Modality::text, 0};
  }
  static EmbeddingKey image(ConceptId c, LanguageCode l, Variant v, std::size_t i) {
    return {std::move(c), std::move(l), v, Modality::image, i};
  }

  // "rock|ja|corrected" (the manifest key), with modality and index appended.
  std::string prefix() const { return concept_id.str() + "|" + language.str() + "|" + variant.str(); }
  std::string str() const { return prefix() + "|" + std::string(to_string(modality)) + "|" + std::to_string(index); }

  friend auto operator<=>(const EmbeddingKey& a, const EmbeddingKey& b) {
    return std::tie(a.concept_id, a.language, a.variant, a.modality, a.index) <=>
           std::tie(b.concept_id, b.language, b.variant, b.modality, b.index);
  }
  friend bool operator==(const EmbeddingKey&, const EmbeddingKey&) = default;
};

/// Fixed-dimension real vector; finite components only.
class EmbeddingVector {
 public:
  EmbeddingVector() = default;
  explicit EmbeddingVector(std::vector<double> components) : v_(std::move(components)) {
    if (v_.empty()) throw InputError("embedding vector must have positive dimension");
    for (double x : v_)
      if (!std::isfinite(x)) throw InputError("embedding vector has non-finite component");
  }
  EmbeddingVector(std::initializer_list<double> components) : EmbeddingVector(std::vector<double>(components)) {}

  std::size_t dim() const noexcept { return v_.size(); }
  std::span<const double> values() const noexcept { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;

 private:
  std::vector<double> v_;
};

// Single writer / many readers: const access is safe to share, mutation
// needs exclusive access.
class EmbeddingStore {
 public:
  using Map = std::map<EmbeddingKey, EmbeddingVector>;

  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dim, std::string extractor_id = {})
      : dim_(dim), extractor_id_(std::move(extractor_id)) {
    if (dim == 0) throw InputError("store dimension must be positive");
  }

  /// Unset until the first put (or an explicit dim on construction).
  std::optional<std::size_t> dim() const noexcept { return dim_ ? std::optional(dim_) : std::nullopt; }
  const std::string& extractor_id() const noexcept { return extractor_id_; }
  void set_extractor_id(std::string id) { extractor_id_ = std::move(id); }

  void put(const EmbeddingKey& key, EmbeddingVector vec) {
    if (key.modality == Modality::text && key.index != 0) throw InputError("text keys must have index 0: " + key.str());
    if (dim_ == 0) dim_ = vec.dim();
    if (vec.dim() != dim_) throw DimensionError(dim_, vec.dim());
    entries_.insert_or_assign(key, std::move(vec));
  }

  const EmbeddingVector* get(const EmbeddingKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }
  bool contains(const EmbeddingKey& key) const { return entries_.contains(key); }

  /// Image vectors for one prompt, ordered by sample index. Empty when none.
  std::vector<EmbeddingVector> population(const ConceptId& c, const LanguageCode& l, Variant v) const {
    std::vector<EmbeddingVector> out;
    auto it = entries_.lower_bound(EmbeddingKey::image(c, l, v, 0));
    for (; it != entries_.end(); ++it) {
      const auto& k = it->first;
      if (k.concept_id != c || k.language != l || k.variant != v || k.modality != Modality::image) break;
      if (k.index != out.size())
        throw InputError("image population " + k.prefix() + " has a gap before index " + std::to_string(k.index));
      out.push_back(it->second);
    }
    return out;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Map& entries() const noexcept { return entries_; }

  friend bool operator==(const EmbeddingStore&, const EmbeddingStore&) = default;

 private:
  std::size_t dim_ = 0;
  std::string extractor_id_;
  Map entries_;
};

// ---------------------------------------------------------------------------
// JSONL persistence

inline std::string format_store(const EmbeddingStore& store) {
  using nlohmann::json;
  std::string out = json{{"dim", store.dim().value_or(0)}, {"extractor_id", store.extractor_id()}}.dump() + "\n";
  for (const auto& [k, v] : store.entries()) {
    json line = {{"concept", k.concept_id.str()},   {"language", k.language.str()},
                 {"variant", k.variant.str()},   {"modality", std::string(to_string(k.modality))},
                 {"index", k.index},             {"vec", std::vector<double>(v.values().begin(), v.values().end())}};
    out += line.dump() + "\n";
  }
  return out;
}

inline void save_store(const EmbeddingStore& store, const std::filesystem::path& path) {
  text::write_file_atomic(path, format_store(store));
}

inline EmbeddingStore parse_store(const std::vector<std::string>& lines, const std::string& name) {
  using nlohmann::json;
  if (lines.empty() || text::is_blank(lines[0])) throw ParseError(name, 1, "missing header line");
  EmbeddingStore store;
  std::size_t dim = 0;
  try {
    auto header = json::parse(lines[0]);
    dim = header.at("dim").get<std::size_t>();
    if (dim > 0) store = EmbeddingStore(dim);
    store.set_extractor_id(header.value("extractor_id", std::string{}));
  } catch (const json::exception& e) {
    throw ParseError(name, 1, std::string("bad header: ") + e.what());
  }
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (text::is_blank(lines[ln])) continue;
    const std::size_t lineno = ln + 1;
    try {
      auto j = json::parse(lines[ln]);
      auto key = EmbeddingKey{ConceptId(j.at("concept").get<std::string>()),
                              LanguageCode(j.at("language").get<std::string>()),
                              Variant::parse(j.at("variant").get<std::string>()),
                              parse_modality(j.at("modality").get<std::string>()), j.at("index").get<std::size_t>()};
      EmbeddingVector vec(j.at("vec").get<std::vector<double>>());
      if (dim == 0) throw ParseError(name, lineno, "entry present but header dim is 0");
      if (vec.dim() != dim)
        throw ParseError(name, lineno,
                         "mixed dimensions: header says " + std::to_string(dim) + ", entry has " +
                             std::to_string(vec.dim()));
      store.put(key, std::move(vec));
    } catch (const ParseError&) {
      throw;
    } catch (const json::exception& e) {
      throw ParseError(name, lineno, std::string("malformed entry: ") + e.what());
    } catch (const InputError& e) {
      throw ParseError(name, lineno, e.what());
    }
  }
  return store;
}

inline EmbeddingStore load_store(const std::filesystem::path& path) {
  return parse_store(text::read_lines(path), path.string());
}

}  // namespace cccl
