#pragma once

// Pseudocorrection simulation: each concept is given k synthetic erroneous
// "pseudo-original" translations, borrowed from other concepts of the same
// language, and then "corrected" back to its true translation.
//
// Sampling is reproducible across platforms:
//   stream seed = splitmix64(seed ^ splitmix64(fnv1a(language)) ^ splitmix64(fnv1a(concept)) * 3)
//   engine      = std::mt19937_64 seeded with the stream seed (algorithm fixed by the standard)
//   draws       = rejection sampling on raw 64-bit outputs (no std::*_distribution)
//   donors      = partial Fisher-Yates over eligible donors sorted by concept id
// Each concept's stream depends only on (seed, language, concept), so row
// order and unrelated cells never change the draw.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <filesystem>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cccl/embedding_store.hpp"
#include "cccl/error.hpp"
#include "cccl/inventory.hpp"
#include "cccl/similarity.hpp"
#include "cccl/text.hpp"

namespace cccl {

inline constexpr unsigned kDefaultPseudoSamples = 10;

struct PseudoCorrectionSample {
  ConceptId concept_id;
  LanguageCode language;
  ConceptId donor_concept;
  std::string pseudo_original_surface;
  std::string corrected_surface;
  unsigned sample_index = 0;

  friend bool operator==(const PseudoCorrectionSample&, const PseudoCorrectionSample&) = default;
};

namespace rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline std::uint64_t stream_seed(std::uint64_t seed, std::string_view language, std::string_view concept_id) {
  return splitmix64(seed ^ splitmix64(fnv1a(language)) ^ (splitmix64(fnv1a(concept_id)) * 3));
}

/// Uniform integer in [0, bound) from raw 64-bit draws; bound > 0.
inline std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound) {
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace rng

/// k samples per active concept in `language`, ordered by (concept, sample_index).
inline std::vector<PseudoCorrectionSample> generate_pseudocorrections(const ConceptInventory& inv,
                                                                      const LanguageCode& language, unsigned k,
                                                                      std::uint64_t seed) {
  if (!inv.has_language(language)) throw InputError("language '" + language.str() + "' not in inventory");
  if (language == inv.source_language())
    throw InputError("pseudocorrections need a test language, not the source '" + language.str() + "'");
  if (k == 0) throw InputError("k must be positive");
  if (inv.size() < static_cast<std::size_t>(k) + 1)
    throw InputError("k = " + std::to_string(k) + " needs at least " + std::to_string(k + 1) + " concepts, inventory has " +
                     std::to_string(inv.size()));

  std::vector<ConceptId> ids = inv.concepts();
  std::sort(ids.begin(), ids.end());

  std::vector<PseudoCorrectionSample> out;
  out.reserve(ids.size() * k);
  for (const auto& target : ids) {
    const auto& correct = inv.surface(target, language);
    std::vector<const ConceptId*> eligible;
    for (const auto& d : ids)
      if (d != target && inv.surface(d, language) != correct) eligible.push_back(&d);
    if (eligible.size() < k)
      throw InputError("concept '" + target.str() + "' has only " + std::to_string(eligible.size()) +
                       " eligible donors in '" + language.str() + "', k = " + std::to_string(k));

    std::mt19937_64 eng(rng::stream_seed(seed, language.str(), target.str()));
    for (unsigned i = 0; i < k; ++i) {
      auto j = i + rng::uniform_below(eng, eligible.size() - i);
      std::swap(eligible[i], eligible[j]);
      const ConceptId& donor = *eligible[i];
      out.push_back({target, language, donor, inv.surface(donor, language), correct, i});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

/// Text and image keys for one sample. The pseudo-original prompt is the
/// donor's own cell, so unless the store holds dedicated (concept, language,
/// pseudo:K) entries, the donor's original entries are used.
inline ScoreRequest make_pseudo_request(const PseudoCorrectionSample& s, const LanguageCode& source_language,
                                        const EmbeddingStore& images, const EmbeddingStore& texts) {
  ScoreRequest r = make_score_request(s.concept_id, s.language, source_language);
  const auto pseudo = Variant::pseudo(s.sample_index);
  // The "correction" restores the concept's own original cell.
  r.text_corrected = EmbeddingKey::text(s.concept_id, s.language, Variant::original());
  r.pop_corrected = EmbeddingKey::image(s.concept_id, s.language, Variant::original(), 0);

  auto dedicated_text = EmbeddingKey::text(s.concept_id, s.language, pseudo);
  r.text_original = texts.contains(dedicated_text) ? dedicated_text
                                                   : EmbeddingKey::text(s.donor_concept, s.language, Variant::original());
  auto dedicated_pop = EmbeddingKey::image(s.concept_id, s.language, pseudo, 0);
  r.pop_original = images.contains(dedicated_pop)
                       ? dedicated_pop
                       : EmbeddingKey::image(s.donor_concept, s.language, Variant::original(), 0);
  return r;
}

inline void check_sample(const PseudoCorrectionSample& s) {
  if (s.donor_concept == s.concept_id)
    throw InputError("pseudocorrection sample for '" + s.concept_id.str() + "' uses itself as donor");
  if (s.pseudo_original_surface == s.corrected_surface)
    throw InputError("pseudocorrection sample for '" + s.concept_id.str() + "' (" + s.language.str() +
                     ") has identical pseudo-original and corrected surfaces");
}

/// One result per sample in (language, concept, sample_index) order; error
/// types are empty. Missing embeddings are reported all at once.
inline std::vector<ConceptResult> evaluate_pseudocorrections(std::span<const PseudoCorrectionSample> samples,
                                                             const LanguageCode& source_language,
                                                             const EmbeddingStore& image_store,
                                                             const EmbeddingStore& text_store,
                                                             const std::string& model_id) {
  std::vector<const PseudoCorrectionSample*> ordered;
  std::set<std::tuple<LanguageCode, ConceptId, unsigned>> seen;
  for (const auto& s : samples) {
    check_sample(s);
    if (!seen.emplace(s.language, s.concept_id, s.sample_index).second)
      throw InputError("duplicate pseudocorrection sample " + s.concept_id.str() + "/" + s.language.str() + "/" +
                       std::to_string(s.sample_index));
    ordered.push_back(&s);
  }
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) {
    return std::tie(a->language, a->concept_id, a->sample_index) < std::tie(b->language, b->concept_id, b->sample_index);
  });

  std::vector<ScoreRequest> requests;
  requests.reserve(ordered.size());
  for (auto* s : ordered) requests.push_back(make_pseudo_request(*s, source_language, image_store, text_store));
  if (auto missing = find_missing(requests, image_store, text_store); !missing.empty())
    throw MissingEmbeddingsError(std::move(missing));

  std::vector<ConceptResult> results;
  results.reserve(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    auto res = evaluate_request(requests[i], image_store, text_store);
    res.model_id = model_id;
    res.original_surface = ordered[i]->pseudo_original_surface;
    res.corrected_surface = ordered[i]->corrected_surface;
    res.sample_index = ordered[i]->sample_index;
    res.donor = ordered[i]->donor_concept;
    results.push_back(std::move(res));
  }
  return results;
}

// ---------------------------------------------------------------------------
// Samples TSV: concept, language, sample_index, donor_concept, pseudo_original, corrected

inline std::string format_samples(std::span<const PseudoCorrectionSample> samples) {
  std::string out = "concept\tlanguage\tsample_index\tdonor_concept\tpseudo_original\tcorrected\n";
  for (const auto& s : samples)
    out += text::join({s.concept_id.str(), s.language.str(), std::to_string(s.sample_index), s.donor_concept.str(),
                       s.pseudo_original_surface, s.corrected_surface}) +
           "\n";
  return out;
}

inline std::vector<PseudoCorrectionSample> load_samples(const std::filesystem::path& path) {
  auto lines = text::read_lines(path);
  std::vector<PseudoCorrectionSample> out;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto cols = text::split(lines[ln]);
    if (ln == 0 && cols[0] == "concept") continue;
    if (cols.size() != 6) throw ParseError(path.string(), ln + 1, "expected 6 columns");
    auto idx = text::parse_int<unsigned>(cols[2]);
    if (!idx) throw ParseError(path.string(), ln + 1, "bad sample_index '" + cols[2] + "'");
    out.push_back({ConceptId(cols[0]), LanguageCode(cols[1]), ConceptId(cols[3]), cols[4], cols[5], *idx});
  }
  return out;
}

}  // namespace cccl
