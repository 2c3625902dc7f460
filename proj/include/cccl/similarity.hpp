#pragma once

// Correctness measurements over embedding populations.
//
//   cross-consistency  X_c(test, source) = mean over all (i, j) of cos(test_i, source_j)
//   correction impact  dXc  = X_c(corrected, source) - X_c(original, source)
//   correction signif. dSEM = cos(e_source, e_corrected) - cos(e_source, e_original)
//
// Populations hold n_t and n_s vectors (9 each by default); the mean runs
// over exactly n_t * n_s pairs.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cccl/embedding_store.hpp"
#include "cccl/error.hpp"
#include "cccl/inventory.hpp"
#include "cccl/types.hpp"

namespace cccl {

inline constexpr std::size_t kDefaultPopulationSize = 9;

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError(a.size(), b.size());
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw InputError("cosine similarity of a zero-norm vector");
  // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): for a == b this is exactly
  // na, so self-similarity is exactly 1.
  double c = dot / std::sqrt(na * nb);
  return std::clamp(c, -1.0, 1.0);
}

inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  return cosine_similarity(a.values(), b.values());
}

/// Image vectors generated from one (concept, language, variant) prompt.
struct ImagePopulation {
  ConceptId concept_id;
  LanguageCode language;
  Variant variant = Variant::original();
  std::vector<EmbeddingVector> vectors;

  std::size_t size() const noexcept { return vectors.size(); }
};

inline double cross_consistency(std::span<const EmbeddingVector> test, std::span<const EmbeddingVector> source) {
  if (test.empty() || source.empty()) throw InputError("cross-consistency needs non-empty populations");
  // Sorting the pairwise terms before summing makes the result independent
  // of argument order, bit for bit.
  std::vector<double> terms;
  terms.reserve(test.size() * source.size());
  for (const auto& t : test)
    for (const auto& s : source) terms.push_back(cosine_similarity(t, s));
  std::sort(terms.begin(), terms.end());
  CompensatedSum sum;
  for (double x : terms) sum.add(x);
  return std::clamp(sum.value() / static_cast<double>(terms.size()), -1.0, 1.0);
}

inline double cross_consistency(const ImagePopulation& test, const ImagePopulation& source) {
  return cross_consistency(std::span<const EmbeddingVector>(test.vectors),
                           std::span<const EmbeddingVector>(source.vectors));
}

inline double delta_xc(const ImagePopulation& original, const ImagePopulation& corrected, const ImagePopulation& source) {
  return cross_consistency(corrected, source) - cross_consistency(original, source);
}

inline double delta_sem(const EmbeddingVector& source, const EmbeddingVector& original,
                        const EmbeddingVector& corrected) {
  return cosine_similarity(source, corrected) - cosine_similarity(source, original);
}

struct ConceptResult {
  ConceptId concept_id;
  LanguageCode language;
  std::string model_id;
  std::string original_surface;
  std::string corrected_surface;
  double xc_original = 0.0;
  double xc_corrected = 0.0;
  double delta_xc = 0.0;
  double delta_sem = 0.0;
  ErrorSet error_types;  // empty for pseudocorrections
  // Set only for pseudocorrection results.
  std::optional<unsigned> sample_index;
  std::optional<ConceptId> donor;
};

// ---------------------------------------------------------------------------
// Scoring against stores

/// Which store entries one correction needs. The pseudocorrection module
/// reuses this with donor cells standing in for the original.
struct ScoreRequest {
  ConceptId concept_id;
  LanguageCode language;
  LanguageCode source_language;
  EmbeddingKey text_source, text_original, text_corrected;
  // Population prefixes: (concept, language, variant).
  EmbeddingKey pop_source, pop_original, pop_corrected;
};

namespace detail {

// Collects missing keys instead of throwing, so one pass can report all.
struct Lookup {
  const EmbeddingStore& images;
  const EmbeddingStore& texts;
  std::vector<std::string>& missing;

  const EmbeddingVector* text(const EmbeddingKey& k) const {
    auto* v = texts.get(k);
    if (!v) missing.push_back("text " + k.prefix());
    return v;
  }

  std::vector<EmbeddingVector> population(const EmbeddingKey& prefix) const {
    auto pop = images.population(prefix.concept_id, prefix.language, prefix.variant);
    if (pop.empty()) missing.push_back("image population " + prefix.prefix());
    return pop;
  }
};

inline void sort_and_dedupe(std::vector<std::string>& keys) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
}

}  // namespace detail

inline ScoreRequest make_score_request(const ConceptId& concept_id, const LanguageCode& language,
                                       const LanguageCode& source_language) {
  auto pop = [](const ConceptId& c, const LanguageCode& l, Variant v) { return EmbeddingKey::image(c, l, v, 0); };
  return {concept_id,
          language,
          source_language,
          EmbeddingKey::text(concept_id, source_language, Variant::original()),
          EmbeddingKey::text(concept_id, language, Variant::original()),
          EmbeddingKey::text(concept_id, language, Variant::corrected()),
          pop(concept_id, source_language, Variant::original()),
          pop(concept_id, language, Variant::original()),
          pop(concept_id, language, Variant::corrected())};
}

/// Lists every key `requests` need that either store lacks; sorted, unique.
inline std::vector<std::string> find_missing(std::span<const ScoreRequest> requests, const EmbeddingStore& images,
                                             const EmbeddingStore& texts) {
  std::vector<std::string> missing;
  detail::Lookup look{images, texts, missing};
  for (const auto& r : requests) {
    look.text(r.text_source);
    look.text(r.text_original);
    look.text(r.text_corrected);
    look.population(r.pop_source);
    look.population(r.pop_original);
    look.population(r.pop_corrected);
  }
  detail::sort_and_dedupe(missing);
  return missing;
}

/// Computes X_c pair, dXc and dSEM for one request. Stores must be complete.
inline ConceptResult evaluate_request(const ScoreRequest& r, const EmbeddingStore& images,
                                      const EmbeddingStore& texts) {
  std::vector<std::string> missing;
  detail::Lookup look{images, texts, missing};
  auto* ts = look.text(r.text_source);
  auto* to = look.text(r.text_original);
  auto* tc = look.text(r.text_corrected);
  auto ps = look.population(r.pop_source);
  auto po = look.population(r.pop_original);
  auto pc = look.population(r.pop_corrected);
  if (!missing.empty()) throw MissingEmbeddingsError(std::move(missing));

  ConceptResult out;
  out.concept_id = r.concept_id;
  out.language = r.language;
  out.xc_original = cross_consistency(po, ps);
  out.xc_corrected = cross_consistency(pc, ps);
  out.delta_xc = out.xc_corrected - out.xc_original;
  out.delta_sem = delta_sem(*ts, *to, *tc);
  return out;
}

/// One result per correction, ordered by (language, concept). Any missing
/// embedding aborts the whole call before scoring, listing all of them.
inline std::vector<ConceptResult> score_concepts(const ConceptInventory& inv,
                                                 std::span<const CorrectionRecord> corrections,
                                                 const EmbeddingStore& image_store, const EmbeddingStore& text_store,
                                                 const std::string& model_id) {
  cross_validate(inv, corrections);
  std::vector<const CorrectionRecord*> ordered;
  for (const auto& c : corrections) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) {
    return std::tie(a->language, a->concept_id) < std::tie(b->language, b->concept_id);
  });

  std::vector<ScoreRequest> requests;
  for (auto* c : ordered) requests.push_back(make_score_request(c->concept_id, c->language, inv.source_language()));
  if (auto missing = find_missing(requests, image_store, text_store); !missing.empty())
    throw MissingEmbeddingsError(std::move(missing));

  std::vector<ConceptResult> results;
  results.reserve(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    auto res = evaluate_request(requests[i], image_store, text_store);
    res.model_id = model_id;
    res.original_surface = ordered[i]->original;
    res.corrected_surface = ordered[i]->corrected;
    res.error_types = ordered[i]->error_types;
    results.push_back(std::move(res));
  }
  return results;
}

}  // namespace cccl
