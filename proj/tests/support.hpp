#pragma once

// Shared helpers for the test binaries: fixture paths, scratch directories,
// random vectors, brute-force oracles and synthetic stores.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cccl/cccl.hpp"

namespace cccl::support {

inline std::filesystem::path fixture(std::string_view name) { return std::filesystem::path(CCCL_FIXTURE_DIR) / name; }

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("cccl-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Components ~ U(-1, 1); zero-norm draws are rejected.
inline std::vector<double> random_components(std::mt19937_64& rng, std::size_t dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    std::vector<double> v(dim);
    double norm = 0.0;
    for (auto& x : v) {
      x = u(rng);
      norm += x * x;
    }
    if (norm > 0.0) return v;
  }
}

inline EmbeddingVector random_vector(std::mt19937_64& rng, std::size_t dim) {
  return EmbeddingVector(random_components(rng, dim));
}

inline std::vector<EmbeddingVector> random_population(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::vector<EmbeddingVector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_vector(rng, dim));
  return out;
}

// Long-double double loop with separately computed norms; shares no code
// with the library.
inline double brute_force_cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  long double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += static_cast<long double>(a[i]) * b[i];
    na += static_cast<long double>(a[i]) * a[i];
    nb += static_cast<long double>(b[i]) * b[i];
  }
  return static_cast<double>(dot / (std::sqrt(na) * std::sqrt(nb)));
}

inline double brute_force_xc(const std::vector<EmbeddingVector>& test, const std::vector<EmbeddingVector>& source) {
  long double sum = 0;
  for (const auto& t : test)
    for (const auto& s : source) sum += brute_force_cosine(t, s);
  return static_cast<double>(sum / static_cast<long double>(test.size() * source.size()));
}

inline std::vector<EmbeddingVector> scaled(const std::vector<EmbeddingVector>& pop, const std::vector<double>& factors) {
  std::vector<EmbeddingVector> out;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    std::vector<double> v(pop[i].values().begin(), pop[i].values().end());
    for (auto& x : v) x *= factors[i];
    out.emplace_back(std::move(v));
  }
  return out;
}

inline void put_population(EmbeddingStore& store, const ConceptId& c, const LanguageCode& l, Variant v,
                           const std::vector<EmbeddingVector>& pop) {
  for (std::size_t i = 0; i < pop.size(); ++i) store.put(EmbeddingKey::image(c, l, v, i), pop[i]);
}

// ---------------------------------------------------------------------------
// Planted-line fixture
//
// Every vector lives in 3-D with the source direction e1. A vector
// (c, s cos phi, s sin phi) with s = sqrt(1 - c^2) has cosine c with e1 for
// any phi and any positive scale, so populations can vary member to member
// while their X_c against an all-e1 source population is exactly c.

struct PlantedFixture {
  ConceptInventory inventory;
  std::vector<CorrectionRecord> corrections;
  EmbeddingStore text;
  EmbeddingStore images;
  std::vector<double> delta_sem;  // planted, per correction
  std::vector<double> delta_xc;
};

inline EmbeddingVector at_cosine(double c, double phi, double scale) {
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  return EmbeddingVector({scale * c, scale * s * std::cos(phi), scale * s * std::sin(phi)});
}

inline PlantedFixture make_planted(std::size_t concepts, double slope, double intercept, std::size_t n,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586), scale(0.5, 3.0), dsem(-0.1, 0.1);
  const LanguageCode en("en"), ja("ja");
  PlantedFixture f;
  f.inventory = ConceptInventory("v1", {en, ja});
  f.text = EmbeddingStore(3, "planted-text");
  f.images = EmbeddingStore(3, "planted-image");
  for (std::size_t i = 0; i < concepts; ++i) {
    const std::string name = "concept" + std::to_string(i);
    const ConceptId c(name);
    f.inventory.add_concept(c, {name, name + "-ja"});
    f.corrections.push_back({c, ja, name + "-ja", name + "-ja2", ErrorSet{ErrorType::C}, ""});

    const double d = dsem(rng);
    const double a = 0.5;  // cos(source, original)
    const double dx = slope * d + intercept;
    const double u = 0.3;  // X_c of the original population
    f.delta_sem.push_back(d);
    f.delta_xc.push_back(dx);

    f.text.put(EmbeddingKey::text(c, en, Variant::original()), at_cosine(1.0, 0.0, scale(rng)));
    f.text.put(EmbeddingKey::text(c, ja, Variant::original()), at_cosine(a, angle(rng), scale(rng)));
    f.text.put(EmbeddingKey::text(c, ja, Variant::corrected()), at_cosine(a + d, angle(rng), scale(rng)));
    for (std::size_t k = 0; k < n; ++k) {
      f.images.put(EmbeddingKey::image(c, en, Variant::original(), k), at_cosine(1.0, 0.0, scale(rng)));
      f.images.put(EmbeddingKey::image(c, ja, Variant::original(), k), at_cosine(u, angle(rng), scale(rng)));
      f.images.put(EmbeddingKey::image(c, ja, Variant::corrected(), k), at_cosine(u + dx, angle(rng), scale(rng)));
    }
  }
  return f;
}

/// Random text vector and image population for every cell of `inv`.
inline void fill_random(const ConceptInventory& inv, EmbeddingStore& text, EmbeddingStore& images, std::size_t n,
                        std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (const auto& t : inv.translations()) {
    text.put(EmbeddingKey::text(t.concept_id, t.language, t.variant), random_vector(rng, dim));
    put_population(images, t.concept_id, t.language, t.variant, random_population(rng, n, dim));
  }
}

}  // namespace cccl::support
