#include <gtest/gtest.h>

#include <map>
#include <random>

#include "cccl/pseudocorrection.hpp"
#include "support.hpp"

using namespace cccl;

namespace {

const LanguageCode kId("id"), kDe("de"), kHe("he"), kEn("en");

ConceptInventory fixture_inventory() { return load_inventory(support::fixture("cccl_v1.tsv")); }

}  // namespace

TEST(Rng, SplitmixReferenceValues) {
  // First outputs of the reference splitmix64 generator seeded with 0 are
  // successive applications to 0, 0x9E37..., 2*0x9E37...
  EXPECT_EQ(rng::splitmix64(0), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(rng::splitmix64(0x9E3779B97F4A7C15ull), 0x6E789E6AA1B965F4ull);
  EXPECT_EQ(rng::fnv1a(""), 0xCBF29CE484222325ull);
  EXPECT_EQ(rng::fnv1a("a"), 0xAF63DC4C8601EC8Cull);
}

TEST(Rng, UniformBelowCoversRange) {
  std::mt19937_64 eng(1);
  std::vector<int> seen(7, 0);
  for (int i = 0; i < 7000; ++i) ++seen[rng::uniform_below(eng, 7)];
  for (int c : seen) EXPECT_GT(c, 800);
  EXPECT_EQ(rng::uniform_below(eng, 1), 0u);
}

TEST(Generate, FixtureGives1930SamplesPerLanguage) {
  auto inv = fixture_inventory();
  for (const auto& l : {kDe, kId, kHe}) {
    auto s = generate_pseudocorrections(inv, l, 10, 42);
    EXPECT_EQ(s.size(), 1930u);
  }
}

TEST(Generate, SamplesAreOrderedAndWellFormed) {
  auto inv = fixture_inventory();
  auto samples = generate_pseudocorrections(inv, kId, 10, 7);
  std::map<ConceptId, std::set<ConceptId>> donors;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    EXPECT_NE(s.donor_concept, s.concept_id);
    EXPECT_NE(s.pseudo_original_surface, s.corrected_surface);
    EXPECT_EQ(s.corrected_surface, inv.surface(s.concept_id, kId));
    EXPECT_EQ(s.pseudo_original_surface, inv.surface(s.donor_concept, kId));
    EXPECT_EQ(s.sample_index, i % 10);
    EXPECT_TRUE(donors[s.concept_id].insert(s.donor_concept).second) << "repeated donor for " << s.concept_id;
    if (i > 0) {
      EXPECT_LE(samples[i - 1].concept_id, s.concept_id);
    }
  }
  EXPECT_EQ(donors.size(), 193u);
}

TEST(Generate, SameSeedIsByteIdentical) {
  auto inv = fixture_inventory();
  auto a = generate_pseudocorrections(inv, kHe, 10, 2024);
  auto b = generate_pseudocorrections(inv, kHe, 10, 2024);
  EXPECT_EQ(a, b);
  EXPECT_EQ(format_samples(a), format_samples(b));
  EXPECT_NE(format_samples(a), format_samples(generate_pseudocorrections(inv, kHe, 10, 2025)));
}

TEST(Generate, TwoConceptsDonateToEachOther) {
  auto inv = parse_inventory({"concept\ten\tid", "eye\teye\tmata", "teacher\tteacher\tguru"}, "two.tsv");
  auto s = generate_pseudocorrections(inv, kId, 1, 0);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].concept_id, ConceptId("eye"));
  EXPECT_EQ(s[0].donor_concept, ConceptId("teacher"));
  EXPECT_EQ(s[0].pseudo_original_surface, "guru");
  EXPECT_EQ(s[0].corrected_surface, "mata");
  EXPECT_EQ(s[1].donor_concept, ConceptId("eye"));
}

TEST(Generate, HomographDonorsAreExcluded) {
  auto inv = parse_inventory({"concept\ten\tja", "teacher\tteacher\t先生", "doctor\tdoctor\t先生", "rock\trock\t岩"},
                             "homograph.tsv");
  auto s = generate_pseudocorrections(inv, LanguageCode("ja"), 1, 3);
  for (const auto& x : s) {
    if (x.concept_id != ConceptId("rock")) {
      EXPECT_EQ(x.donor_concept, ConceptId("rock"));
    }
  }
  EXPECT_THROW(generate_pseudocorrections(inv, LanguageCode("ja"), 2, 3), InputError);
}

TEST(Generate, RejectsBadArguments) {
  auto inv = fixture_inventory();
  EXPECT_THROW(generate_pseudocorrections(inv, LanguageCode("fr"), 10, 0), InputError);
  EXPECT_THROW(generate_pseudocorrections(inv, kEn, 10, 0), InputError);
  EXPECT_THROW(generate_pseudocorrections(inv, kId, 0, 0), InputError);
  EXPECT_THROW(generate_pseudocorrections(inv, kId, 193, 0), InputError);
  EXPECT_NO_THROW(generate_pseudocorrections(inv, kId, 192, 0));
}

TEST(Generate, IrrelevantCellChangeLeavesSamplesUnchanged) {
  auto inv = fixture_inventory();
  auto before = generate_pseudocorrections(inv, kId, 10, 99);
  auto edited = inv;
  edited.set_surface(ConceptId("rock"), kDe, "Felsen");
  edited.set_surface(ConceptId("dog"), LanguageCode("ja"), "いぬ");
  EXPECT_EQ(generate_pseudocorrections(edited, kId, 10, 99), before);
}

TEST(Generate, RowOrderDoesNotMatter) {
  auto lines = text::read_lines(support::fixture("cccl_v1.tsv"));
  auto a = parse_inventory(lines, "a");
  std::mt19937_64 rng(5);
  std::shuffle(lines.begin() + 1, lines.end(), rng);
  auto b = parse_inventory(lines, "b");
  EXPECT_EQ(generate_pseudocorrections(a, kId, 10, 1), generate_pseudocorrections(b, kId, 10, 1));
}

TEST(Generate, DonorFrequenciesAreUniform) {
  // 12 concepts with distinct surfaces: each target has 11 eligible donors,
  // drawn 3 at a time. Over many seeds every donor should appear with
  // probability 3/11.
  std::vector<std::string> lines = {"concept\ten\tid"};
  for (int i = 0; i < 12; ++i) lines.push_back("c" + std::to_string(i) + "\tc" + std::to_string(i) + "\tw" + std::to_string(i));
  auto inv = parse_inventory(lines, "uniform.tsv");
  const ConceptId target("c5");
  const int seeds = 4000;
  std::map<ConceptId, int> counts;
  for (int seed = 0; seed < seeds; ++seed)
    for (const auto& s : generate_pseudocorrections(inv, kId, 3, static_cast<std::uint64_t>(seed)))
      if (s.concept_id == target) ++counts[s.donor_concept];
  ASSERT_EQ(counts.size(), 11u);
  const double expected = seeds * 3.0 / 11.0;
  const double sd = std::sqrt(seeds * (3.0 / 11.0) * (8.0 / 11.0));
  double chi2 = 0.0;
  for (const auto& [donor, c] : counts) {
    EXPECT_LT(std::abs(c - expected), 3 * sd) << donor;
    chi2 += (c - expected) * (c - expected) / expected;
  }
  // 10 degrees of freedom; the 0.999 quantile is 29.59.
  EXPECT_LT(chi2, 29.59);
}

TEST(SamplesFile, RoundTrip) {
  auto inv = fixture_inventory();
  auto samples = generate_pseudocorrections(inv, kId, 10, 5);
  support::TempDir dir;
  text::write_file_atomic(dir / "s.tsv", format_samples(samples));
  EXPECT_EQ(load_samples(dir / "s.tsv"), samples);
}

// ---------------------------------------------------------------------------

TEST(Evaluate, UsesDonorOriginalAndOwnCell) {
  auto inv = parse_inventory({"concept\ten\tid", "eye\teye\tmata", "teacher\tteacher\tguru", "rock\trock\tbatu"}, "e.tsv");
  EmbeddingStore text, images;
  support::fill_random(inv, text, images, 9, 5, 17);
  PseudoCorrectionSample s{ConceptId("eye"), kId, ConceptId("teacher"), "guru", "mata", 0};
  auto results = evaluate_pseudocorrections(std::span(&s, 1), kEn, images, text, "AD");
  ASSERT_EQ(results.size(), 1u);
  const auto& r = results[0];

  auto t = [&](const char* c, const LanguageCode& l) { return *text.get(EmbeddingKey::text(ConceptId(c), l, Variant::original())); };
  auto p = [&](const char* c, const LanguageCode& l) { return images.population(ConceptId(c), l, Variant::original()); };
  EXPECT_NEAR(r.delta_sem,
              support::brute_force_cosine(t("eye", kEn), t("eye", kId)) -
                  support::brute_force_cosine(t("eye", kEn), t("teacher", kId)),
              1e-12);
  EXPECT_NEAR(r.xc_original, support::brute_force_xc(p("teacher", kId), p("eye", kEn)), 1e-12);
  EXPECT_NEAR(r.xc_corrected, support::brute_force_xc(p("eye", kId), p("eye", kEn)), 1e-12);
  EXPECT_EQ(r.delta_xc, r.xc_corrected - r.xc_original);
  EXPECT_TRUE(r.error_types.empty());
  EXPECT_EQ(r.sample_index, 0u);
  EXPECT_EQ(r.donor, ConceptId("teacher"));
  EXPECT_EQ(r.original_surface, "guru");
}

TEST(Evaluate, DedicatedPseudoEntriesTakePrecedence) {
  auto inv = parse_inventory({"concept\ten\tid", "eye\teye\tmata", "teacher\tteacher\tguru"}, "e.tsv");
  EmbeddingStore text, images;
  support::fill_random(inv, text, images, 9, 5, 18);
  std::mt19937_64 rng(3);
  auto dedicated = support::random_population(rng, 9, 5);
  support::put_population(images, ConceptId("eye"), kId, Variant::pseudo(0), dedicated);
  PseudoCorrectionSample s{ConceptId("eye"), kId, ConceptId("teacher"), "guru", "mata", 0};
  auto r = evaluate_pseudocorrections(std::span(&s, 1), kEn, images, text, "AD")[0];
  EXPECT_NEAR(r.xc_original,
              support::brute_force_xc(dedicated, images.population(ConceptId("eye"), kEn, Variant::original())), 1e-12);
}

TEST(Evaluate, FullBatchSatisfiesDeltaIdentities) {
  auto inv = fixture_inventory();
  EmbeddingStore text, images;
  support::fill_random(inv, text, images, 9, 8, 19);
  std::vector<PseudoCorrectionSample> samples;
  for (const auto& l : {kDe, kId, kHe}) {
    auto s = generate_pseudocorrections(inv, l, 10, 1);
    samples.insert(samples.end(), s.begin(), s.end());
  }
  auto results = evaluate_pseudocorrections(samples, kEn, images, text, "m");
  ASSERT_EQ(results.size(), 3u * 1930u);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    ASSERT_EQ(r.delta_xc, r.xc_corrected - r.xc_original);
    ASSERT_TRUE(std::isfinite(r.delta_sem));
    if (i > 0) {
      const auto& q = results[i - 1];
      ASSERT_TRUE(std::tie(q.language, q.concept_id, *q.sample_index) < std::tie(r.language, r.concept_id, *r.sample_index));
    }
  }
}

TEST(Evaluate, PositiveMeanWhenModelKnowsTheLanguage) {
  // A "competent" model: every test-language population equals the English
  // one for the same concept, so restoring the true translation can only
  // raise X_c relative to a donor's population.
  auto inv = fixture_inventory();
  EmbeddingStore text, images;
  std::mt19937_64 rng(21);
  for (const auto& c : inv.concepts()) {
    auto pop = support::random_population(rng, 9, 8);
    auto vec = support::random_vector(rng, 8);
    for (const auto& l : inv.languages()) {
      support::put_population(images, c, l, Variant::original(), pop);
      text.put(EmbeddingKey::text(c, l, Variant::original()), vec);
    }
  }
  auto samples = generate_pseudocorrections(inv, kId, 10, 4);
  auto results = evaluate_pseudocorrections(samples, kEn, images, text, "m");
  double mean = 0.0;
  for (const auto& r : results) mean += r.delta_xc / static_cast<double>(results.size());
  EXPECT_GE(mean, 0.0);
}

TEST(Evaluate, RejectsSelfDonorAndNoOpSamples) {
  auto inv = parse_inventory({"concept\ten\tid", "eye\teye\tmata", "teacher\tteacher\tguru"}, "e.tsv");
  EmbeddingStore text, images;
  support::fill_random(inv, text, images, 9, 5, 18);
  PseudoCorrectionSample self{ConceptId("eye"), kId, ConceptId("eye"), "mata", "mata", 0};
  PseudoCorrectionSample noop{ConceptId("eye"), kId, ConceptId("teacher"), "mata", "mata", 0};
  EXPECT_THROW(evaluate_pseudocorrections(std::span(&self, 1), kEn, images, text, "m"), InputError);
  EXPECT_THROW(evaluate_pseudocorrections(std::span(&noop, 1), kEn, images, text, "m"), InputError);
}

TEST(Evaluate, MissingDonorPopulationIsReported) {
  auto inv = parse_inventory({"concept\ten\tid", "eye\teye\tmata", "teacher\tteacher\tguru"}, "e.tsv");
  EmbeddingStore text, images, partial;
  support::fill_random(inv, text, images, 9, 5, 18);
  for (const auto& [k, v] : images.entries())
    if (k.concept_id != ConceptId("teacher") || k.language != kId) partial.put(k, v);
  PseudoCorrectionSample s{ConceptId("eye"), kId, ConceptId("teacher"), "guru", "mata", 0};
  try {
    evaluate_pseudocorrections(std::span(&s, 1), kEn, partial, text, "m");
    FAIL();
  } catch (const MissingEmbeddingsError& e) {
    ASSERT_EQ(e.keys().size(), 1u);
    EXPECT_EQ(e.keys()[0], "image population teacher|id|original");
  }
}
