// cccl: command-line driver for the correction evaluation pipeline.
//
//   validate  manifest  embed  score  pseudo  revise  report
//
// Exit codes: 0 ok, 1 internal failure, 2 input error, 3 missing embeddings,
// 4 revision conflict, 5 provider failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cccl/cccl.hpp"

namespace fs = std::filesystem;
using namespace cccl;

namespace {

enum Exit { kOk = 0, kInternal = 1, kInput = 2, kMissing = 3, kConflict = 4, kProvider = 5 };

struct Config {
  std::string inventory;
  std::string corrections;
  std::string text_store;
  std::vector<std::string> image_stores;  // model=path
  std::string embedder_url;
  bool embedder_url_from_flag = false;
  std::vector<std::string> languages;
  std::size_t n = kDefaultPopulationSize;
  unsigned k = kDefaultPseudoSamples;
  std::uint64_t seed = 0;
  std::string out = "reports";
  std::string run_id = "default";
  double ci_level = 0.95;
  std::string blocklist;
  std::vector<std::string> templates;  // lang=template
  std::string default_template = "a picture of a {}";

  fs::path run_dir() const { return fs::path(out) / run_id; }

  // Flag beats EMBEDDER_URL, which beats the config file.
  std::string provider_url() const {
    if (embedder_url_from_flag) return embedder_url;
    if (const char* env = std::getenv("EMBEDDER_URL"); env && *env) return env;
    return embedder_url;
  }
};

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* what) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError(std::string("expected ") + what + ", got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

std::map<std::string, std::string> image_store_paths(const Config& cfg) {
  std::map<std::string, std::string> out;
  for (const auto& s : cfg.image_stores) {
    auto [model, path] = split_assignment(s, "model=path");
    if (!out.emplace(model, path).second) throw InputError("image store for model '" + model + "' given twice");
  }
  return out;
}

std::string require(const std::string& value, const char* flag) {
  if (value.empty()) throw InputError(std::string("missing required setting --") + flag);
  return value;
}

ConceptInventory inventory(const Config& cfg) { return load_inventory(require(cfg.inventory, "inventory")); }

std::vector<LanguageCode> selected_languages(const Config& cfg, const ConceptInventory& inv) {
  std::vector<LanguageCode> out;
  for (const auto& l : cfg.languages) {
    LanguageCode code(l);
    if (!inv.has_language(code)) throw InputError("language '" + l + "' not in inventory");
    out.push_back(code);
  }
  return out;
}

bool wanted(const std::vector<LanguageCode>& langs, const LanguageCode& l) {
  return langs.empty() || std::find(langs.begin(), langs.end(), l) != langs.end();
}

void warn_population_sizes(const EmbeddingStore& images, std::size_t n, const std::string& model) {
  std::map<std::string, std::size_t> sizes;
  for (const auto& [k, _] : images.entries())
    if (k.modality == Modality::image) ++sizes[k.prefix()];
  std::size_t odd = 0;
  for (const auto& [prefix, size] : sizes) {
    if (size == n) continue;
    if (odd++ < 5)
      std::cerr << "warning: " << model << ": population " << prefix << " has " << size << " images, expected " << n
                << "\n";
  }
  if (odd > 5) std::cerr << "warning: " << model << ": " << odd - 5 << " more populations differ from n = " << n << "\n";
}

// Fit table, scatter files and histograms for one results table.
struct AnalysisNames {
  std::string fitstats = "fitstats.tsv";
  std::string scatter_prefix = "scatter_";
  bool histograms = true;
};

void write_analysis(const ResultsTable& table, const fs::path& dir, double ci_level, const AnalysisNames& names) {
  std::vector<FitOutcome> fits;
  for (const auto& model : table.models) {
    for (const auto& lang : table.languages()) {
      auto series = table.series(model, lang);
      if (series.size() < 3) {
        std::cerr << "note: " << model << "/" << lang << ": " << series.size() << " point(s), no fit\n";
        continue;
      }
      auto fit = try_summarize(series, model, lang, ci_level);
      if (auto* f = std::get_if<FitStats>(&fit)) {
        const std::string stem = names.scatter_prefix + model + "_" + lang.str();
        emit_scatter(series, *f, dir / (stem + ".tsv"), dir / (stem + ".svg"));
      } else {
        std::cerr << "warning: " << model << "/" << lang << ": " << std::get<DegenerateFit>(fit).reason << "\n";
      }
      fits.push_back(std::move(fit));
    }
  }
  if (!fits.empty()) emit_fitstats_table(std::span<const FitOutcome>(fits), dir / names.fitstats);

  if (!names.histograms) return;
  for (const auto& lang : table.languages()) {
    auto entries = histogram_entries(table, lang);
    emit_histogram(entries, HistogramSpec{}, dir / ("hist_" + lang.str() + ".tsv"),
                   dir / ("hist_" + lang.str() + ".svg"), "error types vs delta SEM (" + lang.str() + ")");
  }
}

// ---------------------------------------------------------------------------

int cmd_validate(const Config& cfg) {
  auto inv = inventory(cfg);
  auto blocklist = cfg.blocklist.empty() ? Blocklist::defaults() : Blocklist::load(cfg.blocklist);
  auto issues = validate_inventory(inv, blocklist);
  if (!cfg.corrections.empty()) cross_validate(inv, load_corrections(cfg.corrections));
  for (const auto& i : issues)
    std::cout << to_string(i.severity) << "\t" << to_string(i.kind) << "\t" << i.concept_id << "\t" << i.language
              << "\t" << i.message << "\n";
  std::cerr << inv.size() << " concepts, " << inv.languages().size() << " languages, " << issues.size()
            << " issue(s)\n";
  return has_errors(issues) ? kInput : kOk;
}

struct ManifestOptions {
  std::string output;
};

int cmd_manifest(const Config& cfg, const ManifestOptions& opt) {
  auto inv = inventory(cfg);
  std::map<LanguageCode, std::string> templates;
  for (const auto& l : inv.languages()) templates[l] = cfg.default_template;
  for (const auto& t : cfg.templates) {
    auto [lang, tmpl] = split_assignment(t, "lang=template");
    templates[LanguageCode(lang)] = tmpl;
  }
  std::vector<CorrectionRecord> corrections;
  if (!cfg.corrections.empty()) corrections = load_corrections(cfg.corrections);
  auto lines = export_generation_manifest(inv, templates, corrections);
  fs::path path = opt.output.empty() ? cfg.run_dir() / "manifest.tsv" : fs::path(opt.output);
  text::write_file_atomic(path, format_manifest(lines));
  std::cerr << lines.size() << " prompts -> " << path.string() << "\n";
  return kOk;
}

struct EmbedOptions {
  std::string targets = "text";
  std::string scope = "corrections";
  std::string listing;
  std::string store;
  std::string model;
  bool force = false;
};

// Listing rows: concept|language|variant <TAB> index <TAB> payload
std::vector<std::tuple<EmbeddingKey, std::string>> read_listing(const fs::path& path, Modality modality) {
  std::vector<std::tuple<EmbeddingKey, std::string>> out;
  auto lines = text::read_lines(path);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (text::is_blank(lines[ln]) || lines[ln].front() == '#') continue;
    auto cols = text::split(lines[ln]);
    if (cols.size() != 3) throw ParseError(path.string(), ln + 1, "expected key, index, payload");
    auto parts = text::split(cols[0], '|');
    if (parts.size() != 3) throw ParseError(path.string(), ln + 1, "key must be concept|language|variant");
    auto idx = text::parse_int<std::size_t>(cols[1]);
    if (!idx) throw ParseError(path.string(), ln + 1, "bad index '" + cols[1] + "'");
    EmbeddingKey key{ConceptId(parts[0]), LanguageCode(parts[1]), Variant::parse(parts[2]), modality, *idx};
    out.emplace_back(std::move(key), cols[2]);
  }
  return out;
}

// Source, original and corrected surfaces for every correction, or every
// inventory cell; duplicates collapse onto one key.
std::vector<std::tuple<EmbeddingKey, std::string>> derived_text_listing(const Config& cfg, const std::string& scope) {
  auto inv = inventory(cfg);
  std::map<EmbeddingKey, std::string> keys;
  auto add = [&](const ConceptId& c, const LanguageCode& l, Variant v, const std::string& s) {
    keys.emplace(EmbeddingKey::text(c, l, v), s);
  };
  if (scope == "corrections") {
    auto corrections = load_corrections(require(cfg.corrections, "corrections"));
    cross_validate(inv, corrections);
    for (const auto& r : corrections) {
      add(r.concept_id, inv.source_language(), Variant::original(), inv.surface(r.concept_id, inv.source_language()));
      add(r.concept_id, r.language, Variant::original(), r.original);
      add(r.concept_id, r.language, Variant::corrected(), r.corrected);
    }
  } else if (scope == "inventory") {
    for (const auto& t : inv.translations()) add(t.concept_id, t.language, t.variant, t.surface);
  } else {
    throw InputError("unknown scope '" + scope + "'");
  }
  std::vector<std::tuple<EmbeddingKey, std::string>> out(keys.begin(), keys.end());
  return out;
}

int cmd_embed(const Config& cfg, const EmbedOptions& opt) {
  const std::string url = cfg.provider_url();
  if (url.empty()) throw InputError("no embedder endpoint: pass --embedder-url or set EMBEDDER_URL");

  Modality modality;
  if (opt.targets == "text") modality = Modality::text;
  else if (opt.targets == "image") modality = Modality::image;
  else throw InputError("--targets must be text or image");

  fs::path store_path = opt.store;
  if (store_path.empty()) {
    if (modality == Modality::text) {
      store_path = require(cfg.text_store, "text-store");
    } else {
      auto stores = image_store_paths(cfg);
      auto it = stores.find(opt.model);
      if (opt.model.empty() || it == stores.end()) throw InputError("image embedding needs --store or a --model with an image store");
      store_path = it->second;
    }
  }

  std::vector<std::tuple<EmbeddingKey, std::string>> listing;
  if (!opt.listing.empty()) listing = read_listing(opt.listing, modality);
  else if (modality == Modality::text) listing = derived_text_listing(cfg, opt.scope);
  else throw InputError("image embedding needs --listing");

  EmbeddingStore store = fs::exists(store_path) ? load_store(store_path) : EmbeddingStore();
  std::size_t skipped = 0;
  std::vector<std::pair<EmbeddingKey, std::string>> todo_text;
  std::vector<std::pair<EmbeddingKey, fs::path>> todo_image;
  for (auto& [key, payload] : listing) {
    if (!opt.force && store.contains(key)) {
      ++skipped;
      continue;
    }
    if (modality == Modality::text) todo_text.emplace_back(key, payload);
    else todo_image.emplace_back(key, payload);
  }
  if (todo_text.empty() && todo_image.empty()) {
    std::cerr << "0 new entries (" << skipped << " already present)\n";
    return kOk;
  }

  HttpEmbeddingProvider provider(url);
  auto health = provider.health();
  if (health.status != "ok" && !health.status.empty())
    throw ProviderError("provider reports status '" + health.status + "'");

  std::size_t added = modality == Modality::text ? fetch_text_embeddings(provider, store, todo_text)
                                                 : fetch_image_embeddings(provider, store, todo_image);
  save_store(store, store_path);
  std::cerr << added << " new entries, " << skipped << " skipped -> " << store_path.string() << " (extractor "
            << store.extractor_id() << ", dim " << store.dim().value_or(0) << ")\n";
  return kOk;
}

struct Stores {
  EmbeddingStore text;
  std::map<std::string, EmbeddingStore> images;  // by model
};

Stores load_stores(const Config& cfg) {
  Stores s;
  s.text = load_store(require(cfg.text_store, "text-store"));
  auto paths = image_store_paths(cfg);
  if (paths.empty()) throw InputError("missing required setting --image-store model=path");
  for (const auto& [model, path] : paths) {
    s.images.emplace(model, load_store(path));
    warn_population_sizes(s.images.at(model), cfg.n, model);
  }
  return s;
}

int cmd_score(const Config& cfg) {
  auto inv = inventory(cfg);
  auto langs = selected_languages(cfg, inv);
  std::vector<CorrectionRecord> corrections;
  for (auto& c : load_corrections(require(cfg.corrections, "corrections")))
    if (wanted(langs, c.language)) corrections.push_back(std::move(c));
  cross_validate(inv, corrections);

  std::vector<ConceptResult> results;
  std::vector<std::string> models;
  if (!corrections.empty()) {
    auto stores = load_stores(cfg);
    // Report gaps across every model before scoring any of them.
    std::vector<std::string> missing;
    for (const auto& [model, images] : stores.images) {
      std::vector<ScoreRequest> reqs;
      for (const auto& c : corrections) reqs.push_back(make_score_request(c.concept_id, c.language, inv.source_language()));
      for (auto& m : find_missing(reqs, images, stores.text)) missing.push_back(model + ": " + m);
    }
    if (!missing.empty()) throw MissingEmbeddingsError(std::move(missing));
    for (const auto& [model, images] : stores.images) {
      models.push_back(model);
      auto r = score_concepts(inv, corrections, images, stores.text, model);
      results.insert(results.end(), r.begin(), r.end());
    }
  }

  const auto dir = cfg.run_dir();
  auto table = tabulate(results);
  if (table.models.empty()) table.models = models;
  text::write_file_atomic(dir / "results.tsv", format_results_table(table));
  if (!table.rows.empty()) write_analysis(table, dir, cfg.ci_level, {});
  std::cerr << table.rows.size() << " correction(s) scored for " << models.size() << " model(s) -> " << dir.string()
            << "\n";
  return kOk;
}

struct PseudoOptions {
  bool samples_only = false;
};

int cmd_pseudo(const Config& cfg, const PseudoOptions& opt) {
  auto inv = inventory(cfg);
  auto langs = selected_languages(cfg, inv);
  if (langs.empty())
    for (const auto& l : inv.languages())
      if (l != inv.source_language()) langs.push_back(l);
  if (cfg.k == 0) throw InputError("k must be positive");

  const auto dir = cfg.run_dir();
  std::map<LanguageCode, std::vector<PseudoCorrectionSample>> samples;
  for (const auto& l : langs) {
    samples[l] = generate_pseudocorrections(inv, l, cfg.k, cfg.seed);
    text::write_file_atomic(dir / ("samples_" + l.str() + ".tsv"), format_samples(samples[l]));
    std::cerr << samples[l].size() << " samples for " << l << "\n";
  }
  if (opt.samples_only) return kOk;

  auto stores = load_stores(cfg);
  std::vector<std::string> missing;
  for (const auto& [model, images] : stores.images)
    for (const auto& [l, s] : samples) {
      std::vector<ScoreRequest> reqs;
      for (const auto& x : s) reqs.push_back(make_pseudo_request(x, inv.source_language(), images, stores.text));
      for (auto& m : find_missing(reqs, images, stores.text)) missing.push_back(model + ": " + m);
    }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    throw MissingEmbeddingsError(std::move(missing));
  }

  std::vector<ConceptResult> all;
  for (const auto& [l, s] : samples) {
    std::vector<ConceptResult> per_lang;
    for (const auto& [model, images] : stores.images) {
      auto r = evaluate_pseudocorrections(s, inv.source_language(), images, stores.text, model);
      per_lang.insert(per_lang.end(), r.begin(), r.end());
    }
    emit_results_table(per_lang, dir / ("pseudo_results_" + l.str() + ".tsv"));
    all.insert(all.end(), per_lang.begin(), per_lang.end());
  }
  write_analysis(tabulate(all), dir, cfg.ci_level, {"pseudo_fitstats.tsv", "pseudo_scatter_", false});
  std::cerr << all.size() << " pseudocorrection result(s) -> " << dir.string() << "\n";
  return kOk;
}

struct ReviseOptions {
  std::string removals;
  std::optional<double> min_delta_sem;
  std::optional<double> min_delta_xc;
  std::string model;
  std::string results;
  std::string version;
  std::string output;
};

std::set<ConceptId> read_removals(const std::string& path) {
  std::set<ConceptId> out;
  if (path.empty()) return out;
  for (const auto& line : text::read_lines(path)) {
    auto t = text::trim(line);
    if (!t.empty() && t.front() != '#') out.emplace(t);
  }
  return out;
}

int cmd_revise(const Config& cfg, const ReviseOptions& opt) {
  auto inv = inventory(cfg);
  auto corrections = load_corrections(require(cfg.corrections, "corrections"));
  cross_validate(inv, corrections);

  std::vector<CorrectionRecord> chosen;
  if (opt.min_delta_sem || opt.min_delta_xc) {
    if (opt.min_delta_xc && opt.model.empty()) throw InputError("--min-delta-xc needs --model");
    fs::path results_path = opt.results.empty() ? cfg.run_dir() / "results.tsv" : fs::path(opt.results);
    auto table = load_results_table(results_path);
    if (table.pseudo()) throw InputError(results_path.string() + " holds pseudocorrection results");
    if (opt.min_delta_xc && std::find(table.models.begin(), table.models.end(), opt.model) == table.models.end())
      throw InputError("model '" + opt.model + "' not in " + results_path.string());
    std::map<std::pair<LanguageCode, ConceptId>, const ResultRow*> rows;
    for (const auto& r : table.rows) rows[{r.language, r.concept_id}] = &r;
    for (const auto& c : corrections) {
      auto it = rows.find({c.language, c.concept_id});
      if (it == rows.end()) continue;  // never apply what was not scored
      const auto& row = *it->second;
      if (opt.min_delta_sem && !(row.delta_sem >= *opt.min_delta_sem)) continue;
      if (opt.min_delta_xc) {
        auto x = row.delta_xc.find(opt.model);
        if (x == row.delta_xc.end() || !(x->second >= *opt.min_delta_xc)) continue;
      }
      chosen.push_back(c);
    }
  } else {
    chosen = corrections;
  }

  auto removals = read_removals(opt.removals);
  std::optional<std::string> version;
  if (!opt.version.empty()) version = opt.version;
  auto revised = revise_benchmark(inv, chosen, removals, version);
  auto changes = diff_inventories(inv, revised);

  const auto dir = cfg.run_dir();
  fs::path out = opt.output.empty() ? dir / ("inventory_" + revised.version() + ".tsv") : fs::path(opt.output);
  save_inventory(revised, out);
  text::write_file_atomic(dir / "changeset.tsv", format_changeset(changes));
  std::cerr << revised.version() << ": " << revised.size() << " concepts, " << changes.changed.size()
            << " surface change(s), " << changes.removed.size() << " removal(s) -> " << out.string() << "\n";
  return kOk;
}

struct ReportOptions {
  std::string results;
};

int cmd_report(const Config& cfg, const ReportOptions& opt) {
  fs::path path = opt.results.empty() ? cfg.run_dir() / "results.tsv" : fs::path(opt.results);
  auto table = load_results_table(path);
  if (table.rows.empty()) throw InputError(path.string() + " has no rows");
  sort_rows(table.rows);
  AnalysisNames names;
  if (table.pseudo()) names = {"pseudo_fitstats.tsv", "pseudo_scatter_", false};
  write_analysis(table, cfg.run_dir(), cfg.ci_level, names);
  std::cerr << table.rows.size() << " row(s) reported -> " << cfg.run_dir().string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluate translation corrections to a multilingual text-to-image benchmark", "cccl"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML run configuration; flags override it");

  Config cfg;
  app.add_option("--inventory", cfg.inventory, "Benchmark inventory TSV");
  app.add_option("--corrections", cfg.corrections, "Corrections TSV");
  app.add_option("--text-store", cfg.text_store, "Text embedding store (JSONL)");
  app.add_option("--image-store", cfg.image_stores, "Image embedding store per model, as model=path")->take_all();
  app.add_option("--embedder-url", cfg.embedder_url, "Embedding provider base URL");
  app.add_option("--languages", cfg.languages, "Restrict to these languages")->take_all();
  app.add_option("--n", cfg.n, "Expected images per prompt")->check(CLI::PositiveNumber);
  app.add_option("-k,--k", cfg.k, "Pseudocorrection samples per concept")->check(CLI::PositiveNumber);
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--out", cfg.out, "Output root directory");
  app.add_option("--run-id", cfg.run_id, "Run name; outputs go to <out>/<run-id>");
  app.add_option("--ci-level", cfg.ci_level, "Regression band confidence level")->check(CLI::Range(0.0, 1.0));
  app.add_option("--blocklist", cfg.blocklist, "Intangible-concept blocklist file");
  app.add_option("--template", cfg.templates, "Prompt template per language, as lang=template")->take_all();
  app.add_option("--default-template", cfg.default_template, "Prompt template for languages without one");

  auto* validate = app.add_subcommand("validate", "Check the inventory and report issues");

  ManifestOptions mopt;
  auto* manifest = app.add_subcommand("manifest", "Write the image-generation prompt manifest");
  manifest->add_option("-o,--output", mopt.output, "Manifest path");

  EmbedOptions eopt;
  auto* embed = app.add_subcommand("embed", "Fetch embeddings from the provider into a store");
  embed->add_option("--targets", eopt.targets, "text or image")->check(CLI::IsMember({"text", "image"}));
  embed->add_option("--scope", eopt.scope, "Derived text listing: corrections or inventory")
      ->check(CLI::IsMember({"corrections", "inventory"}));
  embed->add_option("--listing", eopt.listing, "TSV of key, index, payload");
  embed->add_option("--store", eopt.store, "Store to update");
  embed->add_option("--model", eopt.model, "Model whose image store to update");
  embed->add_flag("--force", eopt.force, "Re-fetch keys already in the store");

  auto* score = app.add_subcommand("score", "Score corrections and fit dXc against dSEM");

  PseudoOptions popt;
  auto* pseudo = app.add_subcommand("pseudo", "Run the pseudocorrection simulation");
  pseudo->add_flag("--samples-only", popt.samples_only, "Only write the sample files");

  ReviseOptions ropt;
  auto* revise = app.add_subcommand("revise", "Apply corrections and removals to produce a new release");
  revise->add_option("--removals", ropt.removals, "Concepts to remove, one per line");
  revise->add_option("--min-delta-sem", ropt.min_delta_sem, "Apply only corrections with dSEM >= T");
  revise->add_option("--min-delta-xc", ropt.min_delta_xc, "Apply only corrections with dXc >= T for --model");
  revise->add_option("--model", ropt.model, "Model for --min-delta-xc");
  revise->add_option("--results", ropt.results, "Results table from a score run");
  revise->add_option("--version", ropt.version, "Version string of the revision");
  revise->add_option("-o,--output", ropt.output, "Revised inventory path");

  ReportOptions repopt;
  auto* report = app.add_subcommand("report", "Regenerate fit stats, scatter plots and histograms");
  report->add_option("--results", repopt.results, "Results table to report on");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  for (int i = 1; i < argc; ++i) {
    std::string_view a = argv[i];
    if (a == "--embedder-url" || a.starts_with("--embedder-url=")) cfg.embedder_url_from_flag = true;
  }

  try {
    if (*validate) return cmd_validate(cfg);
    if (*manifest) return cmd_manifest(cfg, mopt);
    if (*embed) return cmd_embed(cfg, eopt);
    if (*score) return cmd_score(cfg);
    if (*pseudo) return cmd_pseudo(cfg, popt);
    if (*revise) return cmd_revise(cfg, ropt);
    if (*report) return cmd_report(cfg, repopt);
  } catch (const MissingEmbeddingsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissing;
  } catch (const RevisionConflict& e) {
    std::cerr << "error: revision conflict: " << e.what() << "\n";
    return kConflict;
  } catch (const ProviderError& e) {
    std::cerr << "error: provider: " << e.what() << "\n";
    return kProvider;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
