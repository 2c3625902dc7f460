#pragma once

// Multilingual concept inventory: the benchmark's concept x language matrix,
// its correction records, and the operations that validate, revise, diff and
// export it.
//
// Inventory TSV layout:
//
//   concept<TAB>en<TAB>es<TAB>...        header; first language is the source
//   rock<TAB>rock<TAB>roca<TAB>...       one row per active concept
//   #version<TAB>v1.1                    optional trailing metadata
//   #removed<TAB>history<TAB>intangible
//
// Surfaces are raw UTF-8; spaces are allowed inside a surface, tabs and
// newlines are not.

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "cccl/error.hpp"
#include "cccl/text.hpp"
#include "cccl/types.hpp"

namespace cccl {

struct Translation {
  ConceptId concept_id;
  LanguageCode language;
  std::string surface;
  Variant variant = Variant::original();
};

struct CorrectionRecord {
  ConceptId concept_id;
  LanguageCode language;
  std::string original;
  std::string corrected;
  ErrorSet error_types;
  std::string note;
};

// Value type; the free functions below never mutate their inputs.
class ConceptInventory {
 public:
  ConceptInventory() = default;
  ConceptInventory(std::string version, std::vector<LanguageCode> languages)
      : version_(std::move(version)), languages_(std::move(languages)) {
    if (languages_.empty()) throw InputError("inventory needs at least one language");
    std::set<LanguageCode> seen;
    for (const auto& l : languages_) {
      if (l.empty()) throw InputError("empty language code");
      if (!seen.insert(l).second) throw InputError("duplicate language '" + l.str() + "'");
    }
  }

  const std::string& version() const noexcept { return version_; }
  void set_version(std::string v) { version_ = std::move(v); }

  /// The first language column doubles as the source language.
  const LanguageCode& source_language() const { return languages_.front(); }
  const std::vector<LanguageCode>& languages() const noexcept { return languages_; }
  /// Active concepts in insertion (file) order.
  const std::vector<ConceptId>& concepts() const noexcept { return concepts_; }
  std::size_t size() const noexcept { return concepts_.size(); }

  bool has_concept(const ConceptId& c) const { return index_.contains(c); }
  bool has_language(const LanguageCode& l) const {
    return std::find(languages_.begin(), languages_.end(), l) != languages_.end();
  }

  void add_concept(ConceptId id, std::vector<std::string> surfaces) {
    if (text::is_blank(id.str())) throw InputError("empty concept id");
    if (index_.contains(id)) throw InputError("duplicate concept id '" + id.str() + "'");
    if (surfaces.size() != languages_.size())
      throw InputError("concept '" + id.str() + "' has " + std::to_string(surfaces.size()) +
                       " cells, expected " + std::to_string(languages_.size()));
    for (const auto& s : surfaces) check_surface(s);
    index_.emplace(id, concepts_.size());
    concepts_.push_back(std::move(id));
    cells_.push_back(std::move(surfaces));
  }

  const std::string& surface(const ConceptId& c, const LanguageCode& l) const {
    auto it = index_.find(c);
    if (it == index_.end()) throw InputError("unknown concept '" + c.str() + "'");
    return cells_[it->second][language_index(l)];
  }

  std::optional<std::string_view> find_surface(const ConceptId& c, const LanguageCode& l) const {
    auto it = index_.find(c);
    if (it == index_.end() || !has_language(l)) return std::nullopt;
    return std::string_view(cells_[it->second][language_index(l)]);
  }

  void set_surface(const ConceptId& c, const LanguageCode& l, std::string s) {
    check_surface(s);
    auto it = index_.find(c);
    if (it == index_.end()) throw InputError("unknown concept '" + c.str() + "'");
    cells_[it->second][language_index(l)] = std::move(s);
  }

  void remove_concept(const ConceptId& c, std::string reason) {
    auto it = index_.find(c);
    if (it == index_.end()) throw InputError("cannot remove unknown concept '" + c.str() + "'");
    std::size_t pos = it->second;
    concepts_.erase(concepts_.begin() + static_cast<std::ptrdiff_t>(pos));
    cells_.erase(cells_.begin() + static_cast<std::ptrdiff_t>(pos));
    index_.clear();
    for (std::size_t i = 0; i < concepts_.size(); ++i) index_.emplace(concepts_[i], i);
    removed_[c] = std::move(reason);
  }

  /// Removed concept -> reason.
  const std::map<ConceptId, std::string>& removed() const noexcept { return removed_; }
  void mark_removed(ConceptId c, std::string reason) { removed_[std::move(c)] = std::move(reason); }

  std::vector<Translation> translations() const {
    std::vector<Translation> out;
    out.reserve(concepts_.size() * languages_.size());
    for (std::size_t i = 0; i < concepts_.size(); ++i)
      for (std::size_t j = 0; j < languages_.size(); ++j)
        out.push_back({concepts_[i], languages_[j], cells_[i][j], Variant::original()});
    return out;
  }

  std::size_t language_index(const LanguageCode& l) const {
    auto it = std::find(languages_.begin(), languages_.end(), l);
    if (it == languages_.end()) throw InputError("unknown language '" + l.str() + "'");
    return static_cast<std::size_t>(it - languages_.begin());
  }

  friend bool operator==(const ConceptInventory& a, const ConceptInventory& b) {
    return a.version_ == b.version_ && a.languages_ == b.languages_ && a.concepts_ == b.concepts_ &&
           a.cells_ == b.cells_ && a.removed_ == b.removed_;
  }

 private:
  static void check_surface(const std::string& s) {
    if (s.find_first_of("\t\n\r") != std::string::npos)
      throw InputError("surface contains tab or newline: '" + s + "'");
  }

  std::string version_ = "v1";
  std::vector<LanguageCode> languages_;
  std::vector<ConceptId> concepts_;
  std::map<ConceptId, std::size_t> index_;
  std::vector<std::vector<std::string>> cells_;
  std::map<ConceptId, std::string> removed_;
};

// ---------------------------------------------------------------------------
// Loading and saving

inline ConceptInventory parse_inventory(const std::vector<std::string>& lines, const std::string& name,
                                        std::string default_version = "v1") {
  if (lines.empty()) throw ParseError(name, 1, "empty inventory file");
  auto header = text::split(lines[0]);
  if (header.size() < 2 || header[0] != "concept")
    throw ParseError(name, 1, "header must be 'concept<TAB>lang1<TAB>...'");
  std::vector<LanguageCode> langs;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (text::is_blank(header[i])) throw ParseError(name, 1, "empty language code in header");
    langs.emplace_back(header[i]);
  }
  ConceptInventory inv(std::move(default_version), langs);
  std::vector<std::pair<ConceptId, std::string>> removed;

  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const auto& line = lines[ln];
    const std::size_t lineno = ln + 1;
    if (line.empty()) continue;
    auto cols = text::split(line);
    if (line.front() == '#') {
      if (cols[0] == "#version" && cols.size() == 2) {
        inv.set_version(cols[1]);
      } else if (cols[0] == "#removed" && cols.size() >= 2) {
        removed.emplace_back(ConceptId(cols[1]), cols.size() > 2 ? cols[2] : "");
      } else {
        throw ParseError(name, lineno, "unknown metadata line '" + cols[0] + "'");
      }
      continue;
    }
    const std::string& id = cols[0];
    if (text::is_blank(id)) throw ParseError(name, lineno, "empty concept id");
    if (cols.size() > header.size())
      throw ParseError(name, lineno, "too many cells for concept '" + id + "'");
    for (std::size_t j = 1; j < header.size(); ++j) {
      if (j >= cols.size() || cols[j].empty())
        throw ParseError(name, lineno, "missing cell for concept '" + id + "', language '" + header[j] + "'");
    }
    if (inv.has_concept(ConceptId(id)))
      throw ParseError(name, lineno, "duplicate concept id '" + id + "'");
    try {
      inv.add_concept(ConceptId(id), std::vector<std::string>(cols.begin() + 1, cols.end()));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(name, lineno, e.what());
    }
  }
  for (auto& [c, reason] : removed) {
    if (inv.has_concept(c)) throw ParseError(name, lines.size(), "concept '" + c.str() + "' is both active and removed");
    inv.mark_removed(std::move(c), std::move(reason));
  }
  return inv;
}

inline ConceptInventory load_inventory(const std::filesystem::path& path) {
  return parse_inventory(text::read_lines(path), path.string());
}

inline std::string format_inventory(const ConceptInventory& inv) {
  std::string out = "concept";
  for (const auto& l : inv.languages()) out += "\t" + l.str();
  out += "\n";
  for (const auto& c : inv.concepts()) {
    out += c.str();
    for (const auto& l : inv.languages()) out += "\t" + inv.surface(c, l);
    out += "\n";
  }
  out += "#version\t" + inv.version() + "\n";
  for (const auto& [c, reason] : inv.removed()) out += "#removed\t" + c.str() + "\t" + reason + "\n";
  return out;
}

inline void save_inventory(const ConceptInventory& inv, const std::filesystem::path& path) {
  text::write_file_atomic(path, format_inventory(inv));
}

// ---------------------------------------------------------------------------
// Corrections

inline std::vector<CorrectionRecord> parse_corrections(const std::vector<std::string>& lines,
                                                       const std::string& name) {
  std::vector<CorrectionRecord> out;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const auto& line = lines[ln];
    const std::size_t lineno = ln + 1;
    if (line.empty() || line.front() == '#') continue;
    auto cols = text::split(line);
    if (ln == 0 && cols[0] == "concept") continue;  // header
    if (cols.size() < 5 || cols.size() > 6)
      throw ParseError(name, lineno, "expected 5 or 6 columns, got " + std::to_string(cols.size()));
    CorrectionRecord rec;
    rec.concept_id = ConceptId(cols[0]);
    rec.language = LanguageCode(cols[1]);
    rec.original = cols[2];
    rec.corrected = cols[3];
    if (cols.size() == 6) rec.note = cols[5];
    if (rec.concept_id.empty() || rec.language.empty())
      throw ParseError(name, lineno, "empty concept or language");
    if (rec.original.empty() || rec.corrected.empty())
      throw ParseError(name, lineno, "empty original or corrected surface");
    if (rec.original == rec.corrected)
      throw ParseError(name, lineno, "original equals corrected for '" + cols[0] + "'");
    try {
      rec.error_types = ErrorSet::parse(cols[4]);
    } catch (const InputError& e) {
      throw ParseError(name, lineno, e.what());
    }
    if (rec.error_types.empty()) throw ParseError(name, lineno, "no error types given");
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::vector<CorrectionRecord> load_corrections(const std::filesystem::path& path) {
  return parse_corrections(text::read_lines(path), path.string());
}

inline std::string format_corrections(std::span<const CorrectionRecord> records) {
  std::string out = "concept\tlanguage\toriginal\tcorrected\terror_types\tnote\n";
  for (const auto& r : records)
    out += text::join({r.concept_id.str(), r.language.str(), r.original, r.corrected, r.error_types.str(), r.note}) +
           "\n";
  return out;
}

/// Throws InputError listing every record whose concept or language is not
/// in the inventory, or which corrects the same cell twice.
inline void cross_validate(const ConceptInventory& inv, std::span<const CorrectionRecord> records) {
  std::vector<std::string> problems;
  std::set<std::pair<ConceptId, LanguageCode>> seen;
  for (const auto& r : records) {
    if (!inv.has_concept(r.concept_id))
      problems.push_back("correction references unknown concept '" + r.concept_id.str() + "'");
    if (!inv.has_language(r.language))
      problems.push_back("correction references unknown language '" + r.language.str() + "'");
    if (!seen.emplace(r.concept_id, r.language).second)
      problems.push_back("duplicate correction for " + r.concept_id.str() + "/" + r.language.str());
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
    throw InputError(msg);
  }
}

// ---------------------------------------------------------------------------
// Validation

/// Concepts with no prototypical picture. Advisory only.
struct Blocklist {
  std::set<ConceptId> concepts;

  static Blocklist defaults() { return {{ConceptId("film"), ConceptId("history"), ConceptId("jump")}}; }

  // One concept per line; blank lines and '#' comments ignored.
  static Blocklist load(const std::filesystem::path& path) {
    Blocklist b;
    for (const auto& line : text::read_lines(path)) {
      auto t = text::trim(line);
      if (t.empty() || t.front() == '#') continue;
      b.concepts.emplace(t);
    }
    return b;
  }
};

enum class Severity { warning, error };
enum class IssueKind { empty_cell, duplicate_surface, intangible_concept };

inline std::string_view to_string(Severity s) { return s == Severity::error ? "error" : "warning"; }
inline std::string_view to_string(IssueKind k) {
  switch (k) {
    case IssueKind::empty_cell: return "empty-cell";
    case IssueKind::duplicate_surface: return "duplicate-surface";
    case IssueKind::intangible_concept: return "intangible-concept";
  }
  return "?";
}

struct Issue {
  Severity severity;
  IssueKind kind;
  ConceptId concept_id;
  LanguageCode language;  // empty for concept-level issues
  std::string message;

  friend auto operator<=>(const Issue& a, const Issue& b) {
    return std::tie(a.kind, a.concept_id, a.language, a.severity, a.message) <=>
           std::tie(b.kind, b.concept_id, b.language, b.severity, b.message);
  }
  friend bool operator==(const Issue&, const Issue&) = default;
};

/// Diagnostics only; never throws. Output is sorted, so it depends on the
/// inventory's contents and not on row order.
inline std::vector<Issue> validate_inventory(const ConceptInventory& inv,
                                             const Blocklist& blocklist = Blocklist::defaults()) {
  std::vector<Issue> issues;
  for (const auto& lang : inv.languages()) {
    std::map<std::string, std::vector<ConceptId>> by_surface;
    for (const auto& c : inv.concepts()) {
      const auto& s = inv.surface(c, lang);
      if (text::is_blank(s)) {
        issues.push_back({Severity::error, IssueKind::empty_cell, c, lang,
                          "empty cell for " + c.str() + "/" + lang.str()});
        continue;
      }
      by_surface[s].push_back(c);
    }
    for (auto& [surface, owners] : by_surface) {
      if (owners.size() < 2) continue;
      std::sort(owners.begin(), owners.end());
      std::string names;
      for (const auto& o : owners) names += (names.empty() ? "" : ", ") + o.str();
      // One issue per owner so every affected cell is addressable.
      for (const auto& o : owners)
        issues.push_back({Severity::warning, IssueKind::duplicate_surface, o, lang,
                          "surface '" + surface + "' shared by " + names + " (potential incoming duplicate)"});
    }
  }
  for (const auto& c : inv.concepts()) {
    if (blocklist.concepts.contains(c))
      issues.push_back({Severity::warning, IssueKind::intangible_concept, c, LanguageCode(),
                        "intangible concept on blocklist: " + c.str()});
  }
  std::sort(issues.begin(), issues.end());
  return issues;
}

inline bool has_errors(std::span<const Issue> issues) {
  return std::any_of(issues.begin(), issues.end(), [](const Issue& i) { return i.severity == Severity::error; });
}

// ---------------------------------------------------------------------------
// Revision

inline constexpr std::string_view kRemovalReason = "intangible";

/// Applies corrections, then removals. Each correction's recorded original
/// must equal the current cell, so a correction set cannot be applied twice.
inline ConceptInventory revise_benchmark(const ConceptInventory& inv, std::span<const CorrectionRecord> corrections,
                                         const std::set<ConceptId>& removals,
                                         std::optional<std::string> version = std::nullopt) {
  ConceptInventory out = inv;
  cross_validate(inv, corrections);
  for (const auto& r : removals)
    if (!inv.has_concept(r)) throw InputError("removal references unknown concept '" + r.str() + "'");

  for (const auto& rec : corrections) {
    const auto& current = out.surface(rec.concept_id, rec.language);
    if (current != rec.original)
      throw RevisionConflict("correction for " + rec.concept_id.str() + "/" + rec.language.str() + " expects '" +
                             rec.original + "' but the cell holds '" + current + "'");
    out.set_surface(rec.concept_id, rec.language, rec.corrected);
  }
  for (const auto& r : removals) out.remove_concept(r, std::string(kRemovalReason));
  out.set_version(version ? *version : inv.version() + ".1");
  return out;
}

// ---------------------------------------------------------------------------
// Diff

struct SurfaceChange {
  ConceptId concept_id;
  LanguageCode language;
  std::string before;
  std::string after;
  friend bool operator==(const SurfaceChange&, const SurfaceChange&) = default;
};

struct Changeset {
  std::vector<ConceptId> added;
  std::vector<ConceptId> removed;
  std::vector<SurfaceChange> changed;

  bool empty() const { return added.empty() && removed.empty() && changed.empty(); }
};

inline Changeset diff_inventories(const ConceptInventory& a, const ConceptInventory& b) {
  if (a.source_language() != b.source_language())
    throw InputError("source language mismatch: '" + a.source_language().str() + "' vs '" +
                     b.source_language().str() + "'");
  Changeset cs;
  std::set<ConceptId> in_a(a.concepts().begin(), a.concepts().end());
  std::set<ConceptId> in_b(b.concepts().begin(), b.concepts().end());
  std::set_difference(in_b.begin(), in_b.end(), in_a.begin(), in_a.end(), std::back_inserter(cs.added));
  std::set_difference(in_a.begin(), in_a.end(), in_b.begin(), in_b.end(), std::back_inserter(cs.removed));
  for (const auto& c : in_a) {
    if (!in_b.contains(c)) continue;
    for (const auto& l : a.languages()) {
      auto sb = b.find_surface(c, l);
      if (!sb) continue;
      const auto& sa = a.surface(c, l);
      if (sa != *sb) cs.changed.push_back({c, l, sa, std::string(*sb)});
    }
  }
  return cs;
}

inline std::string format_changeset(const Changeset& cs) {
  std::string out = "change\tconcept\tlanguage\tbefore\tafter\n";
  for (const auto& c : cs.added) out += "added\t" + c.str() + "\t\t\t\n";
  for (const auto& c : cs.removed) out += "removed\t" + c.str() + "\t\t\t\n";
  for (const auto& s : cs.changed)
    out += "surface\t" + s.concept_id.str() + "\t" + s.language.str() + "\t" + s.before + "\t" + s.after + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Generation manifest

inline constexpr std::string_view kPlaceholder = "{}";

struct ManifestLine {
  ConceptId concept_id;
  LanguageCode language;
  Variant variant;
  std::string prompt;

  std::string key() const { return concept_id.str() + "|" + language.str() + "|" + variant.str(); }
};

inline std::string apply_template(std::string_view tmpl, std::string_view surface) {
  auto pos = tmpl.find(kPlaceholder);
  std::string out(tmpl.substr(0, pos));
  out += surface;
  out += tmpl.substr(pos + kPlaceholder.size());
  return out;
}

/// One prompt per (concept, language, variant): every active cell as
/// `original`, plus a `corrected` prompt per correction record. Ordered by
/// concept id, then inventory language order, then variant.
inline std::vector<ManifestLine> export_generation_manifest(
    const ConceptInventory& inv, const std::map<LanguageCode, std::string>& template_by_language,
    std::span<const CorrectionRecord> corrections = {}) {
  for (const auto& lang : inv.languages()) {
    auto it = template_by_language.find(lang);
    if (it == template_by_language.end()) throw InputError("no prompt template for language '" + lang.str() + "'");
    const auto& t = it->second;
    auto first = t.find(kPlaceholder);
    if (first == std::string::npos || t.find(kPlaceholder, first + 1) != std::string::npos)
      throw InputError("template for '" + lang.str() + "' must contain exactly one '{}' placeholder: '" + t + "'");
  }
  cross_validate(inv, corrections);
  std::map<std::pair<ConceptId, LanguageCode>, const CorrectionRecord*> corr;
  for (const auto& c : corrections) corr[{c.concept_id, c.language}] = &c;

  std::vector<ConceptId> ids = inv.concepts();
  std::sort(ids.begin(), ids.end());
  std::vector<ManifestLine> out;
  for (const auto& c : ids) {
    for (const auto& lang : inv.languages()) {
      const auto& tmpl = template_by_language.at(lang);
      out.push_back({c, lang, Variant::original(), apply_template(tmpl, inv.surface(c, lang))});
      if (auto it = corr.find({c, lang}); it != corr.end())
        out.push_back({c, lang, Variant::corrected(), apply_template(tmpl, it->second->corrected)});
    }
  }
  return out;
}

inline std::string format_manifest(std::span<const ManifestLine> lines) {
  std::string out;
  for (const auto& l : lines) out += l.key() + "\t" + l.prompt + "\n";
  return out;
}

}  // namespace cccl
