#pragma once

// Analysis artifacts: per-correction results tables, fit-stat tables,
// scatter data with regression band, and error-type histograms over dSEM,
// each as TSV with an optional SVG rendering.
//
// All numeric formatting is locale-independent; identical inputs give
// byte-identical files.

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "cccl/error.hpp"
#include "cccl/similarity.hpp"
#include "cccl/stats.hpp"
#include "cccl/svg.hpp"
#include "cccl/text.hpp"
#include "cccl/types.hpp"

namespace cccl {

// ---------------------------------------------------------------------------
// Results table
//
// language  concept  [sample_index  donor]  original  corrected  error_types  delta_sem  dxc:<model>...
//
// Sections are grouped by language (alphabetical), rows sorted by ascending
// delta_sem with ties broken by concept id, then sample index. Values are
// written at full round-trip precision.

struct ResultRow {
  LanguageCode language;
  ConceptId concept_id;
  std::optional<unsigned> sample_index;
  std::optional<ConceptId> donor;
  std::string original;
  std::string corrected;
  ErrorSet error_types;
  double delta_sem = 0.0;
  std::map<std::string, double> delta_xc;  // by model id
};

struct ResultsTable {
  std::vector<std::string> models;  // column order
  std::vector<ResultRow> rows;

  bool pseudo() const {
    return std::any_of(rows.begin(), rows.end(), [](const ResultRow& r) { return r.sample_index.has_value(); });
  }

  std::vector<LanguageCode> languages() const {
    std::vector<LanguageCode> out;
    for (const auto& r : rows)
      if (std::find(out.begin(), out.end(), r.language) == out.end()) out.push_back(r.language);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// (delta_sem, delta_xc) for one model and language, in table order.
  PairedSeries series(const std::string& model, const LanguageCode& language) const {
    PairedSeries s;
    for (const auto& r : rows) {
      if (r.language != language) continue;
      auto it = r.delta_xc.find(model);
      if (it == r.delta_xc.end()) continue;
      s.xs.push_back(r.delta_sem);
      s.ys.push_back(it->second);
      std::string label = r.concept_id.str() + "/" + r.language.str();
      if (r.sample_index) label += "#" + std::to_string(*r.sample_index);
      s.labels.push_back(std::move(label));
    }
    return s;
  }
};

inline void sort_rows(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.language, a.delta_sem, a.concept_id, a.sample_index) <
           std::tie(b.language, b.delta_sem, b.concept_id, b.sample_index);
  });
}

/// Merges per-model results into one row per (language, concept, sample).
inline ResultsTable tabulate(std::span<const ConceptResult> results) {
  ResultsTable t;
  std::map<std::tuple<LanguageCode, ConceptId, std::optional<unsigned>>, std::size_t> index;
  for (const auto& r : results) {
    if (std::find(t.models.begin(), t.models.end(), r.model_id) == t.models.end()) t.models.push_back(r.model_id);
    auto key = std::make_tuple(r.language, r.concept_id, r.sample_index);
    auto [it, fresh] = index.emplace(key, t.rows.size());
    if (fresh)
      t.rows.push_back({r.language, r.concept_id, r.sample_index, r.donor, r.original_surface, r.corrected_surface,
                        r.error_types, r.delta_sem, {}});
    auto& row = t.rows[it->second];
    if (!row.delta_xc.emplace(r.model_id, r.delta_xc).second)
      throw InputError("duplicate result for " + r.concept_id.str() + "/" + r.language.str() + " model " + r.model_id);
  }
  sort_rows(t.rows);
  return t;
}

inline std::string format_results_table(const ResultsTable& t) {
  const bool pseudo = t.pseudo();
  std::string out = "language\tconcept\t";
  if (pseudo) out += "sample_index\tdonor\t";
  out += "original\tcorrected\terror_types\tdelta_sem";
  for (const auto& m : t.models) out += "\tdxc:" + m;
  out += "\n";
  for (const auto& r : t.rows) {
    out += r.language.str() + "\t" + r.concept_id.str() + "\t";
    if (pseudo)
      out += (r.sample_index ? std::to_string(*r.sample_index) : "") + "\t" + (r.donor ? r.donor->str() : "") + "\t";
    out += r.original + "\t" + r.corrected + "\t" + r.error_types.str() + "\t" + text::format_exact(r.delta_sem);
    for (const auto& m : t.models) {
      auto it = r.delta_xc.find(m);
      out += "\t" + (it == r.delta_xc.end() ? std::string() : text::format_exact(it->second));
    }
    out += "\n";
  }
  return out;
}

inline void emit_results_table(std::span<const ConceptResult> results, const std::filesystem::path& path) {
  if (results.empty()) throw InputError("no results to write");
  text::write_file_atomic(path, format_results_table(tabulate(results)));
}

inline ResultsTable parse_results_table(const std::vector<std::string>& lines, const std::string& name) {
  if (lines.empty()) throw ParseError(name, 1, "empty results file");
  auto header = text::split(lines[0]);
  ResultsTable t;
  std::size_t col = 0;
  auto expect = [&](std::string_view h) {
    if (col >= header.size() || header[col] != h)
      throw ParseError(name, 1, "expected column '" + std::string(h) + "' at position " + std::to_string(col + 1));
    ++col;
  };
  expect("language");
  expect("concept");
  const bool pseudo = col < header.size() && header[col] == "sample_index";
  if (pseudo) {
    expect("sample_index");
    expect("donor");
  }
  for (auto h : {"original", "corrected", "error_types", "delta_sem"}) expect(h);
  const std::size_t first_model = col;
  for (; col < header.size(); ++col) {
    if (!header[col].starts_with("dxc:")) throw ParseError(name, 1, "unexpected column '" + header[col] + "'");
    t.models.push_back(header[col].substr(4));
  }

  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    const std::size_t lineno = ln + 1;
    auto cols = text::split(lines[ln]);
    if (cols.size() != header.size())
      throw ParseError(name, lineno, "expected " + std::to_string(header.size()) + " columns, got " +
                                         std::to_string(cols.size()));
    ResultRow r;
    std::size_t c = 0;
    r.language = LanguageCode(cols[c++]);
    r.concept_id = ConceptId(cols[c++]);
    if (pseudo) {
      auto idx = text::parse_int<unsigned>(cols[c++]);
      if (!idx) throw ParseError(name, lineno, "bad sample_index");
      r.sample_index = *idx;
      r.donor = ConceptId(cols[c++]);
    }
    r.original = cols[c++];
    r.corrected = cols[c++];
    try {
      r.error_types = ErrorSet::parse(cols[c++]);
    } catch (const InputError& e) {
      throw ParseError(name, lineno, e.what());
    }
    auto ds = text::parse_double(cols[c++]);
    if (!ds) throw ParseError(name, lineno, "bad delta_sem '" + cols[c - 1] + "'");
    r.delta_sem = *ds;
    for (std::size_t m = 0; m < t.models.size(); ++m) {
      const auto& cell = cols[first_model + m];
      if (cell.empty()) continue;
      auto v = text::parse_double(cell);
      if (!v) throw ParseError(name, lineno, "bad delta_xc '" + cell + "'");
      r.delta_xc[t.models[m]] = *v;
    }
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline ResultsTable load_results_table(const std::filesystem::path& path) {
  return parse_results_table(text::read_lines(path), path.string());
}

// ---------------------------------------------------------------------------
// Fit-stats table: model  language  pcc  p  m  b  n   (3 decimals)

struct DegenerateFit {
  std::string model_id;
  LanguageCode language;
  std::size_t n_points = 0;
  std::string reason;
};

using FitOutcome = std::variant<FitStats, DegenerateFit>;

/// Like summarize, but zero-variance input becomes a DegenerateFit value.
inline FitOutcome try_summarize(const PairedSeries& series, const std::string& model_id, const LanguageCode& language,
                                double ci_level = 0.95) {
  try {
    return summarize(series, model_id, language, ci_level);
  } catch (const DegenerateError& e) {
    return DegenerateFit{model_id, language, series.size(), e.what()};
  }
}

inline std::string format_fitstats_row(const FitStats& f) {
  return text::join({f.model_id, f.language.str(), text::format_fixed(f.pcc, 3), text::format_fixed(f.p_value, 3),
                     text::format_fixed(f.slope_m, 3), text::format_fixed(f.intercept_b, 3),
                     std::to_string(f.n_points)});
}

inline std::string format_fitstats_table(std::span<const FitOutcome> rows) {
  if (rows.empty()) throw InputError("no fit-stat rows to write");
  std::string out = "model\tlanguage\tpcc\tp\tm\tb\tn\n";
  for (const auto& row : rows) {
    if (auto* f = std::get_if<FitStats>(&row)) {
      out += format_fitstats_row(*f) + "\n";
    } else {
      const auto& d = std::get<DegenerateFit>(row);
      out += text::join({d.model_id, d.language.str(), "degenerate", "degenerate", "degenerate", "degenerate",
                         std::to_string(d.n_points)}) +
             "\n";
    }
  }
  return out;
}

inline void emit_fitstats_table(std::span<const FitOutcome> rows, const std::filesystem::path& path) {
  text::write_file_atomic(path, format_fitstats_table(rows));
}

inline void emit_fitstats_table(std::span<const FitStats> rows, const std::filesystem::path& path) {
  std::vector<FitOutcome> wrapped(rows.begin(), rows.end());
  emit_fitstats_table(std::span<const FitOutcome>(wrapped), path);
}

/// Parsed fit-stat row at the emitted 3-decimal precision; nullopt values
/// mark degenerate rows.
struct FitStatsRow {
  std::string model_id;
  LanguageCode language;
  std::optional<double> pcc, p_value, slope_m, intercept_b;
  std::size_t n_points = 0;
};

inline std::vector<FitStatsRow> parse_fitstats_table(const std::vector<std::string>& lines, const std::string& name) {
  std::vector<FitStatsRow> out;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto cols = text::split(lines[ln]);
    if (cols.size() != 7) throw ParseError(name, ln + 1, "expected 7 columns");
    auto num = [](const std::string& s) { return s == "degenerate" ? std::nullopt : text::parse_double(s); };
    auto n = text::parse_int<std::size_t>(cols[6]);
    if (!n) throw ParseError(name, ln + 1, "bad n");
    out.push_back({cols[0], LanguageCode(cols[1]), num(cols[2]), num(cols[3]), num(cols[4]), num(cols[5]), *n});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Histogram of error-type incidences over delta_sem
//
// A correction with several error types counts once under each of them.

struct HistogramSpec {
  double bin_width = 0.01;
  std::optional<std::pair<double, double>> range;  // data-driven when unset
};

struct HistogramEntry {
  double delta_sem;
  ErrorSet types;
};

struct Histogram {
  double bin_width = 0.01;
  long first_bin = 0;  // bin i covers [ (first_bin + i) * w, (first_bin + i + 1) * w )
  std::vector<std::array<std::size_t, kAllErrorTypes.size()>> counts;

  double bin_lo(std::size_t i) const { return static_cast<double>(first_bin + static_cast<long>(i)) * bin_width; }
  double bin_hi(std::size_t i) const { return bin_lo(i + 1); }

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& row : counts)
      for (auto c : row) n += c;
    return n;
  }
};

namespace detail {
// Values sitting on a bin edge (0.03 / 0.01 = 2.9999999999999996) belong to
// the bin they start.
inline long bin_of(double x, double width) { return static_cast<long>(std::floor(x / width + 1e-9)); }
}  // namespace detail

inline Histogram compute_histogram(std::span<const HistogramEntry> entries, const HistogramSpec& spec = {}) {
  if (entries.empty()) throw InputError("histogram needs at least one result");
  if (!(spec.bin_width > 0.0)) throw InputError("bin width must be positive");
  double lo = entries.front().delta_sem, hi = lo;
  for (const auto& e : entries) {
    if (!std::isfinite(e.delta_sem)) throw InputError("non-finite delta_sem in histogram input");
    lo = std::min(lo, e.delta_sem);
    hi = std::max(hi, e.delta_sem);
  }
  if (spec.range) {
    if (spec.range->first > lo || spec.range->second < hi) throw InputError("histogram range does not cover the data");
    lo = spec.range->first;
    hi = spec.range->second;
  }
  Histogram h;
  h.bin_width = spec.bin_width;
  h.first_bin = detail::bin_of(lo, spec.bin_width);
  const long last_bin = detail::bin_of(hi, spec.bin_width);
  h.counts.assign(static_cast<std::size_t>(last_bin - h.first_bin + 1), {});
  for (const auto& e : entries) {
    const auto bin = static_cast<std::size_t>(detail::bin_of(e.delta_sem, spec.bin_width) - h.first_bin);
    for (std::size_t t = 0; t < kAllErrorTypes.size(); ++t)
      if (e.types.contains(kAllErrorTypes[t])) ++h.counts[bin][t];
  }
  return h;
}

inline std::vector<HistogramEntry> histogram_entries(std::span<const ConceptResult> results) {
  std::vector<HistogramEntry> out;
  for (const auto& r : results) out.push_back({r.delta_sem, r.error_types});
  return out;
}

inline std::vector<HistogramEntry> histogram_entries(const ResultsTable& t, const LanguageCode& language) {
  std::vector<HistogramEntry> out;
  for (const auto& r : t.rows)
    if (r.language == language) out.push_back({r.delta_sem, r.error_types});
  return out;
}

inline int edge_decimals(double width) {
  return std::clamp(static_cast<int>(std::ceil(-std::log10(width))) + 1, 1, 12);
}

inline std::string format_histogram(const Histogram& h) {
  const int dec = edge_decimals(h.bin_width);
  std::string out = "bin_lo\tbin_hi";
  for (auto t : kAllErrorTypes) out += "\t" + std::string(to_string(t));
  out += "\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out += text::format_fixed(h.bin_lo(i), dec) + "\t" + text::format_fixed(h.bin_hi(i), dec);
    for (auto c : h.counts[i]) out += "\t" + std::to_string(c);
    out += "\n";
  }
  return out;
}

struct HistogramBinRow {
  double lo, hi;
  std::array<std::size_t, kAllErrorTypes.size()> counts;
};

inline std::vector<HistogramBinRow> parse_histogram(const std::vector<std::string>& lines, const std::string& name) {
  std::vector<HistogramBinRow> out;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    auto cols = text::split(lines[ln]);
    if (cols.size() != 2 + kAllErrorTypes.size()) throw ParseError(name, ln + 1, "bad histogram row");
    HistogramBinRow row{};
    auto lo = text::parse_double(cols[0]);
    auto hi = text::parse_double(cols[1]);
    if (!lo || !hi) throw ParseError(name, ln + 1, "bad bin edge");
    row.lo = *lo;
    row.hi = *hi;
    for (std::size_t t = 0; t < kAllErrorTypes.size(); ++t) {
      auto c = text::parse_int<std::size_t>(cols[2 + t]);
      if (!c) throw ParseError(name, ln + 1, "bad count");
      row.counts[t] = *c;
    }
    out.push_back(row);
  }
  return out;
}

// Light to dark, in ErrorType order.
inline constexpr std::array<std::string_view, 6> kErrorTypeColors = {"#fde0c5", "#facba6", "#f59e72",
                                                                      "#e8654d", "#c2374f", "#7a1f4b"};

inline std::string render_histogram_svg(const Histogram& h, std::string_view title) {
  const double W = 640, H = 400, left = 60, right = 130, top = 40, bottom = 50;
  svg::Document doc(W, H);
  std::size_t ymax = 1;
  for (const auto& row : h.counts) {
    std::size_t s = 0;
    for (auto c : row) s += c;
    ymax = std::max(ymax, s);
  }
  svg::Scale sx{h.bin_lo(0), h.bin_hi(h.counts.size() - 1), left, W - right};
  svg::Scale sy{0, static_cast<double>(ymax), H - bottom, top};
  doc.label(W / 2, 24, title, 14, "middle", true);
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    double base = 0;
    for (std::size_t t = 0; t < kAllErrorTypes.size(); ++t) {
      const auto c = h.counts[i][t];
      if (!c) continue;
      const double y0 = sy(base), y1 = sy(base + static_cast<double>(c));
      doc.rect(sx(h.bin_lo(i)), y1, sx(h.bin_hi(i)) - sx(h.bin_lo(i)), y0 - y1, kErrorTypeColors[t], "#444444");
      base += static_cast<double>(c);
    }
  }
  doc.line(left, H - bottom, W - right, H - bottom, "black").line(left, H - bottom, left, top, "black");
  for (std::size_t k = 0; k <= ymax; k += std::max<std::size_t>(1, ymax / 5)) {
    doc.line(left - 4, sy(static_cast<double>(k)), left, sy(static_cast<double>(k)), "black");
    doc.label(left - 8, sy(static_cast<double>(k)) + 4, std::to_string(k), 10, "end");
  }
  const int dec = edge_decimals(h.bin_width);
  doc.label(left, H - bottom + 16, text::format_fixed(h.bin_lo(0), dec), 10, "middle");
  doc.label(W - right, H - bottom + 16, text::format_fixed(h.bin_hi(h.counts.size() - 1), dec), 10, "middle");
  doc.label((left + W - right) / 2, H - 12, "delta SEM", 12, "middle");
  doc.label(18, (top + H - bottom) / 2, "count", 12, "middle");
  for (std::size_t t = 0; t < kAllErrorTypes.size(); ++t) {
    const double y = top + 20.0 * static_cast<double>(t);
    doc.rect(W - right + 20, y, 12, 12, kErrorTypeColors[t], "#444444");
    doc.label(W - right + 38, y + 10, to_string(kAllErrorTypes[t]), 11);
  }
  return doc.str();
}

/// Writes the histogram TSV and, when `svg_path` is given, its rendering.
inline Histogram emit_histogram(std::span<const HistogramEntry> entries, const HistogramSpec& spec,
                                const std::filesystem::path& path,
                                const std::optional<std::filesystem::path>& svg_path = std::nullopt,
                                std::string_view title = "error types vs delta SEM") {
  auto h = compute_histogram(entries, spec);
  text::write_file_atomic(path, format_histogram(h));
  if (svg_path) text::write_file_atomic(*svg_path, render_histogram_svg(h, title));
  return h;
}

inline Histogram emit_histogram(std::span<const ConceptResult> results, const HistogramSpec& spec,
                                const std::filesystem::path& path,
                                const std::optional<std::filesystem::path>& svg_path = std::nullopt) {
  auto entries = histogram_entries(results);
  return emit_histogram(entries, spec, path, svg_path);
}

// ---------------------------------------------------------------------------
// Scatter with fit line and confidence band
//
// # slope / # intercept / # level comment lines, then
// kind  x  y  lower  upper  label
// "point" rows carry the data; "band" rows sample the fit and band.

inline constexpr std::size_t kBandSamples = 64;

inline std::string format_scatter(const PairedSeries& s, const FitStats& fit) {
  std::string out = "# slope\t" + text::format_exact(fit.slope_m) + "\n# intercept\t" +
                    text::format_exact(fit.intercept_b) + "\n# level\t" + text::format_exact(fit.ci_level) +
                    "\nkind\tx\ty\tlower\tupper\tlabel\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    out += "point\t" + text::format_exact(s.xs[i]) + "\t" + text::format_exact(s.ys[i]) + "\t\t\t" +
           (s.labels.empty() ? std::string() : s.labels[i]) + "\n";
  const auto& b = fit.band;
  for (std::size_t i = 0; i < kBandSamples; ++i) {
    const double x = b.x_min + (b.x_max - b.x_min) * static_cast<double>(i) / static_cast<double>(kBandSamples - 1);
    out += "band\t" + text::format_exact(x) + "\t" + text::format_exact(b.fit(x)) + "\t" +
           text::format_exact(b.lower(x)) + "\t" + text::format_exact(b.upper(x)) + "\t\n";
  }
  return out;
}

inline std::string render_scatter_svg(const PairedSeries& s, const FitStats& fit, std::string_view title) {
  const double W = 480, H = 400, left = 60, right = 20, top = 40, bottom = 50;
  const auto& b = fit.band;
  double ylo = *std::min_element(s.ys.begin(), s.ys.end()), yhi = *std::max_element(s.ys.begin(), s.ys.end());
  std::vector<std::pair<double, double>> upper, lower, line;
  for (std::size_t i = 0; i < kBandSamples; ++i) {
    const double x = b.x_min + (b.x_max - b.x_min) * static_cast<double>(i) / static_cast<double>(kBandSamples - 1);
    ylo = std::min(ylo, b.lower(x));
    yhi = std::max(yhi, b.upper(x));
  }
  if (yhi == ylo) {
    yhi += 0.5;
    ylo -= 0.5;
  }
  const double padx = 0.05 * (b.x_max - b.x_min), pady = 0.05 * (yhi - ylo);
  svg::Scale sx{b.x_min - padx, b.x_max + padx, left, W - right};
  svg::Scale sy{ylo - pady, yhi + pady, H - bottom, top};
  for (std::size_t i = 0; i < kBandSamples; ++i) {
    const double x = b.x_min + (b.x_max - b.x_min) * static_cast<double>(i) / static_cast<double>(kBandSamples - 1);
    upper.emplace_back(sx(x), sy(b.upper(x)));
    lower.emplace_back(sx(x), sy(b.lower(x)));
    line.emplace_back(sx(x), sy(b.fit(x)));
  }
  std::vector<std::pair<double, double>> poly(upper.begin(), upper.end());
  poly.insert(poly.end(), lower.rbegin(), lower.rend());

  svg::Document doc(W, H);
  doc.label(W / 2, 24, title, 14, "middle", true);
  doc.polygon(poly, "#3b6fb6", 0.2);
  for (std::size_t i = 0; i < s.size(); ++i) doc.circle(sx(s.xs[i]), sy(s.ys[i]), 4, "#3b6fb6", 0.35);
  doc.polyline(line, "#1d3f73", 2);
  doc.line(left, H - bottom, W - right, H - bottom, "black").line(left, H - bottom, left, top, "black");
  if (sy.d0 < 0 && sy.d1 > 0) doc.line(left, sy(0), W - right, sy(0), "#999999", 0.5);
  doc.label(left, H - bottom + 16, text::format_fixed(sx.d0, 3), 10, "middle");
  doc.label(W - right, H - bottom + 16, text::format_fixed(sx.d1, 3), 10, "end");
  doc.label(left - 6, H - bottom, text::format_fixed(sy.d0, 3), 10, "end");
  doc.label(left - 6, top + 8, text::format_fixed(sy.d1, 3), 10, "end");
  doc.label((left + W - right) / 2, H - 12, "delta SEM", 12, "middle");
  doc.label(14, (top + H - bottom) / 2, "delta Xc", 12, "middle");
  doc.label(W - right - 6, H - bottom - 8, "m = " + text::format_fixed(fit.slope_m, 3), 14, "end", true, "slope");
  return doc.str();
}

inline void emit_scatter(const PairedSeries& s, const FitStats& fit, const std::filesystem::path& path,
                         const std::optional<std::filesystem::path>& svg_path = std::nullopt,
                         std::string_view title = {}) {
  s.validate(3);
  text::write_file_atomic(path, format_scatter(s, fit));
  if (svg_path) {
    std::string t = title.empty() ? fit.model_id + " / " + fit.language.str() : std::string(title);
    text::write_file_atomic(*svg_path, render_scatter_svg(s, fit, t));
  }
}

inline void emit_scatter(std::span<const ConceptResult> results, const FitStats& fit, const std::filesystem::path& path,
                         const std::optional<std::filesystem::path>& svg_path = std::nullopt) {
  emit_scatter(series_from(results), fit, path, svg_path);
}

}  // namespace cccl
