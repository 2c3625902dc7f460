#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "cccl/error.hpp"
#include "cccl/text.hpp"

namespace cccl {

// Thin string wrapper so concept ids and language codes cannot be swapped.
template <typename Tag>
class StrongString {
 public:
  StrongString() = default;
  explicit StrongString(std::string value) : value_(std::move(value)) {}
  explicit StrongString(std::string_view value) : value_(value) {}
  explicit StrongString(const char* value) : value_(value) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const StrongString&, const StrongString&) = default;
  friend bool operator==(const StrongString&, const StrongString&) = default;
  friend std::ostream& operator<<(std::ostream& os, const StrongString& s) { return os << s.value_; }

 private:
  std::string value_;
};

struct ConceptTag {};
struct LanguageTag {};

/// Canonical English lemma naming a concept, e.g. "rock".
using ConceptId = StrongString<ConceptTag>;
/// Short language tag, e.g. "ja".
using LanguageCode = StrongString<LanguageTag>;

/// Which translation of a cell a key or prompt refers to.
class Variant {
 public:
  enum class Kind : std::uint8_t { original, corrected, pseudo };

  static Variant original() { return Variant(Kind::original, 0); }
  static Variant corrected() { return Variant(Kind::corrected, 0); }
  static Variant pseudo(unsigned index) { return Variant(Kind::pseudo, index); }

  Kind kind() const noexcept { return kind_; }
  unsigned index() const noexcept { return index_; }

  std::string str() const {
    switch (kind_) {
      case Kind::original: return "original";
      case Kind::corrected: return "corrected";
      case Kind::pseudo: return "pseudo:" + std::to_string(index_);
    }
    return {};
  }

  static Variant parse(std::string_view s) {
    if (s == "original") return original();
    if (s == "corrected") return corrected();
    if (s.starts_with("pseudo:")) {
      if (auto k = text::parse_int<unsigned>(s.substr(7))) return pseudo(*k);
    }
    throw InputError("bad variant tag '" + std::string(s) + "'");
  }

  friend auto operator<=>(const Variant&, const Variant&) = default;
  friend bool operator==(const Variant&, const Variant&) = default;

 private:
  Variant(Kind kind, unsigned index) : kind_(kind), index_(index) {}

  Kind kind_ = Kind::original;
  unsigned index_ = 0;
};

// Six-way translation error typology. Declaration order is the canonical
// print order (least to most severe, as the histograms are stacked).
enum class ErrorType : std::uint8_t { F, C, A, T, IS, OS };

inline constexpr std::array<ErrorType, 6> kAllErrorTypes = {
    ErrorType::F, ErrorType::C, ErrorType::A, ErrorType::T, ErrorType::IS, ErrorType::OS};

inline std::string_view to_string(ErrorType t) {
  switch (t) {
    case ErrorType::F: return "F";
    case ErrorType::C: return "C";
    case ErrorType::A: return "A";
    case ErrorType::T: return "T";
    case ErrorType::IS: return "IS";
    case ErrorType::OS: return "OS";
  }
  return "?";
}

inline std::optional<ErrorType> parse_error_type(std::string_view s) {
  for (auto t : kAllErrorTypes)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

/// Set of error types as a bitmask.
class ErrorSet {
 public:
  ErrorSet() = default;
  ErrorSet(std::initializer_list<ErrorType> types) {
    for (auto t : types) insert(t);
  }

  void insert(ErrorType t) { bits_ |= bit(t); }
  bool contains(ErrorType t) const { return (bits_ & bit(t)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const {
    std::size_t n = 0;
    for (auto t : kAllErrorTypes) n += contains(t) ? 1 : 0;
    return n;
  }

  // "IS,T" style, canonical order.
  std::string str() const {
    std::string out;
    for (auto t : kAllErrorTypes) {
      if (!contains(t)) continue;
      if (!out.empty()) out += ',';
      out += to_string(t);
    }
    return out;
  }

  // Accepts comma-separated tags with optional spaces; "" parses to empty.
  static ErrorSet parse(std::string_view s) {
    ErrorSet set;
    if (text::is_blank(s)) return set;
    for (const auto& part : text::split(s, ',')) {
      auto tag = text::trim(part);
      auto t = parse_error_type(tag);
      if (!t) throw InputError("unknown error-type tag '" + std::string(tag) + "'");
      set.insert(*t);
    }
    return set;
  }

  friend bool operator==(const ErrorSet&, const ErrorSet&) = default;

 private:
  static std::uint8_t bit(ErrorType t) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(t)); }
  std::uint8_t bits_ = 0;
};

}  // namespace cccl

template <typename Tag>
struct std::hash<cccl::StrongString<Tag>> {
  std::size_t operator()(const cccl::StrongString<Tag>& s) const noexcept {
    return std::hash<std::string>{}(s.str());
  }
};
