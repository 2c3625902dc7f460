#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cccl {

// Root of every error the harness raises. The CLI maps each subclass onto a
// stable exit code, see tools/cccl.cpp.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent input: malformed files, violated preconditions.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : InputError(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class DimensionError : public InputError {
 public:
  DimensionError(std::size_t expected, std::size_t got)
      : InputError("dimension mismatch: expected " + std::to_string(expected) +
                   ", got " + std::to_string(got)),
        expected_(expected),
        got_(got) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

// Zero-variance or otherwise degenerate statistical input.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Raised before any scoring happens; lists every absent key.
class MissingEmbeddingsError : public Error {
 public:
  explicit MissingEmbeddingsError(std::vector<std::string> keys)
      : Error(describe(keys)), keys_(std::move(keys)) {}

  const std::vector<std::string>& keys() const noexcept { return keys_; }

 private:
  static std::string describe(const std::vector<std::string>& keys) {
    std::string msg = std::to_string(keys.size()) + " missing embedding(s):";
    for (const auto& k : keys) msg += "\n  " + k;
    return msg;
  }

  std::vector<std::string> keys_;
};

// A correction's recorded original does not match the inventory cell.
class RevisionConflict : public Error {
 public:
  using Error::Error;
};

// Embedding provider unreachable or misbehaving.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& what, bool retryable = false)
      : Error(what), retryable_(retryable) {}

  bool retryable() const noexcept { return retryable_; }

 private:
  bool retryable_;
};

}  // namespace cccl
