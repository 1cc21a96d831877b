#pragma once

#include <stdexcept>
#include <string>

namespace qsvm {

// Base class for every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI error envelope.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid-argument", what) {}
};

class IngestError : public Error {
 public:
  explicit IngestError(const std::string& what) : Error("ingest-error", what) {}
};

class GenerationFailure : public Error {
 public:
  explicit GenerationFailure(const std::string& what) : Error("generation-failure", what) {}
};

class ProblemTooLarge : public Error {
 public:
  explicit ProblemTooLarge(const std::string& what) : Error("problem-too-large", what) {}
};

class NoSupportVectors : public Error {
 public:
  explicit NoSupportVectors(const std::string& what) : Error("no-support-vectors", what) {}
};

}  // namespace qsvm
