#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ssaf {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document (bad JSON, unknown key, wrong type).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that breaks a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(std::string id)
      : Error("not found: " + id), id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// Inference could not produce a posterior (e.g. evidence of probability 0).
class InferenceError : public Error {
 public:
  using Error::Error;
};

// Rejected state-machine event.
class TransitionError : public Error {
 public:
  TransitionError(std::uint64_t seq, const std::string& what)
      : Error("event " + std::to_string(seq) + ": " + what), seq_(seq) {}

  std::uint64_t seq() const noexcept { return seq_; }

 private:
  std::uint64_t seq_;
};

}  // namespace ssaf
