// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace evidrank {

enum class ErrorKind {
  Parse,
  Integrity,
  Lookup,
  Mapping,
  Modality,
  Contract,
  Transport,
  Protocol,
  DegenerateResponse,
  Evaluation,
  Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for all library failures. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& detail)
      : Error(ErrorKind::Parse,
              source + ":" + std::to_string(line) + ": " + detail),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what) : Error(ErrorKind::Integrity, what) {}
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& what) : Error(ErrorKind::Lookup, what) {}
};

class MappingError : public Error {
 public:
  explicit MappingError(const std::string& what) : Error(ErrorKind::Mapping, what) {}
};

class ModalityError : public Error {
 public:
  explicit ModalityError(const std::string& what) : Error(ErrorKind::Modality, what) {}
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorKind::Contract, what) {}
};

class TransportError : public Error {
 public:
  TransportError(const std::string& what, int attempts)
      : Error(ErrorKind::Transport, what), attempts_(attempts) {}

  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what) : Error(ErrorKind::Protocol, what) {}
};

class DegenerateResponseError : public Error {
 public:
  explicit DegenerateResponseError(const std::string& what)
      : Error(ErrorKind::DegenerateResponse, what) {}
};

class EvaluationError : public Error {
 public:
  explicit EvaluationError(const std::string& what) : Error(ErrorKind::Evaluation, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

}  // namespace evidrank
