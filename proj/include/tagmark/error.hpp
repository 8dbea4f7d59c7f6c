#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tagmark {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data; carries the 1-based line number of the offending line.
class ParseError : public Error {
public:
  ParseError(const std::string& msg, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class LoadError : public Error {
public:
  using Error::Error;
};

class TrainError : public Error {
public:
  using Error::Error;
};

class SerializationError : public Error {
public:
  using Error::Error;
};

/// External tagger broke the wire protocol; carries the 0-based sentence index.
class ProtocolError : public Error {
public:
  ProtocolError(const std::string& msg, std::size_t sentence_index)
      : Error("sentence " + std::to_string(sentence_index) + ": " + msg),
        sentence_index_(sentence_index) {}

  std::size_t sentence_index() const { return sentence_index_; }

private:
  std::size_t sentence_index_;
};

/// Gold and predicted tag sequences disagree in shape.
class AlignmentError : public Error {
public:
  AlignmentError(const std::string& msg, std::size_t sentence_index)
      : Error("sentence " + std::to_string(sentence_index) + ": " + msg),
        sentence_index_(sentence_index) {}

  std::size_t sentence_index() const { return sentence_index_; }

private:
  std::size_t sentence_index_;
};

class MeasurementError : public Error {
public:
  using Error::Error;
};

class ComparisonError : public Error {
public:
  using Error::Error;
};

/// Aggregated configuration problems; one entry per violation, each prefixed
/// with a config path pointer such as "/taggers/0/kind".
class ConfigError : public Error {
public:
  explicit ConfigError(std::vector<std::string> issues)
      : Error(join(issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const { return issues_; }

private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "invalid configuration:";
    for (const auto& s : issues) {
      out += "\n  ";
      out += s;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

}  // namespace tagmark
