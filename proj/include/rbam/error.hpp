#pragma once

#include <stdexcept>
#include <string>

namespace rbam {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Corpus could not be read, did not match its layout, or produced
/// unexpected counts.
class LoadError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Raised by a backend after its retry budget is exhausted.
class BackendError : public Error {
public:
  using Error::Error;
};

/// Malformed record in a predictions/records file.
class RecordError : public Error {
public:
  RecordError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

}  // namespace rbam
