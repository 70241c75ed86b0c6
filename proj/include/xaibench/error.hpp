#pragma once

#include <functional>
#include <iostream>
#include <stdexcept>
#include <string>

namespace xaibench {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or arguments. The CLI maps these to exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input data (CSV cells, model files, manifests).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Vector or matrix shapes that do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Download, checksum or filesystem failures.
class IoError : public Error {
 public:
  using Error::Error;
};

using WarningHandler = std::function<void(const std::string&)>;

inline WarningHandler& warning_handler() {
  static WarningHandler handler = [](const std::string& msg) {
    std::clog << "warning: " << msg << '\n';
  };
  return handler;
}

inline void set_warning_handler(WarningHandler handler) {
  warning_handler() = std::move(handler);
}

inline void warn(const std::string& msg) {
  if (warning_handler()) warning_handler()(msg);
}

}  // namespace xaibench
