#pragma once

#include <stdexcept>
#include <string>

namespace saldet {

// Process exit codes, one per error class. The CLI maps thrown errors onto
// these; library callers can read them off the exception directly.
enum class ExitCode : int {
  ok = 0,
  internal = 1,  // unexpected failure
  config = 2,    // bad or unknown configuration key/value
  io = 3,        // unreadable/unwritable file, decode failure
  dataset = 4,   // empty dataset, unpaired stems
  data = 5,      // dimension mismatch, degenerate input, grid too small/tall
  model = 6,     // schema version or feature dimension mismatch
  numeric = 7,   // non-finite objective during training
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ExitCode::config, w) {}
};

class IoError : public Error {
 public:
  enum class Kind { unreadable, decode_failed, empty_image, write_failed };

  IoError(Kind kind, const std::string& w) : Error(ExitCode::io, w), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct DatasetError : Error {
  explicit DatasetError(const std::string& w) : Error(ExitCode::dataset, w) {}
};

struct DataError : Error {
  explicit DataError(const std::string& w) : Error(ExitCode::data, w) {}
};

struct ModelError : Error {
  explicit ModelError(const std::string& w) : Error(ExitCode::model, w) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& w) : Error(ExitCode::numeric, w) {}
};

}  // namespace saldet
