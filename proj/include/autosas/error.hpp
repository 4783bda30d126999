#pragma once

#include <stdexcept>
#include <string>

namespace autosas {

// Every error raised by the core derives from Error and carries the status
// code the C API reports for it.
enum class ErrorKind {
  InvalidArgument = 1,
  Config = 2,
  Io = 3,
  Format = 4,
  Version = 5,
  DegenerateRatings = 6,
  Schema = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(ErrorKind::InvalidArgument, w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::Io, w) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& w) : Error(ErrorKind::Format, w) {}
};
struct VersionError : Error {
  explicit VersionError(const std::string& w) : Error(ErrorKind::Version, w) {}
};
struct DegenerateRatingsError : Error {
  explicit DegenerateRatingsError(const std::string& w)
      : Error(ErrorKind::DegenerateRatings, w) {}
};
struct SchemaError : Error {
  explicit SchemaError(const std::string& w) : Error(ErrorKind::Schema, w) {}
};

}  // namespace autosas
