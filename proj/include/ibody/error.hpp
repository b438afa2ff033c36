#pragma once

#include <stdexcept>
#include <string>

namespace ibody {

enum class ErrorKind {
  Domain,        // argument outside the mathematical domain
  Config,        // invalid configuration / resolution
  Resource,      // node or matrix cap exceeded
  Construction,  // body construction failed (non-positive radial function)
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace ibody
