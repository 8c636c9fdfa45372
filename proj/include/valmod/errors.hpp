#pragma once
// Error types shared by the whole library.
//
// Domain errors carry a short machine-readable name (stable, used by the CLI
// as the diagnostic tag) next to the human-readable message.  Parse errors
// are a separate type so callers can map them to a different exit code.

#include <stdexcept>
#include <string>
#include <utility>

namespace valmod {

class DomainError : public std::runtime_error {
  public:
    DomainError(std::string name, const std::string& msg)
        : std::runtime_error(msg), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

  private:
    std::string name_;
};

class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void raise(const std::string& name, const std::string& msg) {
    throw DomainError(name, msg);
}

}  // namespace valmod
