#pragma once

#include <stdexcept>
#include <string>

namespace rotwalk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// An input lies outside the domain of an operation (axis point, zero vector, ...).
class DomainError : public Error
{
  public:
    using Error::Error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error
{
  public:
    using Error::Error;
};

/// A configuration value failed validation. `key()` is the dotted path.
class ConfigError : public Error
{
  public:
    ConfigError(std::string key, const std::string& message)
        : Error(message), key_(std::move(key))
    {}

    const std::string& key() const noexcept { return key_; }

  private:
    std::string key_;
};

}  // namespace rotwalk
