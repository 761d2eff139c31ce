#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace kemosim {

/// Evaluation outside the domain of a motility function or operator
/// (e.g. v = 0 for a family that is singular there).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A motility pair produced gamma(v) <= 0, violating strict positivity.
class NegativeMotility : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment configuration. Carries every violation found, one
/// message per offending field.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace kemosim
