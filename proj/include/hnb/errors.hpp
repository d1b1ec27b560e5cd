#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hnb {

// Point outside its chart, or a numerical argument outside a function's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Two bodies closer than the collision tolerance.
class SingularityError : public std::runtime_error {
public:
    SingularityError(std::size_t first, std::size_t second, const std::string& what)
        : std::runtime_error(what), first_(first), second_(second) {}

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

// Wrong chart or flavor passed to an operation, unverified family, bad settings.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A solver found that the requested equilibrium does not exist.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hnb
