#pragma once

#include <stdexcept>
#include <string>

namespace contest {

// Violated call contract: malformed inputs, invalid parameter combinations.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function (e.g. a CDF argument outside [0,1]).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A structural precondition does not hold for the supplied scenario.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// No reward parameters reach the requested target.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Observations sit at a corner where the hidden parameter is not identified.
class UnidentifiableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Linear system without a unique solution.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constructed profile failed best-response verification.
class VerificationError : public std::runtime_error {
 public:
  VerificationError(const std::string& what, double witness_ability, double regret)
      : std::runtime_error(what), witness_ability_(witness_ability), regret_(regret) {}

  double witness_ability() const noexcept { return witness_ability_; }
  double regret() const noexcept { return regret_; }

 private:
  double witness_ability_;
  double regret_;
};

}  // namespace contest
