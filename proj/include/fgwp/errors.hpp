#pragma once

#include <stdexcept>
#include <string>

namespace fgwp {

/// Offered traffic cannot be carried even by the highest MCS index.
class InfeasibleDemand : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Rejection sampling could not place the requested number of FAPs.
class PlacementExhausted : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; `field()` names the offending key or location.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(field) {}

    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

/// Oracle grid would exceed the evaluation budget.
class GridTooLarge : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Solution handed to the evaluator does not structurally fit the scenario.
class InvalidSolution : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace fgwp
