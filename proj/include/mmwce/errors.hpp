#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mmwce {

// Invalid dimensions, parameters or configuration files.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Internal invariant broken (e.g. a transform that must be real is not).
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Metric undefined for the given input (e.g. NMSE of a zero channel).
class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Base of every failure that a single Monte Carlo trial may hit.
// The harness counts these instead of aborting the sweep.
class EstimationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RankDeficiencyError : public EstimationFailure {
 public:
  RankDeficiencyError(const std::string& what, double condition_number)
      : EstimationFailure(what), condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

class AngleDomainError : public EstimationFailure {
 public:
  using EstimationFailure::EstimationFailure;
};

// Least-squares system is singular. `colliding()` names the path/atom index
// pairs responsible when they can be identified.
class SingularityError : public EstimationFailure {
 public:
  SingularityError(const std::string& what, std::vector<std::pair<int, int>> colliding = {})
      : EstimationFailure(what), colliding_(std::move(colliding)) {}

  const std::vector<std::pair<int, int>>& colliding() const noexcept { return colliding_; }

 private:
  std::vector<std::pair<int, int>> colliding_;
};

class EqualizationError : public EstimationFailure {
 public:
  using EstimationFailure::EstimationFailure;
};

}  // namespace mmwce
