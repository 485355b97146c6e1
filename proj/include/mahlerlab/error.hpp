#pragma once
#include <stdexcept>
#include <string>
#include <vector>
#include <cstdint>

namespace mahlerlab {

//! Base class for all library errors. Configuration problems derive from
//! std::invalid_argument in the usual way; computation failures use this.
class ComputationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

//! Raised when a certified evaluation cannot reach the requested accuracy
//! before the precision cap. Carries the offending torsion point.
class PrecisionExhausted : public ComputationError {
public:
  PrecisionExhausted(std::string what, std::uint64_t order,
                     std::vector<std::int64_t> exps)
      : ComputationError(std::move(what)), order_(order),
        exps_(std::move(exps)) {}

  std::uint64_t order() const { return order_; }
  const std::vector<std::int64_t> &exps() const { return exps_; }

private:
  std::uint64_t order_;
  std::vector<std::int64_t> exps_;
};

//! Raised when an input exceeds a configured desk-scale cap.
class CapExceeded : public ComputationError {
public:
  using ComputationError::ComputationError;
};

} // namespace mahlerlab
