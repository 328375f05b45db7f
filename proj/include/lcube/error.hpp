#pragma once

#include <stdexcept>
#include <string>

namespace lcube {

/// Base class of every error raised by the library. Internal defects are
/// reported through std::logic_error instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Normalization ran out of fuel. Well-typed inputs are expected to
/// normalize; hitting this usually means an ill-typed or adversarial term.
class FuelExhausted : public Error {
 public:
  explicit FuelExhausted(std::size_t steps)
      : Error("normalization fuel exhausted after " + std::to_string(steps) +
              " steps"),
        steps_(steps) {}

  std::size_t steps() const { return steps_; }

 private:
  std::size_t steps_;
};

}  // namespace lcube
